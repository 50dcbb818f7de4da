#ifndef QENT_CONFIG_HPP
#define QENT_CONFIG_HPP

#include <cctype>
#include <charconv>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "qent/experiments.hpp"

namespace qent {

// Flat `key = value` configuration. Dimensional values carry a unit:
//   g1 = 100 MHz          (cyclic: multiplied by 2 pi)
//   g1 = 628.3 Mrad/s     (angular, taken as is)
//   tau_d = 1.5 ns
//   T_grid = 5,10,15 us
// `#` starts a comment. Unknown keys are rejected.

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

inline double parse_double(const std::string& s) {
  const std::string t = trim(s);
  // from_chars does not accept a leading '+'.
  const char* begin = t.data() + (t.size() > 1 && t[0] == '+' && t[1] != '-' ? 1 : 0);
  double v = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end || t.empty()) throw InputError("not a number: '" + t + "'");
  return v;
}

/// Splits "1.5 ns" into ("1.5", "ns"); the unit is the last whitespace token.
inline std::pair<std::string, std::string> split_unit(const std::string& value) {
  const std::string t = trim(value);
  const auto sp = t.find_last_of(" \t");
  if (sp == std::string::npos) return {t, ""};
  return {trim(t.substr(0, sp)), trim(t.substr(sp + 1))};
}

/// Multiplier from a frequency unit to rad/s.
inline double frequency_unit(const std::string& unit) {
  static const std::map<std::string, double> units = {
      {"Hz", 2 * pi},         {"kHz", 2 * pi * 1e3},  {"MHz", 2 * pi * 1e6},  {"GHz", 2 * pi * 1e9},
      {"rad/s", 1.0},         {"krad/s", 1e3},        {"Mrad/s", 1e6},        {"Grad/s", 1e9},
  };
  const auto it = units.find(unit);
  if (it == units.end()) throw InputError("unknown frequency unit '" + unit + "' (use Hz, kHz, MHz, GHz or rad/s forms)");
  return it->second;
}

/// Multiplier from a time unit to seconds.
inline double time_unit(const std::string& unit) {
  static const std::map<std::string, double> units = {
      {"s", 1.0}, {"ms", 1e-3}, {"us", 1e-6}, {"ns", 1e-9}, {"ps", 1e-12}};
  const auto it = units.find(unit);
  if (it == units.end()) throw InputError("unknown time unit '" + unit + "' (use s, ms, us, ns or ps)");
  return it->second;
}

/// Multiplier from a time unit to microseconds, kept separate so that
/// lifetimes given in us are stored without round-off.
inline double time_unit_us(const std::string& unit) {
  static const std::map<std::string, double> units = {
      {"s", 1e6}, {"ms", 1e3}, {"us", 1.0}, {"ns", 1e-3}, {"ps", 1e-6}};
  const auto it = units.find(unit);
  if (it == units.end()) throw InputError("unknown time unit '" + unit + "' (use s, ms, us, ns or ps)");
  return it->second;
}

inline double parse_frequency(const std::string& v) {
  auto [num, unit] = split_unit(v);
  if (unit.empty()) throw InputError("frequency needs a unit, e.g. '100 MHz'");
  return parse_double(num) * frequency_unit(unit);
}

inline double parse_time(const std::string& v) {
  auto [num, unit] = split_unit(v);
  if (unit.empty()) throw InputError("time needs a unit, e.g. '1.5 ns'");
  return parse_double(num) * time_unit(unit);
}

inline double parse_time_us(const std::string& v) {
  auto [num, unit] = split_unit(v);
  if (unit.empty()) throw InputError("time needs a unit, e.g. '30 us'");
  return parse_double(num) * time_unit_us(unit);
}

/// Comma-separated list with one trailing unit, returned in microseconds.
inline std::vector<double> parse_time_list_us(const std::string& v) {
  auto [nums, unit] = split_unit(v);
  if (unit.empty()) throw InputError("time list needs a unit, e.g. '5,10,15 us'");
  const double scale = time_unit_us(unit);
  std::vector<double> out;
  std::stringstream ss(nums);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse_double(item) * scale);
  if (out.empty()) throw InputError("empty list");
  return out;
}

/// "0.6", "-0.2+0.1i", "0.3i"
inline Complex parse_complex(const std::string& v) {
  std::string t = trim(v);
  if (t.empty()) throw InputError("empty complex value");
  if (t.back() != 'i') return parse_double(t);
  t.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t k = t.size(); k-- > 1;) {
    if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  if (split == std::string::npos) {
    const double im = (t.empty() || t == "+") ? 1.0 : (t == "-" ? -1.0 : parse_double(t));
    return {0.0, im};
  }
  const std::string im_s = t.substr(split);
  const double im = im_s == "+" ? 1.0 : (im_s == "-" ? -1.0 : parse_double(im_s));
  return {parse_double(t.substr(0, split)), im};
}

inline bool parse_bool(const std::string& v) {
  const auto t = trim(v);
  if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
  if (t == "false" || t == "0" || t == "no" || t == "off") return false;
  throw InputError("not a boolean: '" + t + "'");
}

inline std::size_t parse_count(const std::string& v) {
  const double d = parse_double(v);
  if (d < 0 || d != static_cast<double>(static_cast<std::size_t>(d))) throw InputError("not a non-negative integer");
  return static_cast<std::size_t>(d);
}

}  // namespace detail

inline const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "g1", "g2", "omega10", "omega21", "tau_d", "n_cavity", "alpha", "beta", "gamma", "T", "kappa_inv",
      "T_grid", "kappa_inv_grid", "max_phase_step", "step_cap", "convergence_check", "mode", "fidelity",
      "threads", "tol_hermitian", "tol_trace", "tol_positivity", "max_dimension"};
  return keys;
}

/// Applies one key/value pair. Throws InputError for unknown keys or values.
inline void apply_setting(SimulationConfig& cfg, const std::string& key, const std::string& value) {
  using namespace detail;
  if (key == "g1") cfg.params.coupling.g1 = parse_frequency(value);
  else if (key == "g2") cfg.params.coupling.g2 = parse_frequency(value);
  else if (key == "omega10") cfg.params.omega10 = parse_frequency(value);
  else if (key == "omega21") cfg.params.omega21 = parse_frequency(value);
  else if (key == "tau_d") cfg.params.tau_d = parse_time(value);
  else if (key == "n_cavity") cfg.cavity_levels = parse_count(value);
  else if (key == "alpha") cfg.weights.alpha = parse_complex(value);
  else if (key == "beta") cfg.weights.beta = parse_complex(value);
  else if (key == "gamma") cfg.weights.gamma = parse_complex(value);
  else if (key == "T") cfg.T_us = parse_time_us(value);
  else if (key == "kappa_inv") cfg.kappa_inv_us = parse_time_us(value);
  else if (key == "T_grid") cfg.T_grid_us = parse_time_list_us(value);
  else if (key == "kappa_inv_grid") cfg.kappa_inv_grid_us = parse_time_list_us(value);
  else if (key == "max_phase_step") {
    auto [num, unit] = split_unit(value);
    if (!unit.empty() && unit != "rad") throw InputError("max_phase_step unit must be rad");
    cfg.integrator.max_phase_step = parse_double(num);
  } else if (key == "step_cap") cfg.integrator.step_cap = parse_time(value);
  else if (key == "convergence_check") cfg.integrator.convergence_check = parse_bool(value);
  else if (key == "mode") {
    const auto t = trim(value);
    if (t == "serial") cfg.mode = ScheduleMode::Serial;
    else if (t == "concurrent") cfg.mode = ScheduleMode::Concurrent;
    else throw InputError("mode must be serial or concurrent");
  } else if (key == "fidelity") {
    const auto t = trim(value);
    if (t == "full") cfg.fidelity_target = FidelityTarget::Full;
    else if (t == "cavity_traced") cfg.fidelity_target = FidelityTarget::CavityTraced;
    else throw InputError("fidelity must be full or cavity_traced");
  } else if (key == "threads") cfg.threads = static_cast<unsigned>(parse_count(value));
  else if (key == "tol_hermitian") cfg.tol.hermitian = parse_double(value);
  else if (key == "tol_trace") cfg.tol.trace = parse_double(value);
  else if (key == "tol_positivity") cfg.tol.positivity = parse_double(value);
  else if (key == "max_dimension") cfg.tol.max_dimension = parse_count(value);
  else throw InputError("unknown key '" + key + "'");
}

/// Result of loading: the config plus a note if the weights were rescaled.
struct LoadedConfig {
  SimulationConfig config;
  std::vector<std::string> warnings;
};

/// Scales the weights to unit norm. Zero or non-finite weights are an input
/// error; any rescaling beyond round-off is reported as a warning.
inline std::vector<std::string> normalize_weights(WeightVector& w, const Tolerances& tol = default_tolerances()) {
  std::vector<std::string> warnings;
  const double n2 = w.norm_squared();
  if (!(n2 > 0) || !std::isfinite(n2)) throw InputError("weights are not normalizable");
  if (std::abs(n2 - 1.0) > tol.normalization) {
    std::ostringstream os;
    os << "weights had squared norm " << n2 << "; normalized";
    warnings.push_back(os.str());
    w = w.normalized();
  }
  return warnings;
}

/// Parses config text, then applies `key=value` overrides in order.
/// Errors carry the line number (or the override text).
inline LoadedConfig parse_config(const std::string& text, const std::vector<std::string>& overrides = {},
                                 SimulationConfig base = {}) {
  LoadedConfig out{std::move(base), {}};
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  std::map<std::string, int> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto t = detail::trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw InputError("line " + std::to_string(lineno) + ": expected 'key = value'");
    const auto key = detail::trim(t.substr(0, eq));
    const auto value = detail::trim(t.substr(eq + 1));
    if (auto it = seen.find(key); it != seen.end())
      throw InputError("line " + std::to_string(lineno) + ": duplicate key '" + key + "' (first on line " +
                       std::to_string(it->second) + ")");
    seen[key] = lineno;
    try {
      apply_setting(out.config, key, value);
    } catch (const InputError& e) {
      throw InputError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw InputError("override '" + o + "': expected key=value");
    try {
      apply_setting(out.config, detail::trim(o.substr(0, eq)), detail::trim(o.substr(eq + 1)));
    } catch (const InputError& e) {
      throw InputError("override '" + o + "': " + e.what());
    }
  }
  out.warnings = normalize_weights(out.config.weights, out.config.tol);
  out.config.validate();
  return out;
}

}  // namespace qent

#endif  // QENT_CONFIG_HPP
