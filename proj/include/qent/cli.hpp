#ifndef QENT_CLI_HPP
#define QENT_CLI_HPP

#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qent/config.hpp"
#include "qent/verification.hpp"

namespace qent::cli {

enum ExitCode : int { Ok = 0, VerificationFailed = 1, BadInput = 2, NumericalFailure = 3 };

inline std::string strf(const char* fmt, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, ap);
  va_end(ap);
  return buf;
}

struct CommonOptions {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
  std::uint64_t seed = default_seed;
  bool json = false;
};

inline LoadedConfig load_config(const CommonOptions& opt) {
  std::string text;
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) throw InputError("cannot open config file '" + opt.config_path + "'");
    text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
  }
  return parse_config(text, opt.overrides);
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write '" + path + "'");
  out << content;
}

inline std::string label_text(const BasisLabel& l) {
  return strf("|%zu>_1|%zu>_2|%zu>_c", l.q1, l.q2, l.photons);
}

inline void print_diagnostics(std::ostream& os, const ReducedDiagnostics& d) {
  os << strf("cavity vacuum population   %.12f\n", d.cavity_vacuum);
  os << strf("qutrit 1 populations       %.10f %.10f %.10f\n", d.qutrit1_populations[0], d.qutrit1_populations[1],
             d.qutrit1_populations[2]);
  os << strf("qutrit 2 populations       %.10f %.10f %.10f\n", d.qutrit2_populations[0], d.qutrit2_populations[1],
             d.qutrit2_populations[2]);
  os << strf("purity q1 / q2 / cavity    %.10f %.10f %.10f\n", d.qutrit1_purity, d.qutrit2_purity, d.cavity_purity);
  os << strf("entropy of qutrit 1 (nat)  %.10f\n", d.qutrit1_entropy);
}

inline int cmd_verify(const CommonOptions& opt, Fault fault, std::ostream& out) {
  const auto rep = run_verification(opt.seed, fault);
  if (opt.json) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : rep.checks)
      checks.push_back({{"name", c.name}, {"passed", c.passed}, {"max_error", c.max_error}, {"detail", c.detail}});
    nlohmann::json j = {{"seed", rep.seed}, {"passed", rep.passed()}, {"checks", checks}};
    out << j.dump(2) << '\n';
  } else {
    out << "seed = " << rep.seed << '\n';
    out << strf("%-44s %-6s %-12s %s\n", "check", "result", "max_error", "detail");
    for (const auto& c : rep.checks)
      out << strf("%-44s %-6s %-12.3e %s\n", c.name.c_str(), c.passed ? "PASS" : "FAIL", c.max_error,
                  c.detail.c_str());
    out << (rep.passed() ? "all checks passed\n" : "VERIFICATION FAILED\n");
  }
  return rep.passed() ? Ok : VerificationFailed;
}

inline int cmd_ideal(const CommonOptions& opt, const std::optional<std::string>& alpha,
                     const std::optional<std::string>& beta, const std::optional<std::string>& gamma,
                     std::ostream& out, std::ostream& err) {
  std::vector<std::string> overrides = opt.overrides;
  if (alpha) overrides.push_back("alpha=" + *alpha);
  if (beta) overrides.push_back("beta=" + *beta);
  if (gamma) overrides.push_back("gamma=" + *gamma);
  CommonOptions o = opt;
  o.overrides = overrides;
  const auto loaded = load_config(o);
  for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
  const auto& cfg = loaded.config;
  const auto layout = cfg.layout();
  IdealRunOptions ro;
  ro.params = cfg.params;
  const auto run = ideal_run(cfg.weights, layout, cfg.schedule(), ro, cfg.tol);
  const auto target = target_state(cfg.weights, layout);
  const auto rho = DensityMatrix::pure(run.final_state, layout);
  const auto diag = reduced_diagnostics(rho);
  const double overlap = overlap_modulus(target, run.final_state);
  if (opt.json) {
    nlohmann::json amps = nlohmann::json::array();
    for (std::size_t i = 0; i < run.final_state.dim(); ++i)
      if (std::abs(run.final_state[i]) > 1e-12)
        amps.push_back({{"basis", label_text(basis_label(i, layout))},
                        {"re", run.final_state[i].real()},
                        {"im", run.final_state[i].imag()}});
    out << nlohmann::json({{"amplitudes", amps}, {"overlap", overlap}, {"cavity_vacuum", diag.cavity_vacuum},
                           {"qutrit1_purity", diag.qutrit1_purity}, {"qutrit2_purity", diag.qutrit2_purity}})
               .dump(2)
        << '\n';
    return Ok;
  }
  out << "ordering: qutrit1, qutrit2, cavity (N_c = " << layout.cavity_levels() << ")\n";
  out << strf("weights alpha=%.10g%+.10gi beta=%.10g%+.10gi gamma=%.10g%+.10gi\n", cfg.weights.alpha.real(),
              cfg.weights.alpha.imag(), cfg.weights.beta.real(), cfg.weights.beta.imag(), cfg.weights.gamma.real(),
              cfg.weights.gamma.imag());
  out << "final amplitudes:\n";
  for (std::size_t i = 0; i < run.final_state.dim(); ++i)
    if (std::abs(run.final_state[i]) > 1e-12)
      out << strf("  %s  %+.10f %+.10fi\n", label_text(basis_label(i, layout)).c_str(), run.final_state[i].real(),
                  run.final_state[i].imag());
  out << strf("overlap with target        %.6f\n", overlap);
  print_diagnostics(out, diag);
  return Ok;
}

inline nlohmann::json evolve_record(const SimulationConfig& cfg, const PointResult& r) {
  return {{"kind", "evolve"},
          {"version", version},
          {"config", config_echo(cfg)},
          {"config_hash", config_hash(cfg)},
          {"schedule_digest", digest(cfg.schedule())},
          {"ordering", "qutrit1,qutrit2,cavity"},
          {"result",
           {{"fidelity", r.fidelity},
            {"cavity_vacuum", r.diagnostics.cavity_vacuum},
            {"max_trace_error", r.run.max_trace_error()},
            {"max_hermiticity_error", r.run.max_hermiticity_error()},
            {"min_eigenvalue", r.run.min_eigenvalue()},
            {"rk4_steps", r.run.total_steps()}}},
          {"metadata", {{"created_utc", utc_timestamp()}}}};
}

inline int cmd_evolve(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const auto loaded = load_config(opt);
  for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
  const auto& cfg = loaded.config;
  const auto r = run_point(cfg, cfg.T_us, cfg.kappa_inv_us);
  out << strf("T = %g us, kappa^-1 = %g us, N_c = %zu, mode = %s\n", cfg.T_us, cfg.kappa_inv_us, cfg.cavity_levels,
              to_string(cfg.mode));
  out << strf("fidelity (%s)            %.10f\n", to_string(cfg.fidelity_target), r.fidelity);
  out << strf("fidelity cavity-traced    %.10f\n", fidelity_cavity_traced(r.run.rho, cfg.weights, cfg.tol));
  print_diagnostics(out, r.diagnostics);
  out << strf("max trace error           %.3e\n", r.run.max_trace_error());
  out << strf("max hermiticity error     %.3e\n", r.run.max_hermiticity_error());
  out << strf("min eigenvalue            %.3e\n", r.run.min_eigenvalue());
  out << strf("rk4 steps                 %zu\n", r.run.total_steps());
  const std::string path = opt.out_path.empty() ? "evolve.json" : opt.out_path;
  write_file(path, evolve_record(cfg, r).dump(2) + "\n");
  out << "record written to " << path << '\n';
  return Ok;
}

inline int cmd_sweep(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const auto loaded = load_config(opt);
  for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
  const auto& cfg = loaded.config;
  const auto result = run_sweep(cfg, [&](const SweepRow& row) {
    err << strf("  T=%g us kappa^-1=%g us fidelity=%.6f (%.2f s)\n", row.T_us, row.kappa_inv_us, row.fidelity,
                row.wall_s);
  });
  const std::string prefix = opt.out_path.empty() ? "sweep" : opt.out_path;
  std::ostringstream csv, heat;
  write_csv(csv, result);
  write_heatmap(heat, result);
  write_file(prefix + ".csv", csv.str());
  write_file(prefix + ".dat", heat.str());
  write_file(prefix + ".json", sweep_record(cfg, result).dump(2) + "\n");
  out << "config hash " << result.config_hash << ", schedule digest " << result.schedule_digest << '\n';
  out << strf("%10s %14s %14s\n", "T_us", "kappa_inv_us", "fidelity");
  for (const auto& row : result.rows) out << strf("%10g %14g %14.10f\n", row.T_us, row.kappa_inv_us, row.fidelity);
  out << result.rows.size() << " rows written to " << prefix << ".csv, " << prefix << ".dat, " << prefix << ".json\n";
  return Ok;
}

inline int cmd_schedule(const CommonOptions& opt, std::ostream& out, std::ostream& err) {
  const auto loaded = load_config(opt);
  for (const auto& w : loaded.warnings) err << "warning: " << w << '\n';
  const auto& cfg = loaded.config;
  const auto schedule = cfg.schedule();
  out << "# ordering qutrit1,qutrit2,cavity; " << schedule.metadata << '\n';
  out << to_text(schedule);
  const auto rep = timing_report(cfg);
  const auto& b = rep.budget;
  out << strf("# 7pi/(4 Omega10)  %.4f ns\n", b.lower_pulses * 1e9);
  out << strf("# 13pi/(4 Omega21) %.4f ns\n", b.upper_pulses * 1e9);
  out << strf("# 4pi/g1           %.4f ns\n", b.cavity_q1 * 1e9);
  out << strf("# 2pi/g2           %.4f ns\n", b.cavity_q2 * 1e9);
  out << strf("# 8 tau_d          %.4f ns\n", b.retune * 1e9);
  out << strf("# schedule duration (%s) %.4f ns\n", to_string(cfg.mode), rep.schedule_time * 1e9);
  for (const auto& r : rep.ratios)
    out << strf("# %-14s %10.3f us  ratio to total %.1f\n", r.name.c_str(), r.lifetime_s * 1e6, r.ratio);
  out << strf("total %.3f ns\n", b.total() * 1e9);
  return Ok;
}

inline Fault parse_fault(const std::string& s) {
  if (s.empty() || s == "none") return Fault::None;
  if (s == "step7-sign-flip") return Fault::Step7SignFlip;
  if (s == "step7-phase-flip") return Fault::Step7PhaseFlip;
  throw InputError("unknown fault '" + s + "'");
}

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-qutrit cavity entangling protocol: verification and simulation"};
  app.require_subcommand(1);
  CommonOptions opt;
  std::string fault;
  std::optional<std::string> alpha, beta, gamma;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", opt.config_path, "key = value configuration file");
    sub->add_option("--out", opt.out_path, "output path (evolve: JSON file; sweep: file prefix)");
    sub->add_option("--set", opt.overrides, "override key=value (repeatable)")->take_all();
    sub->add_option("--seed", opt.seed, "seed for randomized checks");
    sub->add_flag("--json", opt.json, "machine-readable output");
  };
  auto* verify = app.add_subcommand("verify", "check the closed forms, pulse chains and step states");
  add_common(verify);
  verify->add_option("--inject-fault", fault, "none | step7-sign-flip | step7-phase-flip");
  auto* ideal = app.add_subcommand("ideal", "run the dissipation-free protocol");
  add_common(ideal);
  ideal->add_option("--alpha", alpha, "weight of |00>");
  ideal->add_option("--beta", beta, "weight of |11>");
  ideal->add_option("--gamma", gamma, "weight of |22>");
  auto* evolve = app.add_subcommand("evolve", "single master-equation run at (T, kappa_inv)");
  add_common(evolve);
  auto* sweep = app.add_subcommand("sweep", "fidelity over the (T, kappa_inv) grid");
  add_common(sweep);
  auto* schedule = app.add_subcommand("schedule", "print the segment list and time budget");
  add_common(schedule);

  std::vector<std::string> argv_store{"qent"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return Ok;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return BadInput;
  }

  try {
    if (*verify) return cmd_verify(opt, parse_fault(fault), out);
    if (*ideal) return cmd_ideal(opt, alpha, beta, gamma, out, err);
    if (*evolve) return cmd_evolve(opt, out, err);
    if (*sweep) return cmd_sweep(opt, out, err);
    if (*schedule) return cmd_schedule(opt, out, err);
  } catch (const InputError& e) {
    err << "input error: " << e.what() << '\n';
    return BadInput;
  } catch (const VerificationError& e) {
    err << "verification failed: " << e.what() << '\n';
    return VerificationFailed;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << '\n';
    return NumericalFailure;
  }
  return BadInput;
}

}  // namespace qent::cli

#endif  // QENT_CLI_HPP
