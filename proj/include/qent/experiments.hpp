#ifndef QENT_EXPERIMENTS_HPP
#define QENT_EXPERIMENTS_HPP

#include <atomic>
#include <chrono>
#include <ctime>
#include <cstdio>
#include <exception>
#include <functional>
#include <mutex>
#include <ostream>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "qent/dynamics.hpp"

namespace qent {

enum class FidelityTarget { Full, CavityTraced };

inline const char* to_string(FidelityTarget f) { return f == FidelityTarget::Full ? "full" : "cavity_traced"; }

/// Everything a run needs. Frequencies are angular (rad/s) and times are in
/// seconds inside ProtocolParams; the lifetime grids stay in microseconds.
struct SimulationConfig {
  ProtocolParams params{};
  std::size_t cavity_levels = 3;
  WeightVector weights = equal_weights();
  double T_us = 30.0;
  double kappa_inv_us = 2.5;
  std::vector<double> T_grid_us{5, 10, 15, 20, 25, 30};
  std::vector<double> kappa_inv_grid_us{0.5, 1.0, 1.5, 2.0, 2.5, 3.0};
  IntegratorConfig integrator{};
  ScheduleMode mode = ScheduleMode::Serial;
  FidelityTarget fidelity_target = FidelityTarget::Full;
  unsigned threads = 0;  // 0: hardware concurrency
  Tolerances tol{};

  SubsystemLayout layout() const { return SubsystemLayout(cavity_levels); }
  Schedule schedule() const { return build_schedule(mode, params.tau_d); }

  void validate() const {
    params.validate();
    integrator.validate();
    (void)layout();
    auto check_grid = [](const std::vector<double>& g, const char* name) {
      if (g.empty()) throw InputError(std::string(name) + " is empty");
      for (std::size_t i = 0; i < g.size(); ++i) {
        if (!(g[i] > 0)) throw InputError(std::string(name) + " must be positive");
        if (i > 0 && !(g[i] > g[i - 1])) throw InputError(std::string(name) + " must be strictly increasing");
      }
    };
    check_grid(T_grid_us, "T_grid");
    check_grid(kappa_inv_grid_us, "kappa_inv_grid");
    if (!(T_us > 0) || !(kappa_inv_us > 0)) throw InputError("T and kappa_inv must be positive");
    require_normalized(weights, tol);
  }
};

/// Lifetimes scale with T: 1/gamma10 = 2T, 1/gamma20 = 5T, 1/gamma21 = T,
/// 1/gamma_phi1 = 1/gamma_phi2 = T; both qutrits identical.
inline DecoherenceRates derive_rates(double T_us, double kappa_inv_us) {
  if (!(T_us > 0) || !(kappa_inv_us > 0)) throw InputError("derive_rates: T and kappa_inv must be positive");
  const double t = T_us * 1e-6;
  QutritRates q{1.0 / (2 * t), 1.0 / t, 1.0 / (5 * t), 1.0 / t, 1.0 / t};
  return {1.0 / (kappa_inv_us * 1e-6), q, q};
}

struct PointResult {
  double fidelity = 0.0;
  LindbladResult run;
  ReducedDiagnostics diagnostics;
};

inline PointResult run_point(const SimulationConfig& cfg, double T_us, double kappa_inv_us) {
  const auto layout = cfg.layout();
  auto run = run_schedule_lindblad(cfg.weights, cfg.schedule(), cfg.params, derive_rates(T_us, kappa_inv_us),
                                   cfg.integrator, layout, cfg.tol);
  const double f = cfg.fidelity_target == FidelityTarget::Full
                       ? fidelity(run.rho, target_state(cfg.weights, layout), cfg.tol)
                       : fidelity_cavity_traced(run.rho, cfg.weights, cfg.tol);
  auto diag = reduced_diagnostics(run.rho);
  return {f, std::move(run), diag};
}

struct SweepRow {
  double T_us = 0.0;
  double kappa_inv_us = 0.0;
  double fidelity = 0.0;
  double wall_s = 0.0;
};

struct SweepResult {
  std::vector<SweepRow> rows;  // T-major
  std::string config_hash;
  std::string version = qent::version;
  std::string schedule_digest;
};

inline nlohmann::json config_echo(const SimulationConfig& cfg);

inline std::string config_hash(const SimulationConfig& cfg) { return fnv1a_hex(config_echo(cfg).dump()); }

/// Evaluates every (T, kappa_inv) grid point. Points run on worker threads;
/// rows are stored by grid position, so the output does not depend on the
/// thread count.
inline SweepResult run_sweep(const SimulationConfig& cfg,
                             const std::function<void(const SweepRow&)>& on_row = nullptr) {
  cfg.validate();
  const std::size_t nk = cfg.kappa_inv_grid_us.size();
  const std::size_t total = cfg.T_grid_us.size() * nk;
  SweepResult result;
  result.rows.resize(total);
  result.config_hash = config_hash(cfg);
  result.schedule_digest = digest(cfg.schedule());

  unsigned workers = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, total));
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::exception_ptr failure;
  std::size_t failed_index = total;

  auto work = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= total) return;
      {
        std::lock_guard lock(mu);
        if (failure) return;
      }
      SweepRow row{cfg.T_grid_us[i / nk], cfg.kappa_inv_grid_us[i % nk], 0.0, 0.0};
      try {
        const auto t0 = std::chrono::steady_clock::now();
        row.fidelity = run_point(cfg, row.T_us, row.kappa_inv_us).fidelity;
        row.wall_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      } catch (...) {
        std::lock_guard lock(mu);
        if (!failure || i < failed_index) {
          failure = std::current_exception();
          failed_index = i;
        }
        return;
      }
      result.rows[i] = row;
      if (on_row) {
        std::lock_guard lock(mu);
        on_row(row);
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned k = 1; k < workers; ++k) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  if (failure) {
    char where[96];
    std::snprintf(where, sizeof where, "sweep point T=%g us, kappa_inv=%g us: ", cfg.T_grid_us[failed_index / nk],
                  cfg.kappa_inv_grid_us[failed_index % nk]);
    try {
      std::rethrow_exception(failure);
    } catch (const InputError& e) {
      throw InputError(where + std::string(e.what()));
    } catch (const std::exception& e) {
      throw NumericalError(where + std::string(e.what()));
    }
  }
  return result;
}

struct LifetimeRatio {
  std::string name;
  double lifetime_s = 0.0;
  double ratio = 0.0;  // lifetime / total operation time
};

struct TimingReport {
  TimeBudget budget;
  double schedule_time = 0.0;  // actual duration of the configured schedule
  std::vector<LifetimeRatio> ratios;
};

inline TimingReport timing_report(const SimulationConfig& cfg) {
  const auto& p = cfg.params;
  TimingReport r;
  r.budget = time_budget(p.coupling.g1, p.coupling.g2, p.omega10, p.omega21, p.tau_d);
  r.schedule_time = schedule_duration(cfg.schedule(), p);
  const auto rates = derive_rates(cfg.T_us, cfg.kappa_inv_us);
  const double tau = r.budget.total();
  auto add = [&](const char* name, double rate) { r.ratios.push_back({name, 1.0 / rate, 1.0 / rate / tau}); };
  add("gamma10^-1", rates.qutrit1.gamma10);
  add("gamma20^-1", rates.qutrit1.gamma20);
  add("gamma21^-1", rates.qutrit1.gamma21);
  add("gamma_phi1^-1", rates.qutrit1.gamma_phi1);
  add("gamma_phi2^-1", rates.qutrit1.gamma_phi2);
  add("kappa^-1", rates.kappa);
  return r;
}

namespace detail {
inline std::string g10(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}
}  // namespace detail

inline void write_csv(std::ostream& os, const SweepResult& r) {
  os << "T_us,kappa_inv_us,fidelity,wall_s\n";
  for (const auto& row : r.rows)
    os << detail::g10(row.T_us) << ',' << detail::g10(row.kappa_inv_us) << ',' << detail::g10(row.fidelity) << ','
       << detail::g10(row.wall_s) << '\n';
}

/// `T kappa_inv fidelity` triples, one blank line between T blocks.
inline void write_heatmap(std::ostream& os, const SweepResult& r) {
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (i > 0 && r.rows[i].T_us != r.rows[i - 1].T_us) os << '\n';
    const auto& row = r.rows[i];
    os << detail::g10(row.T_us) << ' ' << detail::g10(row.kappa_inv_us) << ' ' << detail::g10(row.fidelity) << '\n';
  }
}

inline nlohmann::json config_echo(const SimulationConfig& cfg) {
  const double mhz = 2 * pi * 1e6;
  auto cplx = [](Complex c) { return nlohmann::json::array({c.real(), c.imag()}); };
  return {
      {"g1_MHz", cfg.params.coupling.g1 / mhz},
      {"g2_MHz", cfg.params.coupling.g2 / mhz},
      {"omega10_MHz", cfg.params.omega10 / mhz},
      {"omega21_MHz", cfg.params.omega21 / mhz},
      {"tau_d_ns", cfg.params.tau_d * 1e9},
      {"n_cavity", cfg.cavity_levels},
      {"alpha", cplx(cfg.weights.alpha)},
      {"beta", cplx(cfg.weights.beta)},
      {"gamma", cplx(cfg.weights.gamma)},
      {"T_us", cfg.T_us},
      {"kappa_inv_us", cfg.kappa_inv_us},
      {"T_grid_us", cfg.T_grid_us},
      {"kappa_inv_grid_us", cfg.kappa_inv_grid_us},
      {"max_phase_step", cfg.integrator.max_phase_step},
      {"step_cap_ns", cfg.integrator.step_cap * 1e9},
      {"mode", to_string(cfg.mode)},
      {"fidelity", to_string(cfg.fidelity_target)},
  };
}

inline std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

inline nlohmann::json sweep_record(const SimulationConfig& cfg, const SweepResult& r) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"T_us", row.T_us}, {"kappa_inv_us", row.kappa_inv_us}, {"fidelity", row.fidelity},
                    {"wall_s", row.wall_s}});
  return {{"kind", "sweep"},
          {"version", r.version},
          {"config", config_echo(cfg)},
          {"config_hash", r.config_hash},
          {"schedule_digest", r.schedule_digest},
          {"ordering", "qutrit1,qutrit2,cavity"},
          {"rows", rows},
          {"metadata", {{"created_utc", utc_timestamp()}}}};
}

}  // namespace qent

#endif  // QENT_EXPERIMENTS_HPP
