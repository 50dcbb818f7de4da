// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "qent/qent.hpp"

using namespace qent;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int failures = 0;

void report(const char* id, bool pass, const std::string& detail) {
  std::printf("%s %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

std::string fmt(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

void guarded(const char* id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  const SubsystemLayout layout(3);

  guarded("A1", [&] {
    const auto t0 = Clock::now();
    Rng rng(default_seed);
    double worst_overlap = 1.0, worst_vacuum = 1.0;
    for (int k = 0; k < 100; ++k) {
      const auto w = random_weights(rng);
      const auto run = ideal_run(w, layout);
      worst_overlap = std::min(worst_overlap, overlap_modulus(target_state(w, layout), run.final_state));
      worst_vacuum = std::min(worst_vacuum, reduced_diagnostics(DensityMatrix::pure(run.final_state, layout)).cavity_vacuum);
    }
    const double dt = seconds_since(t0);
    report("A1", worst_overlap >= 1 - 1e-9 && worst_vacuum >= 1 - 1e-9 && dt < 1.0,
           fmt("100 weights: min overlap %.12f, min vacuum %.12f, %.3f s", worst_overlap, worst_vacuum, dt));
  });

  SimulationConfig corner;  // 2pi x 100 MHz, tau_d 1.5 ns, N_c 3, equal weights, T 30 us, kappa^-1 2.5 us
  double corner_fidelity = 0.0;
  guarded("A2", [&] {
    const auto t0 = Clock::now();
    const auto r = run_point(corner, corner.T_us, corner.kappa_inv_us);
    const double dt = seconds_since(t0);
    corner_fidelity = r.fidelity;
    const bool in_window = r.fidelity >= 0.975 && r.fidelity <= 0.990;
    report("A2", in_window && dt < 30.0,
           fmt("fidelity %.10f, window [0.975, 0.990], reference 0.9803, %.2f s", r.fidelity, dt));
    SimulationConfig angular = corner;
    angular.params.coupling = {1e8, 1e8};
    angular.params.omega10 = angular.params.omega21 = 1e8;
    const auto ra = run_point(angular, corner.T_us, corner.kappa_inv_us);
    std::printf("   note: same corner with g = Omega = 1e8 rad/s gives fidelity %.10f\n", ra.fidelity);
  });

  guarded("A3", [&] {
    const auto& p = corner.params;
    const auto b = time_budget(p.coupling.g1, p.coupling.g2, p.omega10, p.omega21, p.tau_d);
    const double total_ns = b.total() * 1e9;
    const double terms[] = {b.lower_pulses * 1e9, b.upper_pulses * 1e9, b.cavity_q1 * 1e9, b.cavity_q2 * 1e9,
                            b.retune * 1e9};
    const double want[] = {8.75, 16.25, 20, 10, 12};
    bool ok = std::abs(total_ns - 67.0) <= 0.05;
    for (int i = 0; i < 5; ++i) ok = ok && std::abs(terms[i] - want[i]) <= 1e-9;
    const double sched_ns = schedule_duration(corner.schedule(), p) * 1e9;
    ok = ok && std::abs(sched_ns - total_ns) <= 1e-9;
    report("A3", ok,
           fmt("total %.4f ns (schedule %.4f ns); terms ", total_ns, sched_ns) +
               fmt("%.4f, %.4f, %.4f, ", terms[0], terms[1], terms[2]) + fmt("%.4f, %.4f ns", terms[3], terms[4]));
  });

  guarded("A4", [&] {
    const auto rep = verify_pulse_chains(layout);
    report("A4", rep.passed(1e-10), fmt("%.0f arrows, max amplitude error %.3e", double(rep.arrows.size()), rep.max_error()));
  });

  guarded("A5", [&] {
    Rng rng(default_seed);
    const auto r = oracle_equivalence(rng, 200, layout);
    report("A5", r.cases == 200 && r.max_error <= 1e-10, fmt("%.0f cases, max error %.3e", double(r.cases), r.max_error));
  });

  guarded("A6", [&] {
    double tr = 0, herm = 0, mineig = INFINITY;
    auto absorb = [&](const LindbladResult& r) {
      tr = std::max(tr, r.max_trace_error());
      herm = std::max(herm, r.max_hermiticity_error());
      mineig = std::min(mineig, r.min_eigenvalue());
    };
    Rng rng(default_seed);
    const double corners[][2] = {{30, 2.5}, {5, 0.5}, {30, 3.0}, {5, 3.0}};
    for (const auto& c : corners) {
      const auto w = random_weights(rng);
      absorb(run_schedule_lindblad(w, corner.schedule(), corner.params, derive_rates(c[0], c[1]), corner.integrator,
                                   layout));
    }
    absorb(run_schedule_lindblad(equal_weights(), build_schedule(ScheduleMode::Concurrent), corner.params,
                                 derive_rates(10, 1.0), corner.integrator, layout));
    double unitary_gap = 0.0;
    for (int k = 0; k < 3; ++k) {
      const auto w = random_weights(rng);
      const auto zero = run_schedule_lindblad(w, corner.schedule(), corner.params, {}, corner.integrator, layout);
      absorb(zero);
      IdealRunOptions opt;
      opt.path = EvolutionPath::Oracle;
      const auto ideal = ideal_run(w, layout, corner.schedule(), opt);
      unitary_gap = std::max(unitary_gap, max_abs_diff(zero.rho.matrix(), outer(ideal.final_state, ideal.final_state)));
    }
    const bool ok = tr <= 1e-8 && herm <= 1e-10 && mineig >= -1e-8 && unitary_gap <= 1e-8;
    report("A6", ok,
           fmt("max |tr-1| %.2e, max hermiticity %.2e, min eigenvalue %.2e, zero-rate vs unitary %.2e", tr, herm,
               mineig, unitary_gap));
  });

  guarded("A7", [&] {
    const auto t0 = Clock::now();
    const auto sweep = run_sweep(corner);
    const double dt = seconds_since(t0);
    const std::size_t nt = corner.T_grid_us.size(), nk = corner.kappa_inv_grid_us.size();
    auto f = [&](std::size_t i, std::size_t j) { return sweep.rows[i * nk + j].fidelity; };
    double worst_drop = 0.0;
    for (std::size_t i = 0; i < nt; ++i)
      for (std::size_t j = 0; j < nk; ++j) {
        if (j + 1 < nk) worst_drop = std::max(worst_drop, f(i, j) - f(i, j + 1));
        if (i + 1 < nt) worst_drop = std::max(worst_drop, f(i, j) - f(i + 1, j));
      }
    report("A7", worst_drop <= 1e-4 && dt < 900.0 && sweep.rows.size() == 36,
           fmt("%.0f points, largest decrease %.3e, F range [%.6f, %.6f], ", double(sweep.rows.size()),
               std::max(0.0, worst_drop), f(0, 0), f(nt - 1, nk - 1)) +
               fmt("%.1f s", dt));
  });

  guarded("A8", [&] {
    SimulationConfig c4 = corner;
    c4.cavity_levels = 4;
    const double f3 = corner_fidelity > 0 ? corner_fidelity : run_point(corner, corner.T_us, corner.kappa_inv_us).fidelity;
    const double f4 = run_point(c4, c4.T_us, c4.kappa_inv_us).fidelity;
    report("A8", std::abs(f4 - f3) < 1e-4, fmt("F(N_c=3) %.10f, F(N_c=4) %.10f, difference %.3e", f3, f4, std::abs(f4 - f3)));
  });

  std::printf("%s\n", failures == 0 ? "all acceptance criteria passed" : (std::to_string(failures) + " criterion(s) failed").c_str());
  return failures == 0 ? 0 : 1;
}
