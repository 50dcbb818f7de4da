#ifndef QENT_VERIFICATION_HPP
#define QENT_VERIFICATION_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "qent/random.hpp"

namespace qent {

struct EquivalenceReport {
  int cases = 0;
  double max_error = 0.0;
};

/// Compares the closed-form cavity and pulse maps against the matrix
/// exponential of the corresponding Hamiltonian on random inputs.
inline EquivalenceReport oracle_equivalence(Rng& rng, int cases, const SubsystemLayout& layout,
                                            const ProtocolParams& params = {}) {
  std::uniform_real_distribution<double> angle(0.0, 4 * pi);
  std::uniform_real_distribution<double> phase(-pi, pi);
  std::uniform_int_distribution<int> coin(0, 1);
  EquivalenceReport r;
  for (int k = 0; k < cases; ++k) {
    const int q = 1 + coin(rng);
    Segment seg;
    StateVector psi;
    if (coin(rng) == 0) {
      seg = CavityWindow{q, angle(rng)};
      psi = random_cavity_domain_state(rng, q, layout);
    } else {
      const Transition tr = coin(rng) == 0 ? Transition::Lower : Transition::Upper;
      const double ph = phase(rng);
      seg = PulseSegment{q, tr, ph, angle(rng)};
      psi = random_state(rng, layout.total_dim());
    }
    const auto closed = apply_closed_form(psi, seg, layout);
    const auto oracle = matexp(segment_hamiltonian(seg, params, layout), segment_duration(seg, params)) * psi;
    r.max_error = std::max(r.max_error, max_abs_diff(closed, oracle));
    ++r.cases;
  }
  return r;
}

struct CheckLine {
  std::string name;
  bool passed = false;
  double max_error = 0.0;
  std::string detail;
};

struct VerificationReport {
  std::uint64_t seed = default_seed;
  std::vector<CheckLine> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

/// Qutrit-2 pulse chains, closed-form/oracle equivalence and the per-step
/// state assertions for `weight_samples` random weight vectors, on both
/// evolution paths.
inline VerificationReport run_verification(std::uint64_t seed = default_seed, Fault fault = Fault::None,
                                           int equivalence_cases = 200, int weight_samples = 10) {
  const SubsystemLayout layout(3);
  const ProtocolParams params{};
  const Tolerances& tol = default_tolerances();
  VerificationReport rep;
  rep.seed = seed;
  Rng rng(seed);

  const auto schedule = inject_fault(build_schedule(ScheduleMode::Serial, params.tau_d), fault);

  for (const auto& a : verify_pulse_chains(layout, params, schedule).arrows)
    rep.checks.push_back({"pulse chain " + a.chain + " " + a.label, a.error <= tol.state_match, a.error, ""});

  const auto eq = oracle_equivalence(rng, equivalence_cases, layout, params);
  rep.checks.push_back({"closed form vs matrix exponential", eq.max_error <= tol.state_match, eq.max_error,
                        std::to_string(eq.cases) + " random cases"});

  for (int k = 0; k < weight_samples; ++k) {
    const auto w = random_weights(rng);
    for (auto path : {EvolutionPath::ClosedForm, EvolutionPath::Oracle}) {
      IdealRunOptions opt;
      opt.path = path;
      opt.strict = false;
      opt.params = params;
      const auto run = ideal_run(w, layout, schedule, opt, tol);
      double worst = 0.0;
      std::string failed;
      for (const auto& c : check_steps(run, w, layout, tol.state_match)) {
        worst = std::max(worst, c.error);
        if (!c.passed) failed += (failed.empty() ? "failed at step " : ",") + std::to_string(c.step);
      }
      const double overlap_err = 1.0 - overlap_modulus(target_state(w, layout), run.final_state);
      worst = std::max(worst, std::abs(overlap_err));
      rep.checks.push_back({"steps 1-9 weights#" + std::to_string(k) + " " + to_string(path),
                            failed.empty() && std::abs(overlap_err) <= 1e-9, worst, failed});
    }
  }
  return rep;
}

}  // namespace qent

#endif  // QENT_VERIFICATION_HPP
