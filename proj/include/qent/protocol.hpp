#ifndef QENT_PROTOCOL_HPP
#define QENT_PROTOCOL_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "qent/schedule.hpp"

namespace qent {

/// Weights of the qutrit-1 input state. The input is
/// alpha|0> + gamma|1> + beta|2>; the protocol maps it to
/// alpha|00> + beta|11> + gamma|22>.
struct WeightVector {
  Complex alpha{1.0};
  Complex beta{};
  Complex gamma{};

  double norm_squared() const { return std::norm(alpha) + std::norm(beta) + std::norm(gamma); }
  bool is_normalized(const Tolerances& tol = default_tolerances()) const {
    return std::abs(norm_squared() - 1.0) <= tol.normalization;
  }
  WeightVector normalized() const {
    const double n = std::sqrt(norm_squared());
    if (!(n > 0) || !std::isfinite(n)) throw InputError("weight vector cannot be normalized");
    return {alpha / n, beta / n, gamma / n};
  }
  bool operator==(const WeightVector&) const = default;
};

inline WeightVector equal_weights() {
  const double w = 1.0 / std::sqrt(3.0);
  return {w, w, w};
}

inline void require_normalized(const WeightVector& w, const Tolerances& tol = default_tolerances()) {
  if (!w.is_normalized(tol)) throw InputError("weight vector is not normalized");
}

inline StateVector initial_state(const WeightVector& w, const SubsystemLayout& layout) {
  StateVector s(layout.total_dim());
  s[flat_index({0, 0, 0}, layout)] = w.alpha;
  s[flat_index({1, 0, 0}, layout)] = w.gamma;
  s[flat_index({2, 0, 0}, layout)] = w.beta;
  return s;
}

/// (alpha|00> + beta|11> + gamma|22>) with the cavity in vacuum.
inline StateVector target_state(const WeightVector& w, const SubsystemLayout& layout) {
  StateVector s(layout.total_dim());
  s[flat_index({0, 0, 0}, layout)] = w.alpha;
  s[flat_index({1, 1, 0}, layout)] = w.beta;
  s[flat_index({2, 2, 0}, layout)] = w.gamma;
  return s;
}

/// Two-qutrit part of the target state, 9-dimensional.
inline StateVector target_state_qutrits(const WeightVector& w) {
  StateVector s(qutrit_dim * qutrit_dim);
  s[0] = w.alpha;
  s[4] = w.beta;
  s[8] = w.gamma;
  return s;
}

namespace detail {

inline std::size_t level_of(const BasisLabel& l, Subsystem q) { return q == Subsystem::Qutrit1 ? l.q1 : l.q2; }

inline BasisLabel with_level(BasisLabel l, Subsystem q, std::size_t level) {
  (q == Subsystem::Qutrit1 ? l.q1 : l.q2) = level;
  return l;
}

}  // namespace detail

/// Resonant qutrit-cavity exchange on the {|0>,|1>} x {|0>_c,|1>_c} sector of
/// one qutrit: |0,0> fixed, |1,0> -> cos|1,0> - i sin|0,1>,
/// |0,1> -> cos|0,1> - i sin|1,0> (argument g*t). Level 2 is untouched.
/// Support on n >= 2, or on |1>|1>_c of the target, is outside the closed
/// form and raises InputError.
inline StateVector closed_form_cavity(const StateVector& state, double angle, int qutrit_no,
                                      const SubsystemLayout& layout, const Tolerances& tol = default_tolerances()) {
  const auto q = qutrit(qutrit_no);
  if (state.dim() != layout.total_dim()) throw InputError("closed_form_cavity: state dimension mismatch");
  for (std::size_t i = 0; i < state.dim(); ++i) {
    if (std::abs(state[i]) <= tol.closed_form_support) continue;
    const auto l = basis_label(i, layout);
    if (l.photons >= 2) throw InputError("closed_form_cavity: support on photon number >= 2; use the oracle path");
    if (l.photons == 1 && detail::level_of(l, q) == 1)
      throw InputError("closed_form_cavity: support on |1>|1>_c of the coupled qutrit; use the oracle path");
  }
  const double c = std::cos(angle), s = std::sin(angle);
  StateVector out = state;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const auto l = basis_label(i, layout);
    if (l.photons != 0 || detail::level_of(l, q) != 1) continue;
    auto partner = detail::with_level(l, q, 0);
    partner.photons = 1;
    const auto excited = i;                               // |1>|0>_c
    const auto photon = flat_index(partner, layout);      // |0>|1>_c
    const Complex a = state[excited], b = state[photon];
    out[excited] = c * a - I * s * b;
    out[photon] = -I * s * a + c * b;
  }
  return out;
}

/// Two-level rotation of one transition of one qutrit (argument Omega*t):
/// |l> -> cos|l> - i e^{-i phi} sin|l+1>, |l+1> -> -i e^{i phi} sin|l> + cos|l+1>.
inline StateVector closed_form_pulse(const StateVector& state, Transition tr, double phase, double angle,
                                     int qutrit_no, const SubsystemLayout& layout) {
  const auto q = qutrit(qutrit_no);
  if (state.dim() != layout.total_dim()) throw InputError("closed_form_pulse: state dimension mismatch");
  const auto lo = lower_level(tr);
  const double c = std::cos(angle), s = std::sin(angle);
  const Complex down = -I * std::exp(I * phase) * s;   // <l|U|l+1>
  const Complex up = -I * std::exp(-I * phase) * s;    // <l+1|U|l>
  StateVector out = state;
  for (std::size_t i = 0; i < state.dim(); ++i) {
    const auto l = basis_label(i, layout);
    if (detail::level_of(l, q) != lo) continue;
    const auto j = flat_index(detail::with_level(l, q, lo + 1), layout);
    const Complex x = state[i], y = state[j];
    out[i] = c * x + down * y;
    out[j] = up * x + c * y;
  }
  return out;
}

inline StateVector apply_closed_form(const StateVector& state, const Segment& seg, const SubsystemLayout& layout) {
  if (auto c = std::get_if<CavityWindow>(&seg)) return closed_form_cavity(state, c->angle, c->qutrit, layout);
  if (auto p = std::get_if<PulseSegment>(&seg))
    return closed_form_pulse(state, p->transition, p->phase, p->angle, p->qutrit, layout);
  return state;
}

/// |<a|b>|
inline double overlap_modulus(const StateVector& a, const StateVector& b) { return std::abs(inner(a, b)); }

/// Max amplitude difference after removing the global phase; the phase is
/// taken from the largest-magnitude amplitude of `reference`.
inline double phase_aligned_error(const StateVector& state, const StateVector& reference) {
  if (state.dim() != reference.dim()) throw InputError("phase_aligned_error: dimension mismatch");
  std::size_t k = 0;
  for (std::size_t i = 1; i < reference.dim(); ++i)
    if (std::abs(reference[i]) > std::abs(reference[k])) k = i;
  Complex rot{1.0};
  if (std::abs(state[k]) > 0.0 && std::abs(reference[k]) > 0.0)
    rot = (reference[k] / std::abs(reference[k])) / (state[k] / std::abs(state[k]));
  double err = 0.0;
  for (std::size_t i = 0; i < state.dim(); ++i) err = std::max(err, std::abs(rot * state[i] - reference[i]));
  return err;
}

/// Hand-derived state after each protocol step (0 = input state). Step 5
/// uses (alpha|0>_1 + beta|1>_1)(|0>_2 + |2>_2)/sqrt2 - gamma|2>_1|1>_2.
inline StateVector expected_step_state(int step, const WeightVector& w, const SubsystemLayout& layout) {
  if (step < 0 || step > 9) throw InputError("protocol step must be in 0..9");
  const double r = 1.0 / std::sqrt(2.0);
  StateVector s(layout.total_dim());
  auto put = [&](std::size_t q1, std::size_t q2, std::size_t n, Complex v) { s[flat_index({q1, q2, n}, layout)] += v; };
  const Complex a = w.alpha, b = w.beta, g = w.gamma;
  switch (step) {
    case 0:
      return initial_state(w, layout);
    case 1:
      for (std::size_t q2 : {0u, 2u}) {
        put(0, q2, 0, r * a);
        put(1, q2, 0, r * g);
        put(2, q2, 0, r * b);
      }
      break;
    case 2:
    case 3:
      for (std::size_t q2 : {0u, 2u}) {
        put(0, q2, 0, r * a);
        put(2, q2, 0, r * b);
        const double sign = (step == 3 && q2 == 0) ? -1.0 : 1.0;
        put(0, q2, 1, -I * r * g * sign);
      }
      break;
    case 4:
      for (std::size_t q2 : {0u, 2u}) {
        put(0, q2, 0, r * a);
        put(2, q2, 0, r * b);
        put(1, q2, 0, r * g * (q2 == 0 ? -1.0 : 1.0));
      }
      break;
    case 5:
      for (std::size_t q2 : {0u, 2u}) {
        put(0, q2, 0, r * a);
        put(1, q2, 0, r * b);
      }
      put(2, 1, 0, -g);
      break;
    case 6:
    case 7:
      for (std::size_t q2 : {0u, 2u}) {
        put(0, q2, 0, r * a);
        const double sign = (step == 7 && q2 == 0) ? -1.0 : 1.0;
        put(0, q2, 1, -I * r * b * sign);
      }
      put(2, 1, 0, -g);
      break;
    case 8:
      for (std::size_t q2 : {0u, 2u}) {
        put(0, q2, 0, r * a);
        put(1, q2, 0, r * b * (q2 == 0 ? -1.0 : 1.0));
      }
      put(2, 1, 0, -g);
      break;
    case 9:
      return target_state(w, layout);
  }
  return s;
}

enum class EvolutionPath { ClosedForm, Oracle };

inline const char* to_string(EvolutionPath p) { return p == EvolutionPath::ClosedForm ? "closed_form" : "oracle"; }

struct IdealRun {
  StateVector final_state;
  std::array<StateVector, 10> after_step;  // index 0 is the input state
  double max_norm_drift = 0.0;             // over all segment boundaries
};

struct StepCheck {
  int step = 0;
  double error = 0.0;
  bool passed = false;
};

inline std::vector<StepCheck> check_steps(const IdealRun& run, const WeightVector& w, const SubsystemLayout& layout,
                                          double tol = default_tolerances().state_match) {
  std::vector<StepCheck> out;
  for (int step = 1; step <= 9; ++step) {
    const double e = phase_aligned_error(run.after_step[step], expected_step_state(step, w, layout));
    out.push_back({step, e, e <= tol});
  }
  return out;
}

struct IdealRunOptions {
  EvolutionPath path = EvolutionPath::ClosedForm;
  bool strict = true;  // throw VerificationError on a step mismatch
  ProtocolParams params{};
};

/// Runs the schedule on the pure input state without dissipation.
inline IdealRun ideal_run(const WeightVector& w, const SubsystemLayout& layout, const Schedule& schedule,
                          const IdealRunOptions& opt = {}, const Tolerances& tol = default_tolerances()) {
  require_normalized(w, tol);
  IdealRun run;
  StateVector psi = initial_state(w, layout);
  run.after_step[0] = psi;
  auto record = [&](int step) {
    run.max_norm_drift = std::max(run.max_norm_drift, std::abs(psi.norm_squared() - 1.0));
    run.after_step[static_cast<std::size_t>(step)] = psi;
  };
  if (opt.path == EvolutionPath::ClosedForm) {
    for (const auto& item : schedule.items) {
      psi = apply_closed_form(psi, item.segment, layout);
      record(item.step);
    }
  } else {
    for (const auto& iv : resolve_intervals(schedule, opt.params)) {
      ComplexMatrix h(layout.total_dim(), layout.total_dim());
      for (auto idx : iv.active) h += segment_hamiltonian(schedule.items[idx].segment, opt.params, layout);
      psi = matexp(h, iv.duration, 1.0, tol) * psi;
      record(iv.step);
    }
  }
  run.final_state = psi;
  if (opt.strict) {
    for (const auto& c : check_steps(run, w, layout, tol.state_match))
      if (!c.passed)
        throw VerificationError("ideal_run: state after step " + std::to_string(c.step) +
                                " deviates from the expected state by " + std::to_string(c.error));
  }
  return run;
}

inline IdealRun ideal_run(const WeightVector& w, const SubsystemLayout& layout,
                          EvolutionPath path = EvolutionPath::ClosedForm) {
  IdealRunOptions opt;
  opt.path = path;
  return ideal_run(w, layout, build_schedule(ScheduleMode::Serial, opt.params.tau_d), opt);
}

/// Terms of the serial operation time, seconds.
struct TimeBudget {
  double lower_pulses = 0.0;  // 7 pi / (4 Omega10)
  double upper_pulses = 0.0;  // 13 pi / (4 Omega21)
  double cavity_q1 = 0.0;     // 4 pi / g1
  double cavity_q2 = 0.0;     // 2 pi / g2
  double retune = 0.0;        // 8 tau_d
  double total() const { return lower_pulses + upper_pulses + cavity_q1 + cavity_q2 + retune; }
};

inline TimeBudget time_budget(double g1, double g2, double omega10, double omega21, double tau_d) {
  if (!(g1 > 0 && g2 > 0 && omega10 > 0 && omega21 > 0)) throw InputError("total_time: frequencies must be positive");
  return {7 * pi / (4 * omega10), 13 * pi / (4 * omega21), 4 * pi / g1, 2 * pi / g2, 8 * tau_d};
}

inline double total_time(double g1, double g2, double omega10, double omega21, double tau_d) {
  return time_budget(g1, g2, omega10, omega21, tau_d).total();
}

struct ArrowCheck {
  std::string chain;  // e.g. "step5/a"
  std::string label;  // e.g. "p2"
  double error = 0.0;
};

struct PulseChainReport {
  std::vector<ArrowCheck> arrows;
  double max_error() const {
    double m = 0.0;
    for (const auto& a : arrows) m = std::max(m, a.error);
    return m;
  }
  bool passed(double tol = default_tolerances().state_match) const { return max_error() <= tol; }
};

/// Runs the qutrit-2 pulse chains of steps 1, 5 and 9 (taken from the
/// schedule) on the documented input states and compares every
/// intermediate state exactly, through both the closed form and the
/// matrix-exponential route.
inline PulseChainReport verify_pulse_chains(const SubsystemLayout& layout, const ProtocolParams& params = {},
                                      const Schedule& schedule = build_schedule()) {
  const double r = 1.0 / std::sqrt(2.0);
  // Qutrit-2 state with qutrit 1 and cavity in |0>.
  auto q2 = [&](Complex c0, Complex c1, Complex c2) {
    StateVector s(layout.total_dim());
    s[flat_index({0, 0, 0}, layout)] = c0;
    s[flat_index({0, 1, 0}, layout)] = c1;
    s[flat_index({0, 2, 0}, layout)] = c2;
    return s;
  };
  auto pulses_of = [&](int step) {
    std::vector<PulseSegment> out;
    for (const auto& item : schedule.items)
      if (item.step == step)
        if (auto p = std::get_if<PulseSegment>(&item.segment); p && p->qutrit == 2) out.push_back(*p);
    return out;
  };
  struct Chain {
    std::string name;
    int step;
    std::vector<StateVector> states;  // input followed by the state after each pulse
  };
  const std::vector<Chain> chains = {
      {"step1", 1, {q2(1, 0, 0), q2(r, r, 0), q2(r, 0, r)}},
      {"step5/a", 5, {q2(r, 0, r), q2(0, r, r), q2(0, 1, 0), q2(r, -r, 0), q2(r, 0, r)}},
      {"step5/b", 5, {q2(-r, 0, r), q2(0, -r, r), q2(0, 0, 1), q2(0, 0, 1), q2(0, 1, 0)}},
      {"step9/a", 9, {q2(r, 0, r), q2(r, r, 0), q2(1, 0, 0)}},
      {"step9/b", 9, {q2(-r, 0, r), q2(-r, r, 0), q2(0, 1, 0)}},
      {"step9/c", 9, {q2(0, 1, 0), q2(0, 0, -1), q2(0, 0, -1)}},
  };
  PulseChainReport report;
  for (const auto& chain : chains) {
    const auto pulses = pulses_of(chain.step);
    if (pulses.size() + 1 != chain.states.size())
      throw VerificationError("verify_pulse_chains: " + chain.name + " expects " + std::to_string(chain.states.size() - 1) +
                              " qutrit-2 pulses, schedule has " + std::to_string(pulses.size()));
    StateVector closed = chain.states.front();
    StateVector oracle = closed;
    for (std::size_t k = 0; k < pulses.size(); ++k) {
      const auto& p = pulses[k];
      closed = closed_form_pulse(closed, p.transition, p.phase, p.angle, 2, layout);
      const auto h = segment_hamiltonian(p, params, layout);
      oracle = matexp(h, segment_duration(p, params)) * oracle;
      const auto& want = chain.states[k + 1];
      const double e = std::max(max_abs_diff(closed, want), max_abs_diff(oracle, want));
      report.arrows.push_back({chain.name, "p" + std::to_string(k + 1), e});
    }
  }
  return report;
}

enum class Fault { None, Step7SignFlip, Step7PhaseFlip };

/// Mutations used to check that verification detects a broken schedule.
/// Step7SignFlip makes the qutrit-1 pulse of step 7 a full 2 pi rotation so
/// |2>_1 keeps its sign; Step7PhaseFlip negates that pulse's phase, which
/// leaves the step unchanged since the rotation angle is pi.
inline Schedule inject_fault(Schedule s, Fault f) {
  if (f == Fault::None) return s;
  for (auto& item : s.items) {
    if (item.step != 7) continue;
    if (auto p = std::get_if<PulseSegment>(&item.segment); p && p->qutrit == 1) {
      if (f == Fault::Step7SignFlip) p->angle = 2 * pi;
      if (f == Fault::Step7PhaseFlip) p->phase = -p->phase;
    }
  }
  return s;
}

}  // namespace qent

#endif  // QENT_PROTOCOL_HPP
