#ifndef QENT_HAMILTONIANS_HPP
#define QENT_HAMILTONIANS_HPP

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "qent/hilbert.hpp"

namespace qent {

// Interaction picture with hbar = 1: every Hamiltonian below is in rad/s.

enum class Transition { Lower, Upper };  // 0<->1 and 1<->2

inline const char* to_string(Transition t) { return t == Transition::Lower ? "01" : "12"; }

/// Lower level index of the transition (0 for 0<->1, 1 for 1<->2).
inline std::size_t lower_level(Transition t) { return t == Transition::Lower ? 0 : 1; }

struct CouplingParams {
  double g1 = 0.0;
  double g2 = 0.0;

  double for_qutrit(Subsystem q) const { return qutrit_number(q) == 1 ? g1 : g2; }
};

struct PulseParams {
  Transition transition = Transition::Lower;
  double rabi = 0.0;      // rad/s
  double phase = 0.0;     // rad
  double duration = 0.0;  // s
};

/// Relaxation and dephasing rates of one qutrit, 1/s.
struct QutritRates {
  double gamma10 = 0.0;
  double gamma21 = 0.0;
  double gamma20 = 0.0;
  double gamma_phi1 = 0.0;
  double gamma_phi2 = 0.0;

  bool operator==(const QutritRates&) const = default;
};

struct DecoherenceRates {
  double kappa = 0.0;
  QutritRates qutrit1;
  QutritRates qutrit2;

  const QutritRates& of(Subsystem q) const { return qutrit_number(q) == 1 ? qutrit1 : qutrit2; }
  bool operator==(const DecoherenceRates&) const = default;
};

/// g (a^dagger |0><1| + a |1><0|) with the cavity coupled to one qutrit.
inline ComplexMatrix h_cavity(double g, Subsystem target, const SubsystemLayout& layout) {
  if (target == Subsystem::Cavity) throw InputError("h_cavity: target must be a qutrit");
  const auto a = cavity_annihilation(layout);
  const auto lower = qutrit_transition(0, 1, target, layout);
  const auto coupling = dagger(a) * lower;
  return g * (coupling + dagger(coupling));
}

/// Omega (e^{i phi} |l><l+1| + h.c.) on the driven transition of one qutrit.
inline ComplexMatrix h_pulse(const PulseParams& p, Subsystem target, const SubsystemLayout& layout) {
  if (target == Subsystem::Cavity) throw InputError("h_pulse: target must be a qutrit");
  const auto l = lower_level(p.transition);
  const auto lowering = qutrit_transition(l, l + 1, target, layout);
  const auto term = (p.rabi * std::exp(I * p.phase)) * lowering;
  return term + dagger(term);
}

enum class ChannelKind { PhotonDecay, Relax10, Relax21, Relax20, Dephase1, Dephase2 };

inline const char* to_string(ChannelKind k) {
  switch (k) {
    case ChannelKind::PhotonDecay: return "photon_decay";
    case ChannelKind::Relax10: return "relax_10";
    case ChannelKind::Relax21: return "relax_21";
    case ChannelKind::Relax20: return "relax_20";
    case ChannelKind::Dephase1: return "dephase_1";
    case ChannelKind::Dephase2: return "dephase_2";
  }
  return "?";
}

/// One Lindblad channel; `op` already carries the sqrt(rate) factor.
struct Channel {
  ComplexMatrix op;
  ChannelKind kind;
  int qutrit = 0;  // 1 or 2; 0 for the cavity
  double rate = 0.0;
};

/// The loss channels of the master equation. Zero-rate channels are omitted.
/// Dephasing uses sqrt(gamma_phi) times the level projector, which reproduces
/// gamma_phi (P rho P - P rho / 2 - rho P / 2) because P^2 = P.
inline std::vector<Channel> collapse_operators(const DecoherenceRates& r, const SubsystemLayout& layout) {
  std::vector<Channel> out;
  auto add = [&](double rate, ComplexMatrix op, ChannelKind kind, int q) {
    if (rate < 0.0 || !std::isfinite(rate)) throw InputError(std::string("negative or non-finite rate for ") + to_string(kind));
    if (rate == 0.0) return;
    out.push_back({std::sqrt(rate) * std::move(op), kind, q, rate});
  };
  add(r.kappa, cavity_annihilation(layout), ChannelKind::PhotonDecay, 0);
  for (auto q : {Subsystem::Qutrit1, Subsystem::Qutrit2}) {
    const auto& qr = r.of(q);
    const int n = qutrit_number(q);
    add(qr.gamma10, qutrit_transition(0, 1, q, layout), ChannelKind::Relax10, n);
    add(qr.gamma21, qutrit_transition(1, 2, q, layout), ChannelKind::Relax21, n);
    add(qr.gamma20, qutrit_transition(0, 2, q, layout), ChannelKind::Relax20, n);
    add(qr.gamma_phi1, qutrit_transition(1, 1, q, layout), ChannelKind::Dephase1, n);
    add(qr.gamma_phi2, qutrit_transition(2, 2, q, layout), ChannelKind::Dephase2, n);
  }
  return out;
}

}  // namespace qent

#endif  // QENT_HAMILTONIANS_HPP
