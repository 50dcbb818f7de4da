#include <gtest/gtest.h>

#include "oracles.hpp"
#include "qent/hamiltonians.hpp"

using namespace qent;

TEST(Hamiltonians, CavityCouplingIsHermitianWithExpectedElements) {
  const SubsystemLayout layout;
  const double g = 2.5;
  for (auto q : {Subsystem::Qutrit1, Subsystem::Qutrit2}) {
    const auto h = h_cavity(g, q, layout);
    EXPECT_TRUE(is_hermitian(h, 0.0));
    BasisLabel excited{0, 0, 0}, photon{0, 0, 1};
    (q == Subsystem::Qutrit1 ? excited.q1 : excited.q2) = 1;
    EXPECT_EQ(h(flat_index(photon, layout), flat_index(excited, layout)), Complex(g));
    // |1>|1>_c couples to |0>|2>_c with sqrt(2) g.
    BasisLabel e1 = excited, p2 = photon;
    e1.photons = 1;
    p2.photons = 2;
    EXPECT_NEAR(std::abs(h(flat_index(p2, layout), flat_index(e1, layout))), std::sqrt(2.0) * g, 1e-15);
  }
  EXPECT_THROW(h_cavity(g, Subsystem::Cavity, layout), InputError);
}

TEST(Hamiltonians, CavityCouplingLeavesLevelTwoAlone) {
  const SubsystemLayout layout;
  const auto h = h_cavity(1.0, Subsystem::Qutrit1, layout);
  for (std::size_t n = 0; n < 3; ++n)
    for (std::size_t q2 = 0; q2 < 3; ++q2) EXPECT_LE((h * basis_ket({2, q2, n}, layout)).norm(), 0.0);
  EXPECT_LE((h * basis_ket({0, 1, 0}, layout)).norm(), 0.0);
}

TEST(Hamiltonians, PulseMatrixElementsCarryPhase) {
  const SubsystemLayout layout;
  const double phi = 0.7, rabi = 3.0;
  for (auto tr : {Transition::Lower, Transition::Upper}) {
    const auto h = h_pulse({tr, rabi, phi, 0.0}, Subsystem::Qutrit2, layout);
    EXPECT_TRUE(is_hermitian(h, 0.0));
    const auto l = lower_level(tr);
    const auto lo = flat_index({1, l, 0}, layout), hi = flat_index({1, l + 1, 0}, layout);
    EXPECT_LE(std::abs(h(lo, hi) - rabi * std::exp(I * phi)), 1e-15);
    EXPECT_LE(std::abs(h(hi, lo) - rabi * std::exp(-I * phi)), 1e-15);
  }
}

TEST(Hamiltonians, PulsePropagatorMatchesTwoLevelFormula) {
  // On {|l>, |l+1>}: U = [[c, -i e^{i phi} s], [-i e^{-i phi} s, c]].
  const SubsystemLayout layout(2);
  const double phi = -1.1, rabi = 4.0, t = 0.37;
  const auto h = h_pulse({Transition::Upper, rabi, phi, t}, Subsystem::Qutrit1, layout);
  const auto u = oracle::propagator(h, t);
  const auto lo = flat_index({1, 0, 1}, layout), hi = flat_index({2, 0, 1}, layout);
  const double c = std::cos(rabi * t), s = std::sin(rabi * t);
  EXPECT_LE(std::abs(u(lo, lo) - c), 1e-13);
  EXPECT_LE(std::abs(u(lo, hi) + I * std::exp(I * phi) * s), 1e-13);
  EXPECT_LE(std::abs(u(hi, lo) + I * std::exp(-I * phi) * s), 1e-13);
}

TEST(Hamiltonians, CollapseOperatorCounts) {
  const SubsystemLayout layout;
  EXPECT_TRUE(collapse_operators({}, layout).empty());
  DecoherenceRates kappa_only;
  kappa_only.kappa = 1e5;
  const auto one = collapse_operators(kappa_only, layout);
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].kind, ChannelKind::PhotonDecay);
  QutritRates q{1, 2, 3, 4, 5};
  const auto all = collapse_operators({6, q, q}, layout);
  ASSERT_EQ(all.size(), 11u);
  EXPECT_EQ(all[1].kind, ChannelKind::Relax10);
  EXPECT_EQ(all[6].qutrit, 2);
  EXPECT_EQ(all[10].kind, ChannelKind::Dephase2);
}

TEST(Hamiltonians, CollapseOperatorsCarrySqrtRate) {
  const SubsystemLayout layout;
  QutritRates q{4.0, 9.0, 16.0, 25.0, 36.0};
  const auto ch = collapse_operators({49.0, q, {}}, layout);
  ASSERT_EQ(ch.size(), 6u);
  EXPECT_LE(max_abs_diff(ch[0].op, 7.0 * cavity_annihilation(layout)), 1e-14);
  EXPECT_LE(max_abs_diff(ch[1].op, 2.0 * qutrit_transition(0, 1, Subsystem::Qutrit1, layout)), 1e-14);
  EXPECT_LE(max_abs_diff(ch[2].op, 3.0 * qutrit_transition(1, 2, Subsystem::Qutrit1, layout)), 1e-14);
  EXPECT_LE(max_abs_diff(ch[3].op, 4.0 * qutrit_transition(0, 2, Subsystem::Qutrit1, layout)), 1e-14);
  EXPECT_LE(max_abs_diff(ch[4].op, 5.0 * qutrit_transition(1, 1, Subsystem::Qutrit1, layout)), 1e-14);
  EXPECT_LE(max_abs_diff(ch[5].op, 6.0 * qutrit_transition(2, 2, Subsystem::Qutrit1, layout)), 1e-14);
}

TEST(Hamiltonians, NegativeRateRejected) {
  const SubsystemLayout layout;
  DecoherenceRates r;
  r.kappa = -1.0;
  EXPECT_THROW(collapse_operators(r, layout), InputError);
  r.kappa = 0.0;
  r.qutrit2.gamma_phi1 = std::nan("");
  EXPECT_THROW(collapse_operators(r, layout), InputError);
}
