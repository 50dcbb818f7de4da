#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qent/hilbert.hpp"

using namespace qent;

TEST(Hilbert, LayoutDimensions) {
  const SubsystemLayout l3, l4(4);
  EXPECT_EQ(l3.total_dim(), 27u);
  EXPECT_EQ(l4.total_dim(), 36u);
  EXPECT_EQ(l4.dim_of(Subsystem::Cavity), 4u);
  EXPECT_EQ(l4.dim_of(Subsystem::Qutrit2), 3u);
  EXPECT_THROW(SubsystemLayout(1), InputError);
}

TEST(Hilbert, FlatIndexRoundTrip) {
  for (std::size_t nc : {2u, 3u, 5u}) {
    const SubsystemLayout layout(nc);
    for (std::size_t i = 0; i < layout.total_dim(); ++i) EXPECT_EQ(flat_index(basis_label(i, layout), layout), i);
  }
  const SubsystemLayout layout;
  EXPECT_EQ(flat_index({1, 2, 0}, layout), 15u);
  EXPECT_EQ(flat_index({2, 2, 2}, layout), 26u);
  EXPECT_THROW(flat_index({0, 0, 3}, layout), InputError);
  EXPECT_THROW(flat_index({3, 0, 0}, layout), InputError);
  EXPECT_THROW(basis_label(27, layout), InputError);
}

TEST(Hilbert, EmbedMatchesExplicitKron) {
  std::mt19937_64 rng(21);
  const SubsystemLayout layout(4);
  const auto q = oracle::random_matrix(rng, 3, 3);
  const auto c = oracle::random_matrix(rng, 4, 4);
  const auto i3 = ComplexMatrix::identity(3), i4 = ComplexMatrix::identity(4);
  using oracle::kron_by_index;
  EXPECT_LE(oracle::max_diff(embed(q, Subsystem::Qutrit1, layout), kron_by_index(kron_by_index(q, i3), i4)), 0.0);
  EXPECT_LE(oracle::max_diff(embed(q, Subsystem::Qutrit2, layout), kron_by_index(kron_by_index(i3, q), i4)), 0.0);
  EXPECT_LE(oracle::max_diff(embed(c, Subsystem::Cavity, layout), kron_by_index(kron_by_index(i3, i3), c)), 0.0);
  EXPECT_THROW(embed(c, Subsystem::Qutrit1, layout), InputError);
}

TEST(Hilbert, EmbeddedOperatorsOnDifferentSlotsCommute) {
  std::mt19937_64 rng(22);
  const SubsystemLayout layout;
  const auto a = embed(oracle::random_matrix(rng, 3, 3), Subsystem::Qutrit1, layout);
  const auto b = embed(oracle::random_matrix(rng, 3, 3), Subsystem::Qutrit2, layout);
  const auto c = embed(oracle::random_matrix(rng, 3, 3), Subsystem::Cavity, layout);
  EXPECT_LE(max_abs(commutator(a, b)), 1e-13);
  EXPECT_LE(max_abs(commutator(a, c)), 1e-13);
  EXPECT_LE(max_abs(commutator(b, c)), 1e-13);
}

TEST(Hilbert, TransitionActsOnBasisKets) {
  const SubsystemLayout layout;
  const auto op = qutrit_transition(0, 2, Subsystem::Qutrit2, layout);
  const auto out = op * basis_ket({1, 2, 1}, layout);
  EXPECT_LE(max_abs_diff(out, basis_ket({1, 0, 1}, layout)), 0.0);
  EXPECT_LE((op * basis_ket({1, 1, 1}, layout)).norm(), 0.0);
  EXPECT_THROW(qutrit_projector(3, 0), InputError);
  EXPECT_THROW(qutrit_transition(0, 1, Subsystem::Cavity, layout), InputError);
}

TEST(Hilbert, AnnihilationMatrixElements) {
  for (std::size_t nc : {2u, 3u, 4u}) {
    const SubsystemLayout layout(nc);
    const auto a = cavity_annihilation(layout);
    for (std::size_t n = 1; n < nc; ++n) {
      const auto out = a * basis_ket({2, 1, n}, layout);
      EXPECT_NEAR(std::abs(out[flat_index({2, 1, n - 1}, layout)]), std::sqrt(double(n)), 1e-15);
      EXPECT_NEAR(out.norm(), std::sqrt(double(n)), 1e-15);
    }
    EXPECT_LE((a * basis_ket({0, 0, 0}, layout)).norm(), 0.0);
    // [a, a^dagger] = 1 below the truncation edge.
    const auto comm = commutator(a, dagger(a));
    for (std::size_t i = 0; i < layout.total_dim(); ++i) {
      const double want = basis_label(i, layout).photons + 1 < nc ? 1.0 : 1.0 - double(nc);
      EXPECT_NEAR(comm(i, i).real(), want, 1e-14);
    }
  }
}

TEST(Hilbert, LayoutPartialTraceOfProductState) {
  const SubsystemLayout layout;
  StateVector psi(27);
  psi[flat_index({1, 2, 0}, layout)] = 1.0;
  const auto rho = outer(psi, psi);
  const auto r1 = partial_trace(rho, layout, {Subsystem::Qutrit1});
  const auto r2 = partial_trace(rho, layout, {Subsystem::Qutrit2});
  const auto rc = partial_trace(rho, layout, {Subsystem::Cavity});
  EXPECT_EQ(r1(1, 1), Complex(1.0));
  EXPECT_EQ(r2(2, 2), Complex(1.0));
  EXPECT_EQ(rc(0, 0), Complex(1.0));
  const auto r12 = partial_trace(rho, layout, {Subsystem::Qutrit1, Subsystem::Qutrit2});
  EXPECT_EQ(r12.rows(), 9u);
  EXPECT_EQ(r12(5, 5), Complex(1.0));
}

TEST(Hilbert, SubsystemNames) {
  EXPECT_EQ(qutrit(1), Subsystem::Qutrit1);
  EXPECT_EQ(qutrit(2), Subsystem::Qutrit2);
  EXPECT_THROW(qutrit(3), InputError);
  EXPECT_EQ(qutrit_number(Subsystem::Qutrit2), 2);
}
