#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "qent/matrix.hpp"

using namespace qent;

namespace {

std::mt19937_64 make_rng(std::uint64_t seed = 7) { return std::mt19937_64(seed); }

}  // namespace

TEST(Matrix, ProductMatchesNaiveLoop) {
  auto rng = make_rng();
  for (int k = 0; k < 20; ++k) {
    const auto a = oracle::random_matrix(rng, 4, 6);
    const auto b = oracle::random_matrix(rng, 6, 3);
    EXPECT_LE(oracle::max_diff(a * b, oracle::naive_product(a, b)), 1e-13);
  }
}

TEST(Matrix, ShapeMismatchThrows) {
  ComplexMatrix a(2, 3), b(2, 3);
  EXPECT_THROW(a * b, InputError);
  ComplexMatrix c(3, 3);
  EXPECT_THROW(a += c, InputError);
  EXPECT_THROW((ComplexMatrix{{1, 2}, {3}}), InputError);
}

TEST(Matrix, KronMatchesIndexFormula) {
  auto rng = make_rng(11);
  for (int k = 0; k < 20; ++k) {
    const auto a = oracle::random_matrix(rng, 2 + k % 3, 3);
    const auto b = oracle::random_matrix(rng, 3, 1 + k % 4);
    EXPECT_LE(oracle::max_diff(kron(a, b), oracle::kron_by_index(a, b)), 0.0);
  }
}

TEST(Matrix, KronMixedProductProperty) {
  auto rng = make_rng(12);
  const auto a = oracle::random_matrix(rng, 3, 3), b = oracle::random_matrix(rng, 3, 3);
  const auto c = oracle::random_matrix(rng, 3, 3), d = oracle::random_matrix(rng, 3, 3);
  EXPECT_LE(max_abs_diff(kron(a, b) * kron(c, d), kron(a * c, b * d)), 1e-12);
}

TEST(Matrix, KronRejectsOversizedResult) {
  Tolerances tol;
  tol.max_dimension = 8;
  EXPECT_THROW(kron(ComplexMatrix::identity(3), ComplexMatrix::identity(3), tol), InputError);
  EXPECT_NO_THROW(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(4), tol));
}

TEST(Matrix, DaggerTraceCommutator) {
  auto rng = make_rng(3);
  const auto a = oracle::random_matrix(rng, 4, 4), b = oracle::random_matrix(rng, 4, 4);
  EXPECT_LE(max_abs_diff(dagger(dagger(a)), a), 0.0);
  EXPECT_LE(max_abs_diff(dagger(a * b), dagger(b) * dagger(a)), 1e-13);
  EXPECT_LE(std::abs(trace(commutator(a, b))), 1e-12);
  EXPECT_LE(std::abs(trace(a * b) - trace(b * a)), 1e-12);
}

TEST(Matrix, HermiticityCheck) {
  auto rng = make_rng(4);
  auto h = oracle::random_hermitian(rng, 5);
  EXPECT_TRUE(is_hermitian(h));
  h(0, 1) += 1e-6;
  EXPECT_FALSE(is_hermitian(h));
  EXPECT_NEAR(hermiticity_error(h), 1e-6, 1e-12);
}

TEST(Matrix, EigenDecompositionReconstructs) {
  auto rng = make_rng(5);
  for (int k = 0; k < 10; ++k) {
    const auto h = oracle::random_hermitian(rng, 6);
    const auto eig = hermitian_eigen(h);
    for (std::size_t i = 1; i < eig.values.size(); ++i) EXPECT_LE(eig.values[i - 1], eig.values[i]);
    std::vector<double> vals = eig.values;
    const auto d = ComplexMatrix::diagonal(vals);
    EXPECT_LE(max_abs_diff(eig.vectors * d * dagger(eig.vectors), h), 1e-12);
    EXPECT_LE(max_abs_diff(dagger(eig.vectors) * eig.vectors, ComplexMatrix::identity(6)), 1e-12);
  }
}

TEST(Matrix, EigenRejectsBadInput) {
  EXPECT_THROW(hermitian_eigen(ComplexMatrix(2, 3)), InputError);
  EXPECT_THROW(hermitian_eigen(ComplexMatrix{{0, 1}, {0, 0}}), InputError);
  EXPECT_THROW(hermitian_eigen(ComplexMatrix{{std::nan(""), 0}, {0, 0}}), std::exception);
}

TEST(Matrix, MatexpMatchesTaylorOracle) {
  auto rng = make_rng(6);
  for (int k = 0; k < 20; ++k) {
    const auto h = oracle::random_hermitian(rng, 5);
    const double t = 0.1 + 0.3 * k;
    EXPECT_LE(max_abs_diff(matexp(h, t), oracle::propagator(h, t)), 1e-11) << "case " << k;
  }
}

TEST(Matrix, MatexpAnalyticTwoLevel) {
  // exp(-i t w sigma_x) = cos(wt) I - i sin(wt) sigma_x
  const double w = 2.7, t = 0.83;
  const ComplexMatrix sx{{0, w}, {w, 0}};
  const ComplexMatrix want{{std::cos(w * t), -I * std::sin(w * t)}, {-I * std::sin(w * t), std::cos(w * t)}};
  EXPECT_LE(max_abs_diff(matexp(sx, t), want), 1e-14);
  EXPECT_LE(max_abs_diff(matexp(sx, t / 2, 2.0), want), 1e-14);
}

TEST(Matrix, MatexpIsUnitaryAndComposes) {
  auto rng = make_rng(8);
  const auto h = oracle::random_hermitian(rng, 9);
  const auto u = matexp(h, 1.3);
  EXPECT_LE(max_abs_diff(u * dagger(u), ComplexMatrix::identity(9)), 1e-12);
  EXPECT_LE(max_abs_diff(matexp(h, 0.4) * matexp(h, 0.9), u), 1e-12);
  EXPECT_LE(max_abs_diff(matexp(h, 0.0), ComplexMatrix::identity(9)), 1e-13);
}

TEST(Matrix, PartialTraceMatchesProjectionOracle) {
  auto rng = make_rng(9);
  for (int k = 0; k < 10; ++k) {
    const auto rho = oracle::random_density(rng, 12);
    const std::size_t dims[] = {3, 4};
    EXPECT_LE(oracle::max_diff(partial_trace(rho, dims, {0}), oracle::trace_out_second(rho, 3, 4)), 1e-14);
  }
}

TEST(Matrix, PartialTraceOfProductState) {
  auto rng = make_rng(10);
  const auto a = oracle::random_density(rng, 3), b = oracle::random_density(rng, 2), c = oracle::random_density(rng, 4);
  const auto rho = kron(kron(a, b), c);
  const std::size_t dims[] = {3, 2, 4};
  EXPECT_LE(max_abs_diff(partial_trace(rho, dims, {0}), a), 1e-14);
  EXPECT_LE(max_abs_diff(partial_trace(rho, dims, {1}), b), 1e-14);
  EXPECT_LE(max_abs_diff(partial_trace(rho, dims, {2}), c), 1e-14);
  EXPECT_LE(max_abs_diff(partial_trace(rho, dims, {2, 0}), kron(a, c)), 1e-14);
  EXPECT_LE(max_abs_diff(partial_trace(rho, dims, {0, 1, 2}), rho), 0.0);
}

TEST(Matrix, PartialTracePreservesTraceAndHermiticity) {
  auto rng = make_rng(13);
  for (int k = 0; k < 10; ++k) {
    const auto rho = oracle::random_density(rng, 27);
    const std::size_t dims[] = {3, 3, 3};
    for (std::size_t keep = 0; keep < 3; ++keep) {
      const auto r = partial_trace(rho, dims, {keep});
      EXPECT_NEAR(trace(r).real(), 1.0, 1e-13);
      EXPECT_LE(hermiticity_error(r), 1e-14);
    }
  }
}

TEST(Matrix, PartialTraceRejectsBadArguments) {
  const std::size_t dims[] = {2, 2};
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(4), dims, {}), InputError);
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(4), dims, {2}), InputError);
  EXPECT_THROW(partial_trace(ComplexMatrix::identity(5), dims, {0}), InputError);
}

TEST(Matrix, StateVectorOperations) {
  StateVector a{1.0, I}, b{I, 1.0};
  EXPECT_NEAR(a.norm_squared(), 2.0, 0.0);
  EXPECT_FALSE(a.is_normalized());
  EXPECT_EQ(inner(a, b), Complex(0.0, 0.0));
  const auto p = outer(a, a);
  EXPECT_EQ(p(0, 1), Complex(0.0, -1.0));
  EXPECT_EQ(inner(a, a), Complex(2.0, 0.0));
}
