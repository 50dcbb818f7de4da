#ifndef QENT_MATRIX_HPP
#define QENT_MATRIX_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qent/core.hpp"

namespace qent {

/// Dense complex matrix with row-major storage. Shape is always explicit;
/// there is no broadcasting and every binary operation checks dimensions.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;
  ComplexMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
  ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
      : rows_(rows), cols_(cols), data_(std::move(entries)) {
    if (data_.size() != rows_ * cols_) throw InputError("ComplexMatrix: entry count does not match shape");
  }
  ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_) throw InputError("ComplexMatrix: ragged initializer");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix diagonal(std::span<const double> d) {
    ComplexMatrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<Complex> data() { return data_; }
  std::span<const Complex> data() const { return data_; }

  bool operator==(const ComplexMatrix&) const = default;

  ComplexMatrix& operator+=(const ComplexMatrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
    return *this;
  }
  ComplexMatrix& operator-=(const ComplexMatrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
    return *this;
  }
  ComplexMatrix& operator*=(Complex s) {
    for (auto& v : data_) v *= s;
    return *this;
  }

  void require_same_shape(const ComplexMatrix& o, const char* what) const {
    if (rows_ != o.rows_ || cols_ != o.cols_)
      throw InputError(std::string("ComplexMatrix ") + what + ": shape mismatch");
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<Complex> data_;
};

inline ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
inline ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
inline ComplexMatrix operator*(ComplexMatrix a, Complex s) { return a *= s; }
inline ComplexMatrix operator*(Complex s, ComplexMatrix a) { return a *= s; }

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows()) throw InputError("ComplexMatrix *: inner dimension mismatch");
  ComplexMatrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

/// Ket over a finite basis. "Normalized" means squared-amplitude sum 1
/// within Tolerances::normalization.
class StateVector {
 public:
  StateVector() = default;
  explicit StateVector(std::size_t dim) : amps_(dim) {}
  explicit StateVector(std::vector<Complex> amps) : amps_(std::move(amps)) {}
  StateVector(std::initializer_list<Complex> amps) : amps_(amps) {}

  std::size_t dim() const { return amps_.size(); }
  Complex& operator[](std::size_t i) { return amps_[i]; }
  const Complex& operator[](std::size_t i) const { return amps_[i]; }
  std::span<Complex> data() { return amps_; }
  std::span<const Complex> data() const { return amps_; }

  bool operator==(const StateVector&) const = default;

  double norm_squared() const {
    double s = 0.0;
    for (const auto& a : amps_) s += std::norm(a);
    return s;
  }
  double norm() const { return std::sqrt(norm_squared()); }
  bool is_normalized(const Tolerances& tol = default_tolerances()) const {
    return std::abs(norm_squared() - 1.0) <= tol.normalization;
  }

  StateVector& operator+=(const StateVector& o) {
    if (o.dim() != dim()) throw InputError("StateVector +=: dimension mismatch");
    for (std::size_t i = 0; i < amps_.size(); ++i) amps_[i] += o.amps_[i];
    return *this;
  }
  StateVector& operator*=(Complex s) {
    for (auto& a : amps_) a *= s;
    return *this;
  }

 private:
  std::vector<Complex> amps_;
};

inline StateVector operator+(StateVector a, const StateVector& b) { return a += b; }
inline StateVector operator*(Complex s, StateVector a) { return a *= s; }

inline StateVector operator*(const ComplexMatrix& m, const StateVector& v) {
  if (m.cols() != v.dim()) throw InputError("matrix-vector product: dimension mismatch");
  StateVector out(m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Complex s{};
    for (std::size_t j = 0; j < m.cols(); ++j) s += m(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

/// <a|b>, conjugate-linear in the first argument.
inline Complex inner(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw InputError("inner: dimension mismatch");
  Complex s{};
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

/// |a><b|
inline ComplexMatrix outer(const StateVector& a, const StateVector& b) {
  ComplexMatrix m(a.dim(), b.dim());
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < b.dim(); ++j) m(i, j) = a[i] * std::conj(b[j]);
  return m;
}

inline ComplexMatrix dagger(const ComplexMatrix& m) {
  ComplexMatrix out(m.cols(), m.rows());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(j, i) = std::conj(m(i, j));
  return out;
}

inline Complex trace(const ComplexMatrix& m) {
  if (!m.square()) throw InputError("trace: non-square matrix");
  Complex s{};
  for (std::size_t i = 0; i < m.rows(); ++i) s += m(i, i);
  return s;
}

inline ComplexMatrix commutator(const ComplexMatrix& a, const ComplexMatrix& b) { return a * b - b * a; }

inline double max_abs(const ComplexMatrix& m) {
  double r = 0.0;
  for (const auto& v : m.data()) r = std::max(r, std::abs(v));
  return r;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  a.require_same_shape(b, "max_abs_diff");
  double r = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) r = std::max(r, std::abs(a.data()[i] - b.data()[i]));
  return r;
}

inline double max_abs_diff(const StateVector& a, const StateVector& b) {
  if (a.dim() != b.dim()) throw InputError("max_abs_diff: dimension mismatch");
  double r = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) r = std::max(r, std::abs(a[i] - b[i]));
  return r;
}

/// max |M - M^dagger| entry.
inline double hermiticity_error(const ComplexMatrix& m) {
  if (!m.square()) return INFINITY;
  double r = 0.0;
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i; j < m.cols(); ++j) r = std::max(r, std::abs(m(i, j) - std::conj(m(j, i))));
  return r;
}

inline bool is_hermitian(const ComplexMatrix& m, double tol = default_tolerances().hermitian) {
  return hermiticity_error(m) <= tol;
}

inline bool all_finite(const ComplexMatrix& m) {
  return std::all_of(m.data().begin(), m.data().end(),
                     [](const Complex& v) { return std::isfinite(v.real()) && std::isfinite(v.imag()); });
}

/// Kronecker product. Throws InputError if the result would exceed
/// Tolerances::max_dimension in either direction.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b,
                          const Tolerances& tol = default_tolerances()) {
  const std::size_t r = a.rows() * b.rows();
  const std::size_t c = a.cols() * b.cols();
  if (r > tol.max_dimension || c > tol.max_dimension)
    throw InputError("kron: result " + std::to_string(r) + "x" + std::to_string(c) + " exceeds maximum dimension " +
                     std::to_string(tol.max_dimension));
  ComplexMatrix out(r, c);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) {
      const Complex aij = a(i, j);
      if (aij == Complex{}) continue;
      for (std::size_t k = 0; k < b.rows(); ++k)
        for (std::size_t l = 0; l < b.cols(); ++l) out(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
    }
  return out;
}

struct HermitianEigen {
  std::vector<double> values;  // ascending
  ComplexMatrix vectors;       // columns are eigenvectors
};

namespace detail {

inline Eigen::MatrixXcd to_eigen(const ComplexMatrix& m) {
  Eigen::MatrixXcd e(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) e(i, j) = m(i, j);
  return e;
}

}  // namespace detail

inline HermitianEigen hermitian_eigen(const ComplexMatrix& m, const Tolerances& tol = default_tolerances()) {
  if (!m.square()) throw InputError("hermitian_eigen: non-square matrix");
  if (!is_hermitian(m, tol.hermitian)) throw InputError("hermitian_eigen: matrix is not Hermitian");
  if (!all_finite(m)) throw NumericalError("hermitian_eigen: non-finite entries");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(detail::to_eigen(m));
  if (solver.info() != Eigen::Success) throw NumericalError("hermitian_eigen: eigensolver did not converge");
  const auto n = m.rows();
  HermitianEigen out{std::vector<double>(n), ComplexMatrix(n, n)};
  for (std::size_t i = 0; i < n; ++i) {
    out.values[i] = solver.eigenvalues()(static_cast<Eigen::Index>(i));
    for (std::size_t j = 0; j < n; ++j)
      out.vectors(i, j) = solver.eigenvectors()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  }
  return out;
}

inline std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const Tolerances& tol = default_tolerances()) {
  return hermitian_eigen(m, tol).values;
}

/// exp(-i * scale * t * h) for Hermitian h, by eigendecomposition.
/// With h in units of angular frequency and scale = 1 this is the propagator
/// of h over time t (hbar = 1).
inline ComplexMatrix matexp(const ComplexMatrix& h, double t, double scale = 1.0,
                            const Tolerances& tol = default_tolerances()) {
  if (!h.square()) throw InputError("matexp: non-square matrix");
  const auto eig = hermitian_eigen(h, tol);
  const auto n = h.rows();
  std::vector<Complex> phases(n);
  for (std::size_t k = 0; k < n; ++k) phases[k] = std::exp(-I * (scale * t * eig.values[k]));
  ComplexMatrix u(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Complex s{};
      for (std::size_t k = 0; k < n; ++k) s += eig.vectors(i, k) * phases[k] * std::conj(eig.vectors(j, k));
      u(i, j) = s;
    }
  if (!all_finite(u)) throw NumericalError("matexp: non-finite result");
  return u;
}

/// Partial trace of a square operator on a tensor product space with local
/// dimensions `dims` (first factor most significant). `keep` lists the factor
/// indices retained, in any order; the result keeps them in ascending order.
inline ComplexMatrix partial_trace(const ComplexMatrix& rho, std::span<const std::size_t> dims,
                                   std::vector<std::size_t> keep) {
  std::size_t total = 1;
  for (auto d : dims) total *= d;
  if (!rho.square() || rho.rows() != total) throw InputError("partial_trace: operator does not match dimensions");
  if (keep.empty()) throw InputError("partial_trace: keep set is empty");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (auto k : keep)
    if (k >= dims.size()) throw InputError("partial_trace: unknown subsystem " + std::to_string(k));

  std::vector<bool> kept(dims.size(), false);
  for (auto k : keep) kept[k] = true;
  std::size_t kept_dim = 1;
  for (auto k : keep) kept_dim *= dims[k];

  // Map each flat index to (kept index, traced index).
  std::vector<std::size_t> kept_idx(total), traced_idx(total);
  for (std::size_t flat = 0; flat < total; ++flat) {
    std::size_t rem = flat, stride_k = 1, stride_t = 1, ki = 0, ti = 0;
    for (std::size_t f = dims.size(); f-- > 0;) {
      const std::size_t digit = rem % dims[f];
      rem /= dims[f];
      if (kept[f]) {
        ki += digit * stride_k;
        stride_k *= dims[f];
      } else {
        ti += digit * stride_t;
        stride_t *= dims[f];
      }
    }
    kept_idx[flat] = ki;
    traced_idx[flat] = ti;
  }

  ComplexMatrix out(kept_dim, kept_dim);
  for (std::size_t i = 0; i < total; ++i)
    for (std::size_t j = 0; j < total; ++j)
      if (traced_idx[i] == traced_idx[j]) out(kept_idx[i], kept_idx[j]) += rho(i, j);
  return out;
}

}  // namespace qent

#endif  // QENT_MATRIX_HPP
