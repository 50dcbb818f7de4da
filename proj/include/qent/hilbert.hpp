#ifndef QENT_HILBERT_HPP
#define QENT_HILBERT_HPP

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "qent/matrix.hpp"

namespace qent {

/// Factors of the composite space, in storage order.
enum class Subsystem : std::size_t { Qutrit1 = 0, Qutrit2 = 1, Cavity = 2 };

inline constexpr std::size_t qutrit_dim = 3;

inline const char* to_string(Subsystem s) {
  switch (s) {
    case Subsystem::Qutrit1: return "qutrit1";
    case Subsystem::Qutrit2: return "qutrit2";
    case Subsystem::Cavity: return "cavity";
  }
  return "?";
}

/// Subsystem for qutrit number 1 or 2.
inline Subsystem qutrit(int number) {
  if (number == 1) return Subsystem::Qutrit1;
  if (number == 2) return Subsystem::Qutrit2;
  throw InputError("qutrit number must be 1 or 2, got " + std::to_string(number));
}

inline int qutrit_number(Subsystem s) {
  if (s == Subsystem::Qutrit1) return 1;
  if (s == Subsystem::Qutrit2) return 2;
  throw InputError("subsystem is not a qutrit");
}

/// Ordering (qutrit1, qutrit2, cavity); the cavity keeps Fock levels
/// 0..cavity_levels-1.
class SubsystemLayout {
 public:
  explicit SubsystemLayout(std::size_t cavity_levels = 3) : cavity_levels_(cavity_levels) {
    if (cavity_levels < 2) throw InputError("cavity truncation must keep at least 2 Fock levels");
  }

  std::size_t cavity_levels() const { return cavity_levels_; }
  std::size_t total_dim() const { return qutrit_dim * qutrit_dim * cavity_levels_; }
  std::array<std::size_t, 3> dims() const { return {qutrit_dim, qutrit_dim, cavity_levels_}; }
  std::size_t dim_of(Subsystem s) const { return s == Subsystem::Cavity ? cavity_levels_ : qutrit_dim; }

  bool operator==(const SubsystemLayout&) const = default;

 private:
  std::size_t cavity_levels_;
};

struct BasisLabel {
  std::size_t q1 = 0;
  std::size_t q2 = 0;
  std::size_t photons = 0;

  bool operator==(const BasisLabel&) const = default;
};

inline std::size_t flat_index(const BasisLabel& l, const SubsystemLayout& layout) {
  if (l.q1 >= qutrit_dim || l.q2 >= qutrit_dim) throw InputError("basis label: qutrit level out of range");
  if (l.photons >= layout.cavity_levels())
    throw InputError("basis label: photon number " + std::to_string(l.photons) + " outside truncation");
  return (l.q1 * qutrit_dim + l.q2) * layout.cavity_levels() + l.photons;
}

inline BasisLabel basis_label(std::size_t index, const SubsystemLayout& layout) {
  if (index >= layout.total_dim()) throw InputError("basis index out of range");
  const auto nc = layout.cavity_levels();
  return {index / (qutrit_dim * nc), (index / nc) % qutrit_dim, index % nc};
}

inline StateVector basis_ket(const BasisLabel& l, const SubsystemLayout& layout) {
  StateVector v(layout.total_dim());
  v[flat_index(l, layout)] = 1.0;
  return v;
}

/// I (x) ... (x) local (x) ... (x) I in the fixed ordering.
inline ComplexMatrix embed(const ComplexMatrix& local, Subsystem target, const SubsystemLayout& layout) {
  const auto d = layout.dim_of(target);
  if (local.rows() != d || local.cols() != d)
    throw InputError(std::string("embed: local operator does not match dimension of ") + to_string(target));
  const auto dims = layout.dims();
  const auto slot = static_cast<std::size_t>(target);
  std::size_t before = 1, after = 1;
  for (std::size_t i = 0; i < slot; ++i) before *= dims[i];
  for (std::size_t i = slot + 1; i < dims.size(); ++i) after *= dims[i];
  return kron(kron(ComplexMatrix::identity(before), local), ComplexMatrix::identity(after));
}

/// Local |i><j| on a qutrit.
inline ComplexMatrix qutrit_projector(std::size_t i, std::size_t j) {
  if (i >= qutrit_dim || j >= qutrit_dim) throw InputError("qutrit level must be 0, 1 or 2");
  ComplexMatrix m(qutrit_dim, qutrit_dim);
  m(i, j) = 1.0;
  return m;
}

/// |i><j| on the chosen qutrit, embedded in the full space.
inline ComplexMatrix qutrit_transition(std::size_t i, std::size_t j, Subsystem target, const SubsystemLayout& layout) {
  if (target == Subsystem::Cavity) throw InputError("qutrit_transition: target must be a qutrit");
  return embed(qutrit_projector(i, j), target, layout);
}

/// Truncated lowering operator, <n-1|a|n> = sqrt(n), on the cavity slot.
inline ComplexMatrix cavity_annihilation(const SubsystemLayout& layout) {
  const auto nc = layout.cavity_levels();
  ComplexMatrix a(nc, nc);
  for (std::size_t n = 1; n < nc; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
  return embed(a, Subsystem::Cavity, layout);
}

inline ComplexMatrix partial_trace(const ComplexMatrix& rho, const SubsystemLayout& layout,
                                   std::initializer_list<Subsystem> keep) {
  std::vector<std::size_t> idx;
  for (auto s : keep) idx.push_back(static_cast<std::size_t>(s));
  const auto dims = layout.dims();
  return partial_trace(rho, dims, std::move(idx));
}

}  // namespace qent

#endif  // QENT_HILBERT_HPP
