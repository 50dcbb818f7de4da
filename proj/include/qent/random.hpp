#ifndef QENT_RANDOM_HPP
#define QENT_RANDOM_HPP

#include <cstdint>
#include <random>

#include "qent/protocol.hpp"

namespace qent {

using Rng = std::mt19937_64;

inline constexpr std::uint64_t default_seed = 42;

inline Complex random_gaussian_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  return {re, n(rng)};
}

/// Uniformly distributed on the unit sphere of C^3.
inline WeightVector random_weights(Rng& rng) {
  WeightVector w{random_gaussian_complex(rng), random_gaussian_complex(rng), random_gaussian_complex(rng)};
  return w.normalized();
}

inline StateVector normalize(StateVector v) {
  const double n = v.norm();
  if (!(n > 0)) throw InputError("cannot normalize the zero vector");
  v *= 1.0 / n;
  return v;
}

inline StateVector random_state(Rng& rng, std::size_t dim) {
  StateVector v(dim);
  for (std::size_t i = 0; i < dim; ++i) v[i] = random_gaussian_complex(rng);
  return normalize(std::move(v));
}

/// Random normalized state inside the domain of closed_form_cavity for the
/// given qutrit: photon number <= 1 and no |1>_q|1>_c component.
inline StateVector random_cavity_domain_state(Rng& rng, int qutrit_no, const SubsystemLayout& layout) {
  const auto q = qutrit(qutrit_no);
  StateVector v(layout.total_dim());
  for (std::size_t i = 0; i < v.dim(); ++i) {
    const auto l = basis_label(i, layout);
    const auto level = q == Subsystem::Qutrit1 ? l.q1 : l.q2;
    if (l.photons >= 2 || (l.photons == 1 && level == 1)) continue;
    v[i] = random_gaussian_complex(rng);
  }
  return normalize(std::move(v));
}

}  // namespace qent

#endif  // QENT_RANDOM_HPP
