#ifndef QENT_CORE_HPP
#define QENT_CORE_HPP

#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>

namespace qent {

using Complex = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr Complex I{0.0, 1.0};

inline constexpr const char* version = "1.0.0";

/// Bad arguments or configuration: maps to CLI exit code 2.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Solver or eigensolver failure, loss of physicality: exit code 3.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A protocol assertion did not hold: exit code 1.
class VerificationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every numeric tolerance used by the library. Functions that check an
/// invariant take one of these; the defaults below are the contract values.
struct Tolerances {
  double hermitian = 1e-10;
  double normalization = 1e-12;
  double unitary = 1e-10;
  double trace = 1e-8;
  double positivity = 1e-8;
  double closed_form_support = 1e-14;
  double fidelity_imag = 1e-8;
  double state_match = 1e-10;
  double weight_renormalize = 1e-6;
  std::size_t max_dimension = 256;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances tol{};
  return tol;
}

}  // namespace qent

#endif  // QENT_CORE_HPP
