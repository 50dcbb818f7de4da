#ifndef QENT_DYNAMICS_HPP
#define QENT_DYNAMICS_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "qent/protocol.hpp"

namespace qent {

/// Density operator on the composite space.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix rho, SubsystemLayout layout) : rho_(std::move(rho)), layout_(layout) {
    if (!rho_.square() || rho_.rows() != layout_.total_dim())
      throw InputError("DensityMatrix: operator dimension does not match layout");
  }

  static DensityMatrix pure(const StateVector& psi, const SubsystemLayout& layout) {
    return DensityMatrix(outer(psi, psi), layout);
  }

  const ComplexMatrix& matrix() const { return rho_; }
  ComplexMatrix& matrix() { return rho_; }
  const SubsystemLayout& layout() const { return layout_; }
  std::size_t dim() const { return rho_.rows(); }

  /// rho <- (rho + rho^dagger) / 2
  void hermitize() {
    const auto n = dim();
    for (std::size_t i = 0; i < n; ++i) {
      rho_(i, i) = rho_(i, i).real();
      for (std::size_t j = i + 1; j < n; ++j) {
        const Complex avg = 0.5 * (rho_(i, j) + std::conj(rho_(j, i)));
        rho_(i, j) = avg;
        rho_(j, i) = std::conj(avg);
      }
    }
  }

 private:
  ComplexMatrix rho_;
  SubsystemLayout layout_;
};

struct Physicality {
  double trace_error = 0.0;  // |tr rho - 1|
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;

  bool ok(const Tolerances& tol = default_tolerances()) const {
    return trace_error <= tol.trace && hermiticity_error <= tol.hermitian && min_eigenvalue >= -tol.positivity;
  }
};

inline Physicality physicality(const DensityMatrix& rho) {
  Physicality p;
  p.trace_error = std::abs(trace(rho.matrix()) - 1.0);
  p.hermiticity_error = hermiticity_error(rho.matrix());
  ComplexMatrix h = rho.matrix();
  DensityMatrix tmp(std::move(h), rho.layout());
  tmp.hermitize();
  p.min_eigenvalue = hermitian_eigenvalues(tmp.matrix()).front();
  return p;
}

inline StateVector propagate_unitary(const StateVector& psi, const ComplexMatrix& h, double t,
                                     const Tolerances& tol = default_tolerances()) {
  if (!is_hermitian(h, tol.hermitian)) throw InputError("propagate_unitary: Hamiltonian is not Hermitian");
  return matexp(h, t, 1.0, tol) * psi;
}

inline DensityMatrix propagate_unitary(const DensityMatrix& rho, const ComplexMatrix& h, double t,
                                       const Tolerances& tol = default_tolerances()) {
  if (!is_hermitian(h, tol.hermitian)) throw InputError("propagate_unitary: Hamiltonian is not Hermitian");
  const auto u = matexp(h, t, 1.0, tol);
  return DensityMatrix(u * rho.matrix() * dagger(u), rho.layout());
}

/// d rho / dt = -i[H, rho] + sum_k (L_k rho L_k^dag - {L_k^dag L_k, rho} / 2),
/// evaluated densely. Each channel operator carries its sqrt(rate).
inline ComplexMatrix lindblad_rhs(const DensityMatrix& rho, const ComplexMatrix& h, const std::vector<Channel>& channels) {
  const auto& r = rho.matrix();
  if (h.rows() != r.rows() || !h.square()) throw InputError("lindblad_rhs: Hamiltonian dimension mismatch");
  ComplexMatrix out = -I * commutator(h, r);
  for (const auto& ch : channels) {
    if (ch.op.rows() != r.rows() || !ch.op.square())
      throw InputError(std::string("lindblad_rhs: channel ") + to_string(ch.kind) + " dimension mismatch");
    const auto ld = dagger(ch.op);
    const auto ldl = ld * ch.op;
    out += ch.op * r * ld;
    out -= 0.5 * (ldl * r + r * ldl);
  }
  return out;
}

/// Coordinate-list sparse operator.
struct SparseOp {
  struct Entry {
    std::uint32_t row;
    std::uint32_t col;
    Complex value;
  };
  std::vector<Entry> entries;

  static SparseOp from_dense(const ComplexMatrix& m) {
    SparseOp s;
    for (std::size_t i = 0; i < m.rows(); ++i)
      for (std::size_t j = 0; j < m.cols(); ++j)
        if (m(i, j) != Complex{}) s.entries.push_back({static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j), m(i, j)});
    return s;
  }
};

/// Same generator as lindblad_rhs, written as
/// -i (K rho - rho K^dag) + sum_k L_k rho L_k^dag with
/// K = H - (i/2) sum_k L_k^dag L_k, using sparse operators.
class LindbladGenerator {
 public:
  LindbladGenerator(const ComplexMatrix& h, const std::vector<Channel>& channels) : dim_(h.rows()) {
    ComplexMatrix k = h;
    for (const auto& ch : channels) {
      if (ch.op.rows() != dim_) throw InputError("LindbladGenerator: channel dimension mismatch");
      k -= (0.5 * I) * (dagger(ch.op) * ch.op);
      jumps_.push_back(SparseOp::from_dense(ch.op));
    }
    k_ = SparseOp::from_dense(k);
  }

  std::size_t dim() const { return dim_; }

  void apply(const ComplexMatrix& rho, ComplexMatrix& out) const {
    const std::size_t n = dim_;
    const Complex* r = rho.data().data();
    Complex* o = out.data().data();
    std::fill(o, o + n * n, Complex{});
    // -i K rho
    for (const auto& e : k_.entries) {
      const Complex v = -I * e.value;
      const Complex* src = r + e.col * n;
      Complex* dst = o + e.row * n;
      for (std::size_t j = 0; j < n; ++j) dst[j] += v * src[j];
    }
    // +i rho K^dag: (rho K^dag)(i, row) += rho(i, col) * conj(K(row, col))
    for (const auto& e : k_.entries) {
      const Complex v = I * std::conj(e.value);
      for (std::size_t i = 0; i < n; ++i) o[i * n + e.row] += r[i * n + e.col] * v;
    }
    for (const auto& jump : jumps_) {
      for (const auto& a : jump.entries)
        for (const auto& b : jump.entries) o[a.row * n + b.row] += a.value * r[a.col * n + b.col] * std::conj(b.value);
    }
  }

  ComplexMatrix apply(const ComplexMatrix& rho) const {
    ComplexMatrix out(dim_, dim_);
    apply(rho, out);
    return out;
  }

 private:
  std::size_t dim_;
  SparseOp k_;
  std::vector<SparseOp> jumps_;
};

struct IntegratorConfig {
  double max_phase_step = 0.005;  // rad per step of the fastest coherent rotation
  double step_cap = 1e-10;        // s, upper bound on any step
  bool convergence_check = false; // re-integrate with half steps and record the difference

  void validate() const {
    if (!(max_phase_step > 0) || !(step_cap > 0)) throw InputError("integrator step controls must be positive");
  }
};

inline std::size_t step_count(double duration, double frequency, const IntegratorConfig& cfg) {
  if (duration <= 0.0) return 0;
  const double by_phase = std::ceil(frequency * duration / cfg.max_phase_step);
  const double by_cap = std::ceil(duration / cfg.step_cap);
  return static_cast<std::size_t>(std::max({1.0, by_phase, by_cap}));
}

/// Classical fourth-order Runge-Kutta with `steps` equal steps.
inline ComplexMatrix rk4_integrate(const LindbladGenerator& gen, ComplexMatrix rho, double duration, std::size_t steps) {
  if (steps == 0) return rho;
  const std::size_t n = gen.dim();
  const double dt = duration / static_cast<double>(steps);
  ComplexMatrix k1(n, n), k2(n, n), k3(n, n), k4(n, n), tmp(n, n);
  auto axpy = [](ComplexMatrix& dst, const ComplexMatrix& x, double a, const ComplexMatrix& y) {
    auto d = dst.data();
    auto xs = x.data();
    auto ys = y.data();
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = xs[i] + a * ys[i];
  };
  for (std::size_t s = 0; s < steps; ++s) {
    gen.apply(rho, k1);
    axpy(tmp, rho, 0.5 * dt, k1);
    gen.apply(tmp, k2);
    axpy(tmp, rho, 0.5 * dt, k2);
    gen.apply(tmp, k3);
    axpy(tmp, rho, dt, k3);
    gen.apply(tmp, k4);
    auto r = rho.data();
    for (std::size_t i = 0; i < r.size(); ++i)
      r[i] += (dt / 6.0) * (k1.data()[i] + 2.0 * k2.data()[i] + 2.0 * k3.data()[i] + k4.data()[i]);
  }
  return rho;
}

struct SegmentStats {
  std::size_t steps = 0;
  double convergence_delta = 0.0;  // max |rho(dt) - rho(dt/2)| when checked
  Physicality physicality;         // hermiticity measured before re-hermitization
};

/// Integrates the master equation over `duration` with Hamiltonian `h`.
/// `frequency` is the fastest coherent rate in h and sets the step size.
inline DensityMatrix integrate_interval(const DensityMatrix& rho, const ComplexMatrix& h, double duration,
                                        double frequency, const std::vector<Channel>& channels,
                                        const IntegratorConfig& cfg, SegmentStats* stats = nullptr,
                                        const Tolerances& tol = default_tolerances()) {
  cfg.validate();
  if (!is_hermitian(h, tol.hermitian)) throw InputError("integrate: Hamiltonian is not Hermitian");
  const LindbladGenerator gen(h, channels);
  const Complex tr0 = trace(rho.matrix());
  const std::size_t steps = step_count(duration, frequency, cfg);
  DensityMatrix out(rk4_integrate(gen, rho.matrix(), duration, steps), rho.layout());
  if (!all_finite(out.matrix())) throw NumericalError("integrate: non-finite density matrix; step size too large");

  SegmentStats local;
  local.steps = steps;
  if (cfg.convergence_check && steps > 0) {
    const auto fine = rk4_integrate(gen, rho.matrix(), duration, 2 * steps);
    local.convergence_delta = max_abs_diff(fine, out.matrix());
  }
  local.physicality.hermiticity_error = hermiticity_error(out.matrix());
  out.hermitize();
  const double drift = std::abs(trace(out.matrix()) - tr0);
  local.physicality.trace_error = std::abs(trace(out.matrix()) - 1.0);
  local.physicality.min_eigenvalue = hermitian_eigenvalues(out.matrix()).front();
  if (drift > 10 * tol.trace)
    throw NumericalError("integrate: trace drift " + std::to_string(drift) + " per segment; step size too large");
  if (local.physicality.min_eigenvalue < -10 * tol.positivity)
    throw NumericalError("integrate: density matrix lost positivity (min eigenvalue " +
                         std::to_string(local.physicality.min_eigenvalue) + ")");
  if (stats) *stats = local;
  return out;
}

inline DensityMatrix integrate_segment(const DensityMatrix& rho, const Segment& seg, const ProtocolParams& params,
                                       const DecoherenceRates& rates, const IntegratorConfig& cfg,
                                       SegmentStats* stats = nullptr, const Tolerances& tol = default_tolerances()) {
  const auto& layout = rho.layout();
  return integrate_interval(rho, segment_hamiltonian(seg, params, layout), segment_duration(seg, params),
                            segment_frequency(seg, params), collapse_operators(rates, layout), cfg, stats, tol);
}

struct BoundaryCheck {
  std::size_t interval = 0;
  int step = 0;
  double time = 0.0;  // s, end of the interval
  SegmentStats stats;
};

struct LindbladResult {
  DensityMatrix rho;
  std::vector<BoundaryCheck> boundaries;

  double max_trace_error() const {
    double m = 0.0;
    for (const auto& b : boundaries) m = std::max(m, b.stats.physicality.trace_error);
    return m;
  }
  double max_hermiticity_error() const {
    double m = 0.0;
    for (const auto& b : boundaries) m = std::max(m, b.stats.physicality.hermiticity_error);
    return m;
  }
  double min_eigenvalue() const {
    double m = INFINITY;
    for (const auto& b : boundaries) m = std::min(m, b.stats.physicality.min_eigenvalue);
    return m;
  }
  double max_convergence_delta() const {
    double m = 0.0;
    for (const auto& b : boundaries) m = std::max(m, b.stats.convergence_delta);
    return m;
  }
  std::size_t total_steps() const {
    std::size_t s = 0;
    for (const auto& b : boundaries) s += b.stats.steps;
    return s;
  }
};

/// Full dissipative protocol run from the pure input state. Rates act
/// uniformly during every interval, idles included.
inline LindbladResult run_schedule_lindblad(const WeightVector& w, const Schedule& schedule,
                                            const ProtocolParams& params, const DecoherenceRates& rates,
                                            const IntegratorConfig& cfg, const SubsystemLayout& layout,
                                            const Tolerances& tol = default_tolerances()) {
  require_normalized(w, tol);
  params.validate();
  validate(schedule);
  const auto channels = collapse_operators(rates, layout);
  LindbladResult result{DensityMatrix::pure(initial_state(w, layout), layout), {}};
  const auto intervals = resolve_intervals(schedule, params);
  double t = 0.0;
  for (std::size_t k = 0; k < intervals.size(); ++k) {
    const auto& iv = intervals[k];
    ComplexMatrix h(layout.total_dim(), layout.total_dim());
    double freq = 0.0;
    for (auto idx : iv.active) {
      h += segment_hamiltonian(schedule.items[idx].segment, params, layout);
      freq = std::max(freq, segment_frequency(schedule.items[idx].segment, params));
    }
    BoundaryCheck bc{k, iv.step, 0.0, {}};
    result.rho = integrate_interval(result.rho, h, iv.duration, freq, channels, cfg, &bc.stats, tol);
    t += iv.duration;
    bc.time = t;
    result.boundaries.push_back(bc);
  }
  return result;
}

/// sqrt(<psi|rho|psi>)
inline double fidelity(const DensityMatrix& rho, const StateVector& ideal, const Tolerances& tol = default_tolerances()) {
  if (ideal.dim() != rho.dim()) throw InputError("fidelity: dimension mismatch");
  if (std::abs(ideal.norm_squared() - 1.0) > 1e-10) throw InputError("fidelity: ideal state is not normalized");
  const Complex v = inner(ideal, rho.matrix() * ideal);
  if (std::abs(v.imag()) > tol.fidelity_imag)
    throw NumericalError("fidelity: <psi|rho|psi> has imaginary part " + std::to_string(v.imag()));
  return std::sqrt(std::clamp(v.real(), 0.0, 1.0));
}

/// Fidelity of the two-qutrit reduced state against the target, ignoring the
/// cavity. Used for sensitivity comparisons only.
inline double fidelity_cavity_traced(const DensityMatrix& rho, const WeightVector& w,
                                     const Tolerances& tol = default_tolerances()) {
  const auto reduced = partial_trace(rho.matrix(), rho.layout(), {Subsystem::Qutrit1, Subsystem::Qutrit2});
  const auto target = target_state_qutrits(w);
  const Complex v = inner(target, reduced * target);
  if (std::abs(v.imag()) > tol.fidelity_imag)
    throw NumericalError("fidelity: <psi|rho|psi> has imaginary part " + std::to_string(v.imag()));
  return std::sqrt(std::clamp(v.real(), 0.0, 1.0));
}

inline double purity(const ComplexMatrix& rho) { return trace(rho * rho).real(); }

/// -sum lambda ln lambda over the spectrum (natural log).
inline double von_neumann_entropy(const ComplexMatrix& rho) {
  double s = 0.0;
  for (double l : hermitian_eigenvalues(rho))
    if (l > 1e-300) s -= l * std::log(l);
  return s;
}

struct ReducedDiagnostics {
  double cavity_vacuum = 0.0;
  std::array<double, 3> qutrit1_populations{};
  std::array<double, 3> qutrit2_populations{};
  double qutrit1_purity = 0.0;
  double qutrit2_purity = 0.0;
  double cavity_purity = 0.0;
  double qutrit1_entropy = 0.0;
};

inline ReducedDiagnostics reduced_diagnostics(const DensityMatrix& rho) {
  const auto& layout = rho.layout();
  const auto r1 = partial_trace(rho.matrix(), layout, {Subsystem::Qutrit1});
  const auto r2 = partial_trace(rho.matrix(), layout, {Subsystem::Qutrit2});
  const auto rc = partial_trace(rho.matrix(), layout, {Subsystem::Cavity});
  ReducedDiagnostics d;
  d.cavity_vacuum = rc(0, 0).real();
  for (std::size_t i = 0; i < 3; ++i) {
    d.qutrit1_populations[i] = r1(i, i).real();
    d.qutrit2_populations[i] = r2(i, i).real();
  }
  d.qutrit1_purity = purity(r1);
  d.qutrit2_purity = purity(r2);
  d.cavity_purity = purity(rc);
  d.qutrit1_entropy = von_neumann_entropy(r1);
  return d;
}

}  // namespace qent

#endif  // QENT_DYNAMICS_HPP
