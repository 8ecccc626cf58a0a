#include "kerrcat/protocol.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrcat/diagnostics.hpp"

namespace kerrcat {

double ProtocolParams::effective_delta() const {
  return apply_offset ? delta + offset_delta(alpha()) : delta;
}

std::size_t ProtocolParams::dim() const {
  return truncation != 0 ? truncation : standard_truncation(std::abs(alpha0));
}

void ProtocolParams::validate() const {
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()) || !std::isfinite(delta))
    throw PreconditionError("protocol parameters must be finite");
  if (apply_offset && alpha() == 0.0) throw PreconditionError("offset force requires Re[alpha0] != 0");
  if (truncation == 1) throw PreconditionError("truncation must be >= 2");
}

double offset_delta(double alpha) {
  if (alpha == 0.0) throw PreconditionError("offset_delta: alpha must be non-zero");
  return std::numbers::pi / (8.0 * alpha);
}

double force_to_delta(const PhysicalForce& pf) {
  if (!(pf.mass > 0.0) || !(pf.omega > 0.0) || !(pf.duration > 0.0))
    throw PreconditionError("force_to_delta: mass, frequency and duration must be positive");
  return pf.force * pf.duration / std::sqrt(2.0 * pf.mass * pf.omega * constants::kHbar);
}

FockVector cat_state(cplx alpha0, std::size_t dim, double tail_tolerance) {
  const FockVector plus = coherent_state(alpha0, dim, tail_tolerance);
  const FockVector minus = coherent_state(-alpha0, dim, tail_tolerance);
  // <alpha0|-alpha0> = exp(-2|alpha0|^2) is real, so the i makes the cross
  // terms cancel and 1/sqrt(2) normalises exactly.
  return (plus + minus.scaled(cplx{0.0, 1.0})).scaled(1.0 / std::numbers::sqrt2);
}

FockVector run_ideal(const ProtocolParams& p) {
  p.validate();
  const std::size_t n = p.dim();
  const FockOperator u = kerr_unitary(std::numbers::pi / 2.0, n);
  const FockOperator v = force_kick(p.effective_delta(), n);
  FockVector psi = coherent_state(p.alpha0, n);
  psi = u * psi;
  psi = v * psi;
  return u.adjoint() * psi;
}

double mean_X_ideal(double alpha, double delta) {
  const double k = 4.0 * alpha * delta;
  return std::exp(-2.0 * delta * delta) *
         (alpha * std::cos(k) - delta * (std::sin(k) - std::exp(-2.0 * alpha * alpha)));
}

double mean_X_linearized(double alpha, double delta) {
  const double k = 4.0 * alpha * delta;
  if (std::abs(k) > 0.3) {
    std::ostringstream os;
    os << "mean_X_linearized: |4 alpha delta| = " << std::abs(k) << " > 0.3, linearisation inaccurate";
    diag::warn(os.str());
  }
  return alpha * k - delta;
}

double coin_bias_ideal(double alpha, double delta) {
  return 0.5 * std::exp(-2.0 * delta * delta) * std::cos(4.0 * alpha * delta);
}

double coin_slope_signal(double alpha, double delta) {
  return 2.0 * alpha * (1.0 - 1.0 / (4.0 * alpha * alpha)) * delta;
}

SignalEstimate coin_signal(std::int64_t m_counts, std::int64_t shots) {
  if (shots < 1 || m_counts < 0 || m_counts > shots) {
    std::ostringstream os;
    os << "coin_signal: invalid counts m=" << m_counts << " M=" << shots;
    throw std::invalid_argument(os.str());
  }
  SignalEstimate s;
  s.m_counts = m_counts;
  s.shots = shots;
  s.S = double(m_counts) / double(shots) - 0.5;
  s.sigma_S = 1.0 / std::sqrt(4.0 * double(shots));
  return s;
}

ShotErrors shot_errors(const PhysicalForce& pf, double alpha) {
  if (pf.force == 0.0) throw PreconditionError("shot_errors: zero force");
  if (!(pf.mass > 0.0) || !(pf.omega > 0.0) || !(pf.duration > 0.0))
    throw PreconditionError("shot_errors: mass, frequency and duration must be positive");
  ShotErrors e;
  e.classical = std::sqrt(constants::kHbar * pf.mass * pf.omega / 2.0) / std::abs(pf.force * pf.duration);
  e.quantum = e.classical / (2.0 * alpha);
  return e;
}

double kicked_cat_phase(cplx alpha0, double delta, std::size_t dim) {
  const FockOperator u = kerr_unitary(std::numbers::pi / 2.0, dim);
  const FockVector psi = force_kick(delta, dim) * (u * coherent_state(alpha0, dim));

  const cplx shift{0.0, -delta};
  const FockVector b1 = coherent_state(alpha0 + shift, dim);
  const FockVector b2 = coherent_state(-alpha0 + shift, dim);
  // Solve the 2x2 Gram system for psi ~ c1 b1 + c2 b2.
  const cplx g12 = inner(b1, b2);
  const cplx g11 = inner(b1, b1), g22 = inner(b2, b2);
  const cplx r1 = inner(b1, psi), r2 = inner(b2, psi);
  const cplx det = g11 * g22 - g12 * std::conj(g12);
  const cplx c1 = (g22 * r1 - g12 * r2) / det;
  const cplx c2 = (g11 * r2 - std::conj(g12) * r1) / det;
  return std::arg(c2 / (cplx{0.0, 1.0} * c1));
}

}  // namespace kerrcat
