#pragma once
// Lossless measurement pipeline U^dag V(delta) U |alpha0> and its closed forms.

#include <complex>
#include <cstddef>
#include <cstdint>

#include "kerrcat/fock.hpp"
#include "kerrcat/signal.hpp"

namespace kerrcat {

namespace constants {
inline constexpr double kHbar = 1.054571817e-34;      // J s
inline constexpr double kBoltzmann = 1.380649e-23;    // J / K
}  // namespace constants

struct ProtocolParams {
  cplx alpha0{2.0, 0.0};
  double delta = 0.0;
  bool apply_offset = false;
  std::size_t truncation = 0;  // 0: standard_truncation(|alpha0|)

  double alpha() const { return alpha0.real(); }
  // delta plus pi/(8 alpha) when the offset force is on.
  double effective_delta() const;
  std::size_t dim() const;
  // Throws PreconditionError (offset with alpha = 0, non-finite inputs).
  void validate() const;
};

// Force F acting for dt on an oscillator of mass m and angular frequency w.
struct PhysicalForce {
  double force = 0.0;     // N
  double duration = 0.0;  // s
  double mass = 0.0;      // kg
  double omega = 0.0;     // rad/s
};

// pi / (8 alpha): moves the operating point to the steepest slope.
double offset_delta(double alpha);

// delta = F dt / sqrt(2 m w hbar)
double force_to_delta(const PhysicalForce& pf);

// (|alpha0> + i|-alpha0>)/sqrt(2)
FockVector cat_state(cplx alpha0, std::size_t dim, double tail_tolerance = kDefaultTailTolerance);

// U^dag V(delta_eff) U |alpha0> with U = kerr_unitary(pi/2).
FockVector run_ideal(const ProtocolParams& p);

// exp(-2 d^2) { a cos(4 a d) - d [ sin(4 a d) - exp(-2 a^2) ] }
double mean_X_ideal(double alpha, double delta);

// 4 a^2 d - d, the linearisation about the offset point as printed. Warns
// when |4 a d| > 0.3.
double mean_X_linearized(double alpha, double delta);

// Part of mean_X_ideal carried by the +/- alpha peak imbalance, divided by
// 2 alpha: P(X > 0) - 1/2 = exp(-2 d^2) cos(4 a d) / 2 for well separated
// peaks.
double coin_bias_ideal(double alpha, double delta);

// 2 alpha [1 - 1/(2 alpha)^2] delta
double coin_slope_signal(double alpha, double delta);

SignalEstimate coin_signal(std::int64_t m_counts, std::int64_t shots);

struct ShotErrors {
  double classical = 0.0;
  double quantum = 0.0;
};

// eps_c = sqrt(hbar m w / 2) / (F dt), eps_q = eps_c / (2 alpha)
ShotErrors shot_errors(const PhysicalForce& pf, double alpha);

// phi in V(delta) U|alpha0> ~ |alpha0 - i delta> + i e^{i phi} |-alpha0 - i delta>,
// from a Gram-corrected projection of the brute-force state onto the two
// branches. Equals 2 delta Re[alpha0].
double kicked_cat_phase(cplx alpha0, double delta, std::size_t dim);

}  // namespace kerrcat
