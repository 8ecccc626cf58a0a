#pragma once
// Photon loss, thermal noise and the lossy transfer.
//
// All rates are angular (rad/s), times in seconds, temperatures in kelvin.
// The three stages are
//   I   W(pi/2)        = U_{pi/2} exp(-kappa tau a^dag a / 2)
//   II  L              = D(i delta') B(xi) on system (x) auxiliary
//   III W(pi/2)^dag    = exp(-kappa tau a^dag a / 2) U_{pi/2}^dag
// with tau = pi/(2 lambda) and xi = exp(-Gamma T_swap).

#include <complex>
#include <cstddef>
#include <functional>

#include "kerrcat/fock.hpp"

namespace kerrcat {

struct LossRates {
  double kappa = 0.0;        // combined electrical loss, rad/s
  double gamma = 0.0;        // mechanical damping, rad/s
  double g = 0.0;            // transfer coupling, rad/s
  double omega_m = 0.0;      // mechanical frequency, rad/s
  double lambda_kerr = 0.0;  // Kerr rate, rad/s
  double temp = 0.0;         // K
};

struct SwapParameters {
  double nu = 0.0;           // sqrt(g^2 - (kappa+gamma)^2/16)
  double t_swap = 0.0;       // pi / nu
  double gamma_total = 0.0;  // (kappa+gamma)/4
  double xi = 1.0;           // exp(-Gamma T_swap)
};

// Throws PreconditionError("overdamped transfer ...") unless g > (kappa+gamma)/4.
SwapParameters swap_parameters(double kappa, double gamma, double g);

// Coupling g for which exp(-Gamma T_swap) = xi. xi = 1 with Gamma > 0 is
// approached as Gamma T_swap = 1e-12.
double coupling_for_survival(double kappa, double gamma, double xi);

// Bose-Einstein occupation 1/(exp(hbar w / k T) - 1); 0 at T = 0.
double thermal_occupation(double omega, double temp);
// Inverse of thermal_occupation in the temperature.
double temperature_for_occupation(double omega, double n_bar);

class LossParams {
 public:
  static LossParams from_rates(const LossRates& rates);

  const LossRates& rates() const { return rates_; }
  double kappa() const { return rates_.kappa; }
  double gamma() const { return rates_.gamma; }
  double g() const { return rates_.g; }
  double omega_m() const { return rates_.omega_m; }
  double lambda_kerr() const { return rates_.lambda_kerr; }
  double temp() const { return rates_.temp; }

  double nu() const { return swap_.nu; }
  double t_swap() const { return swap_.t_swap; }
  double gamma_total() const { return swap_.gamma_total; }
  double xi() const { return swap_.xi; }
  // Duration of one Kerr stage, pi / (2 lambda).
  double tau_kerr() const { return tau_kerr_; }
  // Amplitude survival through one Kerr stage, exp(-kappa tau / 2).
  double eta() const { return eta_; }
  double n_bar() const { return n_bar_; }

 private:
  LossParams() = default;
  LossRates rates_;
  SwapParameters swap_;
  double tau_kerr_ = 0.0;
  double eta_ = 1.0;
  double n_bar_ = 0.0;
};

struct KickStats {
  double mean = 0.0;
  double variance = 0.0;
};

// Scaled force f(s) = sqrt(2) F(s) / sqrt(hbar w m), s in [0, T_swap].
using ForceFunction = std::function<double(double)>;

// mean     = int_0^T sin(nu s) cos(w s) f(s) ds
// variance = (2 n_bar + 1) int_0^T sin^2(nu s) cos^2(w s) ds
// Adaptive Gauss-Kronrod; throws NumericalError when it does not converge.
KickStats momentum_kick_stats(const ForceFunction& f, const LossParams& lp);

// exp[theta (a^dag c - a c^dag)], theta = arccos(xi), on system (x)
// auxiliary of dimension dim^2. Maps <a> -> xi <a> for a vacuum auxiliary.
FockOperator beam_splitter(double xi, std::size_t dim);

inline constexpr std::size_t kMaxTwoModeDim = 32;

// L = (D(i delta') (x) 1) B(xi); <a> -> xi <a> + i delta'.
FockOperator loss_channel(double xi, double delta_prime, std::size_t dim);
FockOperator loss_channel(const LossParams& lp, double delta_prime, std::size_t dim);

// <0|_aux L |0>_aux = D(i delta') xi^{a^dag a}: the transfer conditioned on
// no photon reaching the auxiliary mode.
FockOperator transfer_no_emission(double xi, double delta_prime, std::size_t dim);

// W_theta = U_theta exp(-kappa t a^dag a / 2), t = theta / lambda.
FockOperator lossy_kerr_propagator(double theta, const LossParams& lp, std::size_t dim);

struct EmissionTrajectory {
  FockVector state;     // normalised
  double weight = 0.0;  // squared norm before normalisation
};

// W(t - t') a W(t') |alpha0> with t = theta_total / lambda. Multiply the
// weight by kappa dt' for the probability of emitting in [t', t' + dt'].
EmissionTrajectory single_emission_state(double t_emit, double theta_total, cplx alpha0, const LossParams& lp,
                                         std::size_t dim);

enum class KerrStage { kCreate, kUndo };

// Full single-mode no-emission pipeline with one emission inserted at t_emit
// in the given Kerr stage (stage III runs the Kerr phase backwards). Returns
// the normalised final state.
EmissionTrajectory emission_pipeline_state(KerrStage stage, double t_emit, cplx alpha0, double delta_prime,
                                           const LossParams& lp, std::size_t dim);

// eta e^{-eta d^2} [ -xi eta a cos(4 eta^2 a d) + d sin(4 eta^2 a d) ]
// The leading sign is the rotating-frame factor e^{-i w T} = -1.
double mean_X_lossy(double alpha, double delta_prime, const LossParams& lp);
// -xi eta^2 a (4 eta^2 a d) - eta d, about the 90 degree offset.
double mean_X_lossy_linearized(double alpha, double delta_prime, const LossParams& lp);

// pi / (8 xi eta^2 alpha): puts the kick phase 4 xi eta^2 alpha delta' at 90 deg.
double lossy_offset_delta(double alpha, const LossParams& lp);

// P(X > 0) - 1/2 of the no-emission output in the commensurate frame, for
// well separated peaks at +/- xi eta^2 alpha:
//   e^{-2 eta^2 d^2} cos(4 xi eta^2 a d) / 2.
// The closed-form mean above carries cos(4 eta^2 a d); the brute-force phase
// scales with xi as well.
double coin_bias_lossy(double alpha, double delta_prime, const LossParams& lp);

// P = pi kappa alpha^2 / lambda (= 2 kappa tau alpha^2).
double emission_probability(double alpha, const LossParams& lp);

// 2 a' [1 + eta e^{Gamma T} / (2 a')^2] (1 - P) d,  a' = eta^2 a
double full_signal(double alpha, double delta_prime, const LossParams& lp);

enum class AuxiliaryReadout { kVacuumProjected, kTraced };

struct TwoModeResult {
  double mean_X = 0.0;
  double prob_X_positive = 0.0;
  // Squared norm of the (projected) output: no-emission probability of the
  // whole pipeline for kVacuumProjected, of the Kerr stages for kTraced.
  double survival = 0.0;
};

// Brute force W^dag L W |alpha0 e^{-i frame_phase}>|0> on dim^2 states.
TwoModeResult two_mode_pipeline(cplx alpha0, double delta_prime, const LossParams& lp, std::size_t dim,
                                AuxiliaryReadout readout, double frame_phase = 0.0);

// Single-mode no-emission pipeline W^dag D(i d) xi^n W |alpha0>, normalised.
FockVector lossy_final_state(cplx alpha0, double delta_prime, const LossParams& lp, std::size_t dim,
                             double frame_phase = 0.0);

}  // namespace kerrcat
