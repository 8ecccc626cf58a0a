#include "kerrcat/loss.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrcat/diagnostics.hpp"
#include "kerrcat/protocol.hpp"

namespace kerrcat {
namespace {

constexpr double kPi = std::numbers::pi;

void require_two_mode_dim(std::size_t dim, const char* what) {
  if (dim < 2 || dim > kMaxTwoModeDim) {
    std::ostringstream os;
    os << what << ": two-mode truncation must be in [2, " << kMaxTwoModeDim << "], got " << dim;
    throw std::invalid_argument(os.str());
  }
}

// (op (x) 1) psi for a two-mode vector, without forming the Kronecker product.
FockVector apply_first_mode(const FockOperator& op, const FockVector& psi) {
  const std::size_t n = op.dim();
  std::vector<cplx> out(psi.dim());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      const cplx o = op(i, j);
      if (o == cplx{}) continue;
      for (std::size_t k = 0; k < n; ++k) out[i * n + k] += o * psi[j * n + k];
    }
  return FockVector(std::move(out));
}

// Aux-mode slices v_k[m] = psi[m * dim + k].
std::vector<FockVector> aux_slices(const FockVector& psi, std::size_t dim) {
  std::vector<FockVector> out;
  out.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    std::vector<cplx> v(dim);
    for (std::size_t m = 0; m < dim; ++m) v[m] = psi[m * dim + k];
    out.emplace_back(std::move(v));
  }
  return out;
}

void warn_if_large(double value, double limit, const char* what) {
  if (value > limit) {
    std::ostringstream os;
    os << what << " = " << value << " > " << limit << ", first-order loss model inaccurate";
    diag::warn(os.str());
  }
}

void check_rates(const LossRates& r) {
  const double vals[] = {r.kappa, r.gamma, r.g, r.omega_m, r.lambda_kerr, r.temp};
  for (double v : vals)
    if (!std::isfinite(v)) throw PreconditionError("loss rates must be finite");
  if (r.kappa < 0.0 || r.gamma < 0.0) throw PreconditionError("loss rates must be non-negative");
  if (!(r.omega_m > 0.0)) throw PreconditionError("mechanical frequency must be positive");
  if (!(r.lambda_kerr > 0.0)) throw PreconditionError("Kerr rate must be positive");
  if (r.temp < 0.0) throw PreconditionError("temperature must be non-negative");
}

}  // namespace

SwapParameters swap_parameters(double kappa, double gamma, double g) {
  const double big_gamma = (kappa + gamma) / 4.0;
  if (!(g > big_gamma)) {
    std::ostringstream os;
    os << "overdamped transfer: g = " << g << " <= (kappa+gamma)/4 = " << big_gamma;
    throw PreconditionError(os.str());
  }
  SwapParameters s;
  s.gamma_total = big_gamma;
  s.nu = std::sqrt((g - big_gamma) * (g + big_gamma));
  s.t_swap = kPi / s.nu;
  s.xi = std::exp(-big_gamma * s.t_swap);
  return s;
}

double coupling_for_survival(double kappa, double gamma, double xi) {
  const double big_gamma = (kappa + gamma) / 4.0;
  if (!(big_gamma > 0.0)) throw PreconditionError("coupling_for_survival: needs kappa + gamma > 0");
  if (!(xi > 0.0 && xi <= 1.0)) throw PreconditionError("coupling_for_survival: xi must be in (0, 1]");
  const double gamma_t = xi == 1.0 ? 1e-12 : -std::log(xi);
  const double nu = kPi * big_gamma / gamma_t;
  return std::hypot(nu, big_gamma);
}

double thermal_occupation(double omega, double temp) {
  if (temp < 0.0 || !(omega > 0.0)) throw PreconditionError("thermal_occupation: need omega > 0, T >= 0");
  if (temp == 0.0) return 0.0;
  const double x = constants::kHbar * omega / (constants::kBoltzmann * temp);
  return 1.0 / std::expm1(x);
}

double temperature_for_occupation(double omega, double n_bar) {
  if (n_bar < 0.0 || !(omega > 0.0)) throw PreconditionError("temperature_for_occupation: need omega > 0, n >= 0");
  if (n_bar == 0.0) return 0.0;
  return constants::kHbar * omega / (constants::kBoltzmann * std::log1p(1.0 / n_bar));
}

LossParams LossParams::from_rates(const LossRates& rates) {
  check_rates(rates);
  LossParams lp;
  lp.rates_ = rates;
  lp.swap_ = swap_parameters(rates.kappa, rates.gamma, rates.g);
  lp.tau_kerr_ = kPi / (2.0 * rates.lambda_kerr);
  lp.eta_ = std::exp(-0.5 * rates.kappa * lp.tau_kerr_);
  lp.n_bar_ = thermal_occupation(rates.omega_m, rates.temp);
  return lp;
}

KickStats momentum_kick_stats(const ForceFunction& f, const LossParams& lp) {
  using boost::math::quadrature::gauss_kronrod;
  const double nu = lp.nu(), w = lp.omega_m(), t = lp.t_swap();
  constexpr unsigned kMaxDepth = 20;
  constexpr double kTol = 1e-10;

  // Integrated in u = s / T_swap: the adaptive error estimate misbehaves on
  // sub-microsecond intervals. One panel per mechanical half period.
  const auto pieces = static_cast<std::size_t>(std::clamp(std::ceil(t * w / kPi), 1.0, 1e6));
  const auto integrate = [&](auto&& integrand, const char* what) {
    const auto g = [&](double u) { return integrand(u * t); };
    double v = 0.0, err = 0.0, l1 = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
      double e = 0.0, l = 0.0;
      v += gauss_kronrod<double, 61>::integrate(g, double(i) / double(pieces), double(i + 1) / double(pieces),
                                                kMaxDepth, kTol, &e, &l);
      err += e;
      l1 += l;
    }
    v *= t;
    err *= t;
    l1 *= t;
    if (!std::isfinite(v) || err > 1e-6 * l1) {
      std::ostringstream os;
      os << "momentum_kick_stats: " << what << " integral did not converge (error " << err << ", L1 " << l1 << ")";
      throw NumericalError(os.str());
    }
    return v;
  };

  KickStats ks;
  if (f) ks.mean = integrate([&](double s) { return std::sin(nu * s) * std::cos(w * s) * f(s); }, "mean");
  const double var = integrate(
      [&](double s) {
        const double a = std::sin(nu * s) * std::cos(w * s);
        return a * a;
      },
      "variance");
  ks.variance = (2.0 * lp.n_bar() + 1.0) * var;
  return ks;
}

FockOperator beam_splitter(double xi, std::size_t dim) {
  require_two_mode_dim(dim, "beam_splitter");
  if (!(xi >= 0.0 && xi <= 1.0)) throw std::invalid_argument("beam_splitter: xi must be in [0, 1]");
  const double theta = std::acos(xi);
  const std::size_t n2 = dim * dim;
  std::vector<cplx> e(n2 * n2);

  // The generator conserves n_a + n_c; exponentiate each block.
  for (std::size_t total = 0; total <= 2 * (dim - 1); ++total) {
    const std::size_t lo = total >= dim ? total - (dim - 1) : 0;
    const std::size_t hi = std::min(total, dim - 1);
    const std::size_t m = hi - lo + 1;
    // basis i -> (n_a = lo + i, n_c = total - lo - i)
    Eigen::MatrixXd gen = Eigen::MatrixXd::Zero(Eigen::Index(m), Eigen::Index(m));
    for (std::size_t i = 0; i + 1 < m; ++i) {
      const double na = double(lo + i), nc = double(total - lo - i);
      // a^dag c |na, nc> = sqrt((na+1) nc) |na+1, nc-1>
      const double amp = theta * std::sqrt((na + 1.0) * nc);
      gen(Eigen::Index(i + 1), Eigen::Index(i)) = amp;
      gen(Eigen::Index(i), Eigen::Index(i + 1)) = -amp;
    }
    // gen is real antisymmetric; i*gen is Hermitian.
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Eigen::MatrixXcd(cplx{0.0, 1.0} * gen.cast<cplx>()));
    const Eigen::MatrixXcd& q = es.eigenvectors();
    Eigen::VectorXcd ph(static_cast<Eigen::Index>(m));
    for (Eigen::Index k = 0; k < Eigen::Index(m); ++k) ph(k) = std::polar(1.0, -es.eigenvalues()(k));
    const Eigen::MatrixXcd block = q * ph.asDiagonal() * q.adjoint();
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        const std::size_t row = (lo + i) * dim + (total - lo - i);
        const std::size_t col = (lo + j) * dim + (total - lo - j);
        e[row * n2 + col] = block(Eigen::Index(i), Eigen::Index(j));
      }
  }
  return FockOperator(n2, std::move(e), OperatorKind::kUnitary);
}

FockOperator loss_channel(double xi, double delta_prime, std::size_t dim) {
  require_two_mode_dim(dim, "loss_channel");
  const FockOperator d = kron(force_kick(-delta_prime, dim), FockOperator::identity(dim));
  return d * beam_splitter(xi, dim);
}

FockOperator loss_channel(const LossParams& lp, double delta_prime, std::size_t dim) {
  return loss_channel(lp.xi(), delta_prime, dim);
}

FockOperator transfer_no_emission(double xi, double delta_prime, std::size_t dim) {
  if (!(xi > 0.0 && xi <= 1.0)) throw std::invalid_argument("transfer_no_emission: xi must be in (0, 1]");
  return force_kick(-delta_prime, dim) * number_damping(-std::log(xi), dim);
}

FockOperator lossy_kerr_propagator(double theta, const LossParams& lp, std::size_t dim) {
  const double t = std::abs(theta) / lp.lambda_kerr();
  return kerr_unitary(theta, dim) * number_damping(0.5 * lp.kappa() * t, dim);
}

EmissionTrajectory single_emission_state(double t_emit, double theta_total, cplx alpha0, const LossParams& lp,
                                         std::size_t dim) {
  const double t_total = std::abs(theta_total) / lp.lambda_kerr();
  if (!(t_emit >= 0.0 && t_emit <= t_total))
    throw std::invalid_argument("single_emission_state: emission time outside the Kerr stage");
  const double sign = theta_total < 0.0 ? -1.0 : 1.0;
  const double theta_before = sign * lp.lambda_kerr() * t_emit;
  FockVector psi = coherent_state(alpha0, dim);
  psi = lossy_kerr_propagator(theta_before, lp, dim) * psi;
  psi = ladder_ops(dim).a * psi;
  psi = lossy_kerr_propagator(theta_total - theta_before, lp, dim) * psi;
  const double w = psi.norm_squared();
  if (!(w > 0.0)) throw NumericalError("single_emission_state: trajectory has zero weight");
  return {psi.normalized(), w};
}

EmissionTrajectory emission_pipeline_state(KerrStage stage, double t_emit, cplx alpha0, double delta_prime,
                                           const LossParams& lp, std::size_t dim) {
  const double tau = lp.tau_kerr();
  if (!(t_emit >= 0.0 && t_emit <= tau))
    throw std::invalid_argument("emission_pipeline_state: emission time outside the Kerr stage");
  const double quarter = kPi / 2.0;
  const FockOperator a = ladder_ops(dim).a;
  const double theta_emit = lp.lambda_kerr() * t_emit;

  FockVector psi = coherent_state(alpha0, dim);
  if (stage == KerrStage::kCreate) {
    psi = lossy_kerr_propagator(theta_emit, lp, dim) * psi;
    psi = a * psi;
    psi = lossy_kerr_propagator(quarter - theta_emit, lp, dim) * psi;
  } else {
    psi = lossy_kerr_propagator(quarter, lp, dim) * psi;
  }
  psi = transfer_no_emission(lp.xi(), delta_prime, dim) * psi;
  if (stage == KerrStage::kUndo) {
    psi = lossy_kerr_propagator(-theta_emit, lp, dim) * psi;
    psi = a * psi;
    psi = lossy_kerr_propagator(-(quarter - theta_emit), lp, dim) * psi;
  } else {
    psi = lossy_kerr_propagator(-quarter, lp, dim) * psi;
  }
  const double w = psi.norm_squared();
  if (!(w > 0.0)) throw NumericalError("emission_pipeline_state: trajectory has zero weight");
  return {psi.normalized(), w};
}

double mean_X_lossy(double alpha, double delta_prime, const LossParams& lp) {
  const double eta = lp.eta();
  warn_if_large(lp.kappa() * lp.tau_kerr(), 0.3, "mean_X_lossy: kappa tau");
  const double k = 4.0 * eta * eta * alpha * delta_prime;
  return eta * std::exp(-eta * delta_prime * delta_prime) *
         (-lp.xi() * eta * alpha * std::cos(k) + delta_prime * std::sin(k));
}

double mean_X_lossy_linearized(double alpha, double delta_prime, const LossParams& lp) {
  const double eta = lp.eta();
  const double k = 4.0 * eta * eta * alpha * delta_prime;
  warn_if_large(std::abs(k), 0.3, "mean_X_lossy_linearized: |4 eta^2 alpha delta'|");
  return -lp.xi() * eta * eta * alpha * k - eta * delta_prime;
}

double lossy_offset_delta(double alpha, const LossParams& lp) {
  if (alpha == 0.0) throw PreconditionError("lossy_offset_delta: alpha must be non-zero");
  return kPi / (8.0 * lp.xi() * lp.eta() * lp.eta() * alpha);
}

double coin_bias_lossy(double alpha, double delta_prime, const LossParams& lp) {
  const double eta = lp.eta();
  return 0.5 * std::exp(-2.0 * eta * eta * delta_prime * delta_prime) *
         std::cos(4.0 * lp.xi() * eta * eta * alpha * delta_prime);
}

double emission_probability(double alpha, const LossParams& lp) {
  const double p = kPi * lp.kappa() * alpha * alpha / lp.lambda_kerr();
  warn_if_large(p, 0.5, "emission_probability");
  return p;
}

double full_signal(double alpha, double delta_prime, const LossParams& lp) {
  const double eta = lp.eta();
  const double a1 = eta * eta * alpha;
  if (a1 == 0.0) throw PreconditionError("full_signal: alpha must be non-zero");
  const double gain = 1.0 + eta * std::exp(lp.gamma_total() * lp.t_swap()) / (4.0 * a1 * a1);
  return 2.0 * a1 * gain * (1.0 - emission_probability(alpha, lp)) * delta_prime;
}

TwoModeResult two_mode_pipeline(cplx alpha0, double delta_prime, const LossParams& lp, std::size_t dim,
                                AuxiliaryReadout readout, double frame_phase) {
  require_two_mode_dim(dim, "two_mode_pipeline");
  const double quarter = kPi / 2.0;
  FockVector sys = coherent_state(alpha0 * std::polar(1.0, -frame_phase), dim);
  sys = lossy_kerr_propagator(quarter, lp, dim) * sys;

  FockVector psi = kron(sys, FockVector::basis(0, dim));
  psi = beam_splitter(lp.xi(), dim) * psi;
  psi = apply_first_mode(force_kick(-delta_prime, dim), psi);
  psi = apply_first_mode(lossy_kerr_propagator(-quarter, lp, dim), psi);

  std::vector<FockVector> slices = aux_slices(psi, dim);
  TwoModeResult r;
  if (readout == AuxiliaryReadout::kVacuumProjected) {
    const FockVector& v = slices.front();
    r.survival = v.norm_squared();
    if (!(r.survival > 0.0)) throw NumericalError("two_mode_pipeline: vacuum projection has zero weight");
    r.mean_X = mean_X(v);
    r.prob_X_positive = quadrature_distribution(v).prob_X_positive;
    return r;
  }
  const FockOperator x = quadrature_operator(dim);
  double num = 0.0;
  for (const FockVector& v : slices) {
    r.survival += v.norm_squared();
    num += inner(v, x * v).real();
  }
  if (!(r.survival > 0.0)) throw NumericalError("two_mode_pipeline: output has zero weight");
  r.mean_X = num / r.survival;
  r.prob_X_positive = quadrature_distribution(std::span<const FockVector>(slices)).prob_X_positive;
  return r;
}

FockVector lossy_final_state(cplx alpha0, double delta_prime, const LossParams& lp, std::size_t dim,
                             double frame_phase) {
  const double quarter = kPi / 2.0;
  FockVector psi = coherent_state(alpha0 * std::polar(1.0, -frame_phase), dim);
  psi = lossy_kerr_propagator(quarter, lp, dim) * psi;
  psi = transfer_no_emission(lp.xi(), delta_prime, dim) * psi;
  psi = lossy_kerr_propagator(-quarter, lp, dim) * psi;
  return psi.normalized();
}

}  // namespace kerrcat
