#include "kerrcat/fock.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "kerrcat/kernels.hpp"

namespace kerrcat {
namespace {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;

OperatorKind product_kind(OperatorKind a, OperatorKind b) {
  const auto norm_bounded = [](OperatorKind k) {
    return k == OperatorKind::kUnitary || k == OperatorKind::kContraction;
  };
  if (a == OperatorKind::kUnitary && b == OperatorKind::kUnitary) return OperatorKind::kUnitary;
  if (norm_bounded(a) && norm_bounded(b)) return OperatorKind::kContraction;
  return OperatorKind::kGeneral;
}

MatrixXcd to_eigen(const FockOperator& op) {
  MatrixXcd m(op.dim(), op.dim());
  for (std::size_t i = 0; i < op.dim(); ++i)
    for (std::size_t j = 0; j < op.dim(); ++j) m(i, j) = op(i, j);
  return m;
}

void require_same_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    std::ostringstream os;
    os << what << ": dimension mismatch (" << a << " vs " << b << ")";
    throw std::invalid_argument(os.str());
  }
}

// Composite Simpson weights on 2m+1 equally spaced points.
double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  double s = f.front() + f.back();
  for (std::size_t i = 1; i + 1 < n; ++i) s += (i % 2 == 1 ? 4.0 : 2.0) * f[i];
  return s * h / 3.0;
}

}  // namespace

std::size_t standard_truncation(double abs_alpha) {
  const double a = std::abs(abs_alpha);
  return static_cast<std::size_t>(std::ceil(a * a + 10.0 * a + 20.0));
}

// --- FockVector -------------------------------------------------------------

FockVector::FockVector(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {}

FockVector FockVector::basis(std::size_t n, std::size_t dim) {
  if (n >= dim) throw std::out_of_range("basis state outside truncation");
  std::vector<cplx> v(dim);
  v[n] = 1.0;
  return FockVector(std::move(v));
}

double FockVector::norm_squared() const { return kernels::cnorm2(amps_); }

double FockVector::tail_weight(std::size_t width) const {
  const std::size_t start = amps_.size() > width ? amps_.size() - width : 0;
  return kernels::cnorm2(std::span<const cplx>(amps_).subspan(start));
}

double FockVector::mean_number() const {
  double s = 0.0;
  for (std::size_t n = 0; n < amps_.size(); ++n) s += double(n) * std::norm(amps_[n]);
  return s / norm_squared();
}

FockVector FockVector::normalized() const {
  const double nrm = std::sqrt(norm_squared());
  if (nrm == 0.0) throw std::domain_error("cannot normalise the zero vector");
  return scaled(1.0 / nrm);
}

FockVector FockVector::scaled(cplx factor) const {
  std::vector<cplx> v(amps_);
  for (auto& c : v) c *= factor;
  return FockVector(std::move(v));
}

FockVector operator+(const FockVector& lhs, const FockVector& rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "FockVector +");
  std::vector<cplx> v(lhs.amps_);
  kernels::caxpy(1.0, rhs.amps_, v);
  return FockVector(std::move(v));
}

FockVector operator-(const FockVector& lhs, const FockVector& rhs) {
  require_same_dim(lhs.dim(), rhs.dim(), "FockVector -");
  std::vector<cplx> v(lhs.amps_);
  kernels::caxpy(-1.0, rhs.amps_, v);
  return FockVector(std::move(v));
}

cplx inner(const FockVector& bra, const FockVector& ket) {
  require_same_dim(bra.dim(), ket.dim(), "inner");
  return kernels::cdotc(bra.amplitudes(), ket.amplitudes());
}

double fidelity(const FockVector& a, const FockVector& b) {
  return std::norm(inner(a, b)) / (a.norm_squared() * b.norm_squared());
}

double distance(const FockVector& a, const FockVector& b) { return std::sqrt((a - b).norm_squared()); }

// --- FockOperator -----------------------------------------------------------

FockOperator::FockOperator(std::size_t dim, std::vector<cplx> entries, OperatorKind kind)
    : dim_(dim), entries_(std::move(entries)), kind_(kind) {
  if (entries_.size() != dim_ * dim_) throw std::invalid_argument("FockOperator: entry count != dim^2");
}

FockOperator FockOperator::identity(std::size_t dim) {
  std::vector<cplx> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = 1.0;
  return FockOperator(dim, std::move(e), OperatorKind::kUnitary);
}

FockOperator FockOperator::diagonal(std::span<const cplx> diag, OperatorKind kind) {
  const std::size_t dim = diag.size();
  std::vector<cplx> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i) e[i * dim + i] = diag[i];
  return FockOperator(dim, std::move(e), kind);
}

FockVector FockOperator::apply(const FockVector& v) const {
  require_same_dim(dim_, v.dim(), "FockOperator::apply");
  std::vector<cplx> out(dim_);
  kernels::cmatvec(entries_, dim_, dim_, v.amplitudes(), out);
  return FockVector(std::move(out));
}

FockOperator FockOperator::adjoint() const {
  std::vector<cplx> e(dim_ * dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) e[j * dim_ + i] = std::conj(entries_[i * dim_ + j]);
  return FockOperator(dim_, std::move(e), kind_);
}

FockOperator FockOperator::compose(const FockOperator& rhs) const {
  require_same_dim(dim_, rhs.dim_, "FockOperator::compose");
  std::vector<cplx> e(dim_ * dim_);
  const std::span<const cplx> b(rhs.entries_);
  for (std::size_t i = 0; i < dim_; ++i) {
    std::span<cplx> row(e.data() + i * dim_, dim_);
    for (std::size_t k = 0; k < dim_; ++k) {
      const cplx aik = entries_[i * dim_ + k];
      if (aik != cplx{}) kernels::caxpy(aik, b.subspan(k * dim_, dim_), row);
    }
  }
  return FockOperator(dim_, std::move(e), product_kind(kind_, rhs.kind_));
}

FockOperator FockOperator::scaled(cplx factor, OperatorKind kind) const {
  std::vector<cplx> e(entries_);
  for (auto& c : e) c *= factor;
  return FockOperator(dim_, std::move(e), kind);
}

FockOperator operator-(const FockOperator& a, const FockOperator& b) {
  require_same_dim(a.dim_, b.dim_, "FockOperator -");
  std::vector<cplx> e(a.entries_);
  kernels::caxpy(-1.0, b.entries_, e);
  return FockOperator(a.dim_, std::move(e), OperatorKind::kGeneral);
}

double FockOperator::unitarity_defect() const {
  const FockOperator g = adjoint().compose(*this);
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      worst = std::max(worst, std::abs(g(i, j) - (i == j ? cplx{1.0} : cplx{})));
  return worst;
}

double FockOperator::max_singular_value() const {
  Eigen::JacobiSVD<MatrixXcd> svd(to_eigen(*this));
  return svd.singularValues()(0);
}

double FockOperator::hermiticity_defect() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j)
      worst = std::max(worst, std::abs((*this)(i, j) - std::conj((*this)(j, i))));
  return worst;
}

FockOperator kron(const FockOperator& first, const FockOperator& second) {
  const std::size_t n1 = first.dim(), n2 = second.dim(), n = n1 * n2;
  std::vector<cplx> e(n * n);
  for (std::size_t i1 = 0; i1 < n1; ++i1)
    for (std::size_t j1 = 0; j1 < n1; ++j1) {
      const cplx f = first(i1, j1);
      if (f == cplx{}) continue;
      for (std::size_t i2 = 0; i2 < n2; ++i2)
        for (std::size_t j2 = 0; j2 < n2; ++j2) e[(i1 * n2 + i2) * n + (j1 * n2 + j2)] = f * second(i2, j2);
    }
  const OperatorKind k = (first.kind() == second.kind() && first.kind() != OperatorKind::kGeneral)
                             ? first.kind()
                             : product_kind(first.kind(), second.kind());
  return FockOperator(n, std::move(e), k);
}

FockVector kron(const FockVector& first, const FockVector& second) {
  std::vector<cplx> v(first.dim() * second.dim());
  for (std::size_t i = 0; i < first.dim(); ++i)
    for (std::size_t j = 0; j < second.dim(); ++j) v[i * second.dim() + j] = first[i] * second[j];
  return FockVector(std::move(v));
}

// --- Standard operators and states ------------------------------------------

LadderOps ladder_ops(std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("ladder_ops: truncation must be >= 2");
  std::vector<cplx> a(dim * dim);
  for (std::size_t n = 1; n < dim; ++n) a[(n - 1) * dim + n] = std::sqrt(double(n));
  FockOperator lower(dim, std::move(a), OperatorKind::kGeneral);
  FockOperator raise = lower.adjoint();
  std::vector<cplx> diag(dim);
  for (std::size_t n = 0; n < dim; ++n) diag[n] = double(n);
  return {std::move(lower), std::move(raise), FockOperator::diagonal(diag, OperatorKind::kHermitian)};
}

FockVector coherent_state(cplx alpha, std::size_t dim, double tail_tolerance) {
  if (dim == 0) throw std::invalid_argument("coherent_state: empty truncation");
  std::vector<cplx> c(dim);
  c[0] = std::exp(-0.5 * std::norm(alpha));
  for (std::size_t n = 1; n < dim; ++n) c[n] = c[n - 1] * alpha / std::sqrt(double(n));
  FockVector v(std::move(c));
  const double tail = v.tail_weight();
  if (dim > kTailWidth && tail > tail_tolerance) {
    std::ostringstream os;
    os << "coherent_state: truncation " << dim << " too small for |alpha|=" << std::abs(alpha)
       << " (tail weight " << tail << " > " << tail_tolerance << ")";
    throw TruncationError(os.str());
  }
  return v;
}

FockOperator kerr_unitary(double theta, std::size_t dim) {
  std::vector<cplx> d(dim);
  for (std::size_t n = 0; n < dim; ++n) {
    const double ph = -theta * double(n) * double(n);
    d[n] = std::polar(1.0, ph);
  }
  return FockOperator::diagonal(d, OperatorKind::kUnitary);
}

FockOperator phase_rotation(double phi, std::size_t dim) {
  std::vector<cplx> d(dim);
  for (std::size_t n = 0; n < dim; ++n) d[n] = std::polar(1.0, -phi * double(n));
  return FockOperator::diagonal(d, OperatorKind::kUnitary);
}

FockOperator number_damping(double rate, std::size_t dim) {
  if (rate < 0.0) throw std::invalid_argument("number_damping: negative rate");
  std::vector<cplx> d(dim);
  for (std::size_t n = 0; n < dim; ++n) d[n] = std::exp(-rate * double(n));
  return FockOperator::diagonal(d, rate == 0.0 ? OperatorKind::kUnitary : OperatorKind::kContraction);
}

FockOperator force_kick(double delta, std::size_t dim) {
  if (dim < 2) throw std::invalid_argument("force_kick: truncation must be >= 2");
  // A kick of size delta moves the vacuum to |-i delta>; if even that state
  // does not fit, no state will.
  const FockVector probe = coherent_state(cplx{0.0, -delta}, dim, 1.0);
  if (dim > kTailWidth && probe.tail_weight() > kDefaultTailTolerance)
    throw TruncationError("force_kick: |delta| too large for truncation " + std::to_string(dim));

  VectorXd diag = VectorXd::Zero(Eigen::Index(dim));
  VectorXd sub(Eigen::Index(dim - 1));
  for (std::size_t n = 1; n < dim; ++n) sub(Eigen::Index(n - 1)) = std::sqrt(double(n));
  Eigen::SelfAdjointEigenSolver<MatrixXd> es;
  es.computeFromTridiagonal(diag, sub, Eigen::ComputeEigenvectors);
  const MatrixXd& q = es.eigenvectors();
  const VectorXd& lam = es.eigenvalues();

  std::vector<cplx> e(dim * dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      cplx s{};
      for (std::size_t k = 0; k < dim; ++k)
        s += q(Eigen::Index(i), Eigen::Index(k)) * q(Eigen::Index(j), Eigen::Index(k)) *
             std::polar(1.0, -delta * lam(Eigen::Index(k)));
      e[i * dim + j] = s;
      e[j * dim + i] = s;  // exp(-i delta x~) is complex symmetric
    }
  return FockOperator(dim, std::move(e), OperatorKind::kUnitary);
}

FockOperator quadrature_operator(std::size_t dim) {
  std::vector<cplx> e(dim * dim);
  for (std::size_t n = 1; n < dim; ++n) {
    const double v = 0.5 * std::sqrt(double(n));
    e[(n - 1) * dim + n] = v;
    e[n * dim + (n - 1)] = v;
  }
  return FockOperator(dim, std::move(e), OperatorKind::kHermitian);
}

double mean_X(const FockVector& psi) {
  // <psi|X|psi> = Re sum_n sqrt(n) conj(c_{n-1}) c_n
  const auto c = psi.amplitudes();
  double s = 0.0;
  for (std::size_t n = 1; n < c.size(); ++n) s += std::sqrt(double(n)) * std::real(std::conj(c[n - 1]) * c[n]);
  return s / psi.norm_squared();
}

// --- Homodyne statistics -----------------------------------------------------

QuadratureResult quadrature_distribution(std::span<const FockVector> components, std::size_t grid_size) {
  if (components.empty()) throw std::invalid_argument("quadrature_distribution: no components");
  if (grid_size < 5) throw NumericalError("quadrature_distribution: grid too coarse");
  const std::size_t quarter = (grid_size - 1 + 3) / 4;
  const std::size_t points = 4 * quarter + 1;

  double weight = 0.0, number = 0.0;
  for (const auto& c : components) {
    const double w = c.norm_squared();
    weight += w;
    if (w > 0.0) number += w * c.mean_number();
  }
  if (weight <= 0.0) throw std::domain_error("quadrature_distribution: zero state");
  const double half_width = std::sqrt(std::max(number / weight, 0.0)) + 6.0;
  const double h = 2.0 * half_width / double(points - 1);

  // X = q / sqrt(2) with q the oscillator coordinate of the Hermite functions.
  std::vector<double> x(points), q(points), p(points, 0.0), scratch(points);
  for (std::size_t j = 0; j < points; ++j) {
    x[j] = -half_width + h * double(j);
    q[j] = std::numbers::sqrt2 * x[j];
  }
  x[points / 2] = 0.0;
  q[points / 2] = 0.0;
  for (const auto& c : components) {
    kernels::hermite_density(c.amplitudes(), q, scratch);
    for (std::size_t j = 0; j < points; ++j) p[j] += std::numbers::sqrt2 * scratch[j];
  }

  QuadratureResult r;
  r.total_probability = simpson(p, h);
  if (std::abs(r.total_probability - weight) > 1e-6) {
    std::ostringstream os;
    os << "quadrature_distribution: grid too coarse (integrated " << r.total_probability << ", expected "
       << weight << ")";
    throw NumericalError(os.str());
  }
  r.total_probability /= weight;
  std::vector<double> xp(points);
  for (std::size_t j = 0; j < points; ++j) xp[j] = x[j] * p[j];
  r.mean_X = simpson(xp, h) / weight;
  r.prob_X_positive = simpson(std::span<const double>(p).subspan(points / 2), h) / weight;
  r.density.reserve(points);
  for (std::size_t j = 0; j < points; ++j) r.density.push_back({x[j], p[j] / weight});
  return r;
}

QuadratureResult quadrature_distribution(const FockVector& psi, std::size_t grid_size) {
  return quadrature_distribution(std::span<const FockVector>(&psi, 1), grid_size);
}

}  // namespace kerrcat
