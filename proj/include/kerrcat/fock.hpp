#pragma once
// Truncated Fock-space linear algebra for a single bosonic mode (and the
// two-mode products used by the loss channel).
//
// Conventions:
//   a|n> = sqrt(n)|n-1>,  x~ = a + a^dag,  X = (a + a^dag)/2.
//   The vacuum has <X^2> = 1/4. All reported means are of X.
//   Two-mode vectors use index = n_first * dim_second + n_second.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "kerrcat/errors.hpp"

namespace kerrcat {

using cplx = std::complex<double>;

inline constexpr double kDefaultTailTolerance = 1e-8;
inline constexpr std::size_t kTailWidth = 5;

// ceil(|alpha|^2 + 10|alpha| + 20)
std::size_t standard_truncation(double abs_alpha);

class FockVector {
 public:
  FockVector() = default;
  explicit FockVector(std::vector<cplx> amplitudes);

  static FockVector basis(std::size_t n, std::size_t dim);

  std::size_t dim() const { return amps_.size(); }
  std::span<const cplx> amplitudes() const { return amps_; }
  cplx operator[](std::size_t n) const { return amps_[n]; }

  double norm_squared() const;
  // Weight in the last `width` number states.
  double tail_weight(std::size_t width = kTailWidth) const;
  double mean_number() const;

  FockVector normalized() const;
  FockVector scaled(cplx factor) const;

  friend FockVector operator+(const FockVector& lhs, const FockVector& rhs);
  friend FockVector operator-(const FockVector& lhs, const FockVector& rhs);

 private:
  std::vector<cplx> amps_;
};

// <bra|ket>
cplx inner(const FockVector& bra, const FockVector& ket);
// |<a|b>|^2 / (|a|^2 |b|^2); insensitive to global phase.
double fidelity(const FockVector& a, const FockVector& b);
double distance(const FockVector& a, const FockVector& b);

enum class OperatorKind { kUnitary, kContraction, kHermitian, kGeneral };

class FockOperator {
 public:
  FockOperator(std::size_t dim, std::vector<cplx> entries, OperatorKind kind);

  static FockOperator identity(std::size_t dim);
  static FockOperator diagonal(std::span<const cplx> diag, OperatorKind kind);

  std::size_t dim() const { return dim_; }
  OperatorKind kind() const { return kind_; }
  std::span<const cplx> entries() const { return entries_; }
  cplx operator()(std::size_t row, std::size_t col) const { return entries_[row * dim_ + col]; }

  FockVector apply(const FockVector& v) const;
  FockOperator adjoint() const;
  // this * rhs
  FockOperator compose(const FockOperator& rhs) const;
  FockOperator scaled(cplx factor, OperatorKind kind) const;

  // max_ij |(O^dag O - I)_ij|
  double unitarity_defect() const;
  double max_singular_value() const;
  // max_ij |O_ij - O_ji^*|
  double hermiticity_defect() const;

  friend FockOperator operator*(const FockOperator& a, const FockOperator& b) { return a.compose(b); }
  friend FockVector operator*(const FockOperator& a, const FockVector& v) { return a.apply(v); }
  friend FockOperator operator-(const FockOperator& a, const FockOperator& b);

 private:
  std::size_t dim_;
  std::vector<cplx> entries_;
  OperatorKind kind_;
};

FockOperator kron(const FockOperator& first, const FockOperator& second);
FockVector kron(const FockVector& first, const FockVector& second);

struct LadderOps {
  FockOperator a;
  FockOperator a_dag;
  FockOperator n_op;
};

LadderOps ladder_ops(std::size_t dim);

// c_n = exp(-|alpha|^2/2) alpha^n / sqrt(n!), not renormalised after
// truncation. Throws TruncationError when the last kTailWidth states carry
// more than tail_tolerance.
FockVector coherent_state(cplx alpha, std::size_t dim, double tail_tolerance = kDefaultTailTolerance);

// exp(-i theta n^2)
FockOperator kerr_unitary(double theta, std::size_t dim);

// exp(-i phi n): rotates |alpha> to |alpha e^{-i phi}>.
FockOperator phase_rotation(double phi, std::size_t dim);

// exp(-rate n), rate >= 0: amplitude damping |alpha> -> |alpha e^{-rate}>
// up to norm.
FockOperator number_damping(double rate, std::size_t dim);

// V(delta) = exp(-i delta x~), built from the eigendecomposition of the
// truncated x~. V(delta)|alpha> = e^{-i delta Re alpha} |alpha - i delta>.
FockOperator force_kick(double delta, std::size_t dim);

// X = (a + a^dag)/2
FockOperator quadrature_operator(std::size_t dim);

// <psi|X|psi> / <psi|psi>
double mean_X(const FockVector& psi);

struct DensitySample {
  double x;
  double p;
};

struct QuadratureResult {
  double mean_X = 0.0;
  double prob_X_positive = 0.0;
  double total_probability = 0.0;
  std::vector<DensitySample> density;
};

inline constexpr std::size_t kDefaultGridSize = 2001;

// Homodyne statistics of X for a pure state. The grid is symmetric,
// |x| <= sqrt(<n>) + 6, rounded up to 4k+1 points (Simpson on each half).
// Throws NumericalError when the integrated density misses |psi|^2 by
// more than 1e-6.
QuadratureResult quadrature_distribution(const FockVector& psi, std::size_t grid_size = kDefaultGridSize);

// Incoherent mixture: density is the sum of the component densities (the
// components carry their weights in their norms).
QuadratureResult quadrature_distribution(std::span<const FockVector> components,
                                         std::size_t grid_size = kDefaultGridSize);

}  // namespace kerrcat
