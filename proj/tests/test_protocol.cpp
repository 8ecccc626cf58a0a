#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kerrcat/diagnostics.hpp"
#include "kerrcat/protocol.hpp"

using namespace kerrcat;
using std::numbers::pi;

namespace {

double brute_mean(cplx alpha0, double delta, bool offset = false) {
  ProtocolParams p;
  p.alpha0 = alpha0;
  p.delta = delta;
  p.apply_offset = offset;
  return mean_X(run_ideal(p));
}

double brute_p1(double alpha, double delta) {
  ProtocolParams p;
  p.alpha0 = alpha;
  p.delta = delta;
  return quadrature_distribution(run_ideal(p)).prob_X_positive;
}

}  // namespace

TEST_CASE("force_to_delta") {
  PhysicalForce pf{0.0, 1e-6, 1e-15, 2.0 * pi * 1e7};
  CHECK(force_to_delta(pf) == 0.0);
  pf.force = 1e-18;
  const double d1 = force_to_delta(pf);
  pf.force = 2e-18;
  CHECK(force_to_delta(pf) == 2.0 * d1);
  // Independent coding: F dt / sqrt(2 m w hbar) with hbar = h / 2pi.
  const double h = 6.62607015e-34;
  const double hbar = h / (2.0 * pi);
  const double want = 1e-18 * 1e-6 / std::sqrt(2.0 * 1e-15 * 2.0 * pi * 1e7 * hbar);
  CHECK(d1 == doctest::Approx(want).epsilon(1e-12));
  pf.mass = 0.0;
  CHECK_THROWS_AS(force_to_delta(pf), PreconditionError);
}

TEST_CASE("cat_state") {
  SUBCASE("alpha0 = 0 is the vacuum up to phase") {
    const FockVector c = cat_state(0.0, 20);
    CHECK(fidelity(c, FockVector::basis(0, 20)) > 1.0 - 1e-15);
    CHECK(std::abs(c[0] - cplx{1.0, 1.0} / std::sqrt(2.0)) < 1e-15);
  }
  SUBCASE("equals U_{pi/2} |alpha0>") {
    for (double a : {1.0, 2.0, 3.0}) {
      const std::size_t n = standard_truncation(a);
      const FockVector k = kerr_unitary(pi / 2.0, n) * coherent_state(a, n);
      CHECK(fidelity(cat_state(a, n), k) > 1.0 - 1e-10);
    }
  }
  SUBCASE("norm with the overlap term") {
    const FockVector c = cat_state(3.0, standard_truncation(3.0));
    CHECK(std::abs(c.norm_squared() - 1.0) < 1e-10);
    const FockVector s = cat_state(0.5, 30);
    CHECK(std::abs(s.norm_squared() - 1.0) < 1e-10);
  }
}

TEST_CASE("run_ideal and mean_X_ideal") {
  CHECK(std::abs(brute_mean(2.0, 0.0) - 2.0) < 1e-8);
  CHECK(std::abs(brute_mean(2.0, 0.05) - mean_X_ideal(2.0, 0.05)) < 1e-6);
  CHECK(std::abs(brute_mean(2.0, 0.0, true) - mean_X_ideal(2.0, pi / 16.0)) < 1e-6);
  CHECK(mean_X_ideal(1.7, 0.0) == 1.7);
  CHECK(mean_X_ideal(0.0, 0.1) == doctest::Approx(0.1 * std::exp(-0.02)).epsilon(1e-15));

  SUBCASE("oracle grid") {
    for (double a : {0.5, 1.0, 2.0, 3.0})
      for (double d : {0.0, 0.01, 0.05, 0.1}) {
        CAPTURE(a);
        CAPTURE(d);
        CHECK(std::abs(mean_X_ideal(a, d) - brute_mean(a, d)) < 1e-6);
      }
  }
  SUBCASE("imaginary part of alpha0 barely matters") {
    for (double im : {-0.3, 0.1, 0.3})
      for (double d : {0.0, 0.02, 0.05}) CHECK(std::abs(brute_mean({2.0, im}, d) - mean_X_ideal(2.0, d)) < 2e-2);
  }
  SUBCASE("offset needs alpha != 0") {
    ProtocolParams p;
    p.alpha0 = 0.0;
    p.apply_offset = true;
    CHECK_THROWS_AS(run_ideal(p), PreconditionError);
  }
}

TEST_CASE("slope at the offset point") {
  // d<X>/d delta at delta_0 = pi/(8 alpha), from the closed form and by brute
  // force. The closed-form derivative is -(4 a^2 + 1) e^{-2 d0^2} up to the
  // e^{-2 a^2} and d0 corrections.
  for (double a : {2.0, 2.5, 3.0}) {
    const double d0 = offset_delta(a), h = 1e-4;
    const double closed = (mean_X_ideal(a, d0 + h) - mean_X_ideal(a, d0 - h)) / (2.0 * h);
    const double fock = (brute_mean(a, d0 + h) - brute_mean(a, d0 - h)) / (2.0 * h);
    CHECK(std::abs(fock - closed) < 1e-5 * std::abs(closed));
    const double lead = -(4.0 * a * a + 1.0) * std::exp(-2.0 * d0 * d0);
    CHECK(std::abs(closed - lead) < 0.03 * std::abs(lead));
  }
  // What the coin sees: P(X > 0) - 1/2 has slope -2 a e^{-2 d0^2}, within 1.3%
  // of 2a[1 - 1/(2a)^2].
  for (double a : {2.0, 3.0}) {
    const double d0 = offset_delta(a), h = 1e-3;
    const double coin = (brute_p1(a, d0 + h) - brute_p1(a, d0 - h)) / (2.0 * h);
    CHECK(coin == doctest::Approx(-2.0 * a * std::exp(-2.0 * d0 * d0)).epsilon(1e-3));
    CHECK(std::abs(std::abs(coin) - coin_slope_signal(a, 1.0)) < 0.015 * coin_slope_signal(a, 1.0));
  }
}

TEST_CASE("coin_bias_ideal against the Fock pipeline") {
  for (double a : {2.0, 3.0})
    for (double d : {0.0, 0.01, 0.05, offset_delta(a), offset_delta(a) + 0.02}) {
      CAPTURE(a);
      CAPTURE(d);
      CHECK(std::abs(0.5 + coin_bias_ideal(a, d) - brute_p1(a, d)) < 1e-3);
    }
  // alpha = 2, delta = 0.01 on the coin: p1 - 1/2 about the offset point.
  const double d0 = offset_delta(2.0);
  CHECK(std::abs(coin_bias_ideal(2.0, d0 + 0.01)) == doctest::Approx(0.0367).epsilon(0.01));
}

TEST_CASE("mean_X_linearized") {
  CHECK(mean_X_linearized(2.0, 0.0) == 0.0);
  CHECK(mean_X_linearized(2.0, 0.01) == doctest::Approx(0.15).epsilon(1e-14));
  // Against the exact mean about the offset point: same magnitude to O((4 a d)^2).
  const double a = 2.0, d = 0.01, d0 = offset_delta(a);
  const double shifted = mean_X_ideal(a, d0 + d) - mean_X_ideal(a, d0);
  const double k = 4.0 * a * d;
  CHECK(std::abs(std::abs(shifted) - mean_X_linearized(a, d)) < 2.0 * k * k);
  {
    diag::WarningCapture cap;
    mean_X_linearized(2.0, 0.1);
    CHECK(cap.contains("linearisation"));
  }
  {
    diag::WarningCapture cap;
    mean_X_linearized(2.0, 0.01);
    CHECK(cap.messages().empty());
  }
}

TEST_CASE("coin_signal") {
  CHECK(coin_signal(50, 100).S == 0.0);
  CHECK(coin_signal(50, 100).sigma_S == doctest::Approx(0.05).epsilon(1e-15));
  CHECK(coin_signal(60, 100).S == doctest::Approx(0.1).epsilon(1e-14));
  CHECK_THROWS_AS(coin_signal(101, 100), std::invalid_argument);
  CHECK_THROWS_AS(coin_signal(-1, 100), std::invalid_argument);
  CHECK_THROWS_AS(coin_signal(0, 0), std::invalid_argument);
}

TEST_CASE("shot_errors") {
  PhysicalForce pf{1e-18, 1e-6, 1e-15, 2.0 * pi * 1e7};
  ShotErrors e = shot_errors(pf, 0.5);
  CHECK(e.quantum == e.classical);
  e = shot_errors(pf, 5.0);
  CHECK(e.quantum / e.classical == doctest::Approx(0.1).epsilon(1e-15));
  pf.force = std::sqrt(constants::kHbar * pf.mass * pf.omega / 2.0) / pf.duration;
  CHECK(shot_errors(pf, 1.0).classical == doctest::Approx(1.0).epsilon(1e-14));
  pf.force = 0.0;
  CHECK_THROWS_AS(shot_errors(pf, 1.0), PreconditionError);
}

TEST_CASE("phase law") {
  for (double a : {1.0, 2.0, 3.0})
    for (double d : {0.01, 0.05, 0.1}) {
      CAPTURE(a);
      CAPTURE(d);
      CHECK(std::abs(kicked_cat_phase(a, d, standard_truncation(a)) - 2.0 * d * a) < 1e-6);
    }
}
