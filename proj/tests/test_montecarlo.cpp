#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "kerrcat/diagnostics.hpp"
#include "kerrcat/montecarlo.hpp"
#include "kerrcat/protocol.hpp"

using namespace kerrcat;
using std::numbers::pi;

namespace {

LossRates reference_rates(double n_bar = 0.0) {
  LossRates r;
  r.kappa = 2.0 * pi * 100e3;
  r.gamma = 2.0 * pi * 10.0;
  r.g = 2.0 * pi * 500e3;
  r.omega_m = 2.0 * pi * 10e6;
  r.lambda_kerr = 2.0 * pi * 7e6;
  r.temp = temperature_for_occupation(r.omega_m, n_bar);
  return r;
}

// Rates with kappa tau = kt and xi chosen directly.
LossRates small_loss_rates(double kt, double xi) {
  LossRates r = reference_rates();
  const double tau = pi / (2.0 * r.lambda_kerr);
  r.kappa = kt / tau;
  r.gamma = 1e-4 / tau;
  r.g = coupling_for_survival(r.kappa, r.gamma, xi);
  return r;
}

ExperimentConfig ideal_cfg(double delta, std::int64_t shots, std::uint64_t seed = 7) {
  ExperimentConfig c;
  c.alpha = 2.0;
  c.delta = delta;
  c.apply_offset = true;
  c.shots = shots;
  c.seed = seed;
  return c;
}

}  // namespace

TEST_CASE("engine names") {
  CHECK(parse_engine("analytic") == Engine::kAnalytic);
  CHECK(parse_engine("brute-force") == Engine::kBruteForce);
  CHECK(engine_name(Engine::kBruteForce) == "brute-force");
  CHECK_THROWS_AS(parse_engine("fast"), std::invalid_argument);
}

TEST_CASE("sample_kick") {
  SUBCASE("zero variance returns the mean exactly") {
    SplitMix64 rng(1);
    for (int i = 0; i < 10; ++i) CHECK(sample_kick({0.123, 0.0}, rng) == 0.123);
  }
  SUBCASE("moments") {
    SplitMix64 rng(42);
    constexpr int n = 1000000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double x = sample_kick({0.0, 1.0}, rng);
      s += x;
      s2 += x * x;
    }
    const double mean = s / n, var = s2 / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 / std::sqrt(double(n)));
    CHECK(std::abs(var - 1.0) < 0.01);
  }
  SUBCASE("fixed seed gives the same sequence") {
    SplitMix64 a(stream_seed(9, 3)), b(stream_seed(9, 3));
    for (int i = 0; i < 100; ++i) CHECK(sample_kick({0.0, 2.0}, a) == sample_kick({0.0, 2.0}, b));
    CHECK(stream_seed(9, 3) != stream_seed(9, 4));
    CHECK(stream_seed(9, 3) != stream_seed(10, 3));
  }
}

TEST_CASE("clamp_probability") {
  CHECK(clamp_probability(0.3) == 0.3);
  {
    diag::WarningCapture cap;
    CHECK(clamp_probability(1.02) == 1.0);
    CHECK(clamp_probability(-0.01) == 0.0);
    CHECK(cap.messages().size() == 2);
  }
  CHECK_THROWS_AS(clamp_probability(1.2), ModelBreakdownError);
  CHECK_THROWS_AS(clamp_probability(-0.06), ModelBreakdownError);
}

TEST_CASE("outcome probability") {
  SUBCASE("offset point of the ideal coin is fair") {
    const CoinModel m(ideal_cfg(0.0, 1));
    CHECK(std::abs(m.p1(0.0) - 0.5) < 1e-3);
    CHECK(std::abs(0.5 + coin_bias_ideal(2.0, offset_delta(2.0)) - 0.5) < 1e-15);
  }
  SUBCASE("ideal alpha = 2, delta' = 0.01: analytic against brute force") {
    ExperimentConfig a = ideal_cfg(0.01, 1), b = a;
    b.engine = Engine::kBruteForce;
    const CoinModel ma(a), mb(b);
    CHECK(std::abs(ma.p1(0.01) - mb.p1(0.01)) < 1e-3);
    CHECK(std::abs(ma.p1(0.01) - 0.5) > 0.03);
  }
  SUBCASE("lossy coin stays inside [0, 1] for large kicks") {
    ExperimentConfig c = ideal_cfg(0.0, 1);
    c.lossy = true;
    c.rates = small_loss_rates(0.05, 0.95);
    const CoinModel m(c);
    diag::WarningCapture cap;
    for (double d : {-1.0, -0.3, 0.3, 1.0}) {
      const double p = m.p1(d);
      CHECK(p >= 0.0);
      CHECK(p <= 1.0);
    }
    CHECK(cap.messages().empty());
  }
  SUBCASE("brute force needs a desk-scale truncation") {
    ExperimentConfig c = ideal_cfg(0.0, 1);
    c.engine = Engine::kBruteForce;
    c.truncation = kMaxBruteTruncation + 1;
    CHECK_THROWS_AS(c.validate(), PreconditionError);
  }
}

TEST_CASE("closed-form coin probability against the Fock pipeline") {
  for (double a : {0.5, 1.0, 2.0, 3.0})
    for (double d : {0.0, 0.03, 0.2}) {
      ProtocolParams p;
      p.alpha0 = a;
      p.delta = d;
      const double fock = quadrature_distribution(run_ideal(p)).prob_X_positive;
      CHECK(std::abs(coin_probability_closed_form(a, d, 1.0, 1.0) - fock) < 1e-6);
    }
  LossRates r = small_loss_rates(0.05, 0.9);
  const LossParams lp = LossParams::from_rates(r);
  for (double a : {1.0, 2.0})
    for (double d : {0.0, 0.05, 0.3}) {
      const double fock = quadrature_distribution(lossy_final_state(a, d, lp, 44)).prob_X_positive;
      CHECK(std::abs(coin_probability_closed_form(a, -d, lp.xi(), lp.eta()) - fock) < 1e-6);
    }
}

TEST_CASE("engine agreement") {
  for (double kt : {0.0, 0.05, 0.1})
    for (double a : {1.0, 1.5, 2.0})
      for (double d : {0.0, 0.02, 0.05}) {
        ExperimentConfig c = ideal_cfg(d, 1);
        c.alpha = a;
        if (kt > 0.0) {
          c.lossy = true;
          c.rates = small_loss_rates(kt, 0.9);
        }
        ExperimentConfig b = c;
        b.engine = Engine::kBruteForce;
        const CoinModel ma(c), mb(b);
        CAPTURE(kt);
        CAPTURE(a);
        CAPTURE(d);
        CHECK(std::abs(ma.p1(d) - mb.p1(d)) < 1e-2);
      }
}

TEST_CASE("run_experiment") {
  SUBCASE("signal estimate bookkeeping") {
    const SignalEstimate e = run_experiment(ideal_cfg(0.01, 1000));
    CHECK(e.shots == 1000);
    CHECK(e.S == doctest::Approx(double(e.m_counts) / 1000.0 - 0.5).epsilon(1e-15));
    CHECK(e.sigma_S == doctest::Approx(1.0 / std::sqrt(4000.0)).epsilon(1e-15));
    CHECK(e.seed == 7);
    CHECK(!e.params_digest.empty());
  }
  SUBCASE("alpha = 2, delta = 0.01, 1e5 shots") {
    const SignalEstimate e = run_experiment(ideal_cfg(0.01, 100000));
    const double predicted = 2.0 * 2.0 * (1.0 - 1.0 / 16.0) * 0.01;
    CHECK(std::abs(std::abs(e.S) - predicted) < 3.0 * e.sigma_S);
  }
  SUBCASE("no force is a fair coin") {
    const SignalEstimate e = run_experiment(ideal_cfg(0.0, 100000, 3));
    CHECK(std::abs(e.S) < 3.0 * e.sigma_S);
  }
  SUBCASE("determinism across worker counts") {
    ExperimentConfig c = ideal_cfg(0.02, 50000);
    c.lossy = true;
    c.rates = reference_rates(50.0);
    c.workers = 1;
    const SignalEstimate one = run_experiment(c);
    c.workers = 3;
    const SignalEstimate three = run_experiment(c);
    c.workers = 8;
    CHECK(one == three);
    CHECK(one == run_experiment(c));
    c.seed = 8;
    CHECK(!(one == run_experiment(c)));
  }
  SUBCASE("full dephasing forces S to zero") {
    for (double d : {0.0, 0.05, 0.3}) {
      ExperimentConfig c = ideal_cfg(d, 100000, 11);
      c.emission_override = 1.0;
      const SignalEstimate e = run_experiment(c);
      CHECK(std::abs(e.S) < 3.0 * e.sigma_S);
      CHECK(CoinModel(c).expected_signal() == 0.0);
    }
  }
  SUBCASE("coverage of S +/- 2 sigma") {
    ExperimentConfig c = ideal_cfg(0.01, 10000);
    c.lossy = true;
    c.rates = reference_rates(50.0);
    const CoinModel model(c);
    const double truth = model.expected_signal();
    int hits = 0;
    constexpr int kReplicates = 200;
    for (int r = 0; r < kReplicates; ++r) {
      c.seed = stream_seed(2024, std::uint64_t(r));
      const SignalEstimate e = run_experiment(c, model);
      if (std::abs(e.S - truth) <= 2.0 * e.sigma_S) ++hits;
    }
    const double coverage = double(hits) / kReplicates;
    CHECK(coverage >= 0.91);
    CHECK(coverage <= 0.99);
  }
}

TEST_CASE("expected_signal") {
  SUBCASE("ideal closed form") {
    const CoinModel m(ideal_cfg(0.01, 1));
    CHECK(m.expected_signal() == m.p1_analytic(0.01) - 0.5);
    CHECK(std::abs(m.expected_signal() - coin_bias_ideal(2.0, offset_delta(2.0) + 0.01)) < 1e-4);
  }
  SUBCASE("Gaussian average matches direct quadrature") {
    ExperimentConfig c = ideal_cfg(0.01, 1);
    c.lossy = true;
    c.rates = reference_rates(50.0);
    const CoinModel m(c);
    const double mu = m.kick().mean, s = std::sqrt(m.kick().variance);
    REQUIRE(s > 0.0);
    double acc = 0.0, wsum = 0.0;
    for (int i = -4000; i <= 4000; ++i) {
      const double z = i / 500.0;
      const double w = std::exp(-0.5 * z * z);
      acc += w * (m.p1_analytic(mu + s * z) - 0.5);
      wsum += w;
    }
    CHECK(m.expected_signal() ==
          doctest::Approx((1.0 - m.emission_probability()) * acc / wsum).epsilon(1e-9));
  }
}

TEST_CASE("config_digest") {
  ExperimentConfig a = ideal_cfg(0.01, 100);
  ExperimentConfig b = a;
  b.seed = 99;
  b.workers = 4;
  CHECK(config_digest(a) == config_digest(b));
  b.delta = 0.02;
  CHECK(config_digest(a) != config_digest(b));
  b = a;
  b.engine = Engine::kBruteForce;
  CHECK(config_digest(a) != config_digest(b));
}

TEST_CASE("sweep") {
  SUBCASE("axis names") {
    for (const char* n : {"alpha", "delta", "kappa", "gamma", "temp", "shots", "lambda_kerr", "g"})
      CHECK(axis_name(parse_axis(n)) == n);
    CHECK_THROWS_AS(parse_axis("beta"), std::invalid_argument);
  }
  SUBCASE("rate axes need the lossy model") {
    CHECK_THROWS_AS(with_axis(ideal_cfg(0.0, 1), SweepAxis::kKappa, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(with_axis(ideal_cfg(0.0, 1), SweepAxis::kShots, 2.5), std::invalid_argument);
  }
  SUBCASE("delta = 0 gives no signal") {
    const auto rows = sweep(SweepAxis::kDelta, {0.0}, ideal_cfg(0.0, 100000));
    REQUIRE(rows.size() == 1);
    CHECK(std::abs(rows[0].estimate.S) < 3.0 * rows[0].estimate.sigma_S);
  }
  SUBCASE("cells use derived seeds") {
    const auto rows = sweep(SweepAxis::kAlpha, {1.0, 2.0}, ideal_cfg(0.005, 100));
    CHECK(rows[0].estimate.seed == stream_seed(7, 0));
    CHECK(rows[1].estimate.seed == stream_seed(7, 1));
    CHECK(rows[1].value == 2.0);
  }
  SUBCASE("kappa reduces the signal by about 1 - P") {
    // Reference rates against the same transfer with emission switched off:
    // same xi, eta and kick.
    ExperimentConfig base = ideal_cfg(0.01, 400000, 5);
    base.alpha = 1.5;
    base.lossy = true;
    base.rates = reference_rates();
    const CoinModel lossy(base);
    const double p = lossy.emission_probability();
    CHECK(p == doctest::Approx(0.101).epsilon(0.01));

    ExperimentConfig no_emission = base;
    no_emission.emission_override = 0.0;
    const SignalEstimate with = run_experiment(base);
    const SignalEstimate without = run_experiment(no_emission);
    const double ratio = with.S / without.S;
    const double sigma_ratio =
        std::abs(ratio) * std::hypot(with.sigma_S / with.S, without.sigma_S / without.S);
    CHECK(std::abs(ratio - (1.0 - p)) < 3.0 * sigma_ratio);

    const auto rows = sweep(SweepAxis::kKappa, {base.rates.kappa}, base);
    CHECK(rows[0].P_emission == doctest::Approx(p).epsilon(1e-15));
    CHECK(rows[0].S_analytic == doctest::Approx(lossy.expected_signal()).epsilon(1e-15));
  }
}
