#pragma once
// Shot-level Monte Carlo of the coin estimate.
//
// Each shot draws a momentum kick delta', replaces the outcome by a fair coin
// with the emission probability P, and otherwise draws X > 0 with probability
// p1(delta'). Shot i uses its own RNG stream derived from (seed, i), so results
// do not depend on the number of workers.

#include <boost/math/interpolators/cardinal_cubic_b_spline.hpp>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "kerrcat/loss.hpp"
#include "kerrcat/signal.hpp"

namespace kerrcat {

enum class Engine { kAnalytic, kBruteForce };

std::string_view engine_name(Engine e);
// "analytic" | "brute-force"; throws std::invalid_argument otherwise.
Engine parse_engine(std::string_view name);

enum class ForceKind { kNone, kResonant, kConstant, kSamples };

// Scaled force f(s) acting during the transfer, s in [0, T_swap].
struct ForceSpec {
  ForceKind kind = ForceKind::kNone;
  double amplitude = 0.0;       // f0, 1/s
  double phase = 0.0;           // resonant: f0 cos(w s + phase)
  std::vector<double> samples;  // kSamples: f on a uniform grid over [0, T_swap]

  ForceFunction function(double omega_m, double t_swap) const;
};

inline constexpr std::size_t kMaxBruteTruncation = 200;

struct ExperimentConfig {
  double alpha = 2.0;
  // Kick added directly to delta' (the whole kick when lossy is false).
  double delta = 0.0;
  bool apply_offset = false;

  bool lossy = false;
  LossRates rates;
  ForceSpec force;
  // Replaces P = pi kappa alpha^2 / lambda when set.
  std::optional<double> emission_override;

  std::int64_t shots = 10000;
  std::uint64_t seed = 1;
  Engine engine = Engine::kAnalytic;
  std::size_t truncation = 0;  // 0: standard_truncation(alpha)
  unsigned workers = 0;        // 0: hardware concurrency

  // Throws PreconditionError / std::invalid_argument.
  void validate() const;
};

// SplitMix64, used as a counter-based stream: state = mix(seed, shot).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;
  explicit SplitMix64(std::uint64_t state) : state_(state) {}
  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()();

 private:
  std::uint64_t state_;
};

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index);

struct KickDistribution {
  double mean = 0.0;
  double variance = 0.0;
};

// Returns mean exactly when variance == 0.
double sample_kick(const KickDistribution& kick, SplitMix64& rng);

// Clamps to [0, 1]. Warns when p leaves [0, 1]; throws ModelBreakdownError
// when it leaves by more than 0.05.
double clamp_probability(double p);

// Everything a shot needs, precomputed once per experiment.
class CoinModel {
 public:
  explicit CoinModel(const ExperimentConfig& cfg);

  const KickDistribution& kick() const { return kick_; }
  double emission_probability() const { return p_emit_; }
  // Constant added to delta' before the pipeline (the offset force).
  double offset() const { return offset_; }
  // Peak position of the two-peak output (alpha, or xi eta^2 alpha).
  double peak() const { return peak_; }

  // P(X > 0) for a given delta' (offset not included), clamped. Noisy kicks
  // read a cubic table over mean +/- 6 sigma.
  double p1(double delta_prime) const;
  // Closed-form value from the coherent-state expansion.
  double p1_analytic(double delta_prime) const;
  // Expected S = (1 - P)(E[p1_analytic] - 1/2) over the kick distribution.
  double expected_signal() const;

 private:
  double p1_brute(double delta_prime) const;
  double p1_engine(double delta_prime) const;

  ExperimentConfig cfg_;
  std::optional<LossParams> lp_;
  KickDistribution kick_;
  double p_emit_ = 0.0;
  double offset_ = 0.0;
  double peak_ = 0.0;
  double fixed_ = 0.5;
  std::optional<boost::math::interpolators::cardinal_cubic_b_spline<double>> table_;
  double table_lo_ = 0.0, table_hi_ = 0.0;
};

// P(X > 0) after create / transfer / undo with no emission, from the exact
// expansion of the output in four coherent states (no Fock truncation).
// The Kerr stages damp amplitudes by eta, the transfer by xi followed by the
// kick exp(-i kick x~). xi = eta = 1 is the ideal pipeline.
double coin_probability_closed_form(double alpha, double kick, double xi, double eta);

// FNV-1a over a canonical 17-digit rendering of the fields that change the
// outcome distribution (seed and worker count excluded).
std::string config_digest(const ExperimentConfig& cfg);

SignalEstimate run_experiment(const ExperimentConfig& cfg);
// Same, reusing a model built from cfg.
SignalEstimate run_experiment(const ExperimentConfig& cfg, const CoinModel& model);

enum class SweepAxis { kAlpha, kDelta, kKappa, kGamma, kTemp, kShots, kLambdaKerr, kG };

SweepAxis parse_axis(std::string_view name);
std::string_view axis_name(SweepAxis axis);
// Copy of base with the axis set to value (rates in rad/s, temp in K).
ExperimentConfig with_axis(const ExperimentConfig& base, SweepAxis axis, double value);

struct SweepRow {
  double value = 0.0;
  SignalEstimate estimate;
  double S_analytic = 0.0;
  double P_emission = 0.0;
};

// Cell i runs with seed stream_seed(base.seed, i).
std::vector<SweepRow> sweep(SweepAxis axis, const std::vector<double>& values, const ExperimentConfig& base);

}  // namespace kerrcat
