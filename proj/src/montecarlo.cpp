#include "kerrcat/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <charconv>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <sstream>
#include <thread>

#include "kerrcat/diagnostics.hpp"
#include "kerrcat/errors.hpp"
#include "kerrcat/protocol.hpp"

namespace kerrcat {
namespace {

constexpr std::int64_t kBlockShots = 8192;
constexpr std::size_t kTableNodes = 97;
constexpr double kTableSigmas = 6.0;

double unit_uniform(SplitMix64& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

void append(std::string& out, double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
  out.append(buf, r.ptr);
  out.push_back(';');
}

void append(std::string& out, std::int64_t v) {
  out += std::to_string(v);
  out.push_back(';');
}

// A state written as sum_k c_k |g_k> over coherent states.
struct CoherentTerm {
  cplx c;
  cplx g;
};
using Expansion = std::vector<CoherentTerm>;

// exp(-i s (pi/2) n^2) |g> = e^{-i s pi/4} (|g> + i s |-g>) / sqrt(2)
Expansion kerr_quarter(const Expansion& in, double s) {
  const cplx pre = std::polar(1.0 / std::sqrt(2.0), -s * std::numbers::pi / 4.0);
  Expansion out;
  for (const CoherentTerm& t : in) {
    out.push_back({pre * t.c, t.g});
    out.push_back({pre * t.c * cplx{0.0, s}, -t.g});
  }
  return out;
}

// r^{n} |g> = e^{-|g|^2 (1 - r^2) / 2} |r g>
void damp(Expansion& e, double r) {
  for (CoherentTerm& t : e) {
    t.c *= std::exp(-0.5 * std::norm(t.g) * (1.0 - r * r));
    t.g *= r;
  }
}

// e^{-i d x~} |g> = e^{-i d Re g} |g - i d>
void kick(Expansion& e, double d) {
  for (CoherentTerm& t : e) {
    t.c *= std::polar(1.0, -d * t.g.real());
    t.g -= cplx{0.0, d};
  }
}

// Quadrature density |<x|psi>|^2 with <x|g> = (2/pi)^{1/4} exp(-(x - Re g)^2 + 2i Im g x - i Re g Im g).
double expansion_density(const Expansion& e, double x) {
  cplx psi{};
  for (const CoherentTerm& t : e) {
    const double a = t.g.real(), b = t.g.imag();
    psi += t.c * std::exp(cplx{-(x - a) * (x - a), 2.0 * b * x - a * b});
  }
  return std::sqrt(2.0 / std::numbers::pi) * std::norm(psi);
}

double expansion_p1(const Expansion& e) {
  using boost::math::quadrature::gauss_kronrod;
  double reach = 0.0;
  for (const CoherentTerm& t : e) reach = std::max(reach, std::abs(t.g.real()));
  reach += 8.0;
  const auto f = [&](double x) { return expansion_density(e, x); };
  const double plus = gauss_kronrod<double, 61>::integrate(f, 0.0, reach, 15, 1e-12);
  const double minus = gauss_kronrod<double, 61>::integrate(f, -reach, 0.0, 15, 1e-12);
  return plus / (plus + minus);
}

}  // namespace

double coin_probability_closed_form(double alpha, double kick_size, double xi, double eta) {
  Expansion e{{cplx{1.0}, cplx{alpha}}};
  damp(e, eta);
  e = kerr_quarter(e, 1.0);
  damp(e, xi);
  kick(e, kick_size);
  damp(e, eta);
  e = kerr_quarter(e, -1.0);
  return expansion_p1(e);
}

std::string_view engine_name(Engine e) { return e == Engine::kAnalytic ? "analytic" : "brute-force"; }

Engine parse_engine(std::string_view name) {
  if (name == "analytic") return Engine::kAnalytic;
  if (name == "brute-force") return Engine::kBruteForce;
  throw std::invalid_argument("unknown engine '" + std::string(name) + "' (expected analytic|brute-force)");
}

ForceFunction ForceSpec::function(double omega_m, double t_swap) const {
  switch (kind) {
    case ForceKind::kNone:
      return {};
    case ForceKind::kResonant:
      return [f0 = amplitude, w = omega_m, ph = phase](double s) { return f0 * std::cos(w * s + ph); };
    case ForceKind::kConstant:
      return [f0 = amplitude](double) { return f0; };
    case ForceKind::kSamples: {
      if (samples.size() < 2) throw std::invalid_argument("force samples need at least two points");
      const double h = t_swap / double(samples.size() - 1);
      return [s = samples, h](double t) {
        const double u = std::clamp(t / h, 0.0, double(s.size() - 1));
        const std::size_t i = std::min(std::size_t(u), s.size() - 2);
        const double frac = u - double(i);
        return s[i] + frac * (s[i + 1] - s[i]);
      };
    }
  }
  return {};
}

void ExperimentConfig::validate() const {
  if (!std::isfinite(alpha) || !(alpha > 0.0)) throw PreconditionError("alpha must be positive");
  if (!std::isfinite(delta)) throw PreconditionError("delta must be finite");
  if (shots < 1) throw std::invalid_argument("shots must be >= 1");
  if (emission_override && !(*emission_override >= 0.0 && *emission_override <= 1.0))
    throw PreconditionError("emission probability must be in [0, 1]");
  if (!lossy && force.kind != ForceKind::kNone)
    throw PreconditionError("a transfer force needs the lossy transfer model ([loss] enabled)");
  if (!std::isfinite(force.amplitude) || !std::isfinite(force.phase))
    throw PreconditionError("force parameters must be finite");
  if (truncation == 1) throw std::invalid_argument("truncation must be >= 2");
  if (engine == Engine::kBruteForce && truncation > kMaxBruteTruncation)
    throw PreconditionError("brute-force engine: truncation above " + std::to_string(kMaxBruteTruncation));
  if (lossy) (void)LossParams::from_rates(rates);
}

SplitMix64::result_type SplitMix64::operator()() {
  std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t index) {
  SplitMix64 a(master);
  SplitMix64 b(a() ^ (index * 0xD1B54A32D192ED03ULL));
  return b();
}

double sample_kick(const KickDistribution& kick, SplitMix64& rng) {
  if (kick.variance == 0.0) return kick.mean;
  return std::normal_distribution<double>(kick.mean, std::sqrt(kick.variance))(rng);
}

double clamp_probability(double p) {
  if (p >= 0.0 && p <= 1.0) return p;
  std::ostringstream os;
  os << "coin probability " << p << " outside [0, 1]";
  if (!(p > -0.05 && p < 1.05)) throw ModelBreakdownError(os.str() + ": two-peak model breakdown");
  diag::warn(os.str() + ", clamped");
  return std::clamp(p, 0.0, 1.0);
}

// --- CoinModel -------------------------------------------------------------------

CoinModel::CoinModel(const ExperimentConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.lossy) {
    lp_.emplace(LossParams::from_rates(cfg_.rates));
    const KickStats ks = momentum_kick_stats(cfg_.force.function(lp_->omega_m(), lp_->t_swap()), *lp_);
    kick_ = {cfg_.delta + ks.mean, ks.variance};
    offset_ = cfg_.apply_offset ? lossy_offset_delta(cfg_.alpha, *lp_) : 0.0;
    peak_ = lp_->xi() * lp_->eta() * lp_->eta() * cfg_.alpha;
    p_emit_ = cfg_.emission_override ? *cfg_.emission_override : kerrcat::emission_probability(cfg_.alpha, *lp_);
  } else {
    kick_ = {cfg_.delta, 0.0};
    offset_ = cfg_.apply_offset ? offset_delta(cfg_.alpha) : 0.0;
    peak_ = cfg_.alpha;
    p_emit_ = cfg_.emission_override.value_or(0.0);
  }
  if (p_emit_ > 1.0) throw PreconditionError("emission probability exceeds 1");

  if (kick_.variance == 0.0) {
    fixed_ = p1_engine(kick_.mean);
    return;
  }
  const double sigma = std::sqrt(kick_.variance);
  table_lo_ = kick_.mean - kTableSigmas * sigma;
  table_hi_ = kick_.mean + kTableSigmas * sigma;
  const double step = (table_hi_ - table_lo_) / double(kTableNodes - 1);
  std::vector<double> nodes(kTableNodes);
  for (std::size_t i = 0; i < kTableNodes; ++i) nodes[i] = p1_engine(table_lo_ + step * double(i));
  table_.emplace(nodes.begin(), nodes.end(), table_lo_, step);
}

double CoinModel::p1_analytic(double delta_prime) const {
  const double x = delta_prime + offset_;
  // The lossy transfer displaces by +i delta', a kick of -delta'.
  if (lp_) return coin_probability_closed_form(cfg_.alpha, -x, lp_->xi(), lp_->eta());
  return coin_probability_closed_form(cfg_.alpha, x, 1.0, 1.0);
}

double CoinModel::p1_brute(double delta_prime) const {
  const double x = delta_prime + offset_;
  const std::size_t n = cfg_.truncation != 0 ? cfg_.truncation : standard_truncation(cfg_.alpha);
  FockVector out;
  if (lp_) {
    out = lossy_final_state(cfg_.alpha, x, *lp_, n);
  } else {
    ProtocolParams p;
    p.alpha0 = cfg_.alpha;
    p.delta = x;
    p.truncation = n;
    out = run_ideal(p);
  }
  return quadrature_distribution(out).prob_X_positive;
}

double CoinModel::p1_engine(double delta_prime) const {
  return cfg_.engine == Engine::kAnalytic ? p1_analytic(delta_prime) : p1_brute(delta_prime);
}

double CoinModel::p1(double delta_prime) const {
  if (!table_) return clamp_probability(kick_.variance == 0.0 && delta_prime == kick_.mean ? fixed_
                                                                                           : p1_engine(delta_prime));
  if (delta_prime < table_lo_ || delta_prime > table_hi_) return clamp_probability(p1_engine(delta_prime));
  return clamp_probability((*table_)(delta_prime));
}

double CoinModel::expected_signal() const {
  double bias;
  if (kick_.variance == 0.0) {
    bias = p1_analytic(kick_.mean) - 0.5;
  } else {
    using boost::math::quadrature::gauss_kronrod;
    const double sigma = std::sqrt(kick_.variance);
    const auto f = [&](double z) {
      return std::exp(-0.5 * z * z) * (p1_analytic(kick_.mean + sigma * z) - 0.5);
    };
    bias = gauss_kronrod<double, 61>::integrate(f, -kTableSigmas - 2.0, kTableSigmas + 2.0, 10, 1e-10) /
           std::sqrt(2.0 * std::numbers::pi);
  }
  return (1.0 - p_emit_) * bias;
}

// --- Experiments -------------------------------------------------------------------

std::string config_digest(const ExperimentConfig& cfg) {
  std::string s;
  append(s, cfg.alpha);
  append(s, cfg.delta);
  append(s, std::int64_t(cfg.apply_offset));
  append(s, std::int64_t(cfg.lossy));
  if (cfg.lossy) {
    for (double v : {cfg.rates.kappa, cfg.rates.gamma, cfg.rates.g, cfg.rates.omega_m, cfg.rates.lambda_kerr,
                     cfg.rates.temp})
      append(s, v);
    append(s, std::int64_t(cfg.force.kind));
    append(s, cfg.force.amplitude);
    append(s, cfg.force.phase);
    for (double v : cfg.force.samples) append(s, v);
  }
  append(s, cfg.emission_override ? *cfg.emission_override : -1.0);
  append(s, cfg.shots);
  append(s, std::int64_t(cfg.engine));
  append(s, std::int64_t(cfg.truncation));

  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  const auto r = std::to_chars(buf, buf + sizeof buf, h, 16);
  std::string hex(buf, r.ptr);
  return std::string(16 - hex.size(), '0') + hex;
}

SignalEstimate run_experiment(const ExperimentConfig& cfg, const CoinModel& model) {
  const std::int64_t blocks = (cfg.shots + kBlockShots - 1) / kBlockShots;
  unsigned workers = cfg.workers != 0 ? cfg.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = unsigned(std::min<std::int64_t>(workers, blocks));

  std::atomic<std::int64_t> next_block{0};
  std::atomic<std::int64_t> total{0};
  const double p_emit = model.emission_probability();

  const auto work = [&] {
    std::int64_t local = 0;
    for (std::int64_t b = next_block++; b < blocks; b = next_block++) {
      const std::int64_t end = std::min(cfg.shots, (b + 1) * kBlockShots);
      for (std::int64_t i = b * kBlockShots; i < end; ++i) {
        SplitMix64 rng(stream_seed(cfg.seed, std::uint64_t(i)));
        const double u_emit = unit_uniform(rng);
        const double u_coin = unit_uniform(rng);
        if (u_emit < p_emit) {
          local += u_coin < 0.5;
        } else {
          const double d = sample_kick(model.kick(), rng);
          local += u_coin < model.p1(d);
        }
      }
    }
    total += local;
  };

  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mu;
  const auto guarded = [&] {
    try {
      work();
    } catch (...) {
      std::lock_guard lock(failure_mu);
      if (!failure) failure = std::current_exception();
      next_block = blocks;
    }
  };
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(guarded);
  guarded();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);

  SignalEstimate est = coin_signal(total.load(), cfg.shots);
  est.seed = cfg.seed;
  est.params_digest = config_digest(cfg);
  return est;
}

SignalEstimate run_experiment(const ExperimentConfig& cfg) { return run_experiment(cfg, CoinModel(cfg)); }

// --- Sweeps -------------------------------------------------------------------

namespace {
constexpr std::pair<SweepAxis, std::string_view> kAxisNames[] = {
    {SweepAxis::kAlpha, "alpha"}, {SweepAxis::kDelta, "delta"},   {SweepAxis::kKappa, "kappa"},
    {SweepAxis::kGamma, "gamma"}, {SweepAxis::kTemp, "temp"},     {SweepAxis::kShots, "shots"},
    {SweepAxis::kLambdaKerr, "lambda_kerr"}, {SweepAxis::kG, "g"},
};
}  // namespace

SweepAxis parse_axis(std::string_view name) {
  for (const auto& [axis, n] : kAxisNames)
    if (n == name) return axis;
  throw std::invalid_argument("invalid sweep axis '" + std::string(name) +
                              "' (expected alpha|delta|kappa|gamma|temp|shots|lambda_kerr|g)");
}

std::string_view axis_name(SweepAxis axis) {
  for (const auto& [a, n] : kAxisNames)
    if (a == axis) return n;
  return "?";
}

ExperimentConfig with_axis(const ExperimentConfig& base, SweepAxis axis, double value) {
  ExperimentConfig c = base;
  const auto need_loss = [&] {
    if (!c.lossy)
      throw std::invalid_argument("sweep axis '" + std::string(axis_name(axis)) + "' needs the lossy model");
  };
  switch (axis) {
    case SweepAxis::kAlpha: c.alpha = value; break;
    case SweepAxis::kDelta: c.delta = value; break;
    case SweepAxis::kKappa: need_loss(); c.rates.kappa = value; break;
    case SweepAxis::kGamma: need_loss(); c.rates.gamma = value; break;
    case SweepAxis::kTemp: need_loss(); c.rates.temp = value; break;
    case SweepAxis::kLambdaKerr: need_loss(); c.rates.lambda_kerr = value; break;
    case SweepAxis::kG: need_loss(); c.rates.g = value; break;
    case SweepAxis::kShots:
      if (!(value >= 1.0) || value != std::floor(value) || value > 9.0e18)
        throw std::invalid_argument("shots axis values must be positive integers");
      c.shots = std::int64_t(value);
      break;
  }
  return c;
}

std::vector<SweepRow> sweep(SweepAxis axis, const std::vector<double>& values, const ExperimentConfig& base) {
  if (values.empty()) throw std::invalid_argument("sweep: no values");
  std::vector<SweepRow> rows;
  rows.reserve(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) {
    ExperimentConfig cell = with_axis(base, axis, values[i]);
    cell.seed = stream_seed(base.seed, i);
    const CoinModel model(cell);
    SweepRow row;
    row.value = values[i];
    row.estimate = run_experiment(cell, model);
    row.S_analytic = model.expected_signal();
    row.P_emission = model.emission_probability();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace kerrcat
