#pragma once
// Scenario files: INI with sections [protocol], [loss], [force], [run].
//
//   [protocol] alpha0, delta, apply_offset (true|false), truncation
//   [loss]     kappa, gamma, g, omega_m, lambda_kerr   ordinary frequency, Hz
//              temp                                    K
//              emission_probability                    optional override of P
//   [force]    kind (none|resonant|constant|samples), amplitude (1/s),
//              phase (rad), samples (comma separated, 1/s)
//   [run]      shots, seed, engine (analytic|brute-force), workers
//
// The presence of [loss] selects the lossy model. Values are kept in file
// units; to_config converts Hz to rad/s.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "kerrcat/montecarlo.hpp"

namespace kerrcat::cli {

// Malformed scenario: syntax, unknown key, bad value. Exit status 2.
class ScenarioError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LossSection {
  double kappa = 0.0;        // Hz
  double gamma = 0.0;        // Hz
  double g = 0.0;            // Hz
  double omega_m = 0.0;      // Hz
  double lambda_kerr = 0.0;  // Hz
  double temp = 0.0;         // K
  std::optional<double> emission_probability;

  friend bool operator==(const LossSection&, const LossSection&) = default;
};

struct ForceSection {
  ForceKind kind = ForceKind::kNone;
  double amplitude = 0.0;
  double phase = 0.0;
  std::vector<double> samples;

  friend bool operator==(const ForceSection&, const ForceSection&) = default;
};

struct Scenario {
  double alpha0 = 2.0;
  double delta = 0.0;
  bool apply_offset = false;
  std::size_t truncation = 0;

  std::optional<LossSection> loss;
  ForceSection force;

  std::int64_t shots = 10000;
  std::uint64_t seed = 1;
  Engine engine = Engine::kAnalytic;
  unsigned workers = 0;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

// `source` names the input in error messages.
Scenario parse_scenario(std::istream& in, const std::string& source = "<scenario>");
Scenario parse_scenario_string(const std::string& text);
Scenario load_scenario(const std::string& path);

// Canonical INI text; parse_scenario(serialize_scenario(s)) == s.
std::string serialize_scenario(const Scenario& s);

ExperimentConfig to_config(const Scenario& s);

// 2 pi f
double hz_to_rad(double hz);

std::string_view force_kind_name(ForceKind k);

}  // namespace kerrcat::cli
