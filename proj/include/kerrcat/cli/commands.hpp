#pragma once
// Subcommand implementations. Each returns its table; the entry point maps
// outcomes and exceptions to exit codes.

#include <optional>
#include <string>
#include <vector>

#include "kerrcat/cli/results.hpp"
#include "kerrcat/cli/scenario.hpp"

namespace kerrcat::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitValidationFailed = 1,
  kExitUsage = 2,
  kExitPrecondition = 3,
};

struct ValidateReport {
  ResultTable table{{"check", "analytic", "numeric", "abs_diff", "tolerance", "pass"}};
  bool all_pass = true;
};

// Analytic-vs-Fock checks at the scenario's alpha and delta. A tolerance
// override replaces every row's tolerance.
ValidateReport cmd_validate(const Scenario& s, std::optional<double> tolerance = std::nullopt);

// Columns: axis_value, m_counts, M, S, sigma_S, S_analytic, P_emission, seed.
// Rate axes take Hz, temp takes K, like the scenario file.
ResultTable cmd_sweep(const Scenario& s, std::string_view axis, const std::vector<double>& values);

// One experiment; sweep columns plus params_digest.
ResultTable cmd_shots(const Scenario& s);

// Reference parameter set and derived quantities: name, value, unit.
ResultTable cmd_params();

// The reference scenario behind cmd_params (loss section in Hz).
LossSection reference_loss_section();

}  // namespace kerrcat::cli
