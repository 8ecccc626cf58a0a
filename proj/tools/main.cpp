// kerrcat: validate | sweep | shots | params
//
// Exit status: 0 ok, 1 validation failure, 2 usage or parse error,
// 3 physical precondition (overdamped transfer, truncation too small, ...).

#include <CLI11.hpp>
#include <charconv>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "kerrcat/cli/commands.hpp"
#include "kerrcat/errors.hpp"

namespace {

using namespace kerrcat;
using namespace kerrcat::cli;

std::vector<double> parse_values(const std::string& text) {
  std::vector<double> out;
  std::string_view rest = text;
  while (!rest.empty()) {
    const auto comma = rest.find(',');
    std::string_view item = rest.substr(0, comma);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    double v = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || r.ec != std::errc{} || r.ptr != item.data() + item.size())
      throw std::invalid_argument("--values: cannot parse '" + std::string(item) + "'");
    out.push_back(v);
    if (comma == std::string_view::npos) break;
    rest = rest.substr(comma + 1);
  }
  return out;
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> shots;
  std::string out;
  std::string format = "csv";
  std::optional<std::string> engine;
  std::optional<double> tolerance;
  std::string axis;
  std::string values;
};

Scenario load(const Options& o) {
  Scenario s = o.config.empty() ? Scenario{} : load_scenario(o.config);
  if (o.seed) s.seed = *o.seed;
  if (o.shots) {
    if (*o.shots < 1) throw std::invalid_argument("--shots must be >= 1");
    s.shots = *o.shots;
  }
  if (o.engine) s.engine = parse_engine(*o.engine);
  return s;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty())
    std::cout << text;
  else
    write_text_file(o.out, text);
}

int run(int argc, char** argv) {
  CLI::App app{"Cat-state force measurement simulator"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--config", o.config, "Scenario file (INI)");
  app.add_option("--seed", o.seed, "Master RNG seed");
  app.add_option("--shots", o.shots, "Shots per experiment");
  app.add_option("--out", o.out, "Output file (default: stdout)");
  app.add_option("--format", o.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--engine", o.engine, "analytic|brute-force")->check(CLI::IsMember({"analytic", "brute-force"}));
  app.add_option("--tolerance", o.tolerance, "Override every validate tolerance");

  auto* validate = app.add_subcommand("validate", "Closed forms against Fock-space numerics");
  auto* sweep = app.add_subcommand("sweep", "Monte Carlo sweep over one parameter");
  sweep->add_option("--axis", o.axis, "alpha|delta|kappa|gamma|temp|shots|lambda_kerr|g")->required();
  sweep->add_option("--values", o.values, "Comma-separated values (rates in Hz, temp in K)")->required();
  auto* shots = app.add_subcommand("shots", "One Monte Carlo experiment");
  auto* params = app.add_subcommand("params", "Reference parameter set and derived quantities");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  const Format fmt = parse_format(o.format);
  if (validate->parsed()) {
    const ValidateReport rep = cmd_validate(load(o), o.tolerance);
    emit(o, rep.table.render(fmt));
    return rep.all_pass ? kExitOk : kExitValidationFailed;
  }
  if (sweep->parsed()) {
    const Scenario s = load(o);
    emit(o, cmd_sweep(s, o.axis, parse_values(o.values)).render(fmt));
    return kExitOk;
  }
  if (shots->parsed()) {
    emit(o, cmd_shots(load(o)).render(fmt));
    return kExitOk;
  }
  if (params->parsed()) {
    emit(o, cmd_params().render(fmt));
    return kExitOk;
  }
  return kExitUsage;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const kerrcat::PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const kerrcat::TruncationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const kerrcat::ModelBreakdownError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const kerrcat::NumericalError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitPrecondition;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}
