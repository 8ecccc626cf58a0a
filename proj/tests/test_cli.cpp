#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "kerrcat/cli/commands.hpp"
#include "kerrcat/loss.hpp"

using namespace kerrcat;
using namespace kerrcat::cli;

namespace {

const char* kFullScenario = R"([protocol]
alpha0 = 1.5
delta = 0.01
apply_offset = true
truncation = 40

[loss]
kappa = 100000
gamma = 10
g = 500000
omega_m = 10000000
lambda_kerr = 7000000
temp = 0.024

[force]
kind = resonant
amplitude = 1000
phase = 0.25

[run]
shots = 2000
seed = 42
engine = analytic
workers = 2
)";

double cell_double(const Cell& c) { return std::get<double>(c); }

const Cell& lookup(const ResultTable& t, const std::string& name) {
  for (const auto& row : t.rows())
    if (std::get<std::string>(row[0]) == name) return row[1];
  FAIL("missing row " << name);
  static Cell none;
  return none;
}

}  // namespace

TEST_CASE("scenario parsing") {
  SUBCASE("full scenario") {
    const Scenario s = parse_scenario_string(kFullScenario);
    CHECK(s.alpha0 == 1.5);
    CHECK(s.apply_offset);
    CHECK(s.truncation == 40);
    REQUIRE(s.loss);
    CHECK(s.loss->kappa == 100000.0);
    CHECK(s.force.kind == ForceKind::kResonant);
    CHECK(s.shots == 2000);
    CHECK(s.seed == 42);
    CHECK(s.workers == 2);
    const ExperimentConfig c = to_config(s);
    CHECK(c.rates.kappa == doctest::Approx(2.0 * M_PI * 1e5).epsilon(1e-15));
    CHECK(c.lossy);
  }
  SUBCASE("empty document is the ideal default") {
    const Scenario s = parse_scenario_string("");
    CHECK(s == Scenario{});
    CHECK(!to_config(s).lossy);
  }
  SUBCASE("rejections carry context") {
    const auto err = [](const std::string& text) {
      try {
        parse_scenario_string(text);
      } catch (const ScenarioError& e) {
        return std::string(e.what());
      }
      return std::string();
    };
    CHECK(err("[protocol]\nalpha = 2\n").find("unknown key") != std::string::npos);
    CHECK(err("[protocol]\nalpha0 = 2\n[extra]\nx = 1\n").find("unknown section") != std::string::npos);
    CHECK(err("[loss]\nkappa = -1\n").find("non-negative") != std::string::npos);
    CHECK(err("[protocol]\nalpha0 = two\n").find("alpha0") != std::string::npos);
    CHECK(err("[protocol]\nalpha0 = inf\n").find("finite") != std::string::npos);
    CHECK(err("[protocol]\napply_offset = yes\n").find("true or false") != std::string::npos);
    CHECK(err("[run]\nengine = fast\n").find("engine") != std::string::npos);
    CHECK(err("[run]\nshots = 0\n").find("shots") != std::string::npos);
    CHECK(err("alpha0 = 2\n").find("outside") != std::string::npos);
    // Malformed line: the parser reports the line number.
    CHECK(err("[protocol]\nalpha0 = 2\nthis line is broken\n").find(":3:") != std::string::npos);
  }
}

TEST_CASE("scenario round trip") {
  Scenario a = parse_scenario_string(kFullScenario);
  CHECK(parse_scenario_string(serialize_scenario(a)) == a);

  Scenario b;
  b.alpha0 = 0.1 + 0.2;  // not exactly representable in short decimal form
  b.delta = 1.0 / 3.0;
  b.force.kind = ForceKind::kNone;
  CHECK(parse_scenario_string(serialize_scenario(b)) == b);

  Scenario c = a;
  c.loss->emission_probability = 0.25;
  c.force.kind = ForceKind::kSamples;
  c.force.samples = {0.0, 1.5, -2.25, 1e-7};
  c.engine = Engine::kBruteForce;
  c.seed = 18446744073709551615ULL;
  CHECK(parse_scenario_string(serialize_scenario(c)) == c);
}

TEST_CASE("result table serialisation") {
  ResultTable t({"name", "value", "flag"});
  t.add_row({std::string("plain"), 0.1, true});
  t.add_row({std::string("has,comma \"q\""), 1e-300, false});
  t.add_row({std::string("line\nbreak"), std::int64_t{-3}, true});
  CHECK_THROWS_AS(t.add_row({std::string("short")}), std::invalid_argument);

  const std::string csv = t.to_csv();
  CHECK(csv.rfind("name,value,flag\r\n", 0) == 0);
  CHECK(csv.find("plain,0.10000000000000001,true\r\n") != std::string::npos);
  CHECK(csv.find("\"has,comma \"\"q\"\"\",1e-300,false\r\n") != std::string::npos);
  CHECK(csv.find("\"line\nbreak\",-3,true\r\n") != std::string::npos);

  const auto j = nlohmann::json::parse(t.to_json());
  REQUIRE(j.size() == 3);
  CHECK(j[0]["name"] == "plain");
  CHECK(j[0]["value"].get<double>() == 0.1);
  CHECK(j[2]["value"] == -3);

  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(2.0) == "2");
  CHECK(parse_format("json") == Format::kJson);
  CHECK_THROWS(parse_format("xml"));
}

TEST_CASE("cmd_validate") {
  SUBCASE("default ideal scenario passes") {
    const ValidateReport r = cmd_validate(Scenario{});
    CHECK(r.all_pass);
    int mean_rows = 0;
    for (const auto& row : r.table.rows()) {
      if (std::get<std::string>(row[0]).rfind("mean_X_ideal", 0) == 0) {
        ++mean_rows;
        CHECK(cell_double(row[4]) == 1e-6);
      }
      CHECK(std::get<bool>(row[5]));
    }
    CHECK(mean_rows == 4);
  }
  SUBCASE("lossy scenario adds the two-mode check") {
    Scenario s = parse_scenario_string(kFullScenario);
    s.force.kind = ForceKind::kNone;
    const ValidateReport r = cmd_validate(s);
    bool found = false;
    for (const auto& row : r.table.rows())
      if (std::get<std::string>(row[0]).rfind("mean_X_lossy", 0) == 0) found = true;
    CHECK(found);
    CHECK(r.all_pass);
  }
  SUBCASE("zero tolerance fails") { CHECK(!cmd_validate(Scenario{}, 0.0).all_pass); }
  SUBCASE("overdamped transfer is a precondition error") {
    Scenario s = parse_scenario_string(kFullScenario);
    s.loss->g = 1000.0;
    try {
      cmd_validate(s);
      FAIL("expected an error");
    } catch (const PreconditionError& e) {
      CHECK(std::string(e.what()).find("overdamped transfer") != std::string::npos);
    }
  }
}

TEST_CASE("cmd_sweep") {
  Scenario s;
  s.delta = 0.01;
  s.apply_offset = true;
  s.shots = 100000;
  const ResultTable t = cmd_sweep(s, "alpha", {1.0, 1.5, 2.0, 2.5, 3.0});
  CHECK(t.columns() ==
        std::vector<std::string>{"axis_value", "m_counts", "M", "S", "sigma_S", "S_analytic", "P_emission", "seed"});
  REQUIRE(t.rows().size() == 5);
  double prev = 0.0;
  for (const auto& row : t.rows()) {
    const double mag = std::abs(cell_double(row[3]));
    CHECK(mag > prev);
    prev = mag;
  }
  CHECK(cmd_sweep(s, "alpha", {1.0, 2.0}).to_csv() == cmd_sweep(s, "alpha", {1.0, 2.0}).to_csv());
  CHECK_THROWS_AS(cmd_sweep(s, "alpha", {}), std::invalid_argument);
  CHECK_THROWS_AS(cmd_sweep(s, "beta", {1.0}), std::invalid_argument);

  SUBCASE("rate axis values are in Hz") {
    Scenario l = parse_scenario_string(kFullScenario);
    l.shots = 100;
    const ResultTable k = cmd_sweep(l, "kappa", {50000.0});
    CHECK(cell_double(k.rows()[0][0]) == 50000.0);
    CHECK(cell_double(k.rows()[0][6]) == doctest::Approx(M_PI * 50000.0 * 2.25 / 7e6).epsilon(1e-12));
  }
}

TEST_CASE("cmd_shots") {
  const Scenario s = parse_scenario_string(kFullScenario);
  const ResultTable t = cmd_shots(s);
  REQUIRE(t.rows().size() == 1);
  CHECK(std::get<std::int64_t>(t.rows()[0][1]) == 2000);
  CHECK(std::get<std::uint64_t>(t.rows()[0][6]) == 42);
  CHECK(t.to_csv() == cmd_shots(s).to_csv());
}

TEST_CASE("cmd_params") {
  const ResultTable t = cmd_params();
  CHECK(std::abs(cell_double(lookup(t, "P(alpha=1.5)")) - 0.101) < 1e-3);
  const double gt = cell_double(lookup(t, "gamma*T_swap"));
  CHECK(std::abs(std::log10(gt) + 4.0) <= 0.5);
  const double big = cell_double(lookup(t, "Gamma*T_swap"));
  CHECK(big >= 0.1);
  CHECK(big <= 0.3);
  const double two_pi = 2.0 * M_PI;
  const double kappa = two_pi * 100e3, gamma = two_pi * 10.0, g = two_pi * 500e3;
  const double nu = std::sqrt(g * g - (kappa + gamma) * (kappa + gamma) / 16.0);
  CHECK(cell_double(lookup(t, "nu")) == doctest::Approx(nu).epsilon(1e-14));
  CHECK(cell_double(lookup(t, "T_swap")) == doctest::Approx(M_PI / nu).epsilon(1e-14));
  CHECK(cell_double(lookup(t, "n_bar")) == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(cell_double(lookup(t, "lambda/kappa")) == doctest::Approx(70.0).epsilon(1e-14));
}

TEST_CASE("write_text_file") {
  const auto dir = std::filesystem::temp_directory_path() / "kerrcat_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "out.csv").string();
  write_text_file(path, "a,b\r\n");
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "a,b\r\n");
  CHECK_THROWS(write_text_file((dir / "missing" / "x.csv").string(), "x"));
  std::filesystem::remove_all(dir);
}
