#include "kerrcat/cli/scenario.hpp"

#include <algorithm>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "kerrcat/cli/results.hpp"

namespace kerrcat::cli {
namespace {

namespace pt = boost::property_tree;

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

class SectionReader {
 public:
  SectionReader(const std::string& source, std::string section, const pt::ptree& tree)
      : source_(source), section_(std::move(section)), tree_(tree) {}

  // Rejects keys outside `allowed`.
  void require_known(std::initializer_list<std::string_view> allowed) const {
    for (const auto& [key, child] : tree_) {
      if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) fail(key, "unknown key");
      if (!child.empty()) fail(key, "nested value");
    }
  }

  std::optional<std::string> raw(const std::string& key) const {
    const auto v = tree_.get_optional<std::string>(pt::ptree::path_type(key, '\0'));
    if (!v) return std::nullopt;
    return std::string(trim(*v));
  }

  void real(const std::string& key, double& out, bool non_negative = false) const {
    if (const auto v = raw(key)) {
      out = to_real(key, *v);
      if (non_negative && out < 0.0) fail(key, "must be non-negative");
    }
  }

  void real(const std::string& key, std::optional<double>& out) const {
    if (const auto v = raw(key)) out = to_real(key, *v);
  }

  template <class Int>
  void integer(const std::string& key, Int& out) const {
    if (const auto v = raw(key)) {
      Int x{};
      const auto r = std::from_chars(v->data(), v->data() + v->size(), x);
      if (r.ec != std::errc{} || r.ptr != v->data() + v->size()) fail(key, "expected an integer, got '" + *v + "'");
      out = x;
    }
  }

  void boolean(const std::string& key, bool& out) const {
    if (const auto v = raw(key)) {
      if (*v == "true") out = true;
      else if (*v == "false") out = false;
      else fail(key, "expected true or false, got '" + *v + "'");
    }
  }

  void real_list(const std::string& key, std::vector<double>& out) const {
    if (const auto v = raw(key)) {
      out.clear();
      std::string_view rest = *v;
      while (!rest.empty()) {
        const auto comma = rest.find(',');
        out.push_back(to_real(key, std::string(trim(rest.substr(0, comma)))));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
      }
    }
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw ScenarioError(source_ + ": [" + section_ + "] " + key + ": " + what);
  }

 private:
  double to_real(const std::string& key, const std::string& v) const {
    double x = 0.0;
    const auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc{} || r.ptr != v.data() + v.size()) fail(key, "expected a number, got '" + v + "'");
    if (!std::isfinite(x)) fail(key, "must be finite");
    return x;
  }

  const std::string& source_;
  std::string section_;
  const pt::ptree& tree_;
};

ForceKind parse_force_kind(const SectionReader& r, const std::string& v) {
  if (v == "none") return ForceKind::kNone;
  if (v == "resonant") return ForceKind::kResonant;
  if (v == "constant") return ForceKind::kConstant;
  if (v == "samples") return ForceKind::kSamples;
  r.fail("kind", "expected none|resonant|constant|samples, got '" + v + "'");
}

}  // namespace

double hz_to_rad(double hz) { return 2.0 * std::numbers::pi * hz; }

std::string_view force_kind_name(ForceKind k) {
  switch (k) {
    case ForceKind::kNone: return "none";
    case ForceKind::kResonant: return "resonant";
    case ForceKind::kConstant: return "constant";
    case ForceKind::kSamples: return "samples";
  }
  return "none";
}

Scenario parse_scenario(std::istream& in, const std::string& source) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    std::ostringstream os;
    os << source << ":" << e.line() << ": " << e.message();
    throw ScenarioError(os.str());
  }

  Scenario s;
  for (const auto& [name, section] : tree) {
    if (section.empty() && !section.data().empty())
      throw ScenarioError(source + ": key '" + name + "' outside any section");
    if (name != "protocol" && name != "loss" && name != "force" && name != "run")
      throw ScenarioError(source + ": unknown section [" + name + "]");
  }

  if (const auto sec = tree.get_child_optional("protocol")) {
    SectionReader r(source, "protocol", *sec);
    r.require_known({"alpha0", "delta", "apply_offset", "truncation"});
    r.real("alpha0", s.alpha0);
    r.real("delta", s.delta);
    r.boolean("apply_offset", s.apply_offset);
    r.integer("truncation", s.truncation);
  }
  if (const auto sec = tree.get_child_optional("loss")) {
    SectionReader r(source, "loss", *sec);
    r.require_known({"kappa", "gamma", "g", "omega_m", "lambda_kerr", "temp", "emission_probability"});
    LossSection l;
    r.real("kappa", l.kappa, true);
    r.real("gamma", l.gamma, true);
    r.real("g", l.g, true);
    r.real("omega_m", l.omega_m, true);
    r.real("lambda_kerr", l.lambda_kerr, true);
    r.real("temp", l.temp, true);
    r.real("emission_probability", l.emission_probability);
    s.loss = l;
  }
  if (const auto sec = tree.get_child_optional("force")) {
    SectionReader r(source, "force", *sec);
    r.require_known({"kind", "amplitude", "phase", "samples"});
    if (const auto k = r.raw("kind")) s.force.kind = parse_force_kind(r, *k);
    r.real("amplitude", s.force.amplitude);
    r.real("phase", s.force.phase);
    r.real_list("samples", s.force.samples);
  }
  if (const auto sec = tree.get_child_optional("run")) {
    SectionReader r(source, "run", *sec);
    r.require_known({"shots", "seed", "engine", "workers"});
    r.integer("shots", s.shots);
    r.integer("seed", s.seed);
    r.integer("workers", s.workers);
    if (const auto e = r.raw("engine")) {
      try {
        s.engine = parse_engine(*e);
      } catch (const std::invalid_argument& ex) {
        r.fail("engine", ex.what());
      }
    }
    if (s.shots < 1) r.fail("shots", "must be >= 1");
  }
  return s;
}

Scenario parse_scenario_string(const std::string& text) {
  std::istringstream in(text);
  return parse_scenario(in);
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ScenarioError(path + ": cannot open scenario file");
  return parse_scenario(in, path);
}

std::string serialize_scenario(const Scenario& s) {
  std::ostringstream os;
  const auto kv = [&](std::string_view k, const std::string& v) { os << k << " = " << v << '\n'; };
  os << "[protocol]\n";
  kv("alpha0", format_double(s.alpha0));
  kv("delta", format_double(s.delta));
  kv("apply_offset", s.apply_offset ? "true" : "false");
  kv("truncation", std::to_string(s.truncation));
  if (s.loss) {
    const LossSection& l = *s.loss;
    os << "\n[loss]\n";
    kv("kappa", format_double(l.kappa));
    kv("gamma", format_double(l.gamma));
    kv("g", format_double(l.g));
    kv("omega_m", format_double(l.omega_m));
    kv("lambda_kerr", format_double(l.lambda_kerr));
    kv("temp", format_double(l.temp));
    if (l.emission_probability) kv("emission_probability", format_double(*l.emission_probability));
  }
  os << "\n[force]\n";
  kv("kind", std::string(force_kind_name(s.force.kind)));
  kv("amplitude", format_double(s.force.amplitude));
  kv("phase", format_double(s.force.phase));
  if (!s.force.samples.empty()) {
    std::string list;
    for (std::size_t i = 0; i < s.force.samples.size(); ++i) {
      if (i) list += ", ";
      list += format_double(s.force.samples[i]);
    }
    kv("samples", list);
  }
  os << "\n[run]\n";
  kv("shots", std::to_string(s.shots));
  kv("seed", std::to_string(s.seed));
  kv("engine", std::string(engine_name(s.engine)));
  kv("workers", std::to_string(s.workers));
  return os.str();
}

ExperimentConfig to_config(const Scenario& s) {
  ExperimentConfig c;
  c.alpha = s.alpha0;
  c.delta = s.delta;
  c.apply_offset = s.apply_offset;
  c.truncation = s.truncation;
  if (s.loss) {
    c.lossy = true;
    c.rates.kappa = hz_to_rad(s.loss->kappa);
    c.rates.gamma = hz_to_rad(s.loss->gamma);
    c.rates.g = hz_to_rad(s.loss->g);
    c.rates.omega_m = hz_to_rad(s.loss->omega_m);
    c.rates.lambda_kerr = hz_to_rad(s.loss->lambda_kerr);
    c.rates.temp = s.loss->temp;
    c.emission_override = s.loss->emission_probability;
  }
  c.force.kind = s.force.kind;
  c.force.amplitude = s.force.amplitude;
  c.force.phase = s.force.phase;
  c.force.samples = s.force.samples;
  c.shots = s.shots;
  c.seed = s.seed;
  c.engine = s.engine;
  c.workers = s.workers;
  return c;
}

}  // namespace kerrcat::cli
