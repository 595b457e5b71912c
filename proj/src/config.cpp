#include <cmath>
#include <fstream>
#include <set>
#include <string>

#include "krm/bounds.hpp"
#include "krm/experiments.hpp"

namespace krm {

namespace {

using nlohmann::json;

const std::set<std::string> kKeys = {"experiment", "c",       "N",         "N_sweep",    "M",
                                     "trials",     "base_seed", "output_dir", "emit",      "basis",
                                     "tail_c",     "tail_M_max", "hermite_c", "delta",     "eps",
                                     "record_wall_clock"};

std::vector<double> real_list(const json& v, const std::string& key) {
  std::vector<double> out;
  if (v.is_number()) {
    out.push_back(v.get<double>());
  } else if (v.is_array() && !v.empty()) {
    for (const json& e : v) {
      if (!e.is_number()) throw ConfigError("'" + key + "' entries must be numbers");
      out.push_back(e.get<double>());
    }
  } else {
    throw ConfigError("'" + key + "' must be a number or a nonempty list of numbers");
  }
  for (double x : out) {
    if (!(x > 0.0) || !std::isfinite(x)) throw ConfigError("'" + key + "' values must be positive and finite");
  }
  return out;
}

int integer(const json& v, const std::string& key, int lo, int hi) {
  if (!v.is_number_integer()) throw ConfigError("'" + key + "' must be an integer");
  const long long x = v.get<long long>();
  if (x < lo || x > hi) {
    throw ConfigError("'" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
  return static_cast<int>(x);
}

std::vector<int> int_list(const json& v, const std::string& key, int lo, int hi) {
  std::vector<int> out;
  if (v.is_array()) {
    if (v.empty()) throw ConfigError("'" + key + "' must not be empty");
    for (const json& e : v) out.push_back(integer(e, key, lo, hi));
  } else {
    out.push_back(integer(v, key, lo, hi));
  }
  return out;
}

double real_in(const json& v, const std::string& key, double lo, double hi, bool open_lo) {
  if (!v.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double x = v.get<double>();
  if (!std::isfinite(x) || x > hi || (open_lo ? x <= lo : x < lo)) throw ConfigError("'" + key + "' out of range");
  return x;
}

int min_M(ExperimentKind kind) { return kind == ExperimentKind::HermiteApprox ? 0 : 1; }

}  // namespace

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Table1: return "table1";
    case ExperimentKind::FixedCHistogram: return "fixed-c-hist";
    case ExperimentKind::HermiteApprox: return "hermite";
    case ExperimentKind::SpectralSurvey: return "survey";
    case ExperimentKind::BoundsReport: return "bounds";
    case ExperimentKind::PswfTable: return "pswf";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(const std::string& name) {
  if (name == "table1" || name == "Table1") return ExperimentKind::Table1;
  if (name == "fixed-c-hist" || name == "FixedCHistogram") return ExperimentKind::FixedCHistogram;
  if (name == "hermite" || name == "HermiteApprox") return ExperimentKind::HermiteApprox;
  if (name == "survey" || name == "SpectralSurvey") return ExperimentKind::SpectralSurvey;
  if (name == "bounds" || name == "BoundsReport") return ExperimentKind::BoundsReport;
  if (name == "pswf" || name == "PswfTable") return ExperimentKind::PswfTable;
  throw ConfigError("unknown experiment '" + name + "'");
}

ExperimentConfig default_config(ExperimentKind kind) {
  ExperimentConfig cfg;
  cfg.experiment = kind;
  cfg.output_dir = "out/" + to_string(kind);
  switch (kind) {
    case ExperimentKind::Table1:
      cfg.c = {1.0};
      cfg.N = 5;
      cfg.trials = 21;
      cfg.M = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
      break;
    case ExperimentKind::FixedCHistogram:
      cfg.c = {6.0};
      cfg.N = 10000;
      cfg.N_sweep = {100, 1000, 10000};
      cfg.trials = 100;
      cfg.M = {6};
      cfg.basis = "pswf";
      break;
    case ExperimentKind::HermiteApprox:
      cfg.c = {100.0};
      cfg.N = 401;
      cfg.M = {0, 10, 20, 30, 40, 50};
      break;
    case ExperimentKind::SpectralSurvey:
      cfg.c = {5.0, 10.0, 20.0, 40.0};
      cfg.N = 500;
      cfg.trials = 1;
      break;
    case ExperimentKind::BoundsReport:
      cfg.c = {1.0};
      cfg.N = 5;
      cfg.trials = 21;
      cfg.M = {2, 4, 6, 8, 10, 12, 14, 16, 18, 20};
      cfg.tail_c = {1.0, 2.0, 5.0};
      cfg.hermite_c = {20.0, 40.0};
      break;
    case ExperimentKind::PswfTable:
      cfg.c = {2.0, 5.0, 10.0};
      cfg.N = 2000;
      cfg.M_auto = true;
      break;
  }
  return cfg;
}

ExperimentConfig config_from_json(const json& j, std::optional<ExperimentKind> expected) {
  if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (!kKeys.count(key)) throw ConfigError("unknown configuration key '" + key + "'");
  }
  ExperimentKind kind;
  if (j.contains("experiment")) {
    if (!j["experiment"].is_string()) throw ConfigError("'experiment' must be a string");
    kind = parse_experiment_kind(j["experiment"].get<std::string>());
    if (expected && *expected != kind) {
      throw ConfigError("configuration is for '" + to_string(kind) + "' but '" + to_string(*expected) +
                        "' was requested");
    }
  } else if (expected) {
    kind = *expected;
  } else {
    throw ConfigError("missing 'experiment'");
  }

  ExperimentConfig cfg = default_config(kind);
  if (j.contains("c")) cfg.c = real_list(j["c"], "c");
  if (j.contains("N")) cfg.N = integer(j["N"], "N", 1, 20000);
  if (j.contains("N_sweep")) cfg.N_sweep = int_list(j["N_sweep"], "N_sweep", 1, 20000);
  if (j.contains("M")) {
    const json& m = j["M"];
    if (m.is_string()) {
      if (m.get<std::string>() != "auto") throw ConfigError("'M' must be an integer, a list or \"auto\"");
      cfg.M_auto = true;
      cfg.M.clear();
    } else {
      cfg.M = int_list(m, "M", min_M(kind), 5000);
      cfg.M_auto = false;
    }
  }
  if (j.contains("trials")) cfg.trials = integer(j["trials"], "trials", 1, 1000000);
  if (j.contains("base_seed")) {
    const json& s = j["base_seed"];
    if (s.is_number_unsigned()) {
      cfg.base_seed = s.get<std::uint64_t>();
    } else if (s.is_number_integer() && s.get<long long>() >= 0) {
      cfg.base_seed = static_cast<std::uint64_t>(s.get<long long>());
    } else {
      throw ConfigError("'base_seed' must be a nonnegative 64-bit integer");
    }
  }
  if (j.contains("output_dir")) {
    if (!j["output_dir"].is_string()) throw ConfigError("'output_dir' must be a string");
    cfg.output_dir = j["output_dir"].get<std::string>();
  }
  if (j.contains("emit")) {
    const json& e = j["emit"];
    if (!e.is_array()) throw ConfigError("'emit' must be a list drawn from csv, json, svg");
    cfg.emit_csv = cfg.emit_json = cfg.emit_svg = false;
    for (const json& v : e) {
      const std::string s = v.is_string() ? v.get<std::string>() : "";
      if (s == "csv") cfg.emit_csv = true;
      else if (s == "json") cfg.emit_json = true;
      else if (s == "svg") cfg.emit_svg = true;
      else throw ConfigError("'emit' entries must be csv, json or svg");
    }
  }
  if (j.contains("basis")) {
    if (!j["basis"].is_string()) throw ConfigError("'basis' must be a string");
    cfg.basis = j["basis"].get<std::string>();
  }
  if (j.contains("tail_c")) cfg.tail_c = real_list(j["tail_c"], "tail_c");
  if (j.contains("tail_M_max")) cfg.tail_M_max = integer(j["tail_M_max"], "tail_M_max", 2, 200);
  if (j.contains("hermite_c")) cfg.hermite_c = real_list(j["hermite_c"], "hermite_c");
  if (j.contains("delta")) cfg.delta = real_in(j["delta"], "delta", 0.0, 1.0, true);
  if (j.contains("eps")) cfg.eps = real_in(j["eps"], "eps", 0.0, INFINITY, true);
  if (j.contains("record_wall_clock")) {
    if (!j["record_wall_clock"].is_boolean()) throw ConfigError("'record_wall_clock' must be a boolean");
    cfg.record_wall_clock = j["record_wall_clock"].get<bool>();
  }

  const bool single_c = kind == ExperimentKind::Table1 || kind == ExperimentKind::FixedCHistogram ||
                        kind == ExperimentKind::HermiteApprox;
  if (single_c && cfg.c.size() != 1) throw ConfigError("'" + to_string(kind) + "' takes a single value of c");
  if (kind == ExperimentKind::FixedCHistogram) {
    if (cfg.basis != "pswf" && cfg.basis != "legendre") throw ConfigError("'basis' must be pswf or legendre");
    if (!cfg.M_auto && cfg.M.size() != 1) throw ConfigError("'fixed-c-hist' takes a single M");
  } else if (j.contains("basis")) {
    throw ConfigError("'basis' applies to fixed-c-hist only");
  }
  if (kind == ExperimentKind::PswfTable && cfg.N < 10) throw ConfigError("'N' (Nystrom nodes) must be at least 10");
  if (kind == ExperimentKind::HermiteApprox && cfg.N < 2) throw ConfigError("'N' (plot points) must be at least 2");
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path, std::optional<ExperimentKind> expected) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("malformed configuration " + path.string() + ": " + e.what());
  }
  return config_from_json(j, expected);
}

nlohmann::ordered_json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::ordered_json j;
  j["experiment"] = to_string(cfg.experiment);
  j["c"] = cfg.c;
  j["N"] = cfg.N;
  if (!cfg.N_sweep.empty()) j["N_sweep"] = cfg.N_sweep;
  if (cfg.M_auto) {
    j["M"] = "auto";
  } else if (!cfg.M.empty()) {
    j["M"] = cfg.M;
  }
  j["trials"] = cfg.trials;
  j["base_seed"] = cfg.base_seed;
  j["output_dir"] = cfg.output_dir.generic_string();
  std::vector<std::string> emit;
  if (cfg.emit_csv) emit.emplace_back("csv");
  if (cfg.emit_json) emit.emplace_back("json");
  if (cfg.emit_svg) emit.emplace_back("svg");
  j["emit"] = emit;
  if (!cfg.basis.empty()) j["basis"] = cfg.basis;
  if (cfg.experiment == ExperimentKind::BoundsReport) {
    j["tail_c"] = cfg.tail_c;
    j["tail_M_max"] = cfg.tail_M_max;
    j["hermite_c"] = cfg.hermite_c;
    j["delta"] = cfg.delta;
    j["eps"] = cfg.eps;
  }
  j["record_wall_clock"] = cfg.record_wall_clock;
  return j;
}

std::vector<int> resolve_M(const ExperimentConfig& cfg, double c) {
  if (!cfg.M_auto) return cfg.M;
  switch (cfg.experiment) {
    case ExperimentKind::HermiteApprox:
      return {static_cast<int>(std::floor(c / 2.0))};
    case ExperimentKind::PswfTable:
      // Galerkin size: the PSWF solver exposes M - 10 pairs and needs M >= 11.
      return {std::max(landau_widom_M(c, 8.0), 11) + 10};
    default:
      return {landau_widom_M(c, 8.0)};
  }
}

}  // namespace krm
