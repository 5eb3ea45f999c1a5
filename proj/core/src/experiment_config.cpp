#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "json.hpp"
#include "levylab/errors.hpp"
#include "levylab/experiments.hpp"
#include "levylab/fields.hpp"
#include "levylab/levy.hpp"

namespace levylab {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, _] : obj.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

double number(const json& j, const std::string& what) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  }
  if (!j.is_number()) throw ConfigError(what + " must be a number");
  return j.get<double>();
}

std::vector<double> numbers(const json& j, const std::string& what) {
  std::vector<double> out;
  if (j.is_array()) {
    for (const auto& v : j) out.push_back(number(v, what));
  } else {
    out.push_back(number(j, what));
  }
  return out;
}

std::int64_t integer(const json& j, const std::string& what) {
  if (!j.is_number_integer()) throw ConfigError(what + " must be an integer");
  return j.get<std::int64_t>();
}

std::string text(const json& j, const std::string& what) {
  if (!j.is_string()) throw ConfigError(what + " must be a string");
  return j.get<std::string>();
}

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_all(const std::vector<double>& v, bool (*pred)(double), const std::string& message) {
  for (double x : v) require(pred(x), message);
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {"heat",  "fp",   "steady",          "decay", "check-lsi",
                                                 "check-conditions", "euclidean-lsi", "kato",  "all"};
  return names;
}

ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed configuration: ") + e.what());
  }
  reject_unknown(root,
                 {"experiment", "grid", "triplet", "triplet_path", "sweep", "input_csv", "out_csv", "output", "seed",
                  "tol"},
                 "configuration");
  ExperimentConfig c;
  c.base_dir = base_dir;
  require(root.contains("experiment"), "configuration needs an 'experiment' key");
  c.experiment = text(root["experiment"], "experiment");
  if (root.contains("grid")) {
    const json& g = root["grid"];
    reject_unknown(g, {"dim", "half_width", "points"}, "grid");
    if (g.contains("dim")) c.grid.dim = static_cast<int>(integer(g["dim"], "grid.dim"));
    if (g.contains("half_width")) c.grid.half_width = number(g["half_width"], "grid.half_width");
    if (g.contains("points")) {
      const auto m = integer(g["points"], "grid.points");
      require(m > 0, "grid.points must be positive");
      c.grid.points = static_cast<std::size_t>(m);
    }
  }
  require(!(root.contains("triplet") && root.contains("triplet_path")), "give either 'triplet' or 'triplet_path'");
  if (root.contains("triplet")) c.triplet_json = root["triplet"].dump();
  if (root.contains("triplet_path")) {
    std::filesystem::path p = text(root["triplet_path"], "triplet_path");
    if (p.is_relative()) p = base_dir / p;
    std::ifstream in(p);
    require(static_cast<bool>(in), "cannot read triplet file " + p.string());
    std::stringstream ss;
    ss << in.rdbuf();
    c.triplet_json = ss.str();
    c.base_dir = p.parent_path();
  }
  if (root.contains("sweep")) {
    const json& s = root["sweep"];
    reject_unknown(s, {"alpha", "t", "p", "q", "times", "phi", "C", "fields", "z_range", "per_decade"}, "sweep");
    if (s.contains("alpha")) c.alpha = numbers(s["alpha"], "sweep.alpha");
    if (s.contains("t")) c.t = numbers(s["t"], "sweep.t");
    if (s.contains("p")) c.p = numbers(s["p"], "sweep.p");
    if (s.contains("q")) c.q = numbers(s["q"], "sweep.q");
    if (s.contains("times")) c.times = numbers(s["times"], "sweep.times");
    if (s.contains("phi")) {
      if (s["phi"].is_array()) {
        for (const auto& v : s["phi"]) c.phi.push_back(text(v, "sweep.phi"));
      } else {
        c.phi.push_back(text(s["phi"], "sweep.phi"));
      }
    }
    if (s.contains("C")) c.C = number(s["C"], "sweep.C");
    if (s.contains("fields")) c.fields = text(s["fields"], "sweep.fields");
    if (s.contains("z_range")) {
      const auto z = numbers(s["z_range"], "sweep.z_range");
      require(z.size() == 2, "sweep.z_range needs two entries");
      c.z_min = z[0];
      c.z_max = z[1];
    }
    if (s.contains("per_decade")) c.per_decade = static_cast<int>(integer(s["per_decade"], "sweep.per_decade"));
  }
  const auto path_of = [&](const char* key) {
    std::filesystem::path p = text(root[key], key);
    return p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  };
  if (root.contains("input_csv")) c.input_csv = path_of("input_csv");
  if (root.contains("out_csv")) c.out_csv = path_of("out_csv");
  if (root.contains("output")) c.output = text(root["output"], "output");
  if (root.contains("seed")) {
    const auto s = integer(root["seed"], "seed");
    require(s >= 0, "seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(s);
  }
  if (root.contains("tol")) c.tol = number(root["tol"], "tol");
  return c;
}

ExperimentConfig load_experiment_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read configuration " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_experiment_config(ss.str(), path.parent_path());
}

void validate_config(const ExperimentConfig& c) {
  const auto& names = experiment_names();
  require(std::find(names.begin(), names.end(), c.experiment) != names.end(),
          "unknown experiment '" + c.experiment + "'");
  require(c.grid.dim == 1 || c.grid.dim == 2, "grid.dim must be 1 or 2");
  require(std::isfinite(c.grid.half_width) && c.grid.half_width > 0.0, "grid.half_width must be positive");
  require(c.grid.points >= 8 && (c.grid.points & (c.grid.points - 1)) == 0,
          "grid.points must be a power of two >= 8");
  require(c.grid.points <= (c.grid.dim == 1 ? 65536u : 1024u), "grid.points exceeds the supported size");
  require_all(c.alpha, [](double a) { return a > 0.0 && a <= 2.0; }, "sweep.alpha entries must lie in (0, 2]");
  if (c.experiment == "heat")
    require_all(c.t, [](double t) { return std::isfinite(t) && t > 0.0; }, "sweep.t entries must be positive");
  else
    require_all(c.t, [](double t) { return std::isfinite(t) && t >= 0.0; }, "sweep.t entries must be nonnegative");
  require_all(c.p, [](double p) { return std::isfinite(p) && p >= 2.0; }, "sweep.p entries must be >= 2");
  require_all(c.q, [](double q) { return q >= 2.0; }, "sweep.q entries must be >= 2");
  require_all(c.times, [](double t) { return std::isfinite(t) && t >= 0.0; },
              "sweep.times entries must be nonnegative");
  for (const auto& phi : c.phi) require(phi == "xlogx" || phi == "quadratic", "sweep.phi must be xlogx or quadratic");
  if (c.C) require(std::isfinite(*c.C) && *c.C > 0.0, "sweep.C must be positive");
  if (c.fields != "default" && c.fields != "battery") parse_field_family(c.fields);
  require(c.z_min > 0.0 && c.z_max > c.z_min && std::isfinite(c.z_max), "sweep.z_range must satisfy 0 < lo < hi");
  require(c.per_decade >= 1 && c.per_decade <= 64, "sweep.per_decade must lie in [1, 64]");
  require(std::isfinite(c.tol) && c.tol > 0.0 && c.tol < 1e-2, "tol must lie in (0, 1e-2)");
  require(!c.output.empty(), "output directory must be set");
  if (!c.triplet_json.empty()) {
    try {
      const LevyTriplet tr = parse_triplet_config(c.triplet_json, c.base_dir);
      require(tr.dim() == c.grid.dim, "triplet dimension differs from grid.dim");
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("invalid triplet: ") + e.what());
    }
  }
  if (!c.input_csv.empty()) require(std::filesystem::exists(c.input_csv), "input csv not found: " + c.input_csv.string());
}

}  // namespace levylab
