#include "levylab/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "levylab/entropy.hpp"
#include "levylab/fields.hpp"
#include "levylab/fokker_planck.hpp"
#include "levylab/heat.hpp"
#include "levylab/parallel.hpp"
#include "levylab/suite.hpp"

namespace levylab {

namespace {

using nlohmann::ordered_json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::string csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& r : rows) {
      for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + r[i];
      out += '\n';
    }
    return out;
  }
};

std::string num(double v) { return format_double(v); }
std::string flag(bool b) { return b ? "true" : "false"; }

// Everything an experiment produces before it is written to disk.
struct Result {
  Table table;
  ordered_json summary = ordered_json::object();
  std::vector<std::string> log;
  std::map<std::string, std::string> files;
  std::size_t checks = 0;
  std::size_t failures = 0;

  void check(bool ok) {
    ++checks;
    if (!ok) ++failures;
  }
};

// Inputs resolved before any output exists.
struct Prepared {
  ExperimentConfig config;
  Grid grid;
  std::optional<LevyTriplet> triplet;
  std::optional<SpectralField> input;
};

std::vector<double> or_default(const std::vector<double>& v, std::vector<double> fallback) {
  return v.empty() ? fallback : v;
}

PhiFunction phi_named(const std::string& name) {
  return name == "quadratic" ? PhiFunction::quadratic() : PhiFunction::xlogx();
}

LevyTriplet triplet_or_stable(const Prepared& p) {
  return p.triplet ? *p.triplet : LevyTriplet::stable(p.grid.dim(), 1.0);
}

void append_grid_columns(Table& t) {
  for (const char* c : {"d", "L", "M", "tol"}) t.columns.emplace_back(c);
}

std::vector<std::string> grid_cells(const Prepared& p) {
  return {std::to_string(p.grid.dim()), num(p.grid.half_width()), std::to_string(p.grid.points()),
          num(p.config.tol)};
}

void finish_rows(Table& t, const Prepared& p) {
  const auto cells = grid_cells(p);
  for (auto& r : t.rows) r.insert(r.end(), cells.begin(), cells.end());
}

SpectralField unit_gaussian(const Grid& g, double center) {
  return SpectralField::sample(g, [&](const Vec2& x) {
    double r2 = 0.0;
    for (int i = 0; i < x.dim; ++i) r2 += (x[i] - (i == 0 ? center : 0.0)) * (x[i] - (i == 0 ? center : 0.0));
    return std::exp(-0.5 * r2) / std::pow(2.0 * std::numbers::pi, 0.5 * x.dim);
  });
}

// Named test fields for the sweeps; labels identify each field in the rows.
std::vector<std::pair<std::string, SpectralField>> sweep_fields(const Prepared& p, const std::string& fallback) {
  std::vector<std::pair<std::string, SpectralField>> out;
  if (p.input) {
    out.emplace_back("input", *p.input);
    return out;
  }
  const std::string which = p.config.fields == "default" ? fallback : p.config.fields;
  if (which == "single") {
    out.emplace_back("gaussian", unit_gaussian(p.grid, 0.0));
  } else if (which == "battery") {
    const auto fields = test_battery(p.grid, p.config.seed);
    for (std::size_t i = 0; i < fields.size(); ++i) out.emplace_back("battery-" + std::to_string(i), fields[i]);
  } else {
    const FieldFamily fam = parse_field_family(which);
    if (fam == FieldFamily::perturbed_steady) throw ConfigError("perturbed-steady fields are not valid here");
    const auto fields = generate_test_fields(p.grid, p.config.seed, fam);
    for (std::size_t i = 0; i < fields.size(); ++i) out.emplace_back(which + "-" + std::to_string(i), fields[i]);
  }
  return out;
}

// Work items are evaluated on the pool and gathered in submission order.
template <class Row>
std::vector<Row> run_pool(std::size_t n, const std::function<Row(std::size_t)>& job) {
  std::vector<Row> rows(n);
  parallel_for(n, [&](std::size_t i) { rows[i] = job(i); });
  return rows;
}

Result run_heat(const Prepared& p) {
  Result r;
  r.table.columns = {"field", "alpha", "p", "q", "t", "lhs", "rhs", "ratio", "pass"};
  const auto fields = sweep_fields(p, "single");
  struct Task {
    std::size_t field;
    double alpha, p, q, t;
  };
  std::vector<Task> tasks;
  for (std::size_t f = 0; f < fields.size(); ++f)
    for (double a : or_default(p.config.alpha, {0.5, 1.0, 1.5, 2.0}))
      for (double pp : or_default(p.config.p, {2.0}))
        for (double q : or_default(p.config.q, {kInfinity}))
          for (double t : or_default(p.config.t, {0.25, 1.0, 4.0}))
            if (q >= pp && (std::isfinite(q) || pp == 2.0)) tasks.push_back({f, a, pp, q, t});
  const auto reports = run_pool<HypercontractivityReport>(tasks.size(), [&](std::size_t i) {
    const Task& k = tasks[i];
    return verify_hypercontractivity(fields[k.field].second, k.alpha, k.p, k.q, k.t);
  });
  double worst = 0.0;
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    const Task& k = tasks[i];
    const auto& h = reports[i];
    const bool ok = !h.violation;
    r.check(ok);
    worst = std::max(worst, h.ratio);
    r.table.rows.push_back({fields[k.field].first, num(k.alpha), num(k.p), num(k.q), num(k.t), num(h.norm_q_evolved),
                            num(h.bound.bound * h.norm_p_initial), num(h.ratio), flag(ok)});
  }
  r.summary["worst_ratio"] = worst;
  return r;
}

Result run_euclidean_lsi(const Prepared& p) {
  Result r;
  r.table.columns = {"field", "alpha", "lhs", "rhs", "gap", "pass"};
  const auto fields = sweep_fields(p, "battery");
  const auto alphas = or_default(p.config.alpha, {0.5, 1.0, 1.5, 2.0});
  double worst = kInfinity;
  for (const auto& [label, f] : fields) {
    const double n = lp_norm(f, 2.0);
    const SpectralField g = map_values(f, [n](double v) { return v / n; });
    for (double a : alphas) {
      const LsiGap gap = lsi_gap(g, a);
      const bool ok = gap.holds(1e-12);
      r.check(ok);
      worst = std::min(worst, gap.gap());
      r.table.rows.push_back({label, num(a), num(gap.lhs), num(gap.rhs), num(gap.gap()), flag(ok)});
    }
  }
  r.summary["smallest_gap"] = worst;
  return r;
}

Result run_kato(const Prepared& p) {
  Result r;
  r.table.columns = {"field", "alpha", "phi", "max_violation", "scale", "pass"};
  const auto fields = sweep_fields(p, "battery");
  double worst = -kInfinity;
  for (const auto& [label, f] : fields) {
    for (const auto& phi : {convex::square(), convex::abs_power(1.5)}) {
      for (double a : or_default(p.config.alpha, {0.5, 1.0, 1.5})) {
        const KatoReport k = kato_check(f, phi, a);
        r.check(k.passed);
        worst = std::max(worst, k.max_violation / k.scale);
        r.table.rows.push_back({label, num(a), phi.name, num(k.max_violation), num(k.scale), flag(k.passed)});
      }
    }
  }
  r.summary["worst_relative_violation"] = worst;
  return r;
}

Result run_fp(const Prepared& p) {
  Result r;
  r.table.columns = {"t", "mass", "l1_to_steady", "pass"};
  const LevyTriplet tr = triplet_or_stable(p);
  const SteadyState st = build_steady_state(tr, p.grid, p.config.tol);
  const SpectralField u0 = p.input ? *p.input : unit_gaussian(p.grid, 1.0);
  auto times = or_default(p.config.t, {0.0, 0.5, 1.0, 2.0, 4.0, 8.0});
  std::sort(times.begin(), times.end());
  const double m0 = u0.mass();
  double prev = kInfinity;
  for (double t : times) {
    const SpectralField u = fp_evolve(u0, st, t, p.config.tol);
    double l1 = 0.0;
    for (std::size_t i = 0; i < u.grid().size(); ++i) l1 += std::abs(u.value(i) - st.density.value(i));
    l1 *= p.grid.cell_volume();
    const bool ok = std::abs(u.mass() - m0) <= 1e-8 * std::max(1.0, std::abs(m0)) && l1 <= prev + 1e-10;
    prev = l1;
    r.check(ok);
    r.table.rows.push_back({num(t), num(u.mass()), num(l1), flag(ok)});
  }
  r.summary["initial_mass"] = m0;
  r.summary["normalization_defect"] = st.normalization_defect;
  return r;
}

ordered_json domination_json(const DominationReport& d) {
  ordered_json j;
  j["C"] = d.C;
  j["unbounded"] = d.unbounded;
  return j;
}

Result run_steady(const Prepared& p) {
  Result r;
  const LevyTriplet tr = triplet_or_stable(p);
  ordered_json report;
  const LogTailReport tail = check_log_tail(tr.nu(), p.config.tol);
  report["con1"] = tail.diverges ? ordered_json(nullptr) : ordered_json(tail.value);
  report["con1_diverges"] = tail.diverges;
  if (tr.nu().is_zero()) {
    report["con2_C"] = nullptr;
    report["con2_unbounded"] = false;
  } else {
    const DominationReport d = check_domination(tr.nu(), p.config.tol);
    report["con2_C"] = d.unbounded ? ordered_json(nullptr) : ordered_json(d.C);
    report["con2_unbounded"] = d.unbounded;
  }
  r.check(!tail.diverges);
  if (tail.diverges) {
    r.log.push_back("log-moment condition fails: no steady state");
    report["bA"] = nullptr;
    report["normalization_defect"] = nullptr;
    r.summary = report;
    r.files["steady.json"] = report.dump(2) + "\n";
    r.table.columns = {"x", "density"};
    return r;
  }
  const SteadyState st = build_steady_state(tr, p.grid, p.config.tol);
  ordered_json ba = ordered_json::array();
  for (int i = 0; i < p.grid.dim(); ++i) ba.push_back(st.drift_correction[i]);
  report["bA"] = ba;
  report["normalization_defect"] = st.normalization_defect;
  r.summary = report;
  r.files["steady.json"] = report.dump(2) + "\n";
  r.table.columns = p.grid.dim() == 1 ? std::vector<std::string>{"x", "density"}
                                      : std::vector<std::string>{"x", "y", "density"};
  for (std::size_t i = 0; i < p.grid.size(); ++i) {
    const Vec2 x = p.grid.point(i);
    std::vector<std::string> row{num(x[0])};
    if (p.grid.dim() == 2) row.push_back(num(x[1]));
    row.push_back(num(st.density.value(i)));
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

Result run_check_conditions(const Prepared& p) {
  Result r;
  const LevyTriplet tr = triplet_or_stable(p);
  if (tr.nu().is_zero()) throw ConfigError("check-conditions needs a nonzero Levy density");
  const auto samples = log_sample_points(p.grid.dim(), p.config.z_min, p.config.z_max, p.config.per_decade);
  const DominationReport d = check_domination(tr.nu(), samples, p.config.tol);
  const LogTailReport tail = check_log_tail(tr.nu(), p.config.tol);
  r.table.columns = p.grid.dim() == 1 ? std::vector<std::string>{"z", "N", "N_inf", "ratio"}
                                      : std::vector<std::string>{"z1", "z2", "N", "N_inf", "ratio"};
  for (const auto& row : d.rows) {
    std::vector<std::string> cells{num(row.z[0])};
    if (p.grid.dim() == 2) cells.push_back(num(row.z[1]));
    for (double v : {row.density, row.limit, row.ratio}) cells.push_back(num(v));
    r.table.rows.push_back(std::move(cells));
  }
  r.summary["domination"] = domination_json(d);
  r.summary["log_tail"] = tail.diverges ? ordered_json(nullptr) : ordered_json(tail.value);
  r.summary["log_tail_diverges"] = tail.diverges;
  return r;
}

double default_decay_constant(const LevyTriplet& tr, double tol) {
  if (tr.nu().is_zero()) return 0.5;
  if (tr.nu().is_stable() && tr.sigma().is_zero()) return 1.0 / tr.nu().alpha();
  const DominationReport d = check_domination(tr.nu(), tol);
  if (d.unbounded) throw ConfigError("the domination constant is unbounded; pass --C explicitly");
  return d.C;
}

Result run_decay(const Prepared& p) {
  Result r;
  r.table.columns = {"t", "entropy", "bound", "pass"};
  const LevyTriplet tr = triplet_or_stable(p);
  const SteadyState st = build_steady_state(tr, p.grid, p.config.tol);
  const PhiFunction phi = phi_named(p.config.phi.empty() ? "xlogx" : p.config.phi.front());
  const double C = p.config.C ? *p.config.C : default_decay_constant(tr, p.config.tol);
  SpectralField u0 = p.input ? *p.input
                             : generate_test_fields(p.grid, p.config.seed, FieldFamily::perturbed_steady, st.density, 1)
                                   .front();
  const auto times = or_default(p.config.times, {0.25, 0.5, 1.0, 2.0});
  const DecayReport d = decay_track(u0, st, phi, times, C);
  for (std::size_t i = 0; i < d.times.size(); ++i) {
    const double bound = std::exp(-d.times[i] / C) * d.initial_entropy;
    const bool ok = std::find(d.violations.begin(), d.violations.end(), d.times[i]) == d.violations.end();
    r.check(ok);
    r.table.rows.push_back({num(d.times[i]), num(d.entropies[i]), num(bound), flag(ok)});
  }
  r.check(d.monotone);
  r.summary["phi"] = phi.name;
  r.summary["C"] = C;
  r.summary["initial_entropy"] = d.initial_entropy;
  r.summary["fitted_rate"] = d.fitted_rate;
  r.summary["bound_rate"] = d.bound_rate;
  r.summary["violations"] = d.violations;
  r.summary["monotone"] = d.monotone;
  r.summary["max_floored_fraction"] = d.max_floored_fraction;
  return r;
}

Result run_check_lsi(const Prepared& p) {
  Result r;
  r.table.columns = {"phi", "field", "entropy", "rhs", "ratio", "pass"};
  const LevyTriplet tr = triplet_or_stable(p);
  const SteadyState st = build_steady_state(tr, p.grid, p.config.tol);
  const LevyTriplet of_mu = steady_state_triplet(tr, p.config.tol);
  std::vector<std::pair<std::string, SpectralField>> fields;
  if (p.input) {
    fields.emplace_back("input", *p.input);
  } else {
    const auto fs = generate_test_fields(p.grid, p.config.seed, FieldFamily::positive, std::nullopt, 8);
    for (std::size_t i = 0; i < fs.size(); ++i) fields.emplace_back("positive-" + std::to_string(i), fs[i]);
  }
  const std::vector<std::string> phis =
      p.config.phi.empty() ? std::vector<std::string>{"xlogx", "quadratic"} : p.config.phi;
  double worst = 0.0;
  for (const auto& name : phis) {
    const PhiFunction phi = phi_named(name);
    for (const auto& [label, v] : fields) {
      const ModifiedLsiReport m = modified_lsi_check(v, st, of_mu, phi, p.config.tol);
      const bool ok = m.ratio <= 1.0 + 1e-6;
      r.check(ok);
      worst = std::max(worst, m.ratio);
      r.table.rows.push_back({name, label, num(m.entropy), num(m.dissipation), num(m.ratio), flag(ok)});
    }
  }
  r.summary["worst_ratio"] = worst;
  return r;
}

Result run_all(const Prepared& p) {
  Result r;
  r.table.columns = {"criterion", "name", "metric", "value", "pass", "seconds"};
  SuiteOptions o;
  o.seed = p.config.seed;
  o.tol = p.config.tol;
  ordered_json list = ordered_json::array();
  std::size_t passed = 0;
  for (int id = 1; id <= kCriterionCount; ++id) {
    const CriterionResult c = run_criterion(id, o);
    r.check(c.passed);
    if (c.passed) ++passed;
    for (const auto& [metric, value] : c.metrics)
      r.table.rows.push_back({std::to_string(id), c.name, metric, num(value), flag(c.passed), num(c.seconds)});
    ordered_json j;
    j["id"] = id;
    j["name"] = c.name;
    j["passed"] = c.passed;
    j["detail"] = c.detail;
    list.push_back(j);
    r.log.push_back((c.passed ? "PASS " : "FAIL ") + std::to_string(id) + " " + c.name + ": " + c.detail);
  }
  r.summary["criteria"] = list;
  r.summary["criteria_passed"] = passed;
  return r;
}

Prepared prepare(const ExperimentConfig& config) {
  validate_config(config);
  Prepared p{config, Grid(config.grid.dim, config.grid.half_width, config.grid.points), std::nullopt, std::nullopt};
  if (!config.triplet_json.empty()) p.triplet = parse_triplet_config(config.triplet_json, config.base_dir);
  if (!config.input_csv.empty()) {
    try {
      SpectralField f = read_field_csv(config.input_csv);
      if (!(f.grid() == p.grid)) throw ConfigError("input csv grid differs from the configured grid");
      p.input = std::move(f);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(std::string("cannot use input csv: ") + e.what());
    }
  }
  return p;
}

Result dispatch(const Prepared& p) {
  static const std::map<std::string, Result (*)(const Prepared&)> table = {
      {"heat", run_heat},   {"fp", run_fp},         {"steady", run_steady},
      {"decay", run_decay}, {"check-lsi", run_check_lsi}, {"check-conditions", run_check_conditions},
      {"euclidean-lsi", run_euclidean_lsi}, {"kato", run_kato}, {"all", run_all}};
  return table.at(p.config.experiment)(p);
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write " + path.string());
  out << content;
}

std::string describe(const ExperimentConfig& c) {
  std::ostringstream os;
  os << "experiment " << c.experiment << "\n"
     << "grid d=" << c.grid.dim << " L=" << format_double(c.grid.half_width) << " M=" << c.grid.points << "\n"
     << "tol " << format_double(c.tol) << "\n"
     << "seed " << c.seed << "\n"
     << "workers " << worker_count() << "\n";
  if (!c.triplet_json.empty()) os << "triplet " << c.triplet_json << "\n";
  if (!c.input_csv.empty()) os << "input " << c.input_csv.string() << "\n";
  return os.str();
}

}  // namespace

RunOutcome run_experiment(const ExperimentConfig& config) {
  RunOutcome out;
  Prepared prepared = [&] {
    try {
      return prepare(config);
    } catch (const ConfigError&) {
      throw;
    } catch (const Error& e) {
      throw ConfigError(e.what());
    }
  }();

  std::vector<std::string> warnings;
  std::mutex mu;
  const WarningSink previous = set_warning_sink([&](const std::string& code, const std::string& msg) {
    std::lock_guard<std::mutex> lock(mu);
    warnings.push_back(code + ": " + msg);
  });
  const auto start = std::chrono::steady_clock::now();
  Result result;
  std::string failure;
  try {
    result = dispatch(prepared);
  } catch (const ConfigError&) {
    set_warning_sink(previous);
    throw;
  } catch (const Error& e) {
    failure = e.what();
  }
  set_warning_sink(previous);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  std::filesystem::create_directories(config.output);
  std::string log = describe(config);
  for (const auto& line : result.log) log += line + "\n";
  for (const auto& w : warnings) log += "warning " + w + "\n";
  std::ostringstream wall;
  wall << "wall_time_s " << seconds << "\n";
  log += wall.str();

  if (!failure.empty()) {
    log += "numerical failure: " + failure + "\n";
    write_file(config.output / "run.log", log);
    out.exit_code = kExitNumerical;
    out.message = failure;
    return out;
  }

  append_grid_columns(result.table);
  finish_rows(result.table, prepared);
  const std::string csv = result.table.csv();
  write_file(config.output / "results.csv", csv);
  if (!config.out_csv.empty()) write_file(config.out_csv, csv);
  for (const auto& [name, content] : result.files) write_file(config.output / name, content);

  ordered_json summary;
  summary["experiment"] = config.experiment;
  summary["checks"] = result.checks;
  summary["failures"] = result.failures;
  summary["passed"] = result.failures == 0;
  for (const auto& [k, v] : result.summary.items()) summary[k] = v;
  summary["grid"] = {{"dim", config.grid.dim}, {"half_width", config.grid.half_width}, {"points", config.grid.points}};
  summary["tol"] = config.tol;
  summary["seed"] = config.seed;
  write_file(config.output / "summary.json", summary.dump(2) + "\n");
  log += "checks " + std::to_string(result.checks) + " failures " + std::to_string(result.failures) + "\n";
  write_file(config.output / "run.log", log);

  out.checks = result.checks;
  out.failures = result.failures;
  out.exit_code = result.failures == 0 ? kExitOk : kExitAssertion;
  out.message = std::to_string(result.failures) + " of " + std::to_string(result.checks) + " checks failed";
  return out;
}

}  // namespace levylab
