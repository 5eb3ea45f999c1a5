#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "levylab/errors.hpp"
#include "levylab/experiments.hpp"

namespace {

using levylab::ConfigError;
using levylab::ExperimentConfig;

// Raw command-line values; unset options leave the configuration untouched.
struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> dim;
  std::optional<double> half_width;
  std::optional<std::size_t> points;

  std::vector<double> alpha, t, p, times;
  std::vector<std::string> q;
  std::vector<std::string> phi;
  std::optional<double> C;
  std::string fields;
  std::string triplet_config;
  std::string input_csv;
  std::string out_csv;
  std::vector<double> z_range;
  std::optional<int> per_decade;
};

double parse_exponent(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw ConfigError("cannot parse exponent '" + s + "'");
}

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ExperimentConfig build_config(const std::string& experiment, const Flags& f) {
  ExperimentConfig c;
  if (!f.config.empty()) {
    c = levylab::load_experiment_config(f.config);
    if (c.experiment != experiment)
      throw ConfigError("configuration is for '" + c.experiment + "', not '" + experiment + "'");
  }
  c.experiment = experiment;
  if (!f.out.empty()) c.output = f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.tol) c.tol = *f.tol;
  if (f.dim) c.grid.dim = *f.dim;
  if (f.half_width) c.grid.half_width = *f.half_width;
  if (f.points) c.grid.points = *f.points;
  if (!f.alpha.empty()) c.alpha = f.alpha;
  if (!f.t.empty()) c.t = f.t;
  if (!f.p.empty()) c.p = f.p;
  if (!f.q.empty()) {
    c.q.clear();
    for (const auto& s : f.q) c.q.push_back(parse_exponent(s));
  }
  if (!f.times.empty()) c.times = f.times;
  if (!f.phi.empty()) c.phi = f.phi;
  if (f.C) c.C = f.C;
  if (!f.fields.empty()) c.fields = f.fields;
  if (!f.triplet_config.empty()) {
    const std::filesystem::path p = f.triplet_config;
    c.triplet_json = slurp(p);
    c.base_dir = p.parent_path();
  }
  if (!f.input_csv.empty()) c.input_csv = f.input_csv;
  if (!f.out_csv.empty()) c.out_csv = f.out_csv;
  if (!f.z_range.empty()) {
    if (f.z_range.size() != 2) throw ConfigError("--z-range needs two values");
    c.z_min = f.z_range[0];
    c.z_max = f.z_range[1];
  }
  if (f.per_decade) c.per_decade = *f.per_decade;
  return c;
}

void add_triplet(CLI::App* sub, Flags& f) {
  sub->add_option("--triplet-config", f.triplet_config, "Triplet JSON file");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"levylab: Levy semigroups, Fokker-Planck flows and entropy inequalities"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");
  Flags f;
  app.add_option("--config", f.config, "Experiment configuration (JSON)");
  app.add_option("--out", f.out, "Output directory");
  app.add_option("--seed", f.seed, "Random seed");
  app.add_option("--tol", f.tol, "Quadrature tolerance");
  app.add_option("--dim", f.dim, "Spatial dimension (1 or 2)");
  app.add_option("--half-width", f.half_width, "Box half-width L");
  app.add_option("--points", f.points, "Grid points per axis M");

  auto* heat = app.add_subcommand("heat", "Fractional heat semigroup smoothing bounds");
  heat->add_option("--alpha", f.alpha, "Stability indices");
  heat->add_option("--t", f.t, "Times");
  heat->add_option("--p", f.p, "Source exponents");
  heat->add_option("--q", f.q, "Target exponents (inf allowed)");
  heat->add_option("--input-csv", f.input_csv, "Input field CSV");
  heat->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");
  heat->add_option("--fields", f.fields, "single | battery | family name");

  auto* fp = app.add_subcommand("fp", "Fokker-Planck evolution towards the steady state");
  add_triplet(fp, f);
  fp->add_option("--t-list", f.t, "Times");
  fp->add_option("--u0-csv", f.input_csv, "Initial density CSV");
  fp->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");

  auto* steady = app.add_subcommand("steady", "Steady density and condition report");
  add_triplet(steady, f);
  steady->add_option("--out-csv", f.out_csv, "Extra copy of the density rows");

  auto* decay = app.add_subcommand("decay", "Entropy decay against the exponential bound");
  add_triplet(decay, f);
  decay->add_option("--phi", f.phi, "xlogx | quadratic")->check(CLI::IsMember({"xlogx", "quadratic"}));
  decay->add_option("--times", f.times, "Sample times");
  decay->add_option("--C", f.C, "Decay constant");
  decay->add_option("--u0-csv", f.input_csv, "Initial density CSV");
  decay->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");

  auto* lsi = app.add_subcommand("check-lsi", "Modified log-Sobolev inequality for the steady law");
  add_triplet(lsi, f);
  lsi->add_option("--phi", f.phi, "xlogx | quadratic")->check(CLI::IsMember({"xlogx", "quadratic"}));
  lsi->add_option("--input-csv", f.input_csv, "Test function CSV");
  lsi->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");

  auto* cond = app.add_subcommand("check-conditions", "Domination ratio table and log-moment check");
  add_triplet(cond, f);
  cond->add_option("--z-range", f.z_range, "Sample range lo hi")->expected(2);
  cond->add_option("--per-decade", f.per_decade, "Samples per decade");
  cond->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");

  auto* elsi = app.add_subcommand("euclidean-lsi", "Euclidean log-Sobolev inequality");
  elsi->add_option("--alpha", f.alpha, "Stability indices");
  elsi->add_option("--fields", f.fields, "single | battery | family name");
  elsi->add_option("--input-csv", f.input_csv, "Input field CSV");
  elsi->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");

  auto* kato = app.add_subcommand("kato", "Pointwise Kato inequality");
  kato->add_option("--alpha", f.alpha, "Stability indices");
  kato->add_option("--fields", f.fields, "single | battery | family name");
  kato->add_option("--input-csv", f.input_csv, "Input field CSV");
  kato->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");

  auto* all = app.add_subcommand("all", "Full acceptance suite");
  all->add_option("--out-csv", f.out_csv, "Extra copy of the result rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return levylab::kExitConfig;
  }

  const std::string experiment = app.get_subcommands().front()->get_name();
  try {
    const levylab::RunOutcome r = levylab::run_experiment(build_config(experiment, f));
    std::cout << experiment << ": " << r.message << "\n";
    return r.exit_code;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return levylab::kExitConfig;
  } catch (const levylab::Error& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return levylab::kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return levylab::kExitNumerical;
  }
}
