#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include <sys/wait.h>

#include "json.hpp"
#include "levylab/experiments.hpp"
#include "levylab/fields.hpp"
#include "levylab/fokker_planck.hpp"

namespace levylab {
namespace {

namespace fs = std::filesystem;

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("levylab_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

TEST(Fields, DeterministicPerSeed) {
  const Grid g = Grid::default_1d();
  for (auto fam : {FieldFamily::gaussians, FieldFamily::bumps, FieldFamily::mixtures, FieldFamily::positive}) {
    const auto a = generate_test_fields(g, 99, fam);
    const auto b = generate_test_fields(g, 99, fam);
    ASSERT_EQ(a.size(), b.size());
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(field_csv(a[k]), field_csv(b[k]));
  }
  const auto x = generate_test_fields(g, 1, FieldFamily::mixtures);
  const auto y = generate_test_fields(g, 2, FieldFamily::mixtures);
  EXPECT_NE(field_csv(x[0]), field_csv(y[0]));
}

TEST(Fields, GaussianFamilyMoments) {
  const Grid g = Grid::default_1d();
  const auto fs = generate_test_fields(g, 0, FieldFamily::gaussians);
  ASSERT_EQ(fs.size(), 9u);
  std::vector<std::pair<double, double>> moments;
  for (const auto& f : fs) {
    double m = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double x = g.coordinate(i);
      m += f.value(i);
      m1 += x * f.value(i);
      m2 += x * x * f.value(i);
    }
    const double mean = m1 / m;
    moments.emplace_back(std::round(mean * 1e6) / 1e6, std::round((m2 / m - mean * mean) * 1e6) / 1e6);
  }
  for (double c : {-2.0, 0.0, 2.0})
    for (double v : {0.25, 1.0, 4.0})
      EXPECT_NE(std::find(moments.begin(), moments.end(), std::pair{c, v}), moments.end()) << c << " " << v;
}

TEST(Fields, BatteryPreconditions) {
  const Grid g = Grid::default_1d();
  const auto battery = test_battery(g, 42);
  EXPECT_GE(battery.size(), 12u);
  for (const auto& f : battery) {
    EXPECT_LT(boundary_level(f), 1e-12);
    EXPECT_TRUE(f.is_nonnegative());
    EXPECT_LT(f.max_abs_coefficient_near_nyquist(), 1e-12 * f.max_value());
  }
}

TEST(Fields, PerturbedSteadyRatio) {
  const Grid g = Grid::default_1d();
  const SteadyState st = build_steady_state(LevyTriplet::stable(1, 1.0), g);
  EXPECT_EQ(parse_field_family("perturbed-steady"), FieldFamily::perturbed_steady);
  for (const auto& f : generate_test_fields(g, 4, FieldFamily::perturbed_steady, st.density)) {
    EXPECT_NEAR(f.mass(), 1.0, 1e-12);
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = f.value(i) / st.density.value(i);
      EXPECT_GE(r, 0.5);
      EXPECT_LE(r, 1.5);
    }
  }
  EXPECT_THROW(generate_test_fields(g, 4, FieldFamily::perturbed_steady), InvalidArgument);
  EXPECT_THROW(parse_field_family("zebras"), ConfigError);
}

TEST(Config, StrictParsing) {
  EXPECT_THROW(parse_experiment_config(R"({"experiment":"heat","extra":1})"), ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"experiment":"heat","grid":{"points":"many"}})"), ConfigError);
  EXPECT_THROW(parse_experiment_config(R"({"grid":{}})"), ConfigError);
  EXPECT_THROW(parse_experiment_config("[1,2"), ConfigError);
  const ExperimentConfig c = parse_experiment_config(
      R"({"experiment":"heat","grid":{"points":256},"sweep":{"q":["inf",4],"alpha":1.5},"seed":3})");
  EXPECT_EQ(c.grid.points, 256u);
  EXPECT_TRUE(std::isinf(c.q[0]));
  EXPECT_EQ(c.alpha, std::vector<double>{1.5});
  EXPECT_EQ(c.seed, 3u);
}

TEST(Config, RangeChecks) {
  ExperimentConfig c;
  c.experiment = "heat";
  EXPECT_NO_THROW(validate_config(c));
  for (auto mutate : std::vector<std::function<void(ExperimentConfig&)>>{
           [](ExperimentConfig& x) { x.experiment = "plot"; },
           [](ExperimentConfig& x) { x.grid.points = 100; },
           [](ExperimentConfig& x) { x.grid.dim = 3; },
           [](ExperimentConfig& x) { x.alpha = {2.5}; },
           [](ExperimentConfig& x) { x.p = {1.5}; },
           [](ExperimentConfig& x) { x.t = {-1.0}; },
           [](ExperimentConfig& x) { x.C = -2.0; },
           [](ExperimentConfig& x) { x.phi = {"x^3"}; },
           [](ExperimentConfig& x) { x.tol = 0.5; },
           [](ExperimentConfig& x) { x.triplet_json = R"({"nu":{"kind":"stable","alpha":3}})"; },
           [](ExperimentConfig& x) { x.input_csv = "/nonexistent/u0.csv"; }}) {
    ExperimentConfig bad = c;
    mutate(bad);
    EXPECT_THROW(validate_config(bad), ConfigError);
  }
}

TEST(RunExperiment, NegativePointsLeavesNoFiles) {
  const fs::path out = scratch("negative_m");
  EXPECT_THROW(parse_experiment_config(R"({"experiment":"heat","grid":{"points":-512}})"), ConfigError);
  ExperimentConfig c;
  c.experiment = "heat";
  c.grid.points = 3;
  c.output = out;
  EXPECT_THROW(run_experiment(c), ConfigError);
  EXPECT_FALSE(fs::exists(out));
}

TEST(RunExperiment, HeatSweepWritesTwelveRows) {
  ExperimentConfig c;
  c.experiment = "heat";
  c.alpha = {0.5, 1.0, 1.5, 2.0};
  c.p = {2.0};
  c.q = {std::numeric_limits<double>::infinity()};
  c.t = {0.25, 1.0, 4.0};
  c.output = scratch("heat");
  const RunOutcome r = run_experiment(c);
  EXPECT_EQ(r.exit_code, kExitOk);
  const auto rows = lines(slurp(c.output / "results.csv"));
  ASSERT_EQ(rows.size(), 13u);
  EXPECT_EQ(rows[0], "field,alpha,p,q,t,lhs,rhs,ratio,pass,d,L,M,tol");
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_NE(rows[i].find(",true,1,20,512,1e-10"), std::string::npos) << rows[i];
  }
  const auto summary = nlohmann::json::parse(slurp(c.output / "summary.json"));
  EXPECT_EQ(summary["checks"], 12);
  EXPECT_EQ(summary["failures"], 0);
  EXPECT_LE(summary["worst_ratio"].get<double>(), 1.0);
  const std::string log = slurp(c.output / "run.log");
  EXPECT_NE(log.find("grid d=1 L=20 M=512"), std::string::npos);
  EXPECT_NE(log.find("wall_time_s"), std::string::npos);
  fs::remove_all(c.output);
}

TEST(RunExperiment, InvalidDecayConstantFails) {
  ExperimentConfig c = parse_experiment_config(
      R"({"experiment":"decay","triplet":{"nu":{"kind":"stable","alpha":1}},"sweep":{"C":0.1,"phi":"quadratic"}})");
  c.output = scratch("decay_bad");
  const RunOutcome r = run_experiment(c);
  EXPECT_EQ(r.exit_code, kExitAssertion);
  const auto summary = nlohmann::json::parse(slurp(c.output / "summary.json"));
  EXPECT_FALSE(summary["violations"].empty());
  EXPECT_EQ(summary["bound_rate"].get<double>(), 10.0);
  fs::remove_all(c.output);
}

TEST(RunExperiment, SteadyReportsConditions) {
  ExperimentConfig c;
  c.experiment = "steady";
  c.output = scratch("steady");
  EXPECT_EQ(run_experiment(c).exit_code, kExitOk);
  const auto j = nlohmann::json::parse(slurp(c.output / "steady.json"));
  EXPECT_NEAR(j["con2_C"].get<double>(), 1.0, 1e-6);
  EXPECT_EQ(j["bA"][0].get<double>(), 0.0);
  EXPECT_LT(j["normalization_defect"].get<double>(), 1e-6);
  EXPECT_EQ(lines(slurp(c.output / "results.csv")).size(), 513u);
  fs::remove_all(c.output);
}

TEST(RunExperiment, ResultsAreByteIdentical) {
  for (const char* exp : {"kato", "check-lsi", "fp"}) {
    ExperimentConfig c;
    c.experiment = exp;
    c.seed = 17;
    c.output = scratch(std::string("det_a_") + exp);
    ASSERT_NE(run_experiment(c).exit_code, kExitConfig);
    ExperimentConfig d = c;
    d.output = scratch(std::string("det_b_") + exp);
    run_experiment(d);
    const std::string a = slurp(c.output / "results.csv");
    EXPECT_EQ(a, slurp(d.output / "results.csv")) << exp;
    EXPECT_EQ(a.find('\r'), std::string::npos);
    fs::remove_all(c.output);
    fs::remove_all(d.output);
  }
}

#ifdef LEVYLAB_BINARY
int run_cli(const std::string& args) {
  const int status = std::system((std::string(LEVYLAB_BINARY) + " " + args + " >/dev/null 2>&1").c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(Cli, ExitCodes) {
  const fs::path out = scratch("cli");
  EXPECT_EQ(run_cli("--out " + out.string() + " heat --alpha 1 --t 1"), kExitOk);
  EXPECT_TRUE(fs::exists(out / "results.csv"));
  const fs::path bad = scratch("cli_bad");
  EXPECT_EQ(run_cli("--out " + bad.string() + " heat --alpha 3"), kExitConfig);
  EXPECT_EQ(run_cli("--out " + bad.string() + " --points -8 heat"), kExitConfig);
  EXPECT_EQ(run_cli("--out " + bad.string() + " nonsense"), kExitConfig);
  EXPECT_EQ(run_cli("--out " + bad.string() + " decay --phi cubic"), kExitConfig);
  EXPECT_FALSE(fs::exists(bad));
  EXPECT_EQ(run_cli("--out " + out.string() + " decay --C 0.1 --phi quadratic"), kExitAssertion);
  fs::remove_all(out);
}

TEST(Cli, ConfigFileAndOverrides) {
  const fs::path dir = scratch("cli_cfg");
  fs::create_directories(dir);
  {
    std::ofstream(dir / "triplet.json") << R"({"nu":{"kind":"stable","alpha":1.5}})";
    std::ofstream(dir / "cfg.json") << R"({"experiment":"fp","triplet_path":"triplet.json","sweep":{"t":[0,1]}})";
  }
  const fs::path out = dir / "out";
  EXPECT_EQ(run_cli("--config " + (dir / "cfg.json").string() + " --out " + out.string() + " fp --t-list 0 2 4"), kExitOk);
  const auto rows = lines(slurp(out / "results.csv"));
  EXPECT_EQ(rows.size(), 4u);
  EXPECT_EQ(run_cli("--config " + (dir / "cfg.json").string() + " --out " + (dir / "x").string() + " heat"), kExitConfig);
  fs::remove_all(dir);
}
#endif

}  // namespace
}  // namespace levylab
