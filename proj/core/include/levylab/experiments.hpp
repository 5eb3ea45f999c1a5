#pragma once

// Experiment runner: strict JSON configuration, named experiment suites and
// the three output files (results.csv, summary.json, run.log).
//
// Configuration schema (every key optional except "experiment"):
//   {
//     "experiment": "heat" | "fp" | "steady" | "decay" | "check-lsi" |
//                   "check-conditions" | "euclidean-lsi" | "kato" | "all",
//     "grid":    {"dim": 1, "half_width": 20, "points": 512},
//     "triplet": { triplet object, see parse_triplet_config } or
//     "triplet_path": "file.json",
//     "sweep": {"alpha": [..], "t": [..], "p": [..], "q": [.., "inf"],
//               "times": [..], "phi": ["xlogx", "quadratic"], "C": 1.0,
//               "fields": "default" | "battery" | family name,
//               "z_range": [1e-3, 1e3], "per_decade": 4},
//     "input_csv": "u0.csv", "out_csv": "rows.csv",
//     "output": "out", "seed": 42, "tol": 1e-10
//   }

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace levylab {

inline constexpr int kExitOk = 0;
inline constexpr int kExitAssertion = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;

struct GridSpec {
  int dim = 1;
  double half_width = 20.0;
  std::size_t points = 512;
};

struct ExperimentConfig {
  std::string experiment;
  GridSpec grid;
  /// Triplet object as JSON text; empty selects the experiment default.
  std::string triplet_json;
  /// Directory that relative paths inside the triplet resolve against.
  std::filesystem::path base_dir;

  std::vector<double> alpha;
  std::vector<double> t;
  std::vector<double> p;
  std::vector<double> q;
  std::vector<double> times;
  std::vector<std::string> phi;
  std::optional<double> C;
  std::string fields = "default";
  double z_min = 1e-3;
  double z_max = 1e3;
  int per_decade = 4;

  std::filesystem::path input_csv;
  std::filesystem::path out_csv;
  std::filesystem::path output = "levylab-out";
  std::uint64_t seed = 42;
  double tol = 1e-10;
};

const std::vector<std::string>& experiment_names();

/// Strict parse: unknown keys and wrongly typed values raise ConfigError.
ExperimentConfig parse_experiment_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Range checks on every numeric field; throws ConfigError.
void validate_config(const ExperimentConfig& config);

struct RunOutcome {
  int exit_code = kExitOk;
  std::size_t checks = 0;
  std::size_t failures = 0;
  std::string message;
};

/// Validates, runs and writes the outputs. Configuration errors leave no
/// files behind and map to kExitConfig; numerical failures map to
/// kExitNumerical; any failed check maps to kExitAssertion.
RunOutcome run_experiment(const ExperimentConfig& config);

}  // namespace levylab
