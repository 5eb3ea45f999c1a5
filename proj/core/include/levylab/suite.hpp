#pragma once

// The verification suite: twelve property checks with closed-form oracles
// where they exist. Shared by the `all` experiment and the acceptance test.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace levylab {

struct SuiteOptions {
  std::uint64_t seed = 42;
  double tol = 1e-10;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  /// (metric, value) pairs in evaluation order.
  std::vector<std::pair<std::string, double>> metrics;
  double seconds = 0.0;
};

inline constexpr int kCriterionCount = 12;

std::string criterion_name(int id);

/// Runs one check (1..12). Numerical errors propagate.
CriterionResult run_criterion(int id, const SuiteOptions& options);

std::vector<CriterionResult> run_suite(const SuiteOptions& options);

}  // namespace levylab
