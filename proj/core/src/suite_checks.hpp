#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "levylab/suite.hpp"

namespace levylab::detail {

// Accumulates a worst-case metric and whether it stayed within its limit.
struct Tracker {
  std::string metric;
  double limit;
  double worst = -std::numeric_limits<double>::infinity();
  bool ok = true;

  void record(double value) {
    if (!(value <= limit)) ok = false;
    if (std::isnan(value) || value > worst) worst = value;
  }
};

inline CriterionResult fresh() {
  CriterionResult r;
  r.passed = true;
  return r;
}

inline void add(CriterionResult& r, const Tracker& t) {
  r.metrics.emplace_back(t.metric, t.worst);
  r.passed = r.passed && t.ok;
  std::ostringstream os;
  os.precision(3);
  if (!r.detail.empty()) os << "; ";
  os << t.metric << " " << t.worst << (t.ok ? " <= " : " > ") << t.limit;
  r.detail += os.str();
}

CriterionResult semigroup_exactness(const SuiteOptions& o);
CriterionResult gaussian_oracle(const SuiteOptions& o);
CriterionResult cauchy_oracle(const SuiteOptions& o);
CriterionResult ultracontractivity(const SuiteOptions& o);
CriterionResult euclidean_lsi(const SuiteOptions& o);
CriterionResult kato(const SuiteOptions& o);
CriterionResult stable_identities(const SuiteOptions& o);
CriterionResult counterexample(const SuiteOptions& o);
CriterionResult entropy_production(const SuiteOptions& o);
CriterionResult exponential_decay(const SuiteOptions& o);
CriterionResult modified_lsi(const SuiteOptions& o);
CriterionResult brute_force_jump(const SuiteOptions& o);

}  // namespace levylab::detail
