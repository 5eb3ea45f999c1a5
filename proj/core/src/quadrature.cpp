#include "levylab/quadrature.hpp"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace levylab {

namespace {
std::mutex& sink_mutex() {
  static std::mutex m;
  return m;
}
WarningSink& sink_slot() {
  static WarningSink sink;
  return sink;
}
}  // namespace

WarningSink set_warning_sink(WarningSink sink) {
  std::lock_guard lock(sink_mutex());
  std::swap(sink_slot(), sink);
  return sink;
}

void warn(const std::string& code, const std::string& message) {
  WarningSink sink;
  {
    std::lock_guard lock(sink_mutex());
    sink = sink_slot();
  }
  if (sink) sink(code, message);
}

std::pair<double, double> wynn_epsilon(std::span<const double> s) {
  const std::size_t n = s.size();
  if (n == 0) return {0.0, std::numeric_limits<double>::infinity()};
  if (n < 3) return {s[n - 1], n == 2 ? std::abs(s[1] - s[0]) : std::numeric_limits<double>::infinity()};
  // Column-by-column epsilon table; even columns carry the estimates.
  std::vector<double> prev(n + 1, 0.0);  // eps_{-1}
  std::vector<double> cur(s.begin(), s.end());  // eps_0
  double best = s[n - 1];
  double best_err = std::abs(s[n - 1] - s[n - 2]);
  double last_even = best;
  bool have_even = false;
  for (std::size_t col = 1; cur.size() > 1; ++col) {
    std::vector<double> next(cur.size() - 1);
    bool ok = true;
    for (std::size_t i = 0; i + 1 < cur.size(); ++i) {
      const double diff = cur[i + 1] - cur[i];
      if (diff == 0.0 || !std::isfinite(diff)) {
        ok = false;
        break;
      }
      next[i] = prev[i + 1] + 1.0 / diff;
    }
    if (!ok) break;
    if (col % 2 == 0) {
      const double est = next.back();
      const double err = next.size() >= 2 ? std::abs(next.back() - next[next.size() - 2])
                                          : std::abs(est - last_even);
      if (have_even || next.size() >= 2) {
        if (std::isfinite(est) && err < best_err) {
          best = est;
          best_err = err;
        }
      }
      last_even = est;
      have_even = true;
    }
    prev = std::move(cur);
    cur = std::move(next);
  }
  return {best, best_err};
}

QuadResult<double> integrate_oscillatory_tail(const std::function<double(double)>& f, double a,
                                              double period, double phase, double tol,
                                              int max_panels) {
  QuadResult<double> out;
  if (!(period > 0.0)) throw InvalidArgument("integrate_oscillatory_tail requires period > 0");
  double k = std::ceil(a / period - phase);
  double node = (k + phase) * period;
  if (node <= a) {
    k += 1.0;
    node = (k + phase) * period;
  }
  double sum = 0.0;
  double err = 0.0;
  double abs_sum = 0.0;
  // The stretch up to the first node can be long at low frequency; dyadic
  // segments keep features near a visible to the rule.
  for (double lo = a; lo < node;) {
    const double hi = (a > 0.0 && node > 2.0 * lo) ? 2.0 * lo : node;
    auto first = gauss_kronrod(f, lo, hi, 0.01 * tol, 1e-13);
    sum += first.value;
    err += first.error;
    abs_sum += std::abs(first.value);
    out.evaluations += first.evaluations;
    lo = hi;
  }
  std::vector<double> partial;
  partial.reserve(64);
  int small_run = 0;
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  int stable_run = 0;
  for (int p = 0; p < max_panels; ++p) {
    const double lo = node;
    k += 1.0;
    node = (k + phase) * period;
    auto piece = gauss_kronrod(f, lo, node, 1e-3 * tol, 1e-13);
    out.evaluations += piece.evaluations;
    sum += piece.value;
    err += piece.error;
    abs_sum += std::abs(piece.value);
    // Panel errors are relative to panel size, so the attainable accuracy
    // is bounded by roundoff on the summed magnitudes.
    const double eff_tol = std::max(tol, 4e-13 * abs_sum);
    if (!std::isfinite(sum)) break;
    partial.push_back(sum);
    small_run = std::abs(piece.value) < 1e-3 * tol ? small_run + 1 : 0;
    if (small_run >= 3) {
      out.value = sum;
      out.error = err + std::abs(piece.value);
      out.converged = out.error <= eff_tol;
      return out;
    }
    if (partial.size() >= 12) {
      const std::size_t take = std::min<std::size_t>(partial.size(), 40);
      auto [est, est_err] = wynn_epsilon(std::span<const double>(partial).last(take));
      const double change = std::isnan(prev_est) ? std::numeric_limits<double>::infinity()
                                                 : std::abs(est - prev_est);
      prev_est = est;
      stable_run = (std::max(est_err, change) + err <= 0.5 * eff_tol) ? stable_run + 1 : 0;
      if (stable_run >= 3) {
        out.value = est;
        out.error = std::max(est_err, change) + err;
        out.converged = true;
        return out;
      }
    }
  }
  out.value = partial.empty() ? sum : partial.back();
  out.error = std::numeric_limits<double>::infinity();
  out.converged = false;
  return out;
}

const GaussLegendreRule& gauss_legendre(int n) {
  if (n < 1) throw InvalidArgument("gauss_legendre requires n >= 1");
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<GaussLegendreRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (slot) return *slot;
  auto rule = std::make_unique<GaussLegendreRule>();
  rule->nodes.resize(static_cast<std::size_t>(n));
  rule->weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    // Newton iteration on P_n from the Chebyshev-like initial guess.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule->nodes[static_cast<std::size_t>(i)] = x;
    rule->weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  slot = std::move(rule);
  return *slot;
}

}  // namespace levylab
