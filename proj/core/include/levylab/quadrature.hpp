#pragma once

// Adaptive one-dimensional quadrature shared by every module: a QAG-style
// Gauss-Kronrod (7/15) integrator, geometric block summation for
// semi-infinite ranges and endpoint singularities, and half-period panel
// summation with Wynn's epsilon acceleration for oscillatory tails.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <queue>
#include <span>
#include <type_traits>
#include <vector>

#include "levylab/errors.hpp"

namespace levylab {

template <class T>
struct QuadResult {
  T value{};
  double error = 0.0;
  bool converged = false;
  int evaluations = 0;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class T>
double magnitude(const T& v) {
  return std::abs(v);
}

template <class T>
bool finite_value(const T& v) {
  if constexpr (std::is_same_v<T, double>) {
    return std::isfinite(v);
  } else {
    return std::isfinite(v.real()) && std::isfinite(v.imag());
  }
}

template <class T>
struct Panel {
  double a, b;
  T value;
  double error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class T, class F>
Panel<T> kronrod15(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const T fc = f(center);
  T kronrod = fc * kKronrodWeights[7];
  T gauss = fc * kGaussWeights[3];
  double resabs = magnitude(fc) * kKronrodWeights[7];
  std::array<T, 7> f1{}, f2{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const T sum = f1[j] + f2[j];
    kronrod += sum * kKronrodWeights[j];
    resabs += (magnitude(f1[j]) + magnitude(f2[j])) * kKronrodWeights[j];
    if (j % 2 == 1) gauss += sum * kGaussWeights[j / 2];
  }
  const T mean = kronrod * 0.5;
  double resasc = magnitude(fc - mean) * kKronrodWeights[7];
  for (int j = 0; j < 7; ++j)
    resasc += (magnitude(f1[j] - mean) + magnitude(f2[j] - mean)) * kKronrodWeights[j];
  const double scale = std::abs(half);
  double err = magnitude(kronrod - gauss) * scale;
  resasc *= scale;
  resabs *= scale;
  if (resasc != 0.0 && err != 0.0) err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * resabs;
  if (resabs > std::numeric_limits<double>::min() / (50.0 * std::numeric_limits<double>::epsilon()))
    err = std::max(err, roundoff);
  return {a, b, kronrod * half, err};
}

}  // namespace detail

/// Adaptive Gauss-Kronrod on a finite interval. Converges when the summed
/// error estimate drops below max(abs_tol, rel_tol*|I|).
template <class F>
auto gauss_kronrod(F&& f, double a, double b, double abs_tol, double rel_tol = 0.0,
                   int max_intervals = 4000) {
  using T = std::decay_t<decltype(f(a))>;
  QuadResult<T> out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::priority_queue<detail::Panel<T>> heap;
  auto first = detail::kronrod15<T>(f, a, b);
  out.evaluations = 15;
  T total = first.value;
  double total_err = first.error;
  heap.push(first);
  int intervals = 1;
  auto target = [&] { return std::max(abs_tol, rel_tol * detail::magnitude(total)); };
  while (total_err > target() && intervals < max_intervals) {
    auto worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(std::abs(worst.b - worst.a) > 4.0 * std::numeric_limits<double>::epsilon() *
                                            std::max(std::abs(worst.a), std::abs(worst.b)))) {
      break;
    }
    heap.pop();
    auto left = detail::kronrod15<T>(f, worst.a, mid);
    auto right = detail::kronrod15<T>(f, mid, worst.b);
    out.evaluations += 30;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Re-sum to shed accumulated cancellation in the running totals.
  T sum{};
  double err = 0.0;
  while (!heap.empty()) {
    sum += heap.top().value;
    err += heap.top().error;
    heap.pop();
  }
  out.value = sum;
  out.error = err;
  out.converged = detail::finite_value(sum) && err <= std::max(abs_tol, rel_tol * detail::magnitude(sum));
  return out;
}

namespace detail {

// Sums block integrals I_0, I_1, ... whose magnitudes are expected to decay
// geometrically. The tail beyond the last block is extrapolated with the
// observed ratio once it has stopped growing.
template <class T, class Block>
QuadResult<T> sum_blocks(Block&& block, double tol, int max_blocks) {
  QuadResult<T> out;
  T sum{};
  double err = 0.0;
  double scale = 0.0;
  std::vector<T> history;
  int zero_run = 0;
  for (int k = 0; k < max_blocks; ++k) {
    QuadResult<T> piece = block(k);
    out.evaluations += piece.evaluations;
    if (!finite_value(piece.value)) {
      out.value = piece.value;
      out.error = std::numeric_limits<double>::infinity();
      return out;
    }
    sum += piece.value;
    err += piece.error;
    history.push_back(piece.value);
    const double mag = magnitude(piece.value);
    scale += mag;
    // Absolute targets below roundoff of the running sum are unattainable.
    const double eff = std::max(tol, 1e-12 * scale);
    zero_run = (mag <= 1e-3 * eff / (k + 1.0) && piece.error <= 1e-3 * eff) ? zero_run + 1 : 0;
    if (zero_run >= 4) {
      out.value = sum;
      out.error = err;
      out.converged = err <= eff;
      return out;
    }
    const std::size_t n = history.size();
    if (n < 4) continue;
    const double m1 = magnitude(history[n - 1]);
    const double m2 = magnitude(history[n - 2]);
    const double m3 = magnitude(history[n - 3]);
    if (m2 == 0.0 || m3 == 0.0) continue;
    const double q1 = m1 / m2;
    const double q2 = m2 / m3;
    if (!(q1 < 0.985)) continue;
    // Ratios must settle (or keep shrinking); a creeping ratio means a
    // slowly divergent or log-type tail.
    if (q1 > q2 + 1e-3 * (1.0 - q1)) continue;
    const T ratio = history[n - 1] / history[n - 2];
    const T tail = history[n - 1] * ratio / (T(1.0) - ratio);
    const double tail_mag = magnitude(tail);
    const double extrap_err = tail_mag * std::abs(q1 - q2) / std::max(1e-300, 1.0 - q1);
    if (tail_mag <= 0.1 * eff || extrap_err + 1e-12 * tail_mag <= 0.1 * eff) {
      out.value = sum + tail;
      out.error = err + extrap_err + 1e-12 * tail_mag;
      out.converged = out.error <= eff && finite_value(out.value);
      return out;
    }
  }
  out.value = sum;
  out.error = std::numeric_limits<double>::infinity();
  out.converged = false;
  return out;
}

}  // namespace detail

/// Integral over [a, inf) for a > 0 as a sum over blocks [a 2^k, a 2^(k+1)].
/// Tails too slow for geometric blocks (logarithmic decay) are retried in
/// the variable u = ln r with blocks [u0 2^k, u0 2^(k+1)].
template <class F>
auto integrate_tail(F&& f, double a, double tol, int max_blocks = 1000) {
  using T = std::decay_t<decltype(f(a))>;
  if (!(a > 0.0)) throw InvalidArgument("integrate_tail requires a > 0");
  auto direct = detail::sum_blocks<T>(
      [&](int k) {
        const double lo = std::ldexp(a, k);
        return gauss_kronrod(f, lo, 2.0 * lo, 0.05 * tol * std::ldexp(1.0, -std::min(k, 30)), 1e-13);
      },
      tol, max_blocks);
  if (direct.converged) return direct;
  const double u0 = std::max(1.0, std::log(a));
  QuadResult<T> head;
  head.converged = true;
  if (std::exp(u0) > a) head = gauss_kronrod(f, a, std::exp(u0), 0.1 * tol, 1e-13);
  auto g = [&](double u) {
    const double r = std::exp(u);
    return f(r) * r;
  };
  // exp(u) must stay finite: u < 700.
  const int blocks = std::max(1, static_cast<int>(std::floor(std::log2(700.0 / u0))));
  auto logscale = detail::sum_blocks<T>(
      [&](int k) {
        const double lo = std::ldexp(u0, k);
        return gauss_kronrod(g, lo, 2.0 * lo, 0.05 * tol * std::ldexp(1.0, -k), 1e-13);
      },
      0.9 * tol, blocks);
  if (!logscale.converged || !head.converged) {
    direct.evaluations += head.evaluations + logscale.evaluations;
    return direct;
  }
  logscale.value += head.value;
  logscale.error += head.error;
  logscale.evaluations += head.evaluations + direct.evaluations;
  return logscale;
}

/// Integral over (0, b] with a possible integrable singularity at 0, as a
/// sum over dyadic shells [b 2^-(k+1), b 2^-k].
template <class F>
auto integrate_near_zero(F&& f, double b, double tol, int max_blocks = 1000) {
  using T = std::decay_t<decltype(f(b))>;
  if (!(b > 0.0)) throw InvalidArgument("integrate_near_zero requires b > 0");
  return detail::sum_blocks<T>(
      [&](int k) {
        const double hi = std::ldexp(b, -k);
        return gauss_kronrod(f, 0.5 * hi, hi, 0.05 * tol * std::ldexp(1.0, -std::min(k, 30)), 1e-13);
      },
      tol, max_blocks);
}

/// Wynn epsilon extrapolation of a sequence of partial sums. Returns the
/// accelerated limit and an error estimate.
std::pair<double, double> wynn_epsilon(std::span<const double> partial_sums);

/// Oscillatory tail: integral over [a, inf) of f, where f changes sign
/// near the nodes (k + phase) * period. Panels between consecutive nodes are
/// integrated and their partial sums accelerated.
QuadResult<double> integrate_oscillatory_tail(const std::function<double(double)>& f, double a,
                                              double period, double phase, double tol,
                                              int max_panels = 4000);

/// Gauss-Legendre nodes and weights on [-1, 1] (cached per n).
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(int n);

/// Interval with optional infinite upper end (b = +inf) and an optional
/// integrable endpoint singularity at a.
struct Interval {
  double a = 0.0;
  double b = 1.0;
  bool singular_at_a = false;
};

/// General entry point: finite, semi-infinite and left-singular ranges.
/// Throws QuadratureFailure when the tolerance cannot be met.
template <class F>
auto integrate_scaled(F&& g, Interval iv, double tol) {
  using T = std::decay_t<decltype(g(iv.a + 1.0))>;
  QuadResult<T> total;
  auto accumulate = [&](const QuadResult<T>& r) {
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
  };
  double a = iv.a;
  const bool infinite = std::isinf(iv.b);
  if (iv.singular_at_a) {
    // Shells toward a, mapped through s = a + r.
    const double width = infinite ? 1.0 : (iv.b - a) * 0.5;
    accumulate(integrate_near_zero([&](double r) { return g(a + r); }, width, 0.4 * tol));
    a += width;
  }
  if (infinite) {
    if (a <= 0.0) {
      accumulate(gauss_kronrod(g, a, 1.0, 0.2 * tol, 1e-14));
      a = 1.0;
    }
    accumulate(integrate_tail(g, a, 0.4 * tol));
  } else if (a < iv.b) {
    accumulate(gauss_kronrod(g, a, iv.b, 0.4 * tol, 1e-14));
  }
  total.converged = detail::finite_value(total.value) && total.error <= tol;
  if (!total.converged) throw QuadratureFailure("integrate_scaled did not converge", total.error);
  return total;
}

}  // namespace levylab
