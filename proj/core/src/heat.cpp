#include "levylab/heat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace levylab {

namespace {

void require_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidAlpha("alpha must lie in (0, 2]");
}

std::vector<Complex> symbol_powers(const Grid& grid, double alpha) {
  std::vector<Complex> m(grid.size());
  for (std::size_t k = 0; k < m.size(); ++k) m[k] = std::pow(grid.wavevector(k).norm(), alpha);
  return m;
}

}  // namespace

SpectralField heat_evolve(const SpectralField& f, double alpha, double t) {
  require_alpha(alpha);
  if (!(t >= 0.0)) throw InvalidArgument("heat_evolve requires t >= 0");
  if (t == 0.0) return f;
  auto m = symbol_powers(f.grid(), alpha);
  for (auto& v : m) v = std::exp(-t * v.real());
  return apply_multiplier(f, m);
}

SpectralField semigroup_evolve(const SpectralField& f, const Symbol& psi, double t) {
  if (!(t >= 0.0)) throw InvalidArgument("semigroup_evolve requires t >= 0");
  if (t == 0.0) return f;
  return apply_multiplier(f, [&](const Vec2& xi) { return std::exp(t * psi(xi)); });
}

SpectralField fractional_laplacian(const SpectralField& f, double alpha) {
  require_alpha(alpha);
  return apply_multiplier(f, symbol_powers(f.grid(), alpha));
}

double half_operator_norm(const SpectralField& f, double alpha) {
  require_alpha(alpha);
  const auto& grid = f.grid();
  const auto c = f.coefficients();
  double sum = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) sum += std::pow(grid.wavevector(k).norm(), alpha) * std::norm(c[k]);
  return sum * grid.frequency_weight();
}

double lsi_gamma_ratio(int n, double alpha) {
  require_alpha(alpha);
  return 2.0 * std::tgamma(n / alpha) / (alpha * std::tgamma(0.5 * n));
}

double lsi_constant(int n, double alpha) {
  if (n < 1) throw InvalidArgument("dimension must be positive");
  const double c = lsi_gamma_ratio(n, alpha);
  return alpha * std::pow(c, alpha / n) /
         (n * std::pow(std::numbers::pi, 0.5 * alpha) * std::exp(alpha - 1.0));
}

LsiGap lsi_gap(const SpectralField& f, double alpha) {
  require_alpha(alpha);
  const double norm = lp_norm(f, 2.0);
  if (!(norm > 0.0)) throw DegenerateField("lsi_gap: field is identically zero");
  const SpectralField g = std::abs(norm - 1.0) > 1e-8 ? map_values(f, [norm](double v) { return v / norm; }) : f;
  const double dirichlet = half_operator_norm(g, alpha);
  if (!(dirichlet > 0.0)) throw DegenerateField("lsi_gap: Dirichlet term vanishes");
  double ent = 0.0;
  for (double v : g.values()) {
    const double s = v * v;
    if (s >= 1e-300) ent += s * std::log(s);
  }
  LsiGap out;
  out.lhs = ent * g.grid().cell_volume();
  const int n = g.grid().dim();
  out.rhs = (n / alpha) * std::log(lsi_constant(n, alpha) * dirichlet);
  return out;
}

UltracontractivityBound ultracontractivity_constant(int n, double alpha, double p, double q, double t) {
  require_alpha(alpha);
  if (!(p >= 2.0) || !(q >= p)) throw InvalidExponent("smoothing bound requires q >= p >= 2");
  if (!(t > 0.0)) throw InvalidArgument("smoothing bound requires t > 0");
  UltracontractivityBound b{n, alpha, p, q, t, lsi_constant(n, alpha), 1.0};
  if (std::isinf(q)) {
    if (p != 2.0) throw InvalidExponent("q = infinity is supported for p = 2 only");
    b.bound = std::pow(b.A * n / (2.0 * alpha * t), n / (2.0 * alpha));
    return b;
  }
  if (q == p) return b;
  const double base = b.A * n * (q - p) / (2.0 * alpha * t);
  b.bound = std::pow(base, n * (q - p) / (alpha * p * q)) * std::pow(p, n / (q * alpha)) / std::pow(q, n / (p * alpha));
  return b;
}

HypercontractivityReport verify_hypercontractivity(const SpectralField& f, double alpha, double p, double q,
                                                   double t) {
  HypercontractivityReport r;
  r.bound = ultracontractivity_constant(f.grid().dim(), alpha, p, q, t);
  r.norm_p_initial = lp_norm(f, p);
  if (!(r.norm_p_initial > 0.0)) throw DegenerateField("verify_hypercontractivity: field is identically zero");
  r.norm_q_evolved = lp_norm(heat_evolve(f, alpha, t), q);
  r.ratio = r.norm_q_evolved / (r.norm_p_initial * r.bound.bound);
  r.violation = r.ratio > 1.0 + 1e-6;
  return r;
}

namespace convex {

ConvexMap linear() {
  return {[](double r) { return r; }, [](double) { return 1.0; }, "r"};
}

ConvexMap square() {
  return {[](double r) { return r * r; }, [](double r) { return 2.0 * r; }, "r^2"};
}

ConvexMap abs_power(double p) {
  if (!(p >= 1.0)) throw InvalidArgument("abs_power requires p >= 1");
  return {[p](double r) { return std::pow(std::abs(r), p); },
          [p](double r) { return r == 0.0 ? 0.0 : p * std::copysign(std::pow(std::abs(r), p - 1.0), r); },
          "|r|^" + format_double(p)};
}

}  // namespace convex

KatoReport kato_check(const SpectralField& u, const ConvexMap& phi, double alpha) {
  const SpectralField lhs = fractional_laplacian(map_values(u, phi.f), alpha);
  const SpectralField gu = fractional_laplacian(u, alpha);
  KatoReport r;
  r.max_violation = -std::numeric_limits<double>::infinity();
  double max_rhs = 0.0;
  for (std::size_t i = 0; i < u.grid().size(); ++i) {
    const double rhs = phi.df(u.value(i)) * gu.value(i);
    max_rhs = std::max(max_rhs, std::abs(rhs));
    r.max_violation = std::max(r.max_violation, lhs.value(i) - rhs);
  }
  r.scale = 1.0 + max_rhs;
  r.passed = r.max_violation <= 1e-8 * r.scale;
  return r;
}

}  // namespace levylab
