#include "levylab/entropy.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

#include "levylab/parallel.hpp"

namespace levylab {

namespace {

constexpr double kEntropyFloor = 1e-300;
constexpr double kRatioFloor = 1e-14;
constexpr double kUnresolved = 1e-12;

bool is_xlogx(const PhiFunction& phi) { return phi.name == "xlogx"; }

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
  if (!(a == b)) throw InvalidGrid(std::string(what) + ": field and measure live on different grids");
}

void require_admissible(const PhiFunction& phi) {
  if (!phi.admissible) throw InvalidArgument("Phi '" + phi.name + "' is not admissible");
}

double third_derivative(const PhiFunction& phi, double b) {
  const double h = 1e-5 * b;
  return (phi.d2phi(b + h) - phi.d2phi(b - h)) / (2.0 * h);
}

}  // namespace

PhiFunction PhiFunction::xlogx() {
  return {[](double x) { return x > 0.0 ? x * std::log(x) : 0.0; },
          [](double x) { return std::log(std::max(x, kEntropyFloor)) + 1.0; },
          [](double x) { return 1.0 / std::max(x, kEntropyFloor); }, true, "xlogx"};
}

PhiFunction PhiFunction::quadratic() {
  return {[](double x) { return 0.5 * x * x; }, [](double x) { return x; }, [](double) { return 1.0; }, true,
          "quadratic"};
}

PhiFunction PhiFunction::custom(std::function<double(double)> phi, std::function<double(double)> dphi,
                                std::function<double(double)> d2phi, std::string name) {
  PhiFunction out{std::move(phi), std::move(dphi), std::move(d2phi), false, std::move(name)};
  out.admissible = check_admissible(out);
  return out;
}

bool check_admissible(const PhiFunction& phi) {
  std::vector<double> r;
  for (int k = -24; k <= 24; ++k) r.push_back(std::pow(10.0, k / 8.0));
  for (double x : r) {
    const double s = phi.d2phi(x);
    if (!std::isfinite(s) || s < -1e-10 * std::max(1.0, std::abs(s))) return false;
  }
  // Hessian of (a, b) -> D_Phi(a + b, b) at c = a + b > 0, b > 0.
  for (double c : r) {
    for (double b : r) {
      const double a = c - b;
      const double pc = phi.d2phi(c);
      const double pb = phi.d2phi(b);
      const double haa = pc;
      const double hab = pc - pb;
      const double hbb = pc - pb - a * third_derivative(phi, b);
      const double scale = std::max({1.0, std::abs(pc), std::abs(pb)});
      const double tol = 1e-10 * scale;
      if (!std::isfinite(hbb)) return false;
      if (haa < -tol || hbb < -tol) return false;
      if (haa * hbb - hab * hab < -tol * scale * std::max(1.0, std::abs(a) / b)) return false;
    }
  }
  return true;
}

double bregman(const PhiFunction& phi, double a, double b) {
  if (!(a >= 0.0) || !(b >= 0.0)) throw DomainError("bregman: arguments must be nonnegative");
  if (b == 0.0 && is_xlogx(phi)) throw DomainError("bregman: b = 0 is outside the domain of x log x");
  return phi.phi(a) - phi.phi(b) - phi.dphi(b) * (a - b);
}

WeightedMeasure::WeightedMeasure(Grid grid, std::vector<double> weights)
    : grid_(std::move(grid)), weights_(std::move(weights)) {
  if (weights_.size() != grid_.size()) throw InvalidArgument("WeightedMeasure: weight count does not match grid");
  double sum = 0.0;
  for (double w : weights_) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw NegativeDensity("WeightedMeasure: weights must be finite and >= 0");
    sum += w;
  }
  if (std::abs(sum * grid_.cell_volume() - 1.0) > 1e-10)
    throw InvalidArgument("WeightedMeasure: total mass differs from 1 by more than 1e-10");
}

WeightedMeasure WeightedMeasure::from_density(const SpectralField& density) {
  std::vector<double> w(density.values().begin(), density.values().end());
  const double peak = density.max_value();
  double sum = 0.0;
  for (double& x : w) {
    if (x < -1e-6 * peak) throw NegativeDensity("WeightedMeasure: density has negative values");
    // Cells at the transform noise floor carry no usable information.
    if (x <= kUnresolved * peak) x = 0.0;
    sum += x;
  }
  const double mass = sum * density.grid().cell_volume();
  if (std::abs(mass - 1.0) > 1e-6) throw InvalidArgument("WeightedMeasure: density mass is not 1");
  for (double& x : w) x /= mass;
  return WeightedMeasure(density.grid(), std::move(w));
}

WeightedMeasure WeightedMeasure::uniform(const Grid& grid) {
  const double w = 1.0 / (static_cast<double>(grid.size()) * grid.cell_volume());
  return WeightedMeasure(grid, std::vector<double>(grid.size(), w));
}

EntropyValue phi_entropy_split(std::span<const double> v, const WeightedMeasure& mu, const PhiFunction& phi) {
  if (v.size() != mu.grid().size()) throw InvalidArgument("phi_entropy: field size does not match measure");
  const auto w = mu.weights();
  const bool floor = is_xlogx(phi);
  double integral = 0.0, mean = 0.0, floored = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (w[i] == 0.0) continue;
    if (v[i] < 0.0) throw DomainError("phi_entropy: field must be nonnegative");
    const double x = floor ? std::max(v[i], kEntropyFloor) : v[i];
    const double term = phi.phi(x) * w[i];
    integral += term;
    if (v[i] <= kRatioFloor) floored += term;
    mean += x * w[i];
  }
  const double dv = mu.grid().cell_volume();
  return {integral * dv - phi.phi(mean * dv), floored * dv};
}

double phi_entropy(std::span<const double> v, const WeightedMeasure& mu, const PhiFunction& phi) {
  return phi_entropy_split(v, mu, phi).value;
}

double phi_entropy(const SpectralField& v, const WeightedMeasure& mu, const PhiFunction& phi) {
  require_same_grid(v.grid(), mu.grid(), "phi_entropy");
  return phi_entropy(v.values(), mu, phi);
}

namespace {

// grad v = (grad(v w) - v grad w) / w keeps the spectral derivatives on
// smooth decaying fields even when v itself is not periodic on the box.
double gaussian_dissipation(const SpectralField& v, const WeightedMeasure& mu, const Matrix2& sigma,
                            const PhiFunction& phi) {
  const Grid& g = v.grid();
  const int d = g.dim();
  bool zero = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) zero = zero && sigma(i, j) == 0.0;
  if (zero) return 0.0;
  const auto w = mu.weights();
  const SpectralField wf = SpectralField::from_values(g, std::vector<double>(w.begin(), w.end()));
  const SpectralField vw = combine(v, wf, [](double a, double b) { return b == 0.0 ? 0.0 : a * b; });
  std::vector<SpectralField> dvw, dw;
  for (int i = 0; i < d; ++i) {
    dvw.push_back(derivative(vw, i));
    dw.push_back(derivative(wf, i));
  }
  double sum = 0.0;
  std::array<double, 2> grad{};
  for (std::size_t k = 0; k < g.size(); ++k) {
    if (w[k] == 0.0) continue;
    for (int i = 0; i < d; ++i) {
      const auto a = static_cast<std::size_t>(i);
      grad[a] = (dvw[a].value(k) - v.value(k) * dw[a].value(k)) / w[k];
    }
    double q = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) q += grad[static_cast<std::size_t>(i)] * sigma(i, j) * grad[static_cast<std::size_t>(j)];
    sum += phi.d2phi(v.value(k)) * q * w[k];
  }
  return sum * g.cell_volume();
}

double spectral_jump(const SpectralField& v, const WeightedMeasure& mu, const LevyDensity& nu,
                     const PhiFunction& phi, double tol) {
  const Grid& g = v.grid();
  const bool radial = g.dim() == 1 || nu.is_radial();
  const auto a = sample_hermitian(g, radial, [&](const Vec2& xi) { return jump_exponent(nu, xi, tol); });
  const auto w = mu.weights();
  std::vector<double> vals(v.values().begin(), v.values().end());
  for (std::size_t k = 0; k < vals.size(); ++k)
    if (w[k] == 0.0) vals[k] = 1.0;
  const SpectralField ve = SpectralField::from_values(g, std::move(vals));
  const auto ia = [&](const std::function<double(double)>& f) { return apply_multiplier(map_values(ve, f), a); };
  const SpectralField i_vdphi = ia([&](double x) { return x * phi.dphi(x); });
  const SpectralField i_dphi = ia(phi.dphi);
  const SpectralField i_phi = ia(phi.phi);
  double sum = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k)
    sum += (i_vdphi.value(k) - ve.value(k) * i_dphi.value(k) - i_phi.value(k)) * w[k];
  return sum * g.cell_volume();
}

double lattice_jump(const SpectralField& v, const WeightedMeasure& mu, const LevyDensity& nu,
                    const PhiFunction& phi) {
  const Grid& g = v.grid();
  const long m = static_cast<long>(g.points());
  const double dx = g.dx();
  long reach = m - 1;
  if (std::isfinite(nu.support_radius()))
    reach = std::min(reach, static_cast<long>(std::floor(nu.support_radius() / dx + 1e-9)));
  const long width = 2 * reach + 1;
  const std::size_t shifts = g.dim() == 1 ? static_cast<std::size_t>(width)
                                          : static_cast<std::size_t>(width) * static_cast<std::size_t>(width);
  const auto vals = v.values();
  const auto w = mu.weights();
  const auto wrap = [m](long i) { return ((i % m) + m) % m; };
  std::vector<double> partial(shifts, 0.0);
  parallel_for(shifts, [&](std::size_t s) {
    const long j0 = static_cast<long>(s % static_cast<std::size_t>(width)) - reach;
    const long j1 = g.dim() == 1 ? 0 : static_cast<long>(s / static_cast<std::size_t>(width)) - reach;
    if (j0 == 0 && j1 == 0) return;
    const Vec2 z = g.dim() == 1 ? Vec2::of(j0 * dx) : Vec2::of(j1 * dx, j0 * dx);
    const double n = nu(z);
    if (n == 0.0) return;
    double acc = 0.0;
    if (g.dim() == 1) {
      for (long i = 0; i < m; ++i)
        if (w[static_cast<std::size_t>(i)] != 0.0)
          acc += w[static_cast<std::size_t>(i)] *
               bregman(phi, vals[static_cast<std::size_t>(i)], vals[static_cast<std::size_t>(wrap(i + j0))]);
    } else {
      for (long r = 0; r < m; ++r) {
        for (long c = 0; c < m; ++c) {
          const auto here = static_cast<std::size_t>(r * m + c);
          if (w[here] == 0.0) continue;
          const auto there = static_cast<std::size_t>(wrap(r + j1) * m + wrap(c + j0));
          acc += w[here] * bregman(phi, vals[here], vals[there]);
        }
      }
    }
    partial[s] = acc * n;
  });
  double sum = 0.0;
  for (double p : partial) sum += p;
  return sum * g.cell_volume() * g.cell_volume();
}

// sup D(v(x), v(y)) times the mass of N beyond 2L.
double lattice_tail_bound(const SpectralField& v, const LevyDensity& nu, const PhiFunction& phi, double tol) {
  const double cut = 2.0 * v.grid().half_width();
  if (nu.support_radius() <= cut) return 0.0;
  double mass;
  if (v.grid().dim() == 1) {
    mass = integrate_radial(nu, [&](double r) { return nu.at(r) + nu.at(-r); }, cut,
                            std::numeric_limits<double>::infinity(), tol)
               .value;
  } else if (nu.is_radial()) {
    mass = integrate_radial(nu, [&](double r) { return 2.0 * std::numbers::pi * r * nu.radial(r); }, cut,
                            std::numeric_limits<double>::infinity(), tol)
               .value;
  } else {
    return std::numeric_limits<double>::infinity();
  }
  const double lo = std::max(v.min_value(), 0.0), hi = v.max_value();
  const double dmax = std::max(bregman(phi, lo, hi), bregman(phi, hi, lo));
  return dmax * mass;
}

JumpRoute resolve_route(const LevyDensity& nu, JumpRoute route) {
  if (route != JumpRoute::automatic) return route;
  if (nu.is_even()) return JumpRoute::spectral;
  if (nu.bounded()) return JumpRoute::lattice;
  throw InvalidArgument("jump dissipation: odd unbounded densities are not supported");
}

void check_field(const SpectralField& v, const WeightedMeasure& mu, const PhiFunction& phi) {
  const auto w = mu.weights();
  for (std::size_t k = 0; k < w.size(); ++k) {
    if (w[k] == 0.0) continue;
    const double x = v.value(k);
    if (!std::isfinite(x)) throw NonFiniteDensity("dissipation: field has non-finite values");
    if (x < 0.0 || (x == 0.0 && is_xlogx(phi))) throw DomainError("dissipation: field must be positive");
  }
}

}  // namespace

double jump_dissipation(const SpectralField& v, const WeightedMeasure& mu, const LevyDensity& nu,
                        const PhiFunction& phi, double tol, JumpRoute route) {
  require_same_grid(v.grid(), mu.grid(), "jump_dissipation");
  require_admissible(phi);
  check_field(v, mu, phi);
  if (nu.is_zero()) return 0.0;
  if (resolve_route(nu, route) == JumpRoute::spectral) {
    if (!nu.is_even()) throw InvalidArgument("spectral jump route requires an even density");
    return spectral_jump(v, mu, nu, phi, tol);
  }
  return lattice_jump(v, mu, nu, phi);
}

Dissipation dissipation(const SpectralField& v, const WeightedMeasure& mu, const LevyTriplet& triplet,
                        const PhiFunction& phi, double tol, JumpRoute route) {
  require_same_grid(v.grid(), mu.grid(), "dissipation");
  if (triplet.dim() != v.grid().dim()) throw InvalidArgument("dissipation: triplet and field dimensions differ");
  require_admissible(phi);
  check_field(v, mu, phi);
  Dissipation out;
  out.gaussian_part = gaussian_dissipation(v, mu, triplet.sigma(), phi);
  const auto& nu = triplet.nu();
  if (!nu.is_zero()) {
    const JumpRoute r = resolve_route(nu, route);
    out.jump_part = jump_dissipation(v, mu, nu, phi, tol, r);
    if (r == JumpRoute::lattice) out.jump_tail_bound = lattice_tail_bound(v, nu, phi, tol);
  }
  return out;
}

ModifiedLsiReport modified_lsi_check(const SpectralField& v, const SteadyState& mu_state,
                                     const LevyTriplet& triplet_of_mu, const PhiFunction& phi, double tol) {
  const WeightedMeasure mu = WeightedMeasure::from_density(mu_state.density);
  ModifiedLsiReport r;
  r.entropy = phi_entropy(v, mu, phi);
  r.dissipation = dissipation(v, mu, triplet_of_mu, phi, tol).total();
  if (r.dissipation > 0.0) {
    r.ratio = r.entropy / r.dissipation;
  } else if (r.entropy > 1e-14) {
    r.ratio = std::numeric_limits<double>::infinity();
  }
  return r;
}

SpectralField relative_density(const SpectralField& u, const SpectralField& u_inf) {
  require_same_grid(u.grid(), u_inf.grid(), "relative_density");
  return combine(u, u_inf, [](double a, double b) {
    if (!(b > 0.0)) return kRatioFloor;
    return std::max(a / b, kRatioFloor);
  });
}

EntropyProductionReport entropy_production_check(const SpectralField& u0, const SteadyState& steady,
                                                 const PhiFunction& phi, double t, double dt, double tol) {
  if (!(dt > 0.0) || !(t >= dt)) throw InvalidArgument("entropy_production_check requires t >= dt > 0");
  const WeightedMeasure mu = WeightedMeasure::from_density(steady.density);
  const auto ent_at = [&](double s) {
    return phi_entropy(relative_density(fp_evolve(u0, steady, s, tol), steady.density), mu, phi);
  };
  EntropyProductionReport r;
  const SpectralField v = relative_density(fp_evolve(u0, steady, t, tol), steady.density);
  r.entropy = phi_entropy(v, mu, phi);
  r.derivative = (ent_at(t + dt) - ent_at(t - dt)) / (2.0 * dt);
  r.dissipation = dissipation(v, mu, steady.triplet, phi, tol);
  const double total = r.dissipation.total();
  r.residual = std::abs(r.derivative + total) / (1.0 + std::abs(total));
  r.threshold = std::max(1e-4, 10.0 * dt * dt);
  r.passed = r.residual < r.threshold;
  return r;
}

DecayReport decay_track(const SpectralField& u0, const SteadyState& steady, const PhiFunction& phi,
                        std::span<const double> times, double C, double rel_tol) {
  if (!(C > 0.0)) throw InvalidArgument("decay_track requires C > 0");
  const WeightedMeasure mu = WeightedMeasure::from_density(steady.density);
  DecayReport r;
  r.bound_rate = 1.0 / C;
  r.initial_entropy = phi_entropy(relative_density(u0, steady.density), mu, phi);
  double prev = r.initial_entropy;
  for (double t : times) {
    if (!(t >= 0.0)) throw InvalidArgument("decay_track: times must be nonnegative");
    const EntropyValue ev = phi_entropy_split(relative_density(fp_evolve(u0, steady, t), steady.density).values(), mu, phi);
    const double e = ev.value;
    if (ev.floored != 0.0)
      r.max_floored_fraction = std::max(r.max_floored_fraction, std::abs(ev.floored) / std::max(std::abs(e), 1e-300));
    r.times.push_back(t);
    r.entropies.push_back(e);
    const double bound = std::exp(-t / C) * r.initial_entropy;
    if (e > bound * (1.0 + rel_tol) + 1e-15) r.violations.push_back(t);
    if (e > prev + 1e-8 * std::abs(r.initial_entropy) + 1e-15) r.monotone = false;
    prev = e;
  }
  // Least-squares slope of log Ent over the samples above 1e-12 Ent(0).
  std::vector<std::pair<double, double>> pts;
  if (r.initial_entropy > 0.0) pts.emplace_back(0.0, std::log(r.initial_entropy));
  for (std::size_t i = 0; i < r.times.size(); ++i)
    if (r.entropies[i] > 1e-12 * r.initial_entropy && r.entropies[i] > 0.0 && r.times[i] > 0.0)
      pts.emplace_back(r.times[i], std::log(r.entropies[i]));
  if (pts.size() >= 2) {
    double st = 0, sy = 0, stt = 0, sty = 0;
    for (auto [t, y] : pts) {
      st += t;
      sy += y;
      stt += t * t;
      sty += t * y;
    }
    const double n = static_cast<double>(pts.size());
    const double den = n * stt - st * st;
    if (den > 0.0) r.fitted_rate = -(n * sty - st * sy) / den;
  }
  return r;
}

}  // namespace levylab
