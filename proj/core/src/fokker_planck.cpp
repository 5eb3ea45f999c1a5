#include "levylab/fokker_planck.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "levylab/parallel.hpp"

namespace levylab {

namespace {

constexpr double kPi = std::numbers::pi;

bool radial_exponent(const LevyTriplet& tr) {
  const auto& s = tr.sigma();
  const bool iso = tr.dim() == 1 || (s(0, 1) == 0.0 && s(0, 0) == s(1, 1));
  return iso && tr.drift().norm() == 0.0 && tr.nu().is_even() && (tr.dim() == 1 || tr.nu().is_radial());
}

double sym_density(const LevyDensity& nu, double r) { return nu.at(r) + nu.at(-r); }

}  // namespace

Complex steady_exponent(const LevyTriplet& triplet, const Vec2& xi, double tol) {
  Complex out(-0.5 * triplet.sigma().quadratic(xi), triplet.drift().dot(xi));
  const LevyDensity& nu = triplet.nu();
  if (nu.is_zero() || xi.norm() == 0.0) return out;
  auto integrand = [&](double s) { return jump_exponent(nu, s * xi, 0.1 * tol) / s; };
  auto r = integrate_near_zero(integrand, 1.0, tol);
  if (!r.converged) throw QuadratureFailure("steady exponent: ray average did not converge", r.error);
  return out + r.value;
}

double SteadyState::density_at(const Vec2& x, double tol) const {
  const auto h = triplet.homogeneity();
  std::function<Complex(const Vec2&)> psi = exponent;
  if (h) {
    // Homogeneous exponents satisfy Psi = psi / lambda.
    const LevyTriplet tr = triplet;
    const double lambda = *h;
    psi = [tr, lambda](const Vec2& xi) { return characteristic_exponent(tr, xi) / lambda; };
  }
  QuadResult<double> head, tail;
  if (x.dim == 1) {
    auto f = [&](double w) {
      return (std::exp(Complex(0.0, -x[0] * w)) * std::exp(psi(Vec2::of(w)))).real() / kPi;
    };
    head = gauss_kronrod(f, 0.0, 1.0, 0.5 * tol, 1e-14);
    tail = integrate_tail(f, 1.0, 0.5 * tol);
  } else {
    if (!radial_exponent(triplet)) throw InvalidArgument("density_at in d = 2 requires a radial exponent");
    const double r = x.norm();
    auto f = [&](double rho) {
      return std::cyl_bessel_j(0.0, rho * r) * std::exp(psi(Vec2::of(rho, 0.0)).real()) * rho / (2.0 * kPi);
    };
    head = gauss_kronrod(f, 0.0, 1.0, 0.5 * tol, 1e-14);
    tail = integrate_tail(f, 1.0, 0.5 * tol);
  }
  if (!head.converged || !tail.converged)
    throw QuadratureFailure("density_at: inverse transform did not converge", head.error + tail.error);
  return head.value + tail.value;
}

double limit_levy_density(const LevyDensity& nu, const Vec2& z, double tol) {
  const double r = z.norm();
  if (!(r > 0.0)) throw InvalidArgument("limit_levy_density requires z != 0");
  if (nu.is_zero()) return 0.0;
  const int d = nu.dim();
  auto g = [&](double t) { return nu(t * z) * std::pow(t, d - 1); };
  const double end = nu.support_radius() / r;
  if (!(end > 1.0)) return 0.0;
  std::vector<double> points{1.0};
  for (double b : nu.breakpoints())
    if (b / r > 1.0 && b / r < end) points.push_back(b / r);
  std::sort(points.begin(), points.end());
  points.push_back(end);
  const double piece_tol = tol / static_cast<double>(points.size());
  double value = 0.0, err = 0.0;
  bool ok = true;
  for (std::size_t i = 0; i + 1 < points.size(); ++i) {
    QuadResult<double> q = std::isinf(points[i + 1]) ? integrate_tail(g, points[i], piece_tol)
                                                     : gauss_kronrod(g, points[i], points[i + 1], piece_tol, 1e-14);
    value += q.value;
    err += q.error;
    ok = ok && q.converged;
  }
  if (!ok || !std::isfinite(value)) throw QuadratureFailure("limit_levy_density did not converge", err);
  return value;
}

LevyDensity limit_density_of(const LevyDensity& nu, double tol) {
  if (nu.is_zero()) return nu;
  if (nu.is_stable()) return nu.scaled(1.0 / nu.alpha());
  LevyDensity::Options o;
  o.is_even = nu.is_even();
  o.support_radius = nu.support_radius();
  o.breakpoints = nu.breakpoints();
  const LevyDensity base = nu;
  if (nu.is_radial()) {
    const int d = nu.dim();
    return LevyDensity::radial_analytic(
        d,
        [base, tol, d](double r) {
          return r > 0.0 ? limit_levy_density(base, Vec2{{r, 0.0}, d}, tol) : std::numeric_limits<double>::infinity();
        },
        nu.label() + "_inf", o);
  }
  return LevyDensity::analytic(
      nu.dim(),
      [base, tol](std::span<const double> z) {
        Vec2 p{{z[0], z.size() > 1 ? z[1] : 0.0}, static_cast<int>(z.size())};
        return p.norm() > 0.0 ? limit_levy_density(base, p, tol) : std::numeric_limits<double>::infinity();
      },
      nu.label() + "_inf", o);
}

Vec2 drift_correction(const LevyDensity& nu, double tol) {
  Vec2 out{{0.0, 0.0}, nu.dim()};
  if (nu.is_zero() || nu.is_even()) return out;
  if (nu.dim() != 1) throw InvalidArgument("drift_correction supports odd densities in d = 1 only");
  auto inner = [tol](double r) {
    auto q = gauss_kronrod([r](double tau) { return (1.0 - tau * tau) / (1.0 + tau * tau * r * r); }, 0.0, 1.0,
                           0.01 * tol, 1e-14);
    return q.value;
  };
  auto f = [&](double r) {
    const double odd = nu.at(r) - nu.at(-r);
    if (odd == 0.0) return 0.0;
    return r * r * r / (1.0 + r * r) * inner(r) * odd;
  };
  auto q = integrate_radial(nu, f, 0.0, INFINITY, tol);
  if (!q.converged) throw QuadratureFailure("drift_correction did not converge", q.error);
  out[0] = q.value;
  return out;
}

LogTailReport check_log_tail(const LevyDensity& nu, double tol) {
  LogTailReport out;
  if (nu.is_zero()) return out;
  QuadResult<double> q;
  if (nu.dim() == 1) {
    q = integrate_radial(nu, [&](double r) { return std::log(r) * sym_density(nu, r); }, 1.0, INFINITY, tol);
  } else {
    if (!nu.is_radial()) throw InvalidArgument("check_log_tail in d = 2 requires a radial density");
    q = integrate_radial(nu, [&](double r) { return 2.0 * kPi * std::log(r) * nu.radial(r) * r; }, 1.0, INFINITY,
                         tol);
  }
  out.value = q.value;
  out.error = q.error;
  out.diverges = !q.converged || !std::isfinite(q.value);
  return out;
}

LevyTriplet steady_state_triplet(const LevyTriplet& triplet, double tol) {
  if (check_log_tail(triplet.nu(), tol).diverges)
    throw Con1Violation("log-moment of the Levy density diverges; no steady state");
  const Vec2 bA = drift_correction(triplet.nu(), tol);
  return LevyTriplet(triplet.sigma().scaled(0.5), triplet.drift() + bA, limit_density_of(triplet.nu(), tol), tol);
}

SteadyState build_steady_state(const LevyTriplet& triplet, const Grid& grid, double tol) {
  if (triplet.dim() != grid.dim()) throw InvalidArgument("triplet and grid dimensions differ");
  if (check_log_tail(triplet.nu(), tol).diverges)
    throw Con1Violation("log-moment of the Levy density diverges; no steady state");
  auto exponent = [triplet, tol](const Vec2& xi) { return steady_exponent(triplet, xi, tol); };
  auto coefficients =
      sample_hermitian(grid, radial_exponent(triplet), [&](const Vec2& xi) { return std::exp(exponent(xi)); });
  SpectralField raw = SpectralField::from_coefficients(grid, std::move(coefficients));
  const double peak = raw.max_value();
  if (raw.min_value() < -1e-6 * peak)
    throw NegativeDensity("steady density is negative beyond 1e-6 of its peak; grid under-resolved");
  const double mass = raw.mass();
  SteadyState s{triplet,
                exponent,
                map_values(raw, [mass](double v) { return v / mass; }),
                std::abs(mass - 1.0),
                {},
                drift_correction(triplet.nu(), tol)};
  const LevyDensity nu = triplet.nu();
  s.limit_density = [nu, tol](const Vec2& z) { return limit_levy_density(nu, z, tol); };
  return s;
}

Complex flow_exponent(const LevyTriplet& triplet, const Vec2& xi, double t, double tol) {
  if (!(t >= 0.0)) throw InvalidArgument("flow_exponent requires t >= 0");
  if (t == 0.0 || xi.norm() == 0.0) return {};
  const auto& rule = gauss_legendre(32);
  const int panels = std::max(1, static_cast<int>(std::ceil(t)));
  const double width = t / panels;
  Complex sum{};
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * width;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double s = mid + 0.5 * width * rule.nodes[i];
      sum += rule.weights[i] * characteristic_exponent(triplet, std::exp(-s) * xi, tol);
    }
  }
  return 0.5 * width * sum;
}

SpectralField fp_evolve(const SpectralField& u0, const SteadyState& steady, double t, double tol) {
  if (!(t >= 0.0)) throw InvalidArgument("fp_evolve requires t >= 0");
  const Grid& grid = u0.grid();
  if (!(grid == steady.density.grid())) throw InvalidArgument("fp_evolve: steady state lives on another grid");
  if (t == 0.0) return u0;
  const std::size_t m = grid.points();
  const auto uinf = steady.density.values();
  const auto u = u0.values();

  // Edge ratio: the part of u0 that follows u_inf into the box boundary is
  // carried exactly; the remainder decays there and is interpolated.
  double edge_u = 0.0, edge_inf = 0.0;
  std::size_t edge_count = 0;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    bool edge;
    if (grid.dim() == 1) {
      edge = k == 0 || k == m - 1;
    } else {
      const std::size_t i = k / m, j = k % m;
      edge = i == 0 || j == 0 || i == m - 1 || j == m - 1;
    }
    if (!edge) continue;
    edge_u += u[k];
    edge_inf += uinf[k];
    ++edge_count;
  }
  const double peak = steady.density.max_value();
  const double ratio = edge_inf > 1e-14 * peak * static_cast<double>(edge_count) ? edge_u / edge_inf : 0.0;
  std::vector<double> w(grid.size());
  for (std::size_t k = 0; k < w.size(); ++k) w[k] = u[k] - ratio * uinf[k];

  const SpectralField wf = SpectralField::from_values(grid, w);
  double wmax = 0.0;
  for (const auto& c : wf.coefficients()) wmax = std::max(wmax, std::abs(c));
  if (wmax > 0.0 && wf.max_abs_coefficient_near_nyquist(0.95) > 1e-12 * wmax)
    warn("InterpolationDegradation", "initial datum is not resolved: coefficients near Nyquist exceed 1e-12");

  const double contraction = std::exp(-t);
  const double dx = grid.dx();
  // Row transform at the contracted frequencies: T[j][k] = sum_i w_i e^{i x_i eta_k} dx.
  std::vector<Complex> phase(m * m);
  for (std::size_t k = 0; k < m; ++k) {
    const double eta = contraction * grid.frequency(k);
    for (std::size_t i = 0; i < m; ++i) phase[k * m + i] = std::polar(dx, grid.coordinate(i) * eta);
  }
  std::vector<Complex> w_hat(grid.size());
  if (grid.dim() == 1) {
    for (std::size_t k = 0; k < m; ++k) {
      Complex s{};
      for (std::size_t i = 0; i < m; ++i) s += w[i] * phase[k * m + i];
      w_hat[k] = s;
    }
  } else {
    std::vector<Complex> partial(m * m);
    parallel_for(m, [&](std::size_t i0) {
      for (std::size_t k1 = 0; k1 < m; ++k1) {
        Complex s{};
        for (std::size_t i1 = 0; i1 < m; ++i1) s += w[i0 * m + i1] * phase[k1 * m + i1];
        partial[i0 * m + k1] = s;
      }
    });
    parallel_for(m, [&](std::size_t k0) {
      for (std::size_t k1 = 0; k1 < m; ++k1) {
        Complex s{};
        for (std::size_t i0 = 0; i0 < m; ++i0) s += partial[i0 * m + k1] * phase[k0 * m + i0];
        w_hat[k0 * m + k1] = s;
      }
    });
  }

  const LevyTriplet& tr = steady.triplet;
  auto growth = sample_hermitian(grid, radial_exponent(tr),
                                 [&](const Vec2& xi) { return std::exp(flow_exponent(tr, xi, t, tol)); });
  const auto inf_hat = steady.density.coefficients();
  std::vector<Complex> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = ratio * inf_hat[k] + w_hat[k] * growth[k];
  return SpectralField::from_coefficients(grid, std::move(out));
}

SpectralField fp_evolve(const SpectralField& u0, const LevyTriplet& triplet, double t, double tol) {
  if (t == 0.0) return u0;
  return fp_evolve(u0, build_steady_state(triplet, u0.grid(), tol), t, tol);
}

std::vector<Vec2> log_sample_points(int dim, double lo, double hi, int per_decade) {
  if (!(lo > 0.0 && hi > lo) || per_decade < 1) throw InvalidArgument("log_sample_points: bad range");
  std::vector<double> radii;
  const int k0 = static_cast<int>(std::ceil(std::log10(lo) * per_decade - 1e-9));
  const int k1 = static_cast<int>(std::floor(std::log10(hi) * per_decade + 1e-9));
  for (int k = k0; k <= k1; ++k) radii.push_back(std::pow(10.0, static_cast<double>(k) / per_decade));
  std::vector<Vec2> out;
  for (int axis = 0; axis < dim; ++axis)
    for (double sign : {1.0, -1.0})
      for (double r : radii) {
        Vec2 z{{0.0, 0.0}, dim};
        z[axis] = sign * r;
        out.push_back(z);
      }
  return out;
}

DominationReport check_domination(const LevyDensity& nu, std::span<const Vec2> samples, double tol) {
  DominationReport rep;
  if (nu.is_zero()) return rep;
  struct Ray {
    std::vector<std::pair<double, double>> points;  // (|z|, ratio)
  };
  std::map<std::pair<long long, long long>, Ray> rays;
  for (const Vec2& z : samples) {
    const double r = z.norm();
    if (!(r > 0.0)) throw InvalidArgument("check_domination: sample at the origin");
    DominationRow row{z, 0.0, nu(z), 0.0};
    try {
      row.limit = limit_levy_density(nu, z, tol);
    } catch (const QuadratureFailure&) {
      row.limit = std::numeric_limits<double>::infinity();
    }
    if (row.density == 0.0) {
      if (row.limit == 0.0) continue;
      row.ratio = std::numeric_limits<double>::infinity();
    } else {
      row.ratio = row.limit / row.density;
    }
    rep.C = std::max(rep.C, row.ratio);
    const auto key = std::make_pair(std::llround(1e9 * z[0] / r), std::llround(1e9 * (z.dim == 2 ? z[1] / r : 0.0)));
    rays[key].points.emplace_back(r, row.ratio);
    rep.rows.push_back(row);
  }
  bool growth = false;
  for (auto& [key, ray] : rays) {
    auto& pts = ray.points;
    std::sort(pts.begin(), pts.end());
    // Runs of strictly increasing ratio, scanned toward 0 and toward infinity.
    for (int dir : {1, -1}) {
      const long n = static_cast<long>(pts.size());
      long start = dir == 1 ? 0 : n - 1;
      for (long i = start; i >= 0 && i < n; i += dir) {
        const long next = i + dir;
        const bool rising = next >= 0 && next < n && pts[static_cast<std::size_t>(next)].second >
                                                         pts[static_cast<std::size_t>(i)].second;
        if (rising) continue;
        const auto& a = pts[static_cast<std::size_t>(start)];
        const auto& b = pts[static_cast<std::size_t>(i)];
        const double decades = std::abs(std::log10(b.first / a.first));
        if (decades >= 3.0 - 1e-9 && b.second > 1.01 * a.second) growth = true;
        start = next;
      }
    }
  }
  rep.unbounded = growth || rep.C > 1e6;
  return rep;
}

DominationReport check_domination(const LevyDensity& nu, double tol) {
  const auto samples = log_sample_points(nu.dim());
  return check_domination(nu, samples, tol);
}

RadialDecayReport check_radial_decay(const LevyDensity& nu, const std::function<double(const Vec2&)>& n_inf,
                                     std::span<const Vec2> points, double C, double tol) {
  if (!(C > 0.0)) throw InvalidArgument("check_radial_decay requires C > 0");
  RadialDecayReport rep;
  const double power = nu.dim() + 1.0 / C;
  static constexpr std::array<double, 9> ts{0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 4.0, 8.0};
  for (const Vec2& x : points) {
    std::array<double, ts.size()> v{};
    for (std::size_t i = 0; i < ts.size(); ++i) v[i] = n_inf(ts[i] * x) * std::pow(ts[i], power);
    const double ref = std::max(v[3], std::numeric_limits<double>::min());
    for (std::size_t i = 0; i + 1 < ts.size(); ++i) {
      // Nondecreasing up to t = 1, nonincreasing after.
      const bool inner = ts[i + 1] <= 1.0;
      const double excess = (inner ? v[i] - v[i + 1] : v[i + 1] - v[i]) / ref;
      double& slot = inner ? rep.max_inner_excess : rep.max_outer_excess;
      slot = std::max(slot, excess);
    }
    const double h = 1e-4;
    const double radial_derivative = (n_inf((1.0 + h) * x) - n_inf((1.0 - h) * x)) / (2.0 * h);
    const double n = nu(x);
    const double lhs = -nu.dim() * n_inf(x) - radial_derivative;
    const double scale = std::max({std::abs(n), std::abs(lhs), std::numeric_limits<double>::min()});
    rep.max_divergence_residual = std::max(rep.max_divergence_residual, std::abs(lhs - n) / scale);
  }
  rep.max_monotone_excess = std::max(rep.max_inner_excess, rep.max_outer_excess);
  rep.inner_ok = rep.max_inner_excess <= tol;
  rep.outer_ok = rep.max_outer_excess <= tol;
  rep.monotone_ok = rep.inner_ok && rep.outer_ok;
  rep.divergence_ok = rep.max_divergence_residual <= tol;
  return rep;
}

}  // namespace levylab
