#include "levylab/levy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace levylab {

namespace {

constexpr double kPi = std::numbers::pi;

double checked(double v) {
  if (std::isnan(v) || v < 0.0) throw NonFiniteDensity("Levy density returned NaN or a negative value");
  return v;
}

// J0(x) - 1 without cancellation for small x.
double bessel_j0_minus_one(double x) {
  if (std::abs(x) < 1.0) {
    const double q = -0.25 * x * x;
    double term = 1.0;
    double sum = 0.0;
    for (int k = 1; k < 20; ++k) {
      term *= q / (static_cast<double>(k) * k);
      sum += term;
      if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return sum;
  }
  return std::cyl_bessel_j(0.0, std::abs(x)) - 1.0;
}

// Integral of f over the radial range [lo, hi] (hi may be +inf), split at the
// density's breakpoints and truncated at its support radius.
template <class F>
QuadResult<double> radial_integral(const LevyDensity& nu, F&& f, double lo, double hi, double tol) {
  QuadResult<double> total;
  const double end = std::min(hi, nu.support_radius());
  if (!(end > lo)) {
    total.converged = true;
    return total;
  }
  std::vector<double> points{lo};
  for (double b : nu.breakpoints())
    if (b > lo && b < end) points.push_back(b);
  std::sort(points.begin() + 1, points.end());
  points.push_back(end);
  const std::size_t pieces = points.size() - 1;
  const double piece_tol = tol / static_cast<double>(pieces);
  total.converged = true;
  for (std::size_t i = 0; i < pieces; ++i) {
    const double a = points[i];
    const double b = points[i + 1];
    QuadResult<double> r;
    if (a == 0.0 && std::isinf(b)) {
      auto left = integrate_near_zero(f, 1.0, 0.5 * piece_tol);
      auto right = integrate_tail(f, 1.0, 0.5 * piece_tol);
      r.value = left.value + right.value;
      r.error = left.error + right.error;
      r.converged = left.converged && right.converged;
      r.evaluations = left.evaluations + right.evaluations;
    } else if (a == 0.0) {
      r = integrate_near_zero(f, b, piece_tol);
    } else if (std::isinf(b)) {
      r = integrate_tail(f, a, piece_tol);
    } else {
      r = gauss_kronrod(f, a, b, piece_tol, 1e-14);
    }
    total.value += r.value;
    total.error += r.error;
    total.evaluations += r.evaluations;
    total.converged = total.converged && r.converged;
  }
  return total;
}

void require_quadrature_support(const LevyDensity& nu) {
  if (nu.dim() == 2 && !nu.is_radial())
    throw InvalidArgument("quadrature over R^2 requires a radial Levy density");
}

// N(r) + N(-r) and N(r) - N(-r) in d = 1.
double sym_part(const LevyDensity& nu, double r) { return checked(nu.at(r)) + checked(nu.at(-r)); }
double odd_part(const LevyDensity& nu, double r) { return checked(nu.at(r)) - checked(nu.at(-r)); }

void check_even(int dim, const LevyDensity::Function& f) {
  for (int i = -12; i <= 12; ++i) {
    const double r = std::pow(10.0, 0.25 * i);
    std::array<double, 2> z{r, dim == 2 ? 0.37 * r : 0.0};
    std::array<double, 2> mz{-z[0], -z[1]};
    const double a = f(std::span<const double>(z.data(), static_cast<std::size_t>(dim)));
    const double b = f(std::span<const double>(mz.data(), static_cast<std::size_t>(dim)));
    if (std::abs(a - b) > 1e-12 * std::max(1.0, std::abs(a)))
      throw InvalidArgument("density flagged even but N(z) != N(-z)");
  }
}

// Jump symbol of the unnormalized density |z|^{-d-alpha} at e_1, cached.
double raw_stable_symbol(int dim, double alpha, double tol) {
  static std::mutex mutex;
  static std::map<std::pair<int, double>, double> cache;
  {
    std::lock_guard lock(mutex);
    if (auto it = cache.find({dim, alpha}); it != cache.end()) return it->second;
  }
  LevyDensity::Options opts;
  opts.is_even = true;
  const double power = dim + alpha;
  auto raw = LevyDensity::radial_analytic(
      dim, [power](double r) { return std::pow(r, -power); }, "stable-raw", opts);
  const double value = jump_symbol(raw, Vec2{{1.0, 0.0}, dim}, tol).real();
  std::lock_guard lock(mutex);
  cache.emplace(std::make_pair(dim, alpha), value);
  return value;
}

}  // namespace

std::string to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::none: return "none";
    case DensityKind::stable: return "stable";
    case DensityKind::analytic: return "analytic";
    case DensityKind::tabulated: return "tabulated";
  }
  return "unknown";
}

LevyDensity LevyDensity::none(int dim) {
  if (dim != 1 && dim != 2) throw InvalidArgument("dimension must be 1 or 2");
  LevyDensity d;
  d.dim_ = dim;
  d.kind_ = DensityKind::none;
  d.f_ = [](std::span<const double>) { return 0.0; };
  d.options_.is_even = true;
  d.options_.radial = [](double) { return 0.0; };
  d.options_.support_radius = 0.0;
  d.options_.bounded = true;
  d.label_ = "none";
  return d;
}

LevyDensity LevyDensity::stable(int dim, double alpha, double tol) {
  if (dim != 1 && dim != 2) throw InvalidArgument("dimension must be 1 or 2");
  if (!(alpha > 0.0 && alpha < 2.0)) throw InvalidAlpha("stable jump density requires alpha in (0,2)");
  const double constant = -1.0 / raw_stable_symbol(dim, alpha, tol);
  LevyDensity d;
  d.dim_ = dim;
  d.kind_ = DensityKind::stable;
  d.alpha_ = alpha;
  d.stable_constant_ = constant;
  const double power = dim + alpha;
  d.options_.radial = [constant, power](double r) { return constant * std::pow(r, -power); };
  d.f_ = [constant, power, dim](std::span<const double> z) {
    const double r = dim == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]);
    return constant * std::pow(r, -power);
  };
  d.options_.is_even = true;
  d.label_ = "stable(" + format_double(alpha) + ")";
  return d;
}

LevyDensity LevyDensity::analytic(int dim, Function f, std::string label, Options options) {
  if (dim != 1 && dim != 2) throw InvalidArgument("dimension must be 1 or 2");
  if (options.is_even) check_even(dim, f);
  LevyDensity d;
  d.dim_ = dim;
  d.kind_ = DensityKind::analytic;
  d.f_ = std::move(f);
  d.options_ = std::move(options);
  d.label_ = std::move(label);
  return d;
}

LevyDensity LevyDensity::radial_analytic(int dim, Radial f, std::string label, Options options) {
  options.is_even = true;
  options.radial = f;
  auto full = [f, dim](std::span<const double> z) {
    return f(dim == 1 ? std::abs(z[0]) : std::hypot(z[0], z[1]));
  };
  return analytic(dim, full, std::move(label), std::move(options));
}

LevyDensity LevyDensity::tabulated(std::vector<double> z, std::vector<double> values, bool is_even) {
  if (z.size() != values.size() || z.size() < 2) throw InvalidArgument("tabulated density needs >= 2 matching rows");
  for (std::size_t i = 1; i < z.size(); ++i)
    if (!(z[i] > z[i - 1])) throw InvalidArgument("tabulated density abscissae must increase");
  for (double v : values) checked(v);
  auto table = std::make_shared<std::pair<std::vector<double>, std::vector<double>>>(std::move(z), std::move(values));
  auto f = [table](std::span<const double> p) {
    const auto& [zs, ns] = *table;
    const double x = p[0];
    if (x < zs.front() || x > zs.back()) return 0.0;
    auto it = std::upper_bound(zs.begin(), zs.end(), x);
    if (it == zs.end()) return ns.back();
    const std::size_t hi = static_cast<std::size_t>(it - zs.begin());
    const std::size_t lo = hi - 1;
    const double w = (x - zs[lo]) / (zs[hi] - zs[lo]);
    return (1.0 - w) * ns[lo] + w * ns[hi];
  };
  Options opts;
  opts.is_even = is_even;
  opts.bounded = true;
  double support = 0.0;
  for (double x : table->first) {
    support = std::max(support, std::abs(x));
    if (x != 0.0) opts.breakpoints.push_back(std::abs(x));
  }
  std::sort(opts.breakpoints.begin(), opts.breakpoints.end());
  opts.breakpoints.erase(std::unique(opts.breakpoints.begin(), opts.breakpoints.end()), opts.breakpoints.end());
  opts.support_radius = support;
  if (is_even) {
    for (double x : table->first) {
      const double a = f(std::span<const double>(&x, 1));
      const double mx = -x;
      const double b = f(std::span<const double>(&mx, 1));
      if (std::abs(a - b) > 1e-12 * std::max(1.0, a)) throw InvalidArgument("tabulated density flagged even is not symmetric");
    }
    opts.radial = [f](double r) { return f(std::span<const double>(&r, 1)); };
  }
  LevyDensity d;
  d.dim_ = 1;
  d.kind_ = DensityKind::tabulated;
  d.f_ = f;
  d.options_ = std::move(opts);
  d.label_ = "tabulated";
  return d;
}

LevyDensity LevyDensity::from_csv(const std::filesystem::path& path, bool is_even) {
  std::ifstream is(path);
  if (!is) throw InvalidArgument("cannot open density table " + path.string());
  std::vector<double> z, n;
  std::string line;
  while (std::getline(is, line)) {
    if (line.empty() || std::isalpha(static_cast<unsigned char>(line[0])) != 0 || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double a = 0.0, b = 0.0;
    if (!(ls >> a >> b)) throw InvalidArgument("density table: malformed row '" + line + "'");
    z.push_back(a);
    n.push_back(b);
  }
  return tabulated(std::move(z), std::move(n), is_even);
}

double LevyDensity::operator()(std::span<const double> z) const { return scale_ * f_(z); }

double LevyDensity::at(double z) const {
  std::array<double, 2> p{z, 0.0};
  return (*this)(std::span<const double>(p.data(), static_cast<std::size_t>(dim_)));
}

double LevyDensity::radial(double r) const {
  if (options_.radial) return scale_ * options_.radial(r);
  if (dim_ == 1 && options_.is_even) return at(r);
  throw InvalidArgument("density is not radial");
}

LevyDensity LevyDensity::reflected() const {
  if (options_.is_even) return *this;
  LevyDensity d = *this;
  auto f = f_;
  const int dim = dim_;
  d.f_ = [f, dim](std::span<const double> z) {
    std::array<double, 2> m{-z[0], dim == 2 ? -z[1] : 0.0};
    return f(std::span<const double>(m.data(), static_cast<std::size_t>(dim)));
  };
  d.label_ = label_ + "^reflected";
  return d;
}

LevyDensity LevyDensity::scaled(double factor) const {
  if (!(factor >= 0.0)) throw InvalidArgument("density scale must be nonnegative");
  LevyDensity d = *this;
  d.scale_ *= factor;
  return d;
}

namespace densities {

LevyDensity exp_over_abs() {
  LevyDensity::Options o;
  return LevyDensity::radial_analytic(1, [](double r) { return std::exp(-r) / r; }, "exp_over_abs", o);
}

LevyDensity indicator(int dim, double radius, double height) {
  LevyDensity::Options o;
  o.support_radius = radius;
  o.bounded = true;
  return LevyDensity::radial_analytic(
      dim, [radius, height](double r) { return r <= radius ? height : 0.0; }, "indicator", o);
}

LevyDensity one_sided_exp() {
  LevyDensity::Options o;
  o.bounded = true;
  return LevyDensity::analytic(
      1, [](std::span<const double> z) { return z[0] > 0.0 ? std::exp(-z[0]) : 0.0; }, "one_sided_exp", o);
}

LevyDensity gaussian(int dim, double width, double height) {
  LevyDensity::Options o;
  o.bounded = true;
  return LevyDensity::radial_analytic(
      dim, [width, height](double r) { return height * std::exp(-0.5 * r * r / (width * width)); }, "gaussian", o);
}

LevyDensity power_law(int dim, double exponent) {
  LevyDensity::Options o;
  return LevyDensity::radial_analytic(
      dim, [exponent](double r) { return std::pow(r, -exponent); }, "power_law", o);
}

LevyDensity log_tail(int dim) {
  LevyDensity::Options o;
  o.breakpoints = {std::numbers::e};
  return LevyDensity::radial_analytic(
      dim,
      [dim](double r) {
        if (r < std::numbers::e) return 0.0;
        const double l = std::log(r);
        return 1.0 / (std::pow(r, dim) * l * l);
      },
      "log_tail", o);
}

}  // namespace densities

QuadResult<double> integrate_radial(const LevyDensity& nu, const std::function<double(double)>& f, double lo,
                                    double hi, double tol) {
  return radial_integral(nu, f, lo, hi, tol);
}

DensityValidation validate_levy_density(const LevyDensity& nu, double tol) {
  DensityValidation out;
  if (nu.is_zero()) return out;
  require_quadrature_support(nu);
  QuadResult<double> small, large;
  if (nu.dim() == 1) {
    small = radial_integral(nu, [&](double r) { return r * r * sym_part(nu, r); }, 0.0, 1.0, tol);
    large = radial_integral(nu, [&](double r) { return sym_part(nu, r); }, 1.0, INFINITY, tol);
  } else {
    small = radial_integral(nu, [&](double r) { return 2.0 * kPi * r * r * r * checked(nu.radial(r)); }, 0.0, 1.0, tol);
    large = radial_integral(nu, [&](double r) { return 2.0 * kPi * r * checked(nu.radial(r)); }, 1.0, INFINITY, tol);
  }
  out.small_jump_integral = small.value;
  out.small_jump_error = small.error;
  out.small_jump_diverges = !small.converged || !std::isfinite(small.value);
  out.large_jump_integral = large.value;
  out.large_jump_error = large.error;
  out.large_jump_diverges = !large.converged || !std::isfinite(large.value);
  return out;
}

Complex jump_symbol(const LevyDensity& nu, const Vec2& xi, double tol) {
  if (nu.is_zero()) return {};
  require_quadrature_support(nu);
  const double rho = xi.norm();
  if (rho == 0.0) return {};
  double err = 0.0;
  bool ok = true;
  auto take = [&](const QuadResult<double>& r) {
    err += r.error;
    ok = ok && r.converged;
    return r.value;
  };
  const bool unbounded_support = std::isinf(nu.support_radius());
  double re = 0.0;
  double im = 0.0;
  if (nu.dim() == 1) {
    const double w = xi[0];
    const double part_tol = nu.is_even() ? tol / 3.0 : tol / 6.0;
    re += take(radial_integral(
        nu, [&](double r) { const double s = std::sin(0.5 * r * w); return -2.0 * s * s * sym_part(nu, r); },
        0.0, 1.0, part_tol));
    if (unbounded_support) {
      re -= take(radial_integral(nu, [&](double r) { return sym_part(nu, r); }, 1.0, INFINITY, part_tol));
      re += take(integrate_oscillatory_tail(
          [&](double r) { return std::cos(r * rho) * sym_part(nu, r); }, 1.0, kPi / rho, 0.5, part_tol));
    } else {
      re += take(radial_integral(
          nu, [&](double r) { const double s = std::sin(0.5 * r * w); return -2.0 * s * s * sym_part(nu, r); },
          1.0, INFINITY, part_tol));
    }
    if (!nu.is_even()) {
      auto h = [](double r) { return 1.0 / (1.0 + r * r); };
      im += take(radial_integral(
          nu, [&](double r) { return (std::sin(r * w) - r * w * h(r)) * odd_part(nu, r); }, 0.0, 1.0, part_tol));
      if (unbounded_support) {
        const double sign = w > 0.0 ? 1.0 : -1.0;
        im += sign * take(integrate_oscillatory_tail(
                         [&](double r) { return std::sin(r * rho) * odd_part(nu, r); }, 1.0, kPi / rho, 0.0,
                         part_tol));
        im -= w * take(radial_integral(nu, [&](double r) { return r * h(r) * odd_part(nu, r); }, 1.0, INFINITY,
                                       part_tol));
      } else {
        im += take(radial_integral(
            nu, [&](double r) { return (std::sin(r * w) - r * w * h(r)) * odd_part(nu, r); }, 1.0, INFINITY,
            part_tol));
      }
    }
  } else {
    const double part_tol = tol / 3.0;
    auto n = [&](double r) { return checked(nu.radial(r)); };
    re += take(radial_integral(
        nu, [&](double r) { return 2.0 * kPi * bessel_j0_minus_one(r * rho) * n(r) * r; }, 0.0, 1.0, part_tol));
    if (unbounded_support) {
      re -= take(radial_integral(nu, [&](double r) { return 2.0 * kPi * n(r) * r; }, 1.0, INFINITY, part_tol));
      re += take(integrate_oscillatory_tail(
          [&](double r) { return 2.0 * kPi * std::cyl_bessel_j(0.0, r * rho) * n(r) * r; }, 1.0, kPi / rho, -0.25,
          part_tol));
    } else {
      re += take(radial_integral(
          nu, [&](double r) { return 2.0 * kPi * bessel_j0_minus_one(r * rho) * n(r) * r; }, 1.0, INFINITY,
          part_tol));
    }
  }
  if (!ok || !std::isfinite(re) || !std::isfinite(im))
    throw QuadratureFailure("jump_symbol: quadrature did not reach tolerance", err);
  return {re, nu.is_even() ? 0.0 : im};
}

Complex jump_exponent(const LevyDensity& nu, const Vec2& xi, double tol) {
  if (nu.is_zero()) return {};
  if (nu.is_stable()) {
    const double scale = nu.radial(1.0) / nu.stable_constant();
    return {-scale * std::pow(xi.norm(), nu.alpha()), 0.0};
  }
  return jump_symbol(nu, xi, tol);
}

double Matrix2::quadratic(const Vec2& v) const {
  if (dim == 1) return m[0] * v[0] * v[0];
  return m[0] * v[0] * v[0] + (m[1] + m[2]) * v[0] * v[1] + m[3] * v[1] * v[1];
}

bool Matrix2::is_zero() const {
  return std::all_of(m.begin(), m.end(), [](double x) { return x == 0.0; });
}

Matrix2 Matrix2::scaled(double s) const {
  Matrix2 out = *this;
  for (auto& x : out.m) x *= s;
  return out;
}

Matrix2 Matrix2::identity(int dim, double s) {
  return dim == 1 ? Matrix2{{s, 0.0, 0.0, 0.0}, 1} : Matrix2{{s, 0.0, 0.0, s}, 2};
}

LevyTriplet::LevyTriplet(Matrix2 sigma, Vec2 drift, LevyDensity nu, double tol)
    : sigma_(sigma), drift_(drift), nu_(std::move(nu)) {
  const int d = sigma_.dim;
  if (d != 1 && d != 2) throw InvalidArgument("triplet dimension must be 1 or 2");
  if (drift_.dim != d || nu_.dim() != d) throw InvalidArgument("triplet components have mismatched dimensions");
  if (d == 1) {
    sigma_.m = {sigma_.m[0], 0.0, 0.0, 0.0};
    if (sigma_.m[0] < -1e-12) throw InvalidArgument("sigma must be positive semi-definite");
  } else {
    const double off = 0.5 * (sigma_.m[1] + sigma_.m[2]);
    const double scale = std::max({1.0, std::abs(sigma_.m[0]), std::abs(sigma_.m[3])});
    if (std::abs(sigma_.m[1] - sigma_.m[2]) > 1e-12 * scale) throw InvalidArgument("sigma must be symmetric");
    sigma_.m[1] = sigma_.m[2] = off;
    const double mean = 0.5 * (sigma_.m[0] + sigma_.m[3]);
    const double rad = std::hypot(0.5 * (sigma_.m[0] - sigma_.m[3]), off);
    if (mean - rad < -1e-12) throw InvalidArgument("sigma must be positive semi-definite");
  }
  validation_ = validate_levy_density(nu_, tol);
  if (!validation_.finite()) throw InvalidArgument("Levy density fails the integrability condition min(1,|z|^2)");
}

LevyTriplet LevyTriplet::gaussian(int dim, double scale) {
  return LevyTriplet(Matrix2::identity(dim, scale), Vec2{{0.0, 0.0}, dim}, LevyDensity::none(dim));
}

LevyTriplet LevyTriplet::stable(int dim, double alpha) {
  if (alpha == 2.0) return gaussian(dim);
  return LevyTriplet(Matrix2::zero(dim), Vec2{{0.0, 0.0}, dim}, LevyDensity::stable(dim, alpha));
}

LevyTriplet LevyTriplet::pure_drift(Vec2 drift) {
  return LevyTriplet(Matrix2::zero(drift.dim), drift, LevyDensity::none(drift.dim));
}

LevyTriplet LevyTriplet::pure_jump(LevyDensity nu, double tol) {
  const int d = nu.dim();
  return LevyTriplet(Matrix2::zero(d), Vec2{{0.0, 0.0}, d}, std::move(nu), tol);
}

std::optional<double> LevyTriplet::homogeneity() const {
  const bool no_drift = drift_.norm() == 0.0;
  if (nu_.is_stable() && sigma_.is_zero() && no_drift) return nu_.alpha();
  if (nu_.is_zero() && !sigma_.is_zero() && no_drift) return 2.0;
  if (nu_.is_zero() && sigma_.is_zero() && !no_drift) return 1.0;
  return std::nullopt;
}

Complex characteristic_exponent(const LevyTriplet& triplet, const Vec2& xi, double tol) {
  return Complex(-triplet.sigma().quadratic(xi), triplet.drift().dot(xi)) + jump_exponent(triplet.nu(), xi, tol);
}

LevyTriplet dual_triplet(const LevyTriplet& triplet) {
  return LevyTriplet(triplet.sigma(), -triplet.drift(), triplet.nu().reflected());
}

Symbol stable_symbol(double alpha) {
  if (!(alpha > 0.0 && alpha <= 2.0)) throw InvalidAlpha("stable symbol requires alpha in (0,2]");
  return Symbol{[alpha](const Vec2& xi) { return Complex(-std::pow(xi.norm(), alpha), 0.0); }, alpha};
}

Symbol sum_symbols(std::span<const Symbol> symbols) {
  if (symbols.empty()) throw InvalidArgument("sum_symbols requires at least one symbol");
  std::vector<Symbol> parts(symbols.begin(), symbols.end());
  std::optional<double> h = parts.front().homogeneity;
  for (const auto& s : parts)
    if (!s.homogeneity || !h || *s.homogeneity != *h) h.reset();
  return Symbol{[parts](const Vec2& xi) {
                  Complex sum{};
                  for (const auto& s : parts) sum += s(xi);
                  return sum;
                },
                h};
}

Symbol triplet_symbol(const LevyTriplet& triplet, double tol) {
  return Symbol{[triplet, tol](const Vec2& xi) { return characteristic_exponent(triplet, xi, tol); },
                triplet.homogeneity()};
}

namespace {

using nlohmann::json;

double number_in(const json& j, const std::string& key) {
  if (!j.is_number()) throw ConfigError("'" + key + "' must be a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) throw ConfigError("'" + key + "' must be finite");
  return v;
}

void reject_unknown(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      throw ConfigError("unknown key '" + it.key() + "' in " + where);
  }
}

}  // namespace

LevyTriplet parse_triplet_config(std::string_view text, const std::filesystem::path& base_dir) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("triplet config is not valid JSON: ") + e.what());
  }
  if (!root.is_object()) throw ConfigError("triplet config must be a JSON object");
  reject_unknown(root, {"dim", "sigma", "b", "nu"}, "triplet config");
  const int dim = root.contains("dim") ? static_cast<int>(number_in(root["dim"], "dim")) : 1;
  if (dim != 1 && dim != 2) throw ConfigError("'dim' must be 1 or 2");

  Matrix2 sigma = Matrix2::zero(dim);
  if (root.contains("sigma")) {
    const json& s = root["sigma"];
    if (s.is_number()) {
      sigma = Matrix2::identity(dim, number_in(s, "sigma"));
    } else if (s.is_array() && static_cast<int>(s.size()) == dim) {
      for (int i = 0; i < dim; ++i) {
        if (!s[static_cast<std::size_t>(i)].is_array() || static_cast<int>(s[static_cast<std::size_t>(i)].size()) != dim)
          throw ConfigError("'sigma' must be a number or a dim x dim array");
        for (int k = 0; k < dim; ++k)
          sigma.m[static_cast<std::size_t>(2 * i + k)] =
              number_in(s[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)], "sigma");
      }
    } else {
      throw ConfigError("'sigma' must be a number or a dim x dim array");
    }
  }
  Vec2 b{{0.0, 0.0}, dim};
  if (root.contains("b")) {
    const json& jb = root["b"];
    if (jb.is_number() && dim == 1) {
      b[0] = number_in(jb, "b");
    } else if (jb.is_array() && static_cast<int>(jb.size()) == dim) {
      for (int i = 0; i < dim; ++i) b[i] = number_in(jb[static_cast<std::size_t>(i)], "b");
    } else {
      throw ConfigError("'b' must have dim entries");
    }
  }
  LevyDensity nu = LevyDensity::none(dim);
  if (root.contains("nu")) {
    const json& jn = root["nu"];
    if (!jn.is_object()) throw ConfigError("'nu' must be an object");
    reject_unknown(jn, {"kind", "alpha", "table_path", "name", "even", "radius", "height", "width", "exponent", "scale"},
                   "nu");
    if (!jn.contains("kind") || !jn["kind"].is_string()) throw ConfigError("'nu.kind' is required");
    const std::string kind = jn["kind"].get<std::string>();
    auto get = [&](const char* key, double fallback) {
      return jn.contains(key) ? number_in(jn[key], std::string("nu.") + key) : fallback;
    };
    if (kind == "none") {
      nu = LevyDensity::none(dim);
    } else if (kind == "stable") {
      const double alpha = get("alpha", NAN);
      if (!(alpha > 0.0 && alpha < 2.0)) throw ConfigError("'nu.alpha' must lie in (0,2)");
      nu = LevyDensity::stable(dim, alpha);
    } else if (kind == "tabulated") {
      if (dim != 1) throw ConfigError("tabulated densities are one-dimensional");
      if (!jn.contains("table_path") || !jn["table_path"].is_string()) throw ConfigError("'nu.table_path' is required");
      std::filesystem::path p = jn["table_path"].get<std::string>();
      if (p.is_relative() && !base_dir.empty()) p = base_dir / p;
      const bool even = jn.contains("even") && jn["even"].is_boolean() && jn["even"].get<bool>();
      nu = LevyDensity::from_csv(p, even);
    } else if (kind == "analytic") {
      if (!jn.contains("name") || !jn["name"].is_string()) throw ConfigError("'nu.name' is required");
      const std::string name = jn["name"].get<std::string>();
      if (name == "exp_over_abs" && dim == 1) {
        nu = densities::exp_over_abs();
      } else if (name == "indicator") {
        const double radius = get("radius", 1.0);
        if (!(radius > 0.0)) throw ConfigError("'nu.radius' must be positive");
        nu = densities::indicator(dim, radius, get("height", 1.0));
      } else if (name == "one_sided_exp" && dim == 1) {
        nu = densities::one_sided_exp();
      } else if (name == "gaussian") {
        const double width = get("width", 1.0);
        if (!(width > 0.0)) throw ConfigError("'nu.width' must be positive");
        nu = densities::gaussian(dim, width, get("height", 1.0));
      } else if (name == "power_law") {
        nu = densities::power_law(dim, get("exponent", NAN));
      } else if (name == "log_tail") {
        nu = densities::log_tail(dim);
      } else {
        throw ConfigError("unknown analytic density '" + name + "'");
      }
    } else {
      throw ConfigError("unknown nu.kind '" + kind + "'");
    }
    const double scale = get("scale", 1.0);
    if (!(scale >= 0.0)) throw ConfigError("'nu.scale' must be nonnegative");
    if (scale != 1.0) nu = nu.scaled(scale);
  }
  try {
    return LevyTriplet(sigma, b, std::move(nu));
  } catch (const InvalidArgument& e) {
    throw ConfigError(e.what());
  }
}

LevyTriplet load_triplet_config(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open triplet config " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_triplet_config(ss.str(), path.parent_path());
}

}  // namespace levylab
