#pragma once

// Levy triplets (sigma, b, nu), jump densities and characteristic exponents
//   psi(xi) = -xi.sigma xi + i b.xi + a(xi),
//   a(xi)   = \int (e^{i z.xi} - 1 - i (z.xi) h(z)) N(z) dz,  h(z) = 1/(1+|z|^2).
// Exponents use the decaying sign: the alpha-stable exponent is -|xi|^alpha.

#include <array>
#include <filesystem>
#include <functional>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "levylab/quadrature.hpp"
#include "levylab/spectral.hpp"

namespace levylab {

inline constexpr double kDefaultTol = 1e-10;

enum class DensityKind { none, stable, analytic, tabulated };

std::string to_string(DensityKind kind);

/// Nonnegative jump density N on R^d \ {0}. Immutable value type.
class LevyDensity {
 public:
  using Function = std::function<double(std::span<const double>)>;
  using Radial = std::function<double(double)>;

  struct Options {
    bool is_even = false;
    /// Set when N(z) depends on |z| only; required for quadrature in d = 2.
    Radial radial;
    /// N vanishes for |z| beyond this radius.
    double support_radius = std::numeric_limits<double>::infinity();
    /// Radii where N is not smooth; quadrature splits there.
    std::vector<double> breakpoints;
    /// N is bounded near 0 (compound-Poisson type).
    bool bounded = false;
  };

  static LevyDensity none(int dim);
  /// alpha in (0,2). The family constant c(d, alpha) is fixed once by
  /// matching the quadrature jump symbol to -|xi|^alpha at xi = e_1.
  static LevyDensity stable(int dim, double alpha, double tol = 1e-11);
  static LevyDensity analytic(int dim, Function f, std::string label, Options options);
  static LevyDensity radial_analytic(int dim, Radial f, std::string label, Options options);
  /// One-dimensional table (z_i, N_i), linearly interpolated, zero outside.
  static LevyDensity tabulated(std::vector<double> z, std::vector<double> values, bool is_even);
  /// Two-column CSV (z, N(z)).
  static LevyDensity from_csv(const std::filesystem::path& path, bool is_even);

  int dim() const { return dim_; }
  DensityKind kind() const { return kind_; }
  bool is_zero() const { return kind_ == DensityKind::none; }
  bool is_stable() const { return kind_ == DensityKind::stable; }
  /// Stability index; only meaningful for kind() == stable.
  double alpha() const { return alpha_; }
  double stable_constant() const { return stable_constant_; }
  bool is_even() const { return options_.is_even; }
  bool is_radial() const { return static_cast<bool>(options_.radial); }
  bool bounded() const { return options_.bounded; }
  double support_radius() const { return options_.support_radius; }
  const std::vector<double>& breakpoints() const { return options_.breakpoints; }
  const std::string& label() const { return label_; }

  double operator()(std::span<const double> z) const;
  double operator()(const Vec2& z) const { return (*this)(z.span()); }
  double at(double z) const;
  /// N along |z| = r; requires is_radial() (or d = 1 and even).
  double radial(double r) const;

  /// z -> N(-z).
  LevyDensity reflected() const;
  /// factor * N, same kind and metadata.
  LevyDensity scaled(double factor) const;

 private:
  LevyDensity() = default;

  int dim_ = 1;
  DensityKind kind_ = DensityKind::none;
  double alpha_ = 0.0;
  double stable_constant_ = 0.0;
  double scale_ = 1.0;
  Function f_;
  Options options_;
  std::string label_;
};

/// Ready-made densities used by the experiments and tests.
namespace densities {
/// e^{-|z|} / |z| (d = 1).
LevyDensity exp_over_abs();
/// height * 1{|z| <= radius}.
LevyDensity indicator(int dim, double radius, double height = 1.0);
/// e^{-z} 1{z > 0} (d = 1, not even).
LevyDensity one_sided_exp();
/// height * exp(-|z|^2 / (2 width^2)).
LevyDensity gaussian(int dim, double width, double height = 1.0);
/// |z|^{-exponent}.
LevyDensity power_law(int dim, double exponent);
/// 1 / (|z|^d ln^2 |z|) for |z| >= e, zero inside.
LevyDensity log_tail(int dim);
}  // namespace densities

struct DensityValidation {
  double small_jump_integral = 0.0;  // \int_{|z|<=1} |z|^2 N
  double large_jump_integral = 0.0;  // \int_{|z|>1} N
  double small_jump_error = 0.0;
  double large_jump_error = 0.0;
  bool small_jump_diverges = false;
  bool large_jump_diverges = false;

  bool finite() const { return !small_jump_diverges && !large_jump_diverges; }
};

/// Integrability of min(1,|z|^2) N. Throws NonFiniteDensity when N is NaN or
/// negative at a quadrature node.
DensityValidation validate_levy_density(const LevyDensity& nu, double tol = kDefaultTol);

/// \int_lo^hi f(r) dr (hi may be +inf) split at the density's breakpoints
/// and cut at its support radius; shells toward r = 0 when lo = 0.
QuadResult<double> integrate_radial(const LevyDensity& nu, const std::function<double(double)>& f, double lo,
                                    double hi, double tol);

/// a(xi) by adaptive quadrature. Even densities get a zero imaginary part.
Complex jump_symbol(const LevyDensity& nu, const Vec2& xi, double tol = kDefaultTol);

/// Symmetric d x d matrix stored row-major in a 2 x 2 block.
struct Matrix2 {
  std::array<double, 4> m{0.0, 0.0, 0.0, 0.0};
  int dim = 1;

  double operator()(int i, int j) const { return m[static_cast<std::size_t>(2 * i + j)]; }
  double quadratic(const Vec2& v) const;
  bool is_zero() const;
  Matrix2 scaled(double s) const;
  static Matrix2 zero(int dim) { return {{0.0, 0.0, 0.0, 0.0}, dim}; }
  static Matrix2 identity(int dim, double s = 1.0);
};

class LevyTriplet {
 public:
  /// Validates sigma (symmetric, PSD to -1e-12) and the density.
  LevyTriplet(Matrix2 sigma, Vec2 drift, LevyDensity nu, double tol = kDefaultTol);

  static LevyTriplet gaussian(int dim, double scale = 1.0);
  static LevyTriplet stable(int dim, double alpha);
  static LevyTriplet pure_drift(Vec2 drift);
  static LevyTriplet pure_jump(LevyDensity nu, double tol = kDefaultTol);

  int dim() const { return sigma_.dim; }
  const Matrix2& sigma() const { return sigma_; }
  const Vec2& drift() const { return drift_; }
  const LevyDensity& nu() const { return nu_; }
  const DensityValidation& validation() const { return validation_; }
  /// Index when the exponent is positively homogeneous (pure stable, pure
  /// Gaussian).
  std::optional<double> homogeneity() const;

 private:
  Matrix2 sigma_;
  Vec2 drift_;
  LevyDensity nu_;
  DensityValidation validation_;
};

/// psi(xi) = -xi.sigma xi + i b.xi + a(xi); stable densities use -|xi|^alpha.
Complex characteristic_exponent(const LevyTriplet& triplet, const Vec2& xi, double tol = kDefaultTol);

/// Jump part a(xi) only; closed form for stable densities.
Complex jump_exponent(const LevyDensity& nu, const Vec2& xi, double tol = kDefaultTol);

/// (sigma, -b, nu reflected): the adjoint operator's triplet.
LevyTriplet dual_triplet(const LevyTriplet& triplet);

struct Symbol {
  std::function<Complex(const Vec2&)> eval;
  std::optional<double> homogeneity;

  Complex operator()(const Vec2& xi) const { return eval(xi); }
};

/// -|xi|^alpha with homogeneity alpha; throws InvalidAlpha outside (0,2].
Symbol stable_symbol(double alpha);
Symbol sum_symbols(std::span<const Symbol> symbols);
Symbol triplet_symbol(const LevyTriplet& triplet, double tol = kDefaultTol);

/// Structured configuration: {"dim", "sigma", "b", "nu": {"kind", "alpha",
/// "table_path", "name", "even", ...}}. Unknown keys raise ConfigError.
/// Relative table paths resolve against base_dir.
LevyTriplet parse_triplet_config(std::string_view json_text, const std::filesystem::path& base_dir = {});
LevyTriplet load_triplet_config(const std::filesystem::path& path);

}  // namespace levylab
