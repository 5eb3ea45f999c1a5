#pragma once

// Uniform periodic grids on [-L, L]^d (d = 1 or 2) and fields sampled on
// them. The forward transform approximates the continuum integral
//   w^(xi) = \int e^{+i x.xi} w(x) dx
// at the grid frequencies xi_k = pi k / L; every other module goes through
// these wrappers and never touches transform internals.

#include <array>
#include <complex>
#include <cstddef>
#include <filesystem>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levylab/errors.hpp"

namespace levylab {

using Complex = std::complex<double>;

/// Point or frequency in R^d; only the first dim() entries are meaningful.
struct Vec2 {
  std::array<double, 2> c{0.0, 0.0};
  int dim = 1;

  double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }
  double norm() const;
  double dot(const Vec2& o) const;
  std::span<const double> span() const { return {c.data(), static_cast<std::size_t>(dim)}; }

  static Vec2 of(double x) { return {{x, 0.0}, 1}; }
  static Vec2 of(double x, double y) { return {{x, y}, 2}; }
};

Vec2 operator*(double s, const Vec2& v);
Vec2 operator+(const Vec2& a, const Vec2& b);
Vec2 operator-(const Vec2& v);

class Grid {
 public:
  /// Throws InvalidGrid unless dim in {1,2}, points a power of two >= 8, half_width > 0.
  Grid(int dim, double half_width, std::size_t points);

  static Grid default_1d() { return Grid(1, 20.0, 512); }
  static Grid default_2d() { return Grid(2, 10.0, 128); }

  int dim() const { return dim_; }
  double half_width() const { return half_width_; }
  std::size_t points() const { return points_; }
  std::size_t size() const { return dim_ == 1 ? points_ : points_ * points_; }
  double dx() const { return dx_; }
  double dxi() const;
  /// dx^d
  double cell_volume() const;
  /// dxi^d / (2 pi)^d
  double frequency_weight() const;
  double nyquist() const;

  double coordinate(std::size_t i) const { return -half_width_ + static_cast<double>(i) * dx_; }
  /// Frequency for transform-ordered index k (0..M/2-1 positive, then negatives).
  double frequency(std::size_t k) const;
  long signed_index(std::size_t k) const;

  Vec2 point(std::size_t flat) const;
  Vec2 wavevector(std::size_t flat) const;

  bool operator==(const Grid& o) const;

 private:
  int dim_;
  double half_width_;
  std::size_t points_;
  double dx_;
};

/// Real field with its Fourier coefficients. Both arrays are filled at
/// construction; fields are immutable afterwards.
class SpectralField {
 public:
  static SpectralField from_values(const Grid& grid, std::vector<double> values);
  /// Values are the real part of the inverse transform; the largest
  /// discarded imaginary part is kept in imag_residual().
  static SpectralField from_coefficients(const Grid& grid, std::vector<Complex> coefficients);
  static SpectralField sample(const Grid& grid, const std::function<double(const Vec2&)>& f);
  static SpectralField zeros(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const Complex> coefficients() const { return coefficients_; }
  double imag_residual() const { return imag_residual_; }

  double value(std::size_t flat) const { return values_[flat]; }
  double max_value() const;
  double min_value() const;
  /// min(values) >= -tol * max(values)
  bool is_nonnegative(double tol = 1e-10) const;
  /// sum(values) * dx^d
  double mass() const;
  double max_abs_coefficient_near_nyquist(double fraction = 0.95) const;

 private:
  SpectralField(Grid grid, std::vector<double> values, std::vector<Complex> coefficients,
                double imag_residual);

  Grid grid_;
  std::vector<double> values_;
  std::vector<Complex> coefficients_;
  double imag_residual_ = 0.0;
};

/// Discrete approximation of \int e^{+ix.xi} w(x) dx at the grid frequencies.
std::vector<Complex> forward_transform(const Grid& grid, std::span<const double> values);
std::vector<Complex> forward_transform(const SpectralField& f);
/// Inverse of forward_transform (complex result).
std::vector<Complex> inverse_transform(const Grid& grid, std::span<const Complex> coefficients);

using Multiplier = std::function<Complex(const Vec2& xi)>;

/// Multiplies the coefficients by m(xi). Emits a NonHermitianSymbol warning
/// when a real input yields imaginary mass above 1e-8.
SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m);
/// Coefficient-wise multiplication with precomputed multiplier values.
SpectralField apply_multiplier(const SpectralField& f, std::span<const Complex> m);

/// Evaluates m at every grid frequency (transform order).
std::vector<Complex> sample_multiplier(const Grid& grid, const Multiplier& m);
/// Same for m(-xi) = conj m(xi), evaluating one frequency per symmetry class
/// (per |xi| when radial) in parallel.
std::vector<Complex> sample_hermitian(const Grid& grid, bool radial, const Multiplier& m);

/// Riemann-sum L^p norm; p = +inf gives max |f|. Throws InvalidExponent for p < 1.
double lp_norm(const SpectralField& f, double p);
double lp_norm(const Grid& grid, std::span<const double> values, double p);

/// Spectral partial derivative along axis (0 or 1).
SpectralField derivative(const SpectralField& f, int axis);

/// Zeroes coefficients with |xi| > fraction * nyquist.
SpectralField band_limit(const SpectralField& f, double fraction = 0.8);

/// Pointwise combination of fields on the same grid.
SpectralField combine(const SpectralField& a, const SpectralField& b,
                      const std::function<double(double, double)>& op);
SpectralField map_values(const SpectralField& f, const std::function<double(double)>& op);

/// CSV with columns x[,y],value; doubles printed with 17 significant digits.
void write_field_csv(const SpectralField& f, const std::filesystem::path& path);
std::string field_csv(const SpectralField& f);
SpectralField read_field_csv(const std::filesystem::path& path);
SpectralField parse_field_csv(const std::string& text);

std::string format_double(double v);

}  // namespace levylab
