#include "levylab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numbers>
#include <sstream>
#include <tuple>

#include "levylab/parallel.hpp"

namespace levylab {

double Vec2::norm() const { return dim == 1 ? std::abs(c[0]) : std::hypot(c[0], c[1]); }

double Vec2::dot(const Vec2& o) const {
  return dim == 1 ? c[0] * o.c[0] : c[0] * o.c[0] + c[1] * o.c[1];
}

Vec2 operator*(double s, const Vec2& v) { return {{s * v.c[0], s * v.c[1]}, v.dim}; }
Vec2 operator+(const Vec2& a, const Vec2& b) { return {{a.c[0] + b.c[0], a.c[1] + b.c[1]}, a.dim}; }
Vec2 operator-(const Vec2& v) { return {{-v.c[0], -v.c[1]}, v.dim}; }

Grid::Grid(int dim, double half_width, std::size_t points)
    : dim_(dim), half_width_(half_width), points_(points), dx_(0.0) {
  if (dim != 1 && dim != 2) throw InvalidGrid("grid dimension must be 1 or 2");
  if (!(half_width > 0.0) || !std::isfinite(half_width)) throw InvalidGrid("grid half-width must be positive");
  if (points < 8 || (points & (points - 1)) != 0)
    throw InvalidGrid("points per dimension must be a power of two >= 8");
  dx_ = 2.0 * half_width_ / static_cast<double>(points_);
}

double Grid::dxi() const { return std::numbers::pi / half_width_; }

double Grid::cell_volume() const { return dim_ == 1 ? dx_ : dx_ * dx_; }

double Grid::frequency_weight() const {
  const double w = dxi() / (2.0 * std::numbers::pi);
  return dim_ == 1 ? w : w * w;
}

double Grid::nyquist() const { return dxi() * static_cast<double>(points_ / 2); }

long Grid::signed_index(std::size_t k) const {
  const long m = static_cast<long>(points_);
  const long kk = static_cast<long>(k);
  return kk < m / 2 ? kk : kk - m;
}

double Grid::frequency(std::size_t k) const { return dxi() * static_cast<double>(signed_index(k)); }

Vec2 Grid::point(std::size_t flat) const {
  if (dim_ == 1) return Vec2::of(coordinate(flat));
  return Vec2::of(coordinate(flat / points_), coordinate(flat % points_));
}

Vec2 Grid::wavevector(std::size_t flat) const {
  if (dim_ == 1) return Vec2::of(frequency(flat));
  return Vec2::of(frequency(flat / points_), frequency(flat % points_));
}

bool Grid::operator==(const Grid& o) const {
  return dim_ == o.dim_ && half_width_ == o.half_width_ && points_ == o.points_;
}

namespace {

// FFTW plans are created once per (dim, M, sign) under a lock; execution
// through fftw_execute_dft on caller-owned arrays is thread-safe.
fftw_plan cached_plan(int dim, std::size_t m, int sign) {
  static std::mutex mutex;
  static std::map<std::tuple<int, std::size_t, int>, fftw_plan> plans;
  std::lock_guard lock(mutex);
  auto key = std::make_tuple(dim, m, sign);
  if (auto it = plans.find(key); it != plans.end()) return it->second;
  const std::size_t n = dim == 1 ? m : m * m;
  std::vector<Complex> in(n), out(n);
  auto* pin = reinterpret_cast<fftw_complex*>(in.data());
  auto* pout = reinterpret_cast<fftw_complex*>(out.data());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(static_cast<int>(m), pin, pout, sign, flags)
                            : fftw_plan_dft_2d(static_cast<int>(m), static_cast<int>(m), pin, pout,
                                               sign, flags);
  plans.emplace(key, plan);
  return plan;
}

void execute(const Grid& grid, int sign, std::vector<Complex>& in, std::vector<Complex>& out) {
  fftw_plan plan = cached_plan(grid.dim(), grid.points(), sign);
  fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                   reinterpret_cast<fftw_complex*>(out.data()));
}

// (-1)^(k0 + k1): the phase e^{-i L xi_k} of shifting the box origin to -L.
double parity(const Grid& grid, std::size_t flat) {
  const std::size_t m = grid.points();
  const std::size_t s = grid.dim() == 1 ? flat : flat / m + flat % m;
  return (s % 2 == 0) ? 1.0 : -1.0;
}

}  // namespace

std::vector<Complex> forward_transform(const Grid& grid, std::span<const double> values) {
  if (values.size() != grid.size()) throw InvalidArgument("forward_transform: size mismatch");
  std::vector<Complex> in(values.begin(), values.end());
  std::vector<Complex> out(grid.size());
  execute(grid, FFTW_BACKWARD, in, out);
  const double scale = grid.cell_volume();
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= scale * parity(grid, k);
  return out;
}

std::vector<Complex> forward_transform(const SpectralField& f) {
  return forward_transform(f.grid(), f.values());
}

std::vector<Complex> inverse_transform(const Grid& grid, std::span<const Complex> coefficients) {
  if (coefficients.size() != grid.size()) throw InvalidArgument("inverse_transform: size mismatch");
  std::vector<Complex> in(coefficients.size());
  for (std::size_t k = 0; k < in.size(); ++k) in[k] = coefficients[k] * parity(grid, k);
  std::vector<Complex> out(grid.size());
  execute(grid, FFTW_FORWARD, in, out);
  const double box = 2.0 * grid.half_width();
  const double scale = grid.dim() == 1 ? 1.0 / box : 1.0 / (box * box);
  for (auto& v : out) v *= scale;
  return out;
}

SpectralField::SpectralField(Grid grid, std::vector<double> values, std::vector<Complex> coefficients,
                             double imag_residual)
    : grid_(std::move(grid)),
      values_(std::move(values)),
      coefficients_(std::move(coefficients)),
      imag_residual_(imag_residual) {}

SpectralField SpectralField::from_values(const Grid& grid, std::vector<double> values) {
  if (values.size() != grid.size()) throw InvalidArgument("field size does not match grid");
  auto coefficients = forward_transform(grid, values);
  return SpectralField(grid, std::move(values), std::move(coefficients), 0.0);
}

SpectralField SpectralField::from_coefficients(const Grid& grid, std::vector<Complex> coefficients) {
  if (coefficients.size() != grid.size()) throw InvalidArgument("coefficient size does not match grid");
  auto complex_values = inverse_transform(grid, coefficients);
  std::vector<double> values(complex_values.size());
  double residual = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    values[i] = complex_values[i].real();
    residual = std::max(residual, std::abs(complex_values[i].imag()));
  }
  return SpectralField(grid, std::move(values), std::move(coefficients), residual);
}

SpectralField SpectralField::sample(const Grid& grid, const std::function<double(const Vec2&)>& f) {
  std::vector<double> values(grid.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = f(grid.point(i));
  return from_values(grid, std::move(values));
}

SpectralField SpectralField::zeros(const Grid& grid) {
  return SpectralField(grid, std::vector<double>(grid.size(), 0.0),
                       std::vector<Complex>(grid.size(), Complex{}), 0.0);
}

double SpectralField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double SpectralField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }

bool SpectralField::is_nonnegative(double tol) const {
  return min_value() >= -tol * std::max(0.0, max_value());
}

double SpectralField::mass() const {
  double s = 0.0;
  for (double v : values_) s += v;
  return s * grid_.cell_volume();
}

double SpectralField::max_abs_coefficient_near_nyquist(double fraction) const {
  const double cut = fraction * grid_.nyquist();
  double m = 0.0;
  for (std::size_t k = 0; k < coefficients_.size(); ++k) {
    const Vec2 xi = grid_.wavevector(k);
    const double r = grid_.dim() == 1 ? std::abs(xi[0]) : std::max(std::abs(xi[0]), std::abs(xi[1]));
    if (r >= cut) m = std::max(m, std::abs(coefficients_[k]));
  }
  return m;
}

std::vector<Complex> sample_multiplier(const Grid& grid, const Multiplier& m) {
  std::vector<Complex> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = m(grid.wavevector(k));
  return out;
}

SpectralField apply_multiplier(const SpectralField& f, std::span<const Complex> m) {
  const auto c = f.coefficients();
  if (m.size() != c.size()) throw InvalidArgument("multiplier size does not match grid");
  std::vector<Complex> out(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) out[k] = c[k] * m[k];
  auto result = SpectralField::from_coefficients(f.grid(), std::move(out));
  const double scale = std::max(1.0, lp_norm(result, INFINITY));
  if (result.imag_residual() > 1e-8 * scale) {
    warn("NonHermitianSymbol", "multiplier produced imaginary part " +
                                   std::to_string(result.imag_residual()) + " from a real field");
  }
  return result;
}

SpectralField apply_multiplier(const SpectralField& f, const Multiplier& m) {
  return apply_multiplier(f, sample_multiplier(f.grid(), m));
}

double lp_norm(const Grid& grid, std::span<const double> values, double p) {
  if (!(p >= 1.0)) throw InvalidExponent("lp_norm requires p >= 1");
  if (std::isinf(p)) {
    double m = 0.0;
    for (double v : values) m = std::max(m, std::abs(v));
    return m;
  }
  double peak = 0.0;
  for (double v : values) peak = std::max(peak, std::abs(v));
  if (peak == 0.0) return 0.0;
  // Scale by the peak so large p does not underflow.
  double s = 0.0;
  for (double v : values) s += std::pow(std::abs(v) / peak, p);
  return peak * std::pow(s * grid.cell_volume(), 1.0 / p);
}

double lp_norm(const SpectralField& f, double p) { return lp_norm(f.grid(), f.values(), p); }

SpectralField derivative(const SpectralField& f, int axis) {
  const Grid& g = f.grid();
  if (axis < 0 || axis >= g.dim()) throw InvalidArgument("derivative axis out of range");
  const auto c = f.coefficients();
  std::vector<Complex> out(c.size());
  for (std::size_t k = 0; k < c.size(); ++k) {
    const double xi = g.wavevector(k)[axis];
    // The Nyquist mode has no partner; its derivative is dropped.
    const bool nyquist = std::abs(std::abs(xi) - g.nyquist()) < 1e-12 * g.nyquist();
    out[k] = nyquist ? Complex{} : Complex(0.0, -xi) * c[k];
  }
  return SpectralField::from_coefficients(g, std::move(out));
}

SpectralField band_limit(const SpectralField& f, double fraction) {
  const Grid& g = f.grid();
  const double cut = fraction * g.nyquist();
  std::vector<Complex> out(f.coefficients().begin(), f.coefficients().end());
  for (std::size_t k = 0; k < out.size(); ++k)
    if (g.wavevector(k).norm() > cut) out[k] = Complex{};
  return SpectralField::from_coefficients(g, std::move(out));
}

SpectralField combine(const SpectralField& a, const SpectralField& b,
                      const std::function<double(double, double)>& op) {
  if (!(a.grid() == b.grid())) throw InvalidArgument("combine: grids differ");
  std::vector<double> out(a.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(a.values()[i], b.values()[i]);
  return SpectralField::from_values(a.grid(), std::move(out));
}

SpectralField map_values(const SpectralField& f, const std::function<double(double)>& op) {
  std::vector<double> out(f.values().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = op(f.values()[i]);
  return SpectralField::from_values(f.grid(), std::move(out));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string field_csv(const SpectralField& f) {
  const Grid& g = f.grid();
  std::string out = g.dim() == 1 ? "x,value\n" : "x,y,value\n";
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 p = g.point(i);
    out += format_double(p[0]);
    if (g.dim() == 2) out += "," + format_double(p[1]);
    out += "," + format_double(f.values()[i]) + "\n";
  }
  return out;
}

void write_field_csv(const SpectralField& f, const std::filesystem::path& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw InvalidArgument("cannot open " + path.string() + " for writing");
  os << field_csv(f);
}

SpectralField parse_field_csv(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  std::vector<std::vector<double>> rows;
  std::size_t columns = 0;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (rows.empty() && (std::isalpha(static_cast<unsigned char>(line[0])) != 0)) continue;  // header
    std::vector<double> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw InvalidArgument("field CSV: cannot parse '" + cell + "'");
      }
    }
    if (columns == 0) columns = row.size();
    if (row.size() != columns || (columns != 2 && columns != 3))
      throw InvalidArgument("field CSV: expected 2 or 3 columns per row");
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument("field CSV: no data rows");
  const int dim = static_cast<int>(columns) - 1;
  std::size_t m = rows.size();
  if (dim == 2) {
    m = static_cast<std::size_t>(std::llround(std::sqrt(static_cast<double>(rows.size()))));
    if (m * m != rows.size()) throw InvalidArgument("field CSV: 2-D row count is not a square");
  }
  const double half_width = -rows.front()[0];
  Grid grid(dim, half_width, m);
  std::vector<double> values(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const Vec2 p = grid.point(i);
    for (int d = 0; d < dim; ++d) {
      if (std::abs(rows[i][static_cast<std::size_t>(d)] - p[d]) > 1e-9 * half_width)
        throw InvalidArgument("field CSV: coordinates do not form the expected uniform grid");
    }
    values[i] = rows[i].back();
  }
  return SpectralField::from_values(grid, std::move(values));
}

SpectralField read_field_csv(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw InvalidArgument("cannot open " + path.string());
  std::stringstream ss;
  ss << is.rdbuf();
  return parse_field_csv(ss.str());
}

std::vector<Complex> sample_hermitian(const Grid& grid, bool radial, const Multiplier& f) {
  struct Slot {
    Vec2 xi;
    Complex value;
  };
  std::map<std::pair<long, long>, std::size_t> index;
  std::vector<Slot> slots;
  std::vector<std::pair<std::size_t, bool>> lookup(grid.size());
  const double h = grid.dxi();
  for (std::size_t k = 0; k < grid.size(); ++k) {
    long s0, s1 = 0;
    if (grid.dim() == 1) {
      s0 = grid.signed_index(k);
    } else {
      s0 = grid.signed_index(k / grid.points());
      s1 = grid.signed_index(k % grid.points());
    }
    std::pair<long, long> key;
    bool flip = false;
    if (radial) {
      key = {s0 * s0 + s1 * s1, 0};
    } else {
      flip = s0 < 0 || (s0 == 0 && s1 < 0);
      key = flip ? std::make_pair(-s0, -s1) : std::make_pair(s0, s1);
    }
    auto [it, inserted] = index.emplace(key, slots.size());
    if (inserted) {
      Vec2 xi{{0.0, 0.0}, grid.dim()};
      if (radial) {
        xi[0] = h * std::sqrt(static_cast<double>(key.first));
      } else {
        xi[0] = h * static_cast<double>(key.first);
        if (grid.dim() == 2) xi[1] = h * static_cast<double>(key.second);
      }
      slots.push_back({xi, {}});
    }
    lookup[k] = {it->second, flip};
  }
  parallel_for(slots.size(), [&](std::size_t i) { slots[i].value = f(slots[i].xi); });
  std::vector<Complex> out(grid.size());
  for (std::size_t k = 0; k < out.size(); ++k) {
    const auto& [slot, flip] = lookup[k];
    out[k] = flip ? std::conj(slots[slot].value) : slots[slot].value;
  }
  return out;
}

}  // namespace levylab
