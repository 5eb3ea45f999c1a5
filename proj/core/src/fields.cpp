#include "levylab/fields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace levylab {

namespace {

double squared_distance(const Vec2& x, const Vec2& c) {
  double s = 0.0;
  for (int i = 0; i < x.dim; ++i) s += (x[i] - c[i]) * (x[i] - c[i]);
  return s;
}

double gaussian(const Vec2& x, const Vec2& c, double var) {
  const double norm = std::pow(2.0 * std::numbers::pi * var, -0.5 * x.dim);
  return norm * std::exp(-0.5 * squared_distance(x, c) / var);
}

Vec2 random_center(std::mt19937_64& rng, int dim, double half) {
  std::uniform_real_distribution<double> u(-half, half);
  Vec2 c{{0.0, 0.0}, dim};
  for (int i = 0; i < dim; ++i) c[i] = u(rng);
  return c;
}

}  // namespace

std::string to_string(FieldFamily family) {
  switch (family) {
    case FieldFamily::gaussians: return "gaussians";
    case FieldFamily::bumps: return "bumps";
    case FieldFamily::mixtures: return "mixtures";
    case FieldFamily::perturbed_steady: return "perturbed-steady";
    case FieldFamily::positive: return "positive";
  }
  return "unknown";
}

FieldFamily parse_field_family(const std::string& name) {
  for (auto f : {FieldFamily::gaussians, FieldFamily::bumps, FieldFamily::mixtures, FieldFamily::perturbed_steady,
                 FieldFamily::positive})
    if (to_string(f) == name) return f;
  throw ConfigError("unknown field family '" + name + "'");
}

std::vector<SpectralField> generate_test_fields(const Grid& grid, std::uint64_t seed, FieldFamily family,
                                                const std::optional<SpectralField>& steady, std::size_t count) {
  std::mt19937_64 rng(seed ^ (0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(family) + 1)));
  const double s = grid.half_width() / 20.0;
  const int d = grid.dim();
  std::vector<SpectralField> out;
  const auto finish = [&out, family]() {
    if (family == FieldFamily::gaussians || family == FieldFamily::bumps || family == FieldFamily::mixtures)
      for (auto& f : out) f = band_limit(f, 0.8);
    return out;
  };
  switch (family) {
    case FieldFamily::gaussians:
      for (double var : {0.25, 1.0, 4.0}) {
        for (double c : {-2.0, 0.0, 2.0}) {
          Vec2 center{{c * s, 0.0}, d};
          out.push_back(SpectralField::sample(grid, [&](const Vec2& x) { return gaussian(x, center, var * s * s); }));
        }
      }
      break;
    case FieldFamily::bumps: {
      // Smoothed indicators: the edge width keeps the spectrum below 1e-16
      // of its peak beyond 0.8 of the Nyquist frequency.
      std::uniform_real_distribution<double> width(0.5, 2.0);
      const double edge_min = 15.0 / (0.8 * grid.nyquist());
      for (std::size_t k = 0; k < count; ++k) {
        const Vec2 c = random_center(rng, d, 3.0 * s);
        const double a = width(rng) * s;
        const double e = std::max(0.3 * a, edge_min);
        out.push_back(SpectralField::sample(grid, [&](const Vec2& x) {
          double v = 1.0;
          for (int i = 0; i < d; ++i) v *= 0.5 * (std::erf((x[i] - c[i] + a) / e) - std::erf((x[i] - c[i] - a) / e));
          return v;
        }));
      }
      break;
    }
    case FieldFamily::mixtures: {
      std::uniform_real_distribution<double> var(0.25, 2.0), weight(0.2, 1.0);
      std::uniform_int_distribution<int> parts(2, 3);
      for (std::size_t k = 0; k < count; ++k) {
        struct Part {
          Vec2 c;
          double v, w;
        };
        std::vector<Part> ps;
        const int n = parts(rng);
        for (int j = 0; j < n; ++j) {
          const Vec2 c = random_center(rng, d, 3.0 * s);
          const double v = var(rng) * s * s;
          ps.push_back({c, v, weight(rng)});
        }
        out.push_back(SpectralField::sample(grid, [&](const Vec2& x) {
          double acc = 0.0;
          for (const auto& p : ps) acc += p.w * gaussian(x, p.c, p.v);
          return acc;
        }));
      }
      break;
    }
    case FieldFamily::perturbed_steady: {
      if (!steady || !(steady->grid() == grid))
        throw InvalidArgument("perturbed-steady fields need the steady density on the same grid");
      std::uniform_real_distribution<double> width(0.5, 1.5);
      std::bernoulli_distribution sign(0.5);
      for (std::size_t k = 0; k < count; ++k) {
        const Vec2 c = random_center(rng, d, 2.0 * s);
        const double w = width(rng) * s;
        const double a = sign(rng) ? 0.3 : -0.3;
        const SpectralField bump = SpectralField::sample(
            grid, [&](const Vec2& x) { return 1.0 + a * std::exp(-0.5 * squared_distance(x, c) / (w * w)); });
        const SpectralField u = combine(*steady, bump, [](double p, double q) { return std::max(p, 0.0) * q; });
        const double mass = u.mass();
        out.push_back(map_values(u, [mass](double v) { return v / mass; }));
      }
      break;
    }
    case FieldFamily::positive: {
      std::uniform_real_distribution<double> amp(-0.7, 0.7), width(0.5, 2.0);
      for (std::size_t k = 0; k < count; ++k) {
        const Vec2 c = random_center(rng, d, 3.0 * s);
        const double w = width(rng) * s;
        const double a = amp(rng);
        out.push_back(SpectralField::sample(
            grid, [&](const Vec2& x) { return std::exp(a * std::exp(-0.5 * squared_distance(x, c) / (w * w))); }));
      }
      break;
    }
  }
  return finish();
}

std::vector<SpectralField> test_battery(const Grid& grid, std::uint64_t seed) {
  auto out = generate_test_fields(grid, seed, FieldFamily::gaussians);
  for (auto family : {FieldFamily::bumps, FieldFamily::mixtures}) {
    auto more = generate_test_fields(grid, seed, family, std::nullopt, 4);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

double boundary_level(const SpectralField& f) {
  const Grid& g = f.grid();
  const double peak = std::max(std::abs(f.max_value()), std::abs(f.min_value()));
  if (peak == 0.0) return 0.0;
  const std::size_t m = g.points();
  const auto edge = [m](std::size_t i) { return i <= 1 || i + 1 >= m; };
  double worst = 0.0;
  for (std::size_t k = 0; k < g.size(); ++k) {
    const bool on_edge = g.dim() == 1 ? edge(k) : (edge(k / m) || edge(k % m));
    if (on_edge) worst = std::max(worst, std::abs(f.value(k)));
  }
  return worst / peak;
}

}  // namespace levylab
