#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <numbers>
#include <limits>
#include <random>

#include "levylab/quadrature.hpp"
#include "levylab/spectral.hpp"

namespace levylab {
namespace {

constexpr double kPi = std::numbers::pi;

SpectralField unit_gaussian(const Grid& g) {
  return SpectralField::sample(g, [](const Vec2& x) { return std::exp(-0.5 * x[0] * x[0]) / std::sqrt(2.0 * kPi); });
}

SpectralField random_field(const Grid& g, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n;
  std::vector<double> v(g.size());
  for (double& x : v) x = n(rng);
  return SpectralField::from_values(g, std::move(v));
}

TEST(Grid, Invariants) {
  const Grid g(1, 20.0, 512);
  EXPECT_EQ(g.dx() * static_cast<double>(g.points()), 40.0);
  EXPECT_NEAR(g.frequency(1), kPi / 20.0, 1e-15);
  EXPECT_NEAR(g.frequency(511), -kPi / 20.0, 1e-15);
  EXPECT_THROW(Grid(1, 20.0, 100), InvalidGrid);
  EXPECT_THROW(Grid(1, 20.0, 4), InvalidGrid);
  EXPECT_THROW(Grid(3, 20.0, 64), InvalidGrid);
  EXPECT_THROW(Grid(1, -1.0, 64), InvalidGrid);
}

TEST(ForwardTransform, GaussianMatchesClosedForm) {
  const Grid g(1, 20.0, 256);
  const auto c = forward_transform(unit_gaussian(g));
  double err = 0.0;
  for (std::size_t k = 0; k < g.points(); ++k) {
    const double xi = g.frequency(k);
    if (std::abs(xi) <= 5.0) err = std::max(err, std::abs(c[k] - std::exp(-0.5 * xi * xi)));
  }
  EXPECT_LT(err, 1e-12);
}

TEST(ForwardTransform, ZeroAndEvenFields) {
  const Grid g(1, 20.0, 256);
  for (auto c : forward_transform(SpectralField::zeros(g))) EXPECT_EQ(c, Complex(0.0));
  const SpectralField even = SpectralField::sample(g, [](const Vec2& x) { return 1.0 / (1.0 + x[0] * x[0] * x[0] * x[0]); });
  for (auto c : forward_transform(even)) EXPECT_LT(std::abs(c.imag()), 1e-12);
}

TEST(ForwardTransform, UsesThePositiveExponentConvention) {
  // A shifted Gaussian picks up e^{+i a xi}.
  const Grid g(1, 20.0, 256);
  const double a = 1.5;
  const SpectralField f = SpectralField::sample(g, [a](const Vec2& x) {
    return std::exp(-0.5 * (x[0] - a) * (x[0] - a)) / std::sqrt(2.0 * kPi);
  });
  const auto c = forward_transform(f);
  const double xi = g.frequency(3);
  EXPECT_NEAR(std::abs(c[3] - std::exp(Complex(-0.5 * xi * xi, a * xi))), 0.0, 1e-12);
}

TEST(SpectralField, RoundTripAndParseval) {
  for (const Grid& g : {Grid(1, 5.0, 128), Grid(2, 3.0, 32)}) {
    const SpectralField f = random_field(g, 5);
    const auto back = inverse_transform(g, forward_transform(f));
    double err = 0.0, peak = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
      err = std::max(err, std::abs(back[i].real() - f.value(i)));
      peak = std::max(peak, std::abs(f.value(i)));
    }
    EXPECT_LT(err, 1e-12 * peak);
    double space = 0.0, freq = 0.0;
    for (double v : f.values()) space += v * v;
    for (auto c : f.coefficients()) freq += std::norm(c);
    space *= g.cell_volume();
    freq *= g.frequency_weight();
    EXPECT_NEAR(space, freq, 1e-10 * space);
  }
}

TEST(ApplyMultiplier, IdentityAndLaplacian) {
  const Grid g(1, 20.0, 512);
  const SpectralField f = unit_gaussian(g);
  const SpectralField same = apply_multiplier(f, [](const Vec2&) { return Complex(1.0); });
  const SpectralField heat0 = apply_multiplier(f, [](const Vec2& xi) { return Complex(std::exp(-0.0 * xi[0] * xi[0])); });
  const SpectralField lap = apply_multiplier(f, [](const Vec2& xi) { return Complex(-xi[0] * xi[0]); });
  double e1 = 0.0, e2 = 0.0, e3 = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i);
    e1 = std::max(e1, std::abs(same.value(i) - f.value(i)));
    e2 = std::max(e2, std::abs(heat0.value(i) - f.value(i)));
    e3 = std::max(e3, std::abs(lap.value(i) - (x * x - 1.0) * std::exp(-0.5 * x * x) / std::sqrt(2.0 * kPi)));
  }
  EXPECT_LT(e1, 1e-15);
  EXPECT_LT(e2, 1e-15);
  EXPECT_LT(e3, 1e-10);
}

TEST(ApplyMultiplier, CompositionIsCoefficientwise) {
  const Grid g(1, 10.0, 128);
  const SpectralField f = random_field(g, 9);
  const Multiplier m1 = [](const Vec2& xi) { return Complex(std::exp(-std::abs(xi[0])), 0.0); };
  const Multiplier m2 = [](const Vec2& xi) { return Complex(std::cos(xi[0]), std::sin(xi[0])); };
  const SpectralField two = apply_multiplier(apply_multiplier(f, m2), m1);
  const SpectralField one = apply_multiplier(f, [&](const Vec2& xi) { return m1(xi) * m2(xi); });
  const auto a = two.coefficients();
  const auto b = one.coefficients();
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(std::abs(a[k] - b[k]), 0.0, 1e-15 * (1.0 + std::abs(b[k])));
}

TEST(ApplyMultiplier, WarnsOnNonHermitianSymbol) {
  const Grid g(1, 10.0, 64);
  std::vector<std::string> codes;
  const WarningSink prev = set_warning_sink([&](const std::string& code, const std::string&) { codes.push_back(code); });
  apply_multiplier(unit_gaussian(g), [](const Vec2& xi) { return Complex(0.0, xi[0] > 0 ? 1.0 : 0.0); });
  set_warning_sink(prev);
  ASSERT_FALSE(codes.empty());
  EXPECT_EQ(codes.front(), "NonHermitianSymbol");
}

TEST(LpNorm, SpecExamples) {
  const Grid g(1, 20.0, 512);
  const SpectralField f = SpectralField::sample(g, [](const Vec2& x) { return std::exp(-x[0] * x[0]); });
  EXPECT_NEAR(lp_norm(f, 2.0), std::pow(kPi / 2.0, 0.25), 1e-8);
  for (double p : {1.0, 2.0, 3.5, std::numeric_limits<double>::infinity()})
    EXPECT_EQ(lp_norm(SpectralField::zeros(g), p), 0.0);
  EXPECT_NEAR(lp_norm(f, std::numeric_limits<double>::infinity()), 1.0, 1e-15);
  EXPECT_THROW(lp_norm(f, 0.5), InvalidExponent);
}

TEST(LpNorm, StableUnderRefinement) {
  const auto bump = [](const Vec2& x) { return std::exp(-x[0] * x[0]) * (1.0 + 0.3 * std::sin(x[0])); };
  for (double p : {1.0, 2.0, 4.0}) {
    const double coarse = lp_norm(SpectralField::sample(Grid(1, 20.0, 512), bump), p);
    const double fine = lp_norm(SpectralField::sample(Grid(1, 20.0, 1024), bump), p);
    EXPECT_LT(std::abs(fine - coarse), 1e-8 * coarse) << "p = " << p;
  }
}

TEST(Derivative, MatchesAnalyticGradient) {
  const Grid g(2, 10.0, 64);
  const SpectralField f = SpectralField::sample(g, [](const Vec2& x) { return std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1]); });
  const SpectralField dy = derivative(f, 1);
  double err = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Vec2 x = g.point(i);
    err = std::max(err, std::abs(dy.value(i) + x[1] * std::exp(-x[0] * x[0] - 0.5 * x[1] * x[1])));
  }
  EXPECT_LT(err, 1e-10);
}

TEST(FieldCsv, RoundTripIsBitIdentical) {
  for (const Grid& g : {Grid(1, 7.0, 32), Grid(2, 3.0, 8)}) {
    const SpectralField f = random_field(g, 17);
    const std::filesystem::path p = std::filesystem::temp_directory_path() / "levylab_field_roundtrip.csv";
    write_field_csv(f, p);
    const SpectralField back = read_field_csv(p);
    std::filesystem::remove(p);
    ASSERT_TRUE(back.grid() == g);
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(back.value(i), f.value(i));
  }
  EXPECT_THROW(parse_field_csv("x,value\n0,1\n1\n"), Error);
}

TEST(FormatDouble, SeventeenSignificantDigits) {
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
  EXPECT_EQ(format_double(1.0), "1");
  EXPECT_EQ(std::stod(format_double(kPi)), kPi);
}

TEST(Quadrature, SpecExamples) {
  EXPECT_NEAR(integrate_scaled([](double) { return 1.0; }, {0.0, 1.0, true}, 1e-12).value, 1.0, 1e-12);
  EXPECT_NEAR(integrate_scaled([](double t) { return 1.0 / (t * t); }, {1.0, std::numeric_limits<double>::infinity(), false}, 1e-10).value, 1.0, 1e-10);
  const double v =
      integrate_scaled([](double s) { return std::exp(-2.0 * (s - 1.0)) / s; }, {1.0, std::numeric_limits<double>::infinity(), false}, 1e-10).value;
  EXPECT_NEAR(v, 0.36132861688626457, 1e-9);
}

TEST(Quadrature, SingularEndpointAndFailure) {
  // \int_0^1 s^{-1/2} ds = 2.
  EXPECT_NEAR(integrate_scaled([](double s) { return 1.0 / std::sqrt(s); }, {0.0, 1.0, true}, 1e-10).value, 2.0, 1e-9);
  EXPECT_THROW(integrate_scaled([](double s) { return 1.0 / s; }, {1.0, std::numeric_limits<double>::infinity(), false}, 1e-10), QuadratureFailure);
}

TEST(Quadrature, WynnAcceleratesAlternatingSeries) {
  std::vector<double> partial;
  double s = 0.0;
  for (int k = 0; k < 20; ++k) {
    s += (k % 2 ? -1.0 : 1.0) / (k + 1.0);
    partial.push_back(s);
  }
  EXPECT_NEAR(wynn_epsilon(partial).first, std::log(2.0), 1e-9);
}

}  // namespace
}  // namespace levylab
