#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "levylab/levy.hpp"

namespace levylab {
namespace {

constexpr double kE = std::numbers::e;

TEST(ValidateLevyDensity, StableAlphaOneHasClosedFormIntegrals) {
  const LevyDensity nu = LevyDensity::stable(1, 1.0);
  const DensityValidation v = validate_levy_density(nu);
  ASSERT_TRUE(v.finite());
  const double c = nu.stable_constant();
  EXPECT_NEAR(v.small_jump_integral, 2.0 * c, 1e-8);
  EXPECT_NEAR(v.large_jump_integral, 2.0 * c, 1e-8);
}

TEST(ValidateLevyDensity, SteepPowerLawDivergesAtTheOrigin) {
  const DensityValidation v = validate_levy_density(densities::power_law(1, 3.5));
  EXPECT_TRUE(v.small_jump_diverges);
  EXPECT_FALSE(v.finite());
}

TEST(ValidateLevyDensity, ExpOverAbsSmallJumpOracle) {
  const DensityValidation v = validate_levy_density(densities::exp_over_abs());
  ASSERT_TRUE(v.finite());
  EXPECT_NEAR(v.small_jump_integral, 2.0 * (1.0 - 2.0 / kE), 1e-9);
  // \int_1^inf e^{-z}/z dz = E1(1).
  EXPECT_NEAR(v.large_jump_integral, 2.0 * 0.21938393439552027, 1e-9);
}

TEST(ValidateLevyDensity, RejectsNegativeValues) {
  LevyDensity::Options o;
  o.is_even = true;
  const LevyDensity bad = LevyDensity::analytic(1, [](std::span<const double>) { return -1.0; }, "negative", o);
  EXPECT_THROW(validate_levy_density(bad), NonFiniteDensity);
}

TEST(JumpSymbol, IndicatorAtPi) {
  const Complex a = jump_symbol(densities::indicator(1, 1.0), Vec2::of(std::numbers::pi));
  EXPECT_NEAR(a.real(), -2.0, 1e-9);
  EXPECT_EQ(a.imag(), 0.0);
}

TEST(JumpSymbol, VanishesAtZero) {
  for (const auto& nu : {densities::indicator(1, 1.0), densities::exp_over_abs(), densities::one_sided_exp()})
    EXPECT_EQ(std::abs(jump_symbol(nu, Vec2::of(0.0))), 0.0);
}

TEST(JumpSymbol, StableQuadratureMatchesClosedSymbol) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const LevyDensity nu = LevyDensity::stable(1, alpha);
    for (double xi : {0.1, 0.3, 1.0, 2.0, 5.0, 10.0}) {
      const Complex a = jump_symbol(nu, Vec2::of(xi));
      EXPECT_NEAR(a.real(), -std::pow(xi, alpha), 10 * kDefaultTol * std::max(1.0, std::pow(xi, alpha)))
          << "alpha " << alpha << " xi " << xi;
    }
  }
}

TEST(JumpSymbol, OneSidedDensityHasClosedForm) {
  // \int_0^inf (e^{iz xi} - 1 - i z xi/(1+z^2)) e^{-z} dz.
  const double xi = 1.3;
  const Complex a = jump_symbol(densities::one_sided_exp(), Vec2::of(xi));
  const Complex base = 1.0 / Complex(1.0, -xi) - 1.0;
  // \int_0^inf z e^{-z}/(1+z^2) dz, independent closed form via Ci/Si at 1.
  const double ci1 = 0.33740392290096813;
  const double si1 = 0.94608307036718301;
  const double m = -ci1 * std::cos(1.0) - (si1 - std::numbers::pi / 2.0) * std::sin(1.0);
  EXPECT_NEAR(a.real(), base.real(), 1e-9);
  EXPECT_NEAR(a.imag(), base.imag() - xi * m, 1e-9);
}

TEST(CharacteristicExponent, SpecExamples) {
  const Complex lap = characteristic_exponent(LevyTriplet::gaussian(1), Vec2::of(1.0));
  EXPECT_NEAR(lap.real(), -1.0, 1e-15);
  const Complex st = characteristic_exponent(LevyTriplet::stable(1, 1.0), Vec2::of(2.0));
  EXPECT_NEAR(st.real(), -2.0, 1e-15);
  const Complex drift = characteristic_exponent(LevyTriplet::pure_drift(Vec2::of(1.0)), Vec2::of(3.0));
  EXPECT_NEAR(drift.imag(), 3.0, 1e-15);
  EXPECT_EQ(drift.real(), 0.0);
}

LevyTriplet mixed_triplet() {
  return LevyTriplet(Matrix2::identity(1, 0.5), Vec2::of(0.7), densities::exp_over_abs());
}

TEST(CharacteristicExponent, NegativeDefiniteAndZeroAtOrigin) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (const auto& tr : {mixed_triplet(), LevyTriplet::stable(1, 1.5),
                         LevyTriplet::pure_jump(densities::one_sided_exp()),
                         LevyTriplet::pure_jump(densities::indicator(1, 2.0))}) {
    EXPECT_EQ(std::abs(characteristic_exponent(tr, Vec2::of(0.0))), 0.0);
    for (int k = 0; k < 20; ++k) EXPECT_LE(characteristic_exponent(tr, Vec2::of(u(rng))).real(), 1e-10);
  }
}

TEST(CharacteristicExponent, EvenDensityImaginaryPartIsTheDrift) {
  const LevyTriplet tr = mixed_triplet();
  for (double xi : {0.2, 1.0, 4.0}) EXPECT_NEAR(characteristic_exponent(tr, Vec2::of(xi)).imag(), 0.7 * xi, 1e-12);
}

TEST(DualTriplet, NegatesDriftAndConjugatesExponent) {
  const LevyTriplet tr(Matrix2::identity(2), Vec2::of(1.0, 0.0), densities::gaussian(2, 1.0));
  const LevyTriplet d = dual_triplet(tr);
  EXPECT_EQ(d.drift()[0], -1.0);
  EXPECT_EQ(d.drift()[1], 0.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int k = 0; k < 5; ++k) {
    const Vec2 xi = Vec2::of(u(rng), u(rng));
    const Complex a = characteristic_exponent(tr, xi);
    const Complex b = characteristic_exponent(d, xi);
    EXPECT_NEAR(std::abs(b - std::conj(a)), 0.0, 1e-9);
  }
}

TEST(DualTriplet, IsAnInvolution) {
  const LevyTriplet tr = LevyTriplet::pure_jump(densities::one_sided_exp());
  const LevyTriplet dd = dual_triplet(dual_triplet(tr));
  for (double xi : {-2.0, 0.5, 3.0})
    EXPECT_EQ(characteristic_exponent(dd, Vec2::of(xi)), characteristic_exponent(tr, Vec2::of(xi)));
  const LevyTriplet st = dual_triplet(LevyTriplet::stable(1, 1.0));
  EXPECT_EQ(characteristic_exponent(st, Vec2::of(2.0)), Complex(-2.0, 0.0));
}

TEST(StableSymbol, SpecExamples) {
  EXPECT_NEAR(stable_symbol(2.0)(Vec2::of(3.0, 4.0)).real(), -25.0, 1e-12);
  EXPECT_NEAR(stable_symbol(1.0)(Vec2::of(3.0, 4.0)).real(), -5.0, 1e-12);
  EXPECT_EQ(stable_symbol(0.5)(Vec2::of(0.0, 0.0)), Complex(0.0));
  EXPECT_EQ(*stable_symbol(1.5).homogeneity, 1.5);
  EXPECT_THROW(stable_symbol(0.0), InvalidAlpha);
  EXPECT_THROW(stable_symbol(2.5), InvalidAlpha);
}

TEST(SumSymbols, PointwiseSumAndHomogeneity) {
  const std::vector<Symbol> mixed = {stable_symbol(1.0), stable_symbol(2.0)};
  const Symbol s = sum_symbols(mixed);
  EXPECT_NEAR(s(Vec2::of(2.0)).real(), -6.0, 1e-12);
  EXPECT_FALSE(s.homogeneity.has_value());
  const std::vector<Symbol> one = {stable_symbol(1.5)};
  EXPECT_EQ(sum_symbols(one)(Vec2::of(2.0)), stable_symbol(1.5)(Vec2::of(2.0)));
  const std::vector<Symbol> same = {stable_symbol(1.0), stable_symbol(1.0)};
  EXPECT_EQ(*sum_symbols(same).homogeneity, 1.0);
}

TEST(LevyDensity, EvenFlagIsChecked) {
  LevyDensity::Options o;
  o.is_even = true;
  o.bounded = true;
  o.support_radius = 1.0;
  const auto skew = [](std::span<const double> z) { return z[0] > 0 && z[0] < 1 ? 1.0 : 0.0; };
  EXPECT_THROW(LevyDensity::analytic(1, skew, "skew", o), InvalidArgument);
}

TEST(LevyTriplet, RejectsIndefiniteSigma) {
  Matrix2 s = Matrix2::identity(1);
  s.m[0] = -1.0;
  EXPECT_THROW(LevyTriplet(s, Vec2::of(0.0), LevyDensity::none(1)), InvalidArgument);
}

TEST(TripletConfig, ParsesAndRejectsUnknownKeys) {
  const LevyTriplet tr = parse_triplet_config(R"({"dim":1,"sigma":0.5,"b":[0.25],"nu":{"kind":"stable","alpha":1.5}})");
  EXPECT_EQ(tr.sigma()(0, 0), 0.5);
  EXPECT_EQ(tr.drift()[0], 0.25);
  EXPECT_TRUE(tr.nu().is_stable());
  EXPECT_THROW(parse_triplet_config(R"({"nu":{"kind":"stable","alpha":1,"oops":2}})"), ConfigError);
  EXPECT_THROW(parse_triplet_config("{not json"), ConfigError);
}

}  // namespace
}  // namespace levylab
