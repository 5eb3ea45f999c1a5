#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "levylab/fokker_planck.hpp"

namespace levylab {
namespace {

constexpr double kPi = std::numbers::pi;

SpectralField gaussian(const Grid& g, double var, double center = 0.0) {
  return SpectralField::sample(g, [=](const Vec2& x) {
    return std::exp(-0.5 * (x[0] - center) * (x[0] - center) / var) / std::sqrt(2.0 * kPi * var);
  });
}

double l1(const SpectralField& a, const SpectralField& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) s += std::abs(a.value(i) - b.value(i));
  return s * a.grid().cell_volume();
}

double max_diff(const SpectralField& a, const SpectralField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.grid().size(); ++i) m = std::max(m, std::abs(a.value(i) - b.value(i)));
  return m;
}

LevyTriplet skewed() {
  return LevyTriplet(Matrix2::identity(1, 0.5), Vec2::of(0.3), densities::one_sided_exp());
}

TEST(FpEvolve, OrnsteinUhlenbeckVariance) {
  const Grid g = Grid::default_1d();
  const SpectralField u = fp_evolve(gaussian(g, 4.0), LevyTriplet::gaussian(1), std::log(2.0));
  EXPECT_LT(max_diff(u, gaussian(g, 1.75)), 1e-8);
}

TEST(FpEvolve, ZeroTimeAndNegativeTime) {
  const Grid g = Grid::default_1d();
  const SpectralField u0 = gaussian(g, 1.0, 0.5);
  EXPECT_LT(max_diff(fp_evolve(u0, LevyTriplet::stable(1, 1.0), 0.0), u0), 1e-15);
  EXPECT_THROW(fp_evolve(u0, LevyTriplet::stable(1, 1.0), -1.0), InvalidArgument);
}

TEST(FpEvolve, CauchyRelaxesToSteadyState) {
  // u(t)^ = u0^(e^{-t} xi) e^{-|xi| (1 - e^{-t})} = e^{-|xi|} (1 + e^{-t} (i xi + |xi|) + O(e^{-2t}))
  // for u0 = N(1, 1), so e^t (u(t) - P_1) -> -d_x P_1 - d_s P_s |_{s=1} with P_s the
  // periodized Poisson kernel.
  const Grid g = Grid::default_1d();
  const SteadyState st = build_steady_state(LevyTriplet::stable(1, 1.0), g);
  const SpectralField u0 = gaussian(g, 1.0, 1.0);
  const double L = g.half_width();
  const auto poisson = [L](double x, double s) {
    return std::sinh(kPi * s / L) / (2.0 * L * (std::cosh(kPi * s / L) - std::cos(kPi * x / L)));
  };
  const double h = 1e-5;
  double limit = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.coordinate(i);
    const double dx = (poisson(x + h, 1.0) - poisson(x - h, 1.0)) / (2.0 * h);
    const double ds = (poisson(x, 1.0 + h) - poisson(x, 1.0 - h)) / (2.0 * h);
    limit += std::abs(dx + ds);
  }
  limit *= g.dx();
  const double at12 = l1(fp_evolve(u0, st, 12.0), st.density);
  EXPECT_NEAR(at12 * std::exp(12.0), limit, 1e-3 * limit);
  EXPECT_LT(l1(fp_evolve(u0, st, 8.0), st.density), 1.01 * limit * std::exp(-8.0));
  EXPECT_LT(l1(fp_evolve(u0, st, 16.0), st.density), 1e-6);
}

TEST(FpEvolve, StationarityAndMass) {
  const Grid g = Grid::default_1d();
  for (const auto& tr : {LevyTriplet::gaussian(1), LevyTriplet::stable(1, 1.0), LevyTriplet::stable(1, 1.5), skewed()}) {
    const SteadyState st = build_steady_state(tr, g);
    const SpectralField u0 = gaussian(g, 0.8, -0.5);
    for (double t : {0.5, 1.0, 5.0}) {
      EXPECT_LT(l1(fp_evolve(st.density, st, t), st.density), 1e-8);
      EXPECT_LT(std::abs(fp_evolve(u0, st, t).mass() - u0.mass()), 1e-12);
    }
  }
}

TEST(FpEvolve, FlowProperty) {
  // Light-tailed dynamics; heavy-tailed intermediate states are limited by
  // the periodic box rather than by the flow (see the README).
  const Grid g = Grid::default_1d();
  for (const auto& tr : {LevyTriplet::gaussian(1), skewed()}) {
    const SteadyState st = build_steady_state(tr, g);
    const SpectralField u0 = gaussian(g, 0.5, 1.0);
    const SpectralField two = fp_evolve(fp_evolve(u0, st, 0.4), st, 0.6);
    EXPECT_LT(max_diff(two, fp_evolve(u0, st, 1.0)), 1e-8);
  }
}

TEST(FpEvolve, FlowExponentMatchesClosedForm) {
  // Stable: \int_0^t -|e^{-s} xi|^alpha ds = -|xi|^alpha (1 - e^{-alpha t}) / alpha.
  for (double alpha : {0.5, 1.0, 1.5}) {
    const LevyTriplet tr = LevyTriplet::stable(1, alpha);
    for (double xi : {0.3, 2.0, 7.0}) {
      const double expect = -std::pow(xi, alpha) * (1.0 - std::exp(-alpha * 2.5)) / alpha;
      EXPECT_NEAR(flow_exponent(tr, Vec2::of(xi), 2.5).real(), expect, 1e-12 * std::max(1.0, std::abs(expect)));
    }
  }
}

TEST(BuildSteadyState, ClosedForms) {
  const Grid g = Grid::default_1d();
  const SteadyState gauss = build_steady_state(LevyTriplet::gaussian(1), g);
  EXPECT_LT(max_diff(gauss.density, gaussian(g, 1.0)), 1e-12);
  EXPECT_NEAR(gauss.exponent(Vec2::of(1.7)).real(), -0.5 * 1.7 * 1.7, 1e-12);
  const SteadyState cauchy = build_steady_state(LevyTriplet::stable(1, 1.0), g);
  for (double x : {0.0, 0.5, 3.0, 10.0}) EXPECT_NEAR(cauchy.density_at(Vec2::of(x)), 1.0 / (kPi * (1.0 + x * x)), 1e-6);
  for (double alpha : {0.5, 1.5}) {
    const LevyTriplet tr = LevyTriplet::stable(1, alpha);
    for (double xi : {0.1, 1.0, 10.0})
      EXPECT_NEAR(steady_exponent(tr, Vec2::of(xi)).real(), -std::pow(xi, alpha) / alpha, 1e-9 * std::max(1.0, std::pow(xi, alpha)));
  }
}

TEST(BuildSteadyState, DensityInvariants) {
  const Grid g = Grid::default_1d();
  for (const auto& tr : {LevyTriplet::gaussian(1), LevyTriplet::stable(1, 0.8), skewed()}) {
    const SteadyState st = build_steady_state(tr, g);
    EXPECT_GE(st.density.min_value(), -1e-8 * st.density.max_value());
    EXPECT_NEAR(st.density.mass(), 1.0, 1e-8);
    EXPECT_EQ(std::abs(st.exponent(Vec2::of(0.0))), 0.0);
    EXPECT_LT(st.normalization_defect, 1e-6);
  }
}

TEST(BuildSteadyState, TwoDimensionalStable) {
  const SteadyState st = build_steady_state(LevyTriplet::stable(2, 1.0), Grid::default_2d());
  EXPECT_NEAR(st.density.mass(), 1.0, 1e-8);
  // Bivariate Cauchy with exponent -|xi|: density 1 / (2 pi (1 + |x|^2)^{3/2}).
  EXPECT_NEAR(st.density_at(Vec2::of(0.0, 0.0)), 1.0 / (2.0 * kPi), 1e-6);
  EXPECT_NEAR(st.density_at(Vec2::of(1.0, 1.0)), 1.0 / (2.0 * kPi * std::pow(3.0, 1.5)), 1e-6);
}

TEST(BuildSteadyState, RejectsLogTailDensities) {
  EXPECT_THROW(build_steady_state(LevyTriplet::pure_jump(densities::log_tail(1)), Grid::default_1d()), Con1Violation);
}

TEST(SteadyStateTriplet, ReproducesTheSteadyExponent) {
  // exp(Psi) against the exponent of the reported steady-law triplet.
  for (const auto& tr : {skewed(), LevyTriplet::stable(1, 1.5)}) {
    const LevyTriplet mu = steady_state_triplet(tr);
    for (double xi : {-3.0, -0.4, 0.7, 2.5}) {
      const Complex a = std::exp(steady_exponent(tr, Vec2::of(xi)));
      const Complex b = std::exp(characteristic_exponent(mu, Vec2::of(xi)));
      EXPECT_LT(std::abs(a - b), 1e-7) << "xi " << xi;
    }
  }
}

TEST(LimitLevyDensity, SpecExamples) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const LevyDensity nu = LevyDensity::stable(1, alpha);
    for (double z : {0.01, 1.0, 30.0}) EXPECT_NEAR(limit_levy_density(nu, Vec2::of(z)) * alpha / nu.at(z), 1.0, 1e-8);
  }
  EXPECT_EQ(limit_levy_density(densities::indicator(1, 1.0), Vec2::of(2.0)), 0.0);
  // E1(2) / 2.
  EXPECT_NEAR(limit_levy_density(densities::exp_over_abs(), Vec2::of(2.0)), 0.04890051070806112 / 2.0, 1e-10);
}

TEST(DriftCorrection, SpecExamples) {
  EXPECT_EQ(drift_correction(densities::exp_over_abs()).norm(), 0.0);
  EXPECT_EQ(drift_correction(LevyDensity::none(1)).norm(), 0.0);
  const double b = drift_correction(densities::one_sided_exp())[0];
  EXPECT_GT(b, 0.0);
}

TEST(CheckLogTail, SpecExamples) {
  const LevyDensity cauchy = LevyDensity::stable(1, 1.0);
  const LogTailReport r = check_log_tail(cauchy);
  ASSERT_FALSE(r.diverges);
  EXPECT_NEAR(r.value, 2.0 * cauchy.stable_constant(), 1e-8);
  EXPECT_TRUE(check_log_tail(densities::log_tail(1)).diverges);
  EXPECT_EQ(check_log_tail(densities::indicator(1, 1.0)).value, 0.0);
}

TEST(CheckDomination, SpecExamples) {
  for (double alpha : {0.5, 1.0, 1.5}) {
    const DominationReport d = check_domination(LevyDensity::stable(1, alpha));
    EXPECT_FALSE(d.unbounded);
    EXPECT_NEAR(d.C, 1.0 / alpha, 1e-6);
    for (const auto& row : d.rows) EXPECT_NEAR(row.ratio, 1.0 / alpha, 1e-6);
  }
  const DominationReport ea = check_domination(densities::exp_over_abs());
  EXPECT_TRUE(ea.unbounded);
  const DominationReport none = check_domination(LevyDensity::none(1));
  EXPECT_EQ(none.C, 0.0);
  EXPECT_TRUE(none.rows.empty());
}

TEST(CheckDomination, ExpOverAbsRatioOracle) {
  // Ratio = \int_1^inf e^{-z(s-1)}/s ds = e^z E1(z).
  const std::vector<Vec2> pts = {Vec2::of(2.0)};
  const DominationReport d = check_domination(densities::exp_over_abs(), pts);
  ASSERT_EQ(d.rows.size(), 1u);
  EXPECT_NEAR(d.rows[0].ratio, std::exp(2.0) * 0.04890051070806112, 1e-9);
}

TEST(CheckRadialDecay, StableEqualityAndCompactSupport) {
  const LevyDensity nu = LevyDensity::stable(1, 1.5);
  const auto n_inf = [&](const Vec2& z) { return limit_levy_density(nu, z); };
  const std::vector<Vec2> pts = {Vec2::of(0.5), Vec2::of(1.0), Vec2::of(-4.0)};
  const RadialDecayReport r = check_radial_decay(nu, n_inf, pts, 1.0 / 1.5);
  EXPECT_TRUE(r.monotone_ok);
  EXPECT_TRUE(r.divergence_ok);
  EXPECT_LT(r.max_monotone_excess, 1e-9);
  const LevyDensity ind = densities::indicator(1, 1.0);
  const auto ind_inf = [&](const Vec2& z) { return limit_levy_density(ind, z); };
  const std::vector<Vec2> far = {Vec2::of(2.0), Vec2::of(-3.0)};
  // Beyond the support the outer half compares 0 with 0. The inner half
  // fails: t^2 N_inf(t x) = t/|x| - t^2 peaks at t = 1/(2|x|).
  const RadialDecayReport ri = check_radial_decay(ind, ind_inf, far, 1.0);
  EXPECT_TRUE(ri.outer_ok);
  EXPECT_EQ(ri.max_outer_excess, 0.0);
  EXPECT_FALSE(ri.inner_ok);
}

}  // namespace
}  // namespace levylab
