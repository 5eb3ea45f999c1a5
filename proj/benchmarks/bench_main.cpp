#include <benchmark/benchmark.h>

#include <cmath>

#include "levylab/entropy.hpp"
#include "levylab/fokker_planck.hpp"
#include "levylab/heat.hpp"

namespace {

using namespace levylab;

SpectralField gaussian(const Grid& g) {
  return SpectralField::sample(g, [](const Vec2& x) { return std::exp(-0.5 * x[0] * x[0]); });
}

void BM_ForwardTransform(benchmark::State& state) {
  const Grid g(1, 20.0, static_cast<std::size_t>(state.range(0)));
  const SpectralField f = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(forward_transform(f));
}
BENCHMARK(BM_ForwardTransform)->RangeMultiplier(4)->Range(256, 16384);

void BM_HeatEvolve(benchmark::State& state) {
  const Grid g(1, 20.0, static_cast<std::size_t>(state.range(0)));
  const SpectralField f = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(heat_evolve(f, 1.5, 1.0));
}
BENCHMARK(BM_HeatEvolve)->RangeMultiplier(4)->Range(256, 16384);

void BM_JumpSymbol(benchmark::State& state) {
  const LevyDensity nu = densities::exp_over_abs();
  double xi = 0.1;
  for (auto _ : state) {
    benchmark::DoNotOptimize(jump_symbol(nu, Vec2::of(xi)));
    xi = xi > 50.0 ? 0.1 : xi * 1.1;
  }
}
BENCHMARK(BM_JumpSymbol);

void BM_FpEvolveCauchy(benchmark::State& state) {
  const Grid g(1, 20.0, static_cast<std::size_t>(state.range(0)));
  const SteadyState st = build_steady_state(LevyTriplet::stable(1, 1.0), g);
  const SpectralField u0 = gaussian(g);
  for (auto _ : state) benchmark::DoNotOptimize(fp_evolve(u0, st, 1.0));
}
BENCHMARK(BM_FpEvolveCauchy)->Arg(256)->Arg(512)->Unit(benchmark::kMillisecond);

void BM_JumpDissipation(benchmark::State& state) {
  const Grid g(1, 20.0, 512);
  const SteadyState st = build_steady_state(LevyTriplet::stable(1, 1.0), g);
  const WeightedMeasure mu = WeightedMeasure::from_density(st.density);
  const SpectralField v = SpectralField::sample(g, [](const Vec2& x) { return 1.0 + 0.5 * std::exp(-x[0] * x[0]); });
  const PhiFunction phi = PhiFunction::xlogx();
  for (auto _ : state) benchmark::DoNotOptimize(jump_dissipation(v, mu, st.triplet.nu(), phi, 1e-10));
}
BENCHMARK(BM_JumpDissipation)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
