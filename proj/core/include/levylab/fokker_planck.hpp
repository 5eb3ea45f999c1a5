#pragma once

// Levy-Fokker-Planck flow with linear confinement,
//   du/dt = I[u] + div(x u),
// where I has exponent psi. In Fourier variables du^/dt = psi u^ - xi.grad u^,
// solved along characteristics:
//   u^(t, xi) = u0^(e^{-t} xi) exp(\int_0^t psi(e^{-s} xi) ds).
// The invariant law has u_inf^ = exp(Psi), Psi(xi) = \int_0^1 psi(s xi) ds / s.

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "levylab/levy.hpp"
#include "levylab/spectral.hpp"

namespace levylab {

struct SteadyState {
  LevyTriplet triplet;
  /// Psi(xi) by quadrature of the ray average.
  std::function<Complex(const Vec2&)> exponent;
  /// Periodized steady density on the grid (inverse transform of exp(Psi)).
  SpectralField density;
  /// |mass - 1| of the grid density before renormalization.
  double normalization_defect = 0.0;
  /// N_inf(z) = \int_1^inf N(t z) t^{d-1} dt.
  std::function<double(const Vec2&)> limit_density;
  Vec2 drift_correction;

  /// Steady density on R^d at x by inverse Fourier quadrature. d = 2
  /// requires a radial exponent.
  double density_at(const Vec2& x, double tol = 1e-12) const;
};

/// Psi(xi) = -xi.sigma xi / 2 + i b.xi + \int_0^1 a(s xi) ds / s.
Complex steady_exponent(const LevyTriplet& triplet, const Vec2& xi, double tol = kDefaultTol);

/// Throws Con1Violation when \int_{|z|>1} ln|z| N diverges and NegativeDensity
/// when the grid density dips below -1e-6 max.
SteadyState build_steady_state(const LevyTriplet& triplet, const Grid& grid, double tol = kDefaultTol);

/// Triplet of the steady law: (sigma / 2, b + b_A, N_inf).
LevyTriplet steady_state_triplet(const LevyTriplet& triplet, double tol = kDefaultTol);

/// N_inf as a density object (stable densities map to the stable family / alpha).
LevyDensity limit_density_of(const LevyDensity& nu, double tol = kDefaultTol);

/// Evolves u0 to time t. Throws InvalidArgument for t < 0.
SpectralField fp_evolve(const SpectralField& u0, const LevyTriplet& triplet, double t, double tol = kDefaultTol);
/// Same, reusing a steady state built on the field's grid.
SpectralField fp_evolve(const SpectralField& u0, const SteadyState& steady, double t, double tol = kDefaultTol);

/// \int_0^t psi(e^{-s} xi) ds by 32-node Gauss-Legendre panels of length <= 1.
Complex flow_exponent(const LevyTriplet& triplet, const Vec2& xi, double t, double tol = kDefaultTol);

double limit_levy_density(const LevyDensity& nu, const Vec2& z, double tol = kDefaultTol);

/// b_A = \int\int_0^1 z (1 - tau^2)|z|^2 / ((1 + tau^2|z|^2)(1 + |z|^2)) dtau N(z) dz.
Vec2 drift_correction(const LevyDensity& nu, double tol = kDefaultTol);

struct LogTailReport {
  double value = 0.0;
  double error = 0.0;
  bool diverges = false;
};

/// \int_{|z|>1} ln|z| N(z) dz.
LogTailReport check_log_tail(const LevyDensity& nu, double tol = kDefaultTol);

struct DominationRow {
  Vec2 z;
  double limit = 0.0;   // N_inf(z)
  double density = 0.0; // N(z)
  double ratio = 0.0;
};

struct DominationReport {
  double C = 0.0;
  bool unbounded = false;
  std::vector<DominationRow> rows;
};

/// |z| = 10^k on a log grid spanning [lo, hi] along the coordinate rays (both signs).
std::vector<Vec2> log_sample_points(int dim, double lo = 1e-3, double hi = 1e3, int per_decade = 4);

/// max N_inf / N over the samples; unbounded when a ratio exceeds 1e6 or
/// the ratios grow monotonically along a ray across three decades of |z|.
DominationReport check_domination(const LevyDensity& nu, std::span<const Vec2> samples, double tol = kDefaultTol);
DominationReport check_domination(const LevyDensity& nu, double tol = kDefaultTol);

struct RadialDecayReport {
  /// Largest violation of the monotonicity of N_inf(t x) t^{d + 1/C},
  /// relative to its value at t = 1.
  double max_monotone_excess = 0.0;
  /// The same excess restricted to t <= 1 and to t >= 1.
  double max_inner_excess = 0.0;
  double max_outer_excess = 0.0;
  /// Largest |-d N_inf(x) - x.grad N_inf(x) - N(x)| / max(N(x), tiny).
  double max_divergence_residual = 0.0;
  bool monotone_ok = true;
  bool inner_ok = true;
  bool outer_ok = true;
  bool divergence_ok = true;
};

/// Checks the scaling bound N_inf(t x) <= N_inf(x) t^{-d-1/C} (t >= 1) and
/// the identity N = -div(x N_inf) at the given points; central differences
/// with step 1e-4 |x|.
RadialDecayReport check_radial_decay(const LevyDensity& nu, const std::function<double(const Vec2&)>& n_inf,
                                     std::span<const Vec2> points, double C, double tol = 1e-5);

}  // namespace levylab
