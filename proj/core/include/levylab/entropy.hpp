#pragma once

// Phi-entropies relative to a reference density, Bregman distances and the
// entropy dissipation of the Fokker-Planck flow
//   d/dt Ent(v) = -\int Phi''(v) grad v.sigma grad v u_inf
//                 - \int\int D_Phi(v(x), v(x+z)) N(z) dz u_inf(x) dx.

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "levylab/fokker_planck.hpp"
#include "levylab/levy.hpp"
#include "levylab/spectral.hpp"

namespace levylab {

struct PhiFunction {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> d2phi;
  bool admissible = false;
  std::string name;

  /// x log x (0 log 0 = 0); admissible.
  static PhiFunction xlogx();
  /// x^2 / 2; admissible.
  static PhiFunction quadratic();
  /// User triple; admissibility decided by check_admissible.
  static PhiFunction custom(std::function<double(double)> phi, std::function<double(double)> dphi,
                            std::function<double(double)> d2phi, std::string name);
};

/// Phi'' >= 0 on sampled r > 0 and (a, b) -> D_Phi(a + b, b) has a PSD
/// Hessian (within -1e-10 relative) on sampled a + b > 0, b > 0.
bool check_admissible(const PhiFunction& phi);

/// D_Phi(a, b) = Phi(a) - Phi(b) - Phi'(b)(a - b). Throws DomainError for
/// negative arguments, and for b = 0 under x log x.
double bregman(const PhiFunction& phi, double a, double b);

/// Probability density on a grid: weights >= 0, sum * dx^d = 1 within 1e-10.
class WeightedMeasure {
 public:
  WeightedMeasure(Grid grid, std::vector<double> weights);
  /// Weights from a grid density; cells below 1e-12 of the peak (transform
  /// noise) get weight zero before renormalization.
  static WeightedMeasure from_density(const SpectralField& density);
  static WeightedMeasure uniform(const Grid& grid);

  const Grid& grid() const { return grid_; }
  std::span<const double> weights() const { return weights_; }

 private:
  Grid grid_;
  std::vector<double> weights_;
};

struct EntropyValue {
  double value = 0.0;
  /// Part of \int Phi(v) dmu coming from cells where v was floored.
  double floored = 0.0;
};

/// \int Phi(v) dmu - Phi(\int v dmu); v floored at 1e-300 for x log x.
/// Cells of zero weight are skipped.
EntropyValue phi_entropy_split(std::span<const double> v, const WeightedMeasure& mu, const PhiFunction& phi);
double phi_entropy(std::span<const double> v, const WeightedMeasure& mu, const PhiFunction& phi);
double phi_entropy(const SpectralField& v, const WeightedMeasure& mu, const PhiFunction& phi);

enum class JumpRoute {
  /// spectral for even densities, lattice for bounded odd ones
  automatic,
  /// I_a multipliers: J = \int [I(v Phi') - v I(Phi') - I(Phi)] dmu
  spectral,
  /// shifted-index sum over lattice jumps 0 < |z| < 2L
  lattice,
};

struct Dissipation {
  double gaussian_part = 0.0;
  double jump_part = 0.0;
  /// Lattice route: upper bound for jumps beyond 2L.
  double jump_tail_bound = 0.0;
  double total() const { return gaussian_part + jump_part; }
};

Dissipation dissipation(const SpectralField& v, const WeightedMeasure& mu, const LevyTriplet& triplet,
                        const PhiFunction& phi, double tol = kDefaultTol, JumpRoute route = JumpRoute::automatic);

/// Jump part alone for a given density.
double jump_dissipation(const SpectralField& v, const WeightedMeasure& mu, const LevyDensity& nu,
                        const PhiFunction& phi, double tol = kDefaultTol, JumpRoute route = JumpRoute::automatic);

struct ModifiedLsiReport {
  double entropy = 0.0;
  double dissipation = 0.0;
  /// entropy / dissipation; 0 when both vanish.
  double ratio = 0.0;
};

/// Ent_mu(v) <= \int Phi'' grad v.sigma grad v dmu + \int\int D_Phi(v(x), v(x+z)) nu_mu(dz) mu(dx),
/// where triplet_of_mu is the triplet of mu (the drift plays no role).
ModifiedLsiReport modified_lsi_check(const SpectralField& v, const SteadyState& mu_state,
                                     const LevyTriplet& triplet_of_mu, const PhiFunction& phi,
                                     double tol = kDefaultTol);

/// v = u / u_inf, floored at 1e-14.
SpectralField relative_density(const SpectralField& u, const SpectralField& u_inf);

struct EntropyProductionReport {
  double entropy = 0.0;
  double derivative = 0.0;  // centered difference of Ent
  Dissipation dissipation;
  double residual = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

/// |dEnt/dt + dissipation| / (1 + dissipation) at time t (t >= dt) with a
/// centered difference of step dt; passes below max(1e-4, 10 dt^2).
EntropyProductionReport entropy_production_check(const SpectralField& u0, const SteadyState& steady,
                                                 const PhiFunction& phi, double t, double dt,
                                                 double tol = kDefaultTol);

struct DecayReport {
  std::vector<double> times;
  std::vector<double> entropies;
  double initial_entropy = 0.0;
  double fitted_rate = 0.0;
  double bound_rate = 0.0;
  std::vector<double> violations;
  bool monotone = true;
  /// Largest share of an entropy coming from cells where v hit the 1e-14 floor.
  double max_floored_fraction = 0.0;
};

/// Entropy of u(t)/u_inf at the listed times against e^{-t/C} Ent(0) with
/// relative tolerance rel_tol.
DecayReport decay_track(const SpectralField& u0, const SteadyState& steady, const PhiFunction& phi,
                        std::span<const double> times, double C, double rel_tol = 1e-6);

}  // namespace levylab
