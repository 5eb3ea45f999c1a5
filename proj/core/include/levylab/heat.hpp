#pragma once

// Fractional heat semigroup P_t = exp(-t g_alpha), g_alpha with symbol |xi|^alpha,
// and the functional inequalities it satisfies: the Euclidean logarithmic
// Sobolev inequality, L^p -> L^q smoothing bounds and Kato's inequality.

#include <functional>
#include <limits>
#include <string>

#include "levylab/levy.hpp"
#include "levylab/spectral.hpp"

namespace levylab {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// P_t f with multiplier exp(-t |xi|^alpha). Throws InvalidAlpha unless 0 < alpha <= 2.
SpectralField heat_evolve(const SpectralField& f, double alpha, double t);

/// exp(t psi) applied to f for a general exponent.
SpectralField semigroup_evolve(const SpectralField& f, const Symbol& psi, double t);

/// g_alpha f, the operator with symbol |xi|^alpha.
SpectralField fractional_laplacian(const SpectralField& f, double alpha);

/// \int (g_{alpha/2} f)^2 dx = sum |xi|^alpha |f^|^2 dxi^d / (2 pi)^d.
double half_operator_norm(const SpectralField& f, double alpha);

/// C(n, alpha) = 2 Gamma(n/alpha) / (alpha Gamma(n/2)).
double lsi_gamma_ratio(int n, double alpha);

/// A(n, alpha) = alpha C^{alpha/n} / (n pi^{alpha/2} e^{alpha-1}).
double lsi_constant(int n, double alpha);

struct LsiGap {
  double lhs = 0.0;  // \int f^2 log f^2
  double rhs = 0.0;  // (n/alpha) log(A ||g_{alpha/2} f||^2)
  double gap() const { return rhs - lhs; }
  bool holds(double tol = 0.0) const { return lhs <= rhs + tol; }
};

/// Both sides of the Euclidean LSI. f is rescaled to unit L^2 norm first
/// when it is off by more than 1e-8. Throws DegenerateField when the
/// Dirichlet term vanishes.
LsiGap lsi_gap(const SpectralField& f, double alpha);

struct UltracontractivityBound {
  int n = 1;
  double alpha = 2.0;
  double p = 2.0;
  double q = 2.0;
  double t = 1.0;
  double A = 0.0;
  /// ||P_t f||_q <= bound * ||f||_p
  double bound = 1.0;
};

/// Smoothing constant for q >= p >= 2; q = kInfinity uses the L^2 -> L^inf
/// form (A n / (2 alpha t))^{n/(2 alpha)} and requires p = 2.
UltracontractivityBound ultracontractivity_constant(int n, double alpha, double p, double q, double t);

struct HypercontractivityReport {
  UltracontractivityBound bound;
  double norm_q_evolved = 0.0;
  double norm_p_initial = 0.0;
  double ratio = 0.0;
  bool violation = false;
};

/// ratio = ||P_t f||_q / (||f||_p * bound); violation when ratio > 1 + 1e-6.
HypercontractivityReport verify_hypercontractivity(const SpectralField& f, double alpha, double p, double q,
                                                   double t);

/// Scalar convex function with its derivative.
struct ConvexMap {
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::string name;
};

namespace convex {
ConvexMap linear();
ConvexMap square();
/// |r|^p for p >= 1.
ConvexMap abs_power(double p);
}  // namespace convex

struct KatoReport {
  double max_violation = 0.0;  // max_x (lhs - rhs)
  double scale = 1.0;          // 1 + max |rhs|
  bool passed = true;
};

/// Pointwise g_alpha[phi(u)] <= phi'(u) g_alpha[u]; passes when the largest
/// excess is at most 1e-8 * (1 + max |rhs|).
KatoReport kato_check(const SpectralField& u, const ConvexMap& phi, double alpha);

}  // namespace levylab
