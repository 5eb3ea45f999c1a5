#pragma once

// Seeded batteries of test fields shared by the experiments and the tests.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "levylab/spectral.hpp"

namespace levylab {

enum class FieldFamily {
  /// variances {0.25, 1, 4} x centers {-2, 0, 2}, scaled by L / 20
  gaussians,
  /// smoothed indicators of seeded boxes, edges erf((x - c +- a) / e)
  bumps,
  /// seeded sums of two or three Gaussians
  mixtures,
  /// u_inf (1 + 0.3 bump) renormalized; needs the steady density
  perturbed_steady,
  /// exp(a bump) with a in [-0.7, 0.7]; positive, tending to 1 at the edge
  positive,
};

std::string to_string(FieldFamily family);
/// Throws ConfigError for unknown names.
FieldFamily parse_field_family(const std::string& name);

/// Deterministic for a given (grid, seed, family). gaussians, bumps and
/// mixtures are truncated beyond 0.8 of the Nyquist frequency. perturbed_steady throws
/// InvalidArgument without a steady density on the same grid.
std::vector<SpectralField> generate_test_fields(const Grid& grid, std::uint64_t seed, FieldFamily family,
                                                const std::optional<SpectralField>& steady = std::nullopt,
                                                std::size_t count = 8);

/// gaussians + bumps + mixtures: at least 12 nonnegative, boundary-decayed fields.
std::vector<SpectralField> test_battery(const Grid& grid, std::uint64_t seed);

/// Largest |value| within one cell of the box boundary relative to the peak.
double boundary_level(const SpectralField& f);

}  // namespace levylab
