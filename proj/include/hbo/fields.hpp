#pragma once

// Initial data and deterministic random test fields.

#include <cstdint>

#include "hbo/grid.hpp"

namespace hbo {

// A exp(-|x - center|^2 / (2 w^2)).
RealField gaussian(const Grid& g, const std::array<double, 3>& center, double width,
                   double amplitude);

// d/dx1 of the Gaussian above (analytic, zero-mean).
RealField dx1_gaussian(const Grid& g, const std::array<double, 3>& center, double width,
                       double amplitude);

// Smooth radial bump supported in |x - center| < radius (exact compact support).
RealField compact_bump(const Grid& g, const std::array<double, 3>& center, double radius,
                       double amplitude);

// Real field with random Fourier content on modes 0 < max_a |k_a| <= kmax
// (Hermitian-symmetric by construction, so exactly real). Deterministic in seed.
// zero_mean leaves the zero mode empty; otherwise it gets a random value.
RealField random_band_limited(const Grid& g, int kmax, std::uint64_t seed, bool zero_mean = true);

// Uniform double in [lo, hi) from a counter-based generator; used so frozen
// expectations never depend on library distribution internals.
double uniform_double(std::uint64_t& state, double lo, double hi);
std::uint64_t mix_seed(std::uint64_t seed);

}  // namespace hbo
