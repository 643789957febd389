#pragma once

#include <cstdint>

#include "alpha_fluids/blobs.hpp"
#include "alpha_fluids/spectral.hpp"

namespace alfl {

/// Velocity of the stream function amp * cos(k . x).
VectorField single_mode(const TorusGrid2D& grid, Wavevector k, double amp);

/// Velocity of amp1 cos(k1 . x) + amp2 cos(k2 . x).
VectorField two_mode(const TorusGrid2D& grid, Wavevector k1, Wavevector k2, double amp1, double amp2);

/// Random-phase stream function with shell energy spectrum ~ |k|^slope on
/// 0 < |k| <= kmax (k in angular wavenumber units), rescaled to the given rms
/// speed.  Phases come from SplitMix64(seed), one draw per half-plane mode,
/// jx ascending then jy ascending.
VectorField random_seeded(const TorusGrid2D& grid, std::uint64_t seed, double slope, int kmax, double rms);

/// n equal blobs of circulation gamma on a circle of the given radius about
/// the origin, the first at angle 0.
BlobEnsemble blob_ring(int n, double radius, double gamma, double alpha);

}  // namespace alfl
