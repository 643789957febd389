#pragma once

#include <vector>

#include "alpha_fluids/spectral.hpp"

namespace alfl {

/// alpha-smoothed point vortices in the plane.  The stream function kernel is
/// G(r) = (ln r + K0(r/alpha)) / 2pi, the Green's function of
/// Lap (1 - alpha^2 Lap).
struct BlobEnsemble {
  std::vector<Vec2> positions;
  std::vector<double> circulations;
  AlphaParam alpha;
  double t = 0.0;

  BlobEnsemble(std::vector<Vec2> pos, std::vector<double> gamma, AlphaParam a, double time = 0.0);
  std::size_t size() const { return positions.size(); }
};

struct BlobDiagnostics {
  double hamiltonian = 0.0;
  Vec2 linear_impulse;
  double angular_impulse = 0.0;
  double total_circulation = 0.0;
};

/// (1 - z K1(z)) / (2 pi r^2): velocity weight for separation r, z = r/alpha.
/// Tends to a finite multiple of ln z as r -> 0 and is defined as 0 at r = 0.
double blob_velocity_factor(double r, double alpha);

/// ln r + K0(r/alpha), with the r -> 0 limit ln(2 alpha) - gamma_E.
double blob_stream_kernel(double r, double alpha);

/// Velocity of every blob from direct O(N^2) summation.  Each target sums
/// sources in index order, so the result does not depend on threads.
std::vector<Vec2> blob_rhs(const BlobEnsemble& e, int threads = 1);

BlobEnsemble blob_step_rk4(const BlobEnsemble& e, double dt, int threads = 1);

BlobDiagnostics blob_diagnostics(const BlobEnsemble& e);

}  // namespace alfl
