#pragma once

#include <functional>
#include <vector>

#include "alpha_fluids/euler_alpha.hpp"

namespace alfl {

/// Right-trivialized Jacobi field along a geodesic of the alpha metric.
/// displacement is J = Y o eta^{-1}; velocity_variation is the linearized
/// Eulerian velocity delta u.  They obey
///   d/dt (1 - a^2 Lap) curl du = -(du . grad q + u . grad dq)
///   d/dt J = du - [u, J],   [u, J] = (u . grad) J - (J . grad) u.
struct JacobiSample {
  double t = 0.0;
  double displacement_norm = 0.0;  ///< ||J||_alpha = ||Y||_alpha by right invariance
  double velocity_variation_norm = 0.0;
};

struct JacobiRun {
  VorticityState base;
  VectorField displacement;
  VectorField velocity_variation;
  std::vector<JacobiSample> samples;  ///< one per step, t = 0 included
};

/// Co-integrates the inviscid solution from u0 with the Jacobi field that
/// starts at J = y0, du = ydot0.  Uses round(T / dt) RK4 steps.
/// Throws std::invalid_argument for divergent inputs or a bad step and
/// propagates solver errors.
JacobiRun jacobi_evolve(const VectorField& u0, const VectorField& y0, const VectorField& ydot0, double T,
                        double dt, AlphaParam alpha,
                        const std::function<void(const JacobiRun&)>& observe = {});

}  // namespace alfl
