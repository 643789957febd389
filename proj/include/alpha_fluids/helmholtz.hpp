#pragma once

#include <vector>

#include "alpha_fluids/spectral.hpp"

namespace alfl {

/// (1 - a^2 Lap)^{-1}, mode by mode.
ScalarField helmholtz_inverse(const ScalarField& f, AlphaParam alpha);
VectorField helmholtz_inverse(const VectorField& u, AlphaParam alpha);
/// (1 - a^2 Lap)
ScalarField helmholtz_apply(const ScalarField& f, AlphaParam alpha);
VectorField helmholtz_apply(const VectorField& u, AlphaParam alpha);

/// u - grad p with div(u - grad p) = 0.  Mean mode passes through.
VectorField leray_project(const VectorField& u);

/// Splits F = W + (1 - a^2 L)^{-1} grad p with div W = 0 and returns W.
/// L = -2 Def* Def has the per-mode symbol -(|k|^2 I + k k^T); the
/// decomposition is solved as a 3x3 saddle system per wavevector.
VectorField stokes_project(const VectorField& f, AlphaParam alpha);

/// (1 - a^2 L) for general (not necessarily divergence-free) fields.
VectorField deformation_helmholtz_apply(const VectorField& u, AlphaParam alpha);
VectorField deformation_helmholtz_inverse(const VectorField& u, AlphaParam alpha);

/// Uniform interior grid on [0, 1] with homogeneous Dirichlet ends.
struct DirichletGrid1D {
  int n = 0;

  explicit DirichletGrid1D(int n_interior);
  double h() const { return 1.0 / (n + 1); }
  double x(int i) const { return (i + 1) * h(); }
};

/// Solves (1 - a^2 d_xx) w = f with w(0) = w(1) = 0, second-order centered
/// differences, Thomas algorithm.
std::vector<double> helmholtz_solve_dirichlet_1d(const std::vector<double>& f,
                                                 AlphaParam alpha);

/// Periodic counterpart on n equispaced points of a circle of length L:
/// cyclic tridiagonal system solved with a Sherman-Morrison correction.
std::vector<double> helmholtz_solve_periodic_1d(const std::vector<double>& f, double length,
                                                AlphaParam alpha);

}  // namespace alfl
