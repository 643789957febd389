#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alpha_fluids/spectral.hpp"

namespace alfl {

/// Raised when a product would alias on the current grid.
class SupportOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DegeneratePlane : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Velocity of the stream function amplitude * cos(k . x): perp grad of it.
VectorField stream_mode(const TorusGrid2D& grid, Wavevector k, double amplitude = 1.0);

/// Smallest power-of-two grid (at least 16) on which every product in a
/// curvature evaluation of modes with the given largest index stays exact.
int curvature_grid_size(int max_mode_index);

/// (x . grad) y, computed without aliasing or SupportOverflow.
VectorField directional_derivative(const VectorField& x, const VectorField& y);

/// [x, y] = (x . grad) y - (y . grad) x
VectorField bracket(const VectorField& x, const VectorField& y);

/// a^2 (1 - a^2 Lap)^{-1} { div[G G^T + G G - G^T G] + grad tr(G G) },
/// G_ij = d_j u_i, (div T)_i = d_j T_ij.
VectorField calU(const VectorField& u, AlphaParam alpha);

/// Symmetric bilinear form with frakU(u, u) = calU(2u) - 2 calU(u) = 2 calU(u),
/// i.e. frakU(x, y) = calU(x + y) - calU(x) - calU(y), assembled directly.
VectorField frakU(const VectorField& x, const VectorField& y, AlphaParam alpha);

/// P[ (x . grad) y + 1/2 frakU(x, y) ]: the alpha-metric connection at the
/// identity on the flat torus.
VectorField covariant_derivative(const VectorField& x, const VectorField& y, AlphaParam alpha);

/// (1 - P)(x . grad) y + 1/2 P frakU(x, y)
VectorField M_op(const VectorField& x, const VectorField& y, AlphaParam alpha);

/// covariant_derivative(x, y) - (x . grad) y = 1/2 P frakU(x, y) - (1 - P)(x . grad) y.
/// This is the operator that appears in the curvature expansion below.
VectorField connection_difference(const VectorField& x, const VectorField& y, AlphaParam alpha);

/// R(x, y) z = cov_y cov_x z - cov_x cov_y z + cov_[x,y] z, evaluated as
///   (N_y N_x - N_x N_y + N_[x,y]) z + (D_y N_x - N_x D_y) z + (N_y D_x - D_x N_y) z
/// with D the flat derivative and N = connection_difference (the flat
/// curvature of D vanishes).  Throws SupportOverflow if the grid is too small.
VectorField curvature_op(const VectorField& x, const VectorField& y, const VectorField& z,
                         AlphaParam alpha);

/// Same operator by nesting covariant_derivative; used as a cross-check.
VectorField curvature_op_direct(const VectorField& x, const VectorField& y, const VectorField& z,
                                AlphaParam alpha);

/// K = -<R(x, y) y, x>_a / (<x,x>_a <y,y>_a - <x,y>_a^2).  The sign makes K
/// the usual sectional curvature for the operator R above.
double sectional_curvature(const VectorField& x, const VectorField& y, AlphaParam alpha);

/// -(|k|^2 + |l|^2) sin^2(b) sin^2(g) / (4 S), b = angle(k, l),
/// g = angle(k + l, k - l).
double arnold_closed_form(Wavevector k, Wavevector l, double area);

/// Sectional curvature of the plane spanned by the stream modes cos(k.x) and
/// cos(l.x) on the 2pi torus, on an automatically sized grid.
double stream_mode_curvature(Wavevector k, Wavevector l, AlphaParam alpha);

struct Alpha0Search {
  bool found = false;
  double alpha0 = 0.0;
  double curvature_at_zero = 0.0;
  /// Coarse scan used to bracket the sign change.
  std::vector<std::pair<double, double>> samples;
};

/// Looks for the sign change of K(cos(k.x), cos((k + eps).x); alpha) on
/// (0, 1]: a scan on a uniform alpha grid of the given step, then bisection
/// to the tolerance.  Absence of a flip is reported through found = false.
Alpha0Search find_alpha0(Wavevector k, Wavevector eps, double tol = 1e-4, double scan_step = 0.05,
                         int threads = 1);

}  // namespace alfl
