#pragma once

#include "alpha_fluids/spectral.hpp"

namespace alfl {

/// Material constants of the third-grade fluid.  alpha1 plays the role of
/// alpha^2 in the smoothing operator (1 - alpha1 Lap).
struct ThirdGradeParams {
  double alpha1 = 0.0;
  double alpha2 = 0.0;
  double beta = 0.0;
  double nu = 0.0;

  ThirdGradeParams() = default;
  ThirdGradeParams(double a1, double a2, double b, double viscosity);
};

/// du/dt for the third-grade system in momentum form, with v = (1 - a1 Lap) u
/// and A = grad u + grad u^T:
///
///   (1 - a1 Lap) u_t = P[ nu Lap u - (u.grad) v + a1 (grad u)^T Lap u
///                        + (a1 + a2)(A Lap u + 2 div(grad u grad u^T))
///                        + beta div(|A|^2 A) ]
///
/// Quadratic products use the 2/3 rule; the cubic term is assembled from the
/// half-rule truncation of u and truncated again at the half rule on output.
VectorField third_grade_rhs(const VectorField& u, const ThirdGradeParams& p);

VectorField third_grade_step_rk4(const VectorField& u, double dt, const ThirdGradeParams& p);

/// 1/2 int |u|^2 + alpha1 |grad u|^2
double third_grade_energy(const VectorField& u, const ThirdGradeParams& p);

}  // namespace alfl
