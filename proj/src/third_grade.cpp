#include "alpha_fluids/third_grade.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "alpha_fluids/euler_alpha.hpp"
#include "alpha_fluids/helmholtz.hpp"

namespace alfl {

ThirdGradeParams::ThirdGradeParams(double a1, double a2, double b, double viscosity)
    : alpha1(a1), alpha2(a2), beta(b), nu(viscosity) {
  if (!(a1 > 0.0)) throw std::invalid_argument("third grade: alpha1 must be positive");
  if (!(a2 >= 0.0) || !(b >= 0.0) || !(viscosity >= 0.0))
    throw std::invalid_argument("third grade: alpha2, beta and nu must be nonnegative");
}

namespace {

using Tensor = std::array<std::array<RealField, 2>, 2>;

// G[i][j] = d_j u_i in real space
Tensor velocity_gradient(const VectorField& u) {
  return {{{inverse(dx(u.x)), inverse(dy(u.x))}, {inverse(dx(u.y)), inverse(dy(u.y))}}};
}

// div_i T = d_j T_ij
VectorField tensor_divergence(const std::array<std::array<ScalarField, 2>, 2>& t) {
  return {dx(t[0][0]) + dy(t[0][1]), dx(t[1][0]) + dy(t[1][1])};
}

}  // namespace

VectorField third_grade_rhs(const VectorField& u, const ThirdGradeParams& p) {
  const auto& g = u.grid();
  const AlphaParam smoothing(std::sqrt(p.alpha1));
  const double a12 = p.alpha1 + p.alpha2;
  const std::size_t n = g.size();

  const VectorField lap = laplacian(u);
  const VectorField v = helmholtz_apply(u, smoothing);
  const std::array<RealField, 2> ur{inverse(u.x), inverse(u.y)};
  const std::array<RealField, 2> lr{inverse(lap.x), inverse(lap.y)};
  const Tensor gu = velocity_gradient(u);
  const Tensor gv = velocity_gradient(v);

  std::array<RealField, 2> local{RealField(g), RealField(g)};
  std::array<std::array<RealField, 2>, 2> flux{{{RealField(g), RealField(g)}, {RealField(g), RealField(g)}}};
  for (std::size_t m = 0; m < n; ++m) {
    double G[2][2], A[2][2];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) G[i][j] = gu[i][j].values()[m];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) A[i][j] = G[i][j] + G[j][i];
    const double uu[2] = {ur[0].values()[m], ur[1].values()[m]};
    const double L[2] = {lr[0].values()[m], lr[1].values()[m]};
    for (int i = 0; i < 2; ++i) {
      double s = 0.0;
      for (int j = 0; j < 2; ++j) {
        s -= uu[j] * gv[i][j].values()[m];
        s += p.alpha1 * G[j][i] * L[j];
        s += a12 * A[i][j] * L[j];
      }
      local[i].values()[m] = s;
      for (int j = 0; j < 2; ++j)
        flux[i][j].values()[m] = 2.0 * a12 * (G[i][0] * G[j][0] + G[i][1] * G[j][1]);
    }
  }

  VectorField total = dealias_two_thirds(VectorField(forward(local[0]), forward(local[1])));
  total += tensor_divergence({{{dealias_two_thirds(forward(flux[0][0])), dealias_two_thirds(forward(flux[0][1]))},
                               {dealias_two_thirds(forward(flux[1][0])), dealias_two_thirds(forward(flux[1][1]))}}});
  if (p.nu > 0.0) total.axpy(p.nu, lap);

  if (p.beta > 0.0) {
    const Tensor gh = velocity_gradient(dealias_half(u));
    std::array<std::array<RealField, 2>, 2> cubic{{{RealField(g), RealField(g)}, {RealField(g), RealField(g)}}};
    for (std::size_t m = 0; m < n; ++m) {
      double A[2][2];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) A[i][j] = gh[i][j].values()[m] + gh[j][i].values()[m];
      const double norm2 = A[0][0] * A[0][0] + A[0][1] * A[0][1] + A[1][0] * A[1][0] + A[1][1] * A[1][1];
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) cubic[i][j].values()[m] = norm2 * A[i][j];
    }
    total.axpy(p.beta,
               dealias_half(tensor_divergence({{{dealias_half(forward(cubic[0][0])), dealias_half(forward(cubic[0][1]))},
                                                {dealias_half(forward(cubic[1][0])), dealias_half(forward(cubic[1][1]))}}})));
  }
  return leray_project(helmholtz_inverse(total, smoothing));
}

VectorField third_grade_step_rk4(const VectorField& u, double dt, const ThirdGradeParams& p) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  VectorField out = rk4_step(u, dt, [&](const VectorField& y) { return third_grade_rhs(y, p); });
  if (!std::isfinite(out.max_abs()) || out.max_abs() > kBlowUpThreshold)
    throw BlowUpError("third grade velocity blew up", 0.0);
  return out;
}

double third_grade_energy(const VectorField& u, const ThirdGradeParams& p) {
  return 0.5 * inner_product_alpha(u, u, AlphaParam(std::sqrt(p.alpha1)));
}

}  // namespace alfl
