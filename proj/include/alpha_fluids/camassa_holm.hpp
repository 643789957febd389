#pragma once

#include <stdexcept>
#include <vector>

#include "alpha_fluids/spectral.hpp"

namespace alfl {

enum class Boundary { dirichlet, periodic };

/// Uniform 1D grid.  Dirichlet: n interior nodes of [0, 1], the zero
/// boundary values are not stored, derivatives are second-order centered
/// differences.  Periodic: n (even) nodes x_i = i h on a circle of the given
/// length, derivatives and the Helmholtz inverse are spectral.
struct CHGrid {
  Boundary bc = Boundary::dirichlet;
  int n = 0;
  double length = 1.0;

  static CHGrid dirichlet(int n_interior);
  static CHGrid periodic(int n, double length = kTwoPi);

  double h() const { return bc == Boundary::dirichlet ? length / (n + 1) : length / n; }
  double x(int i) const { return bc == Boundary::dirichlet ? (i + 1) * h() : i * h(); }
  bool operator==(const CHGrid& o) const = default;
};

struct CHState {
  CHGrid grid;
  std::vector<double> u;
  double t = 0.0;

  CHState(CHGrid grid, std::vector<double> u, double t = 0.0);
  template <class F>
  static CHState sample(CHGrid grid, F&& f) {
    std::vector<double> u(grid.n);
    for (int i = 0; i < grid.n; ++i) u[i] = f(grid.x(i));
    return CHState(grid, std::move(u));
  }
};

/// Lagrangian state on the Dirichlet grid: eta_i is the position of the
/// particle that started at x_i and etadot_i its velocity.  eta(0) = 0 and
/// eta(1) = 1 are implied.
struct CHLagrangianState {
  CHGrid grid;
  std::vector<double> eta;
  std::vector<double> etadot;
  double t = 0.0;

  /// eta = identity, etadot = u0.
  static CHLagrangianState from_eulerian(const CHState& u0);
};

/// A particle crossing: eta is no longer a diffeomorphism of the interval.
class MonotonicityError : public std::runtime_error {
 public:
  MonotonicityError(const std::string& what, double last_good_t)
      : std::runtime_error(what), last_good_t_(last_good_t) {}
  double last_good_t() const { return last_good_t_; }

 private:
  double last_good_t_;
};

/// First and second derivatives with the grid's boundary rule.
std::vector<double> diff1(const CHGrid& g, const std::vector<double>& u);
std::vector<double> diff2(const CHGrid& g, const std::vector<double>& u);

/// (1 - d_xx)^{-1} f with the grid's boundary rule.
std::vector<double> ch_helmholtz_inverse(const CHGrid& g, const std::vector<double>& f);

/// u_t = -(1 - D2)^{-1} [D1(u m) + m D1 u],  m = u - D2 u.
/// This is the nonlocal form u_t = -u u_x - (1 - d_xx)^{-1} d_x(u^2 + u_x^2 / 2)
/// written so that the discrete energy is an exact invariant.
std::vector<double> ch_rhs_eulerian(const CHState& state);

/// Classical RK4.  Throws BlowUpError on a non-finite result.
CHState ch_step_rk4(const CHState& state, double dt);

/// h sum (u^2 + u_x^2).  Dirichlet: u_x are one-sided differences over all
/// grid intervals, boundary intervals included.  Periodic: spectral u_x.
double ch_energy(const CHState& state);

/// Discrete H1 inner product h sum u (1 - D2) v.
double ch_inner(const CHGrid& g, const std::vector<double>& u, const std::vector<double>& v);

/// (1 - d_xx)^{-1} d_x(u v + u_x v_x / 2)
std::vector<double> frakU_1d(const CHGrid& g, const std::vector<double>& u, const std::vector<double>& v);

/// K = -<R(x, y) y, x> / Gram with R(x, y) z = cov_y cov_x z - cov_x cov_y z + cov_[x,y] z
/// and cov_x y = x y_x + frakU_1d(x, y).  Throws DegeneratePlane.
double ch_sectional_curvature(const CHGrid& g, const std::vector<double>& x, const std::vector<double>& y);

/// One RK4 step of eta'' = -frakU_1d(u, u) o eta with u = etadot o eta^{-1},
/// both compositions done by monotone cubic interpolation.  Dirichlet only.
/// Throws MonotonicityError when particles cross.
CHLagrangianState ch_spray_step(const CHLagrangianState& state, double dt);

/// etadot o eta^{-1} sampled on the grid nodes.
CHState ch_to_eulerian(const CHLagrangianState& state);

double sup_norm_difference(const CHState& a, const CHState& b);

}  // namespace alfl
