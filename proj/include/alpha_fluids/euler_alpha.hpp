#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "alpha_fluids/spectral.hpp"

namespace alfl {

enum class Dissipation { inviscid, viscous, strong };

/// Momentum-space damping.  viscous adds nu Lap u; strong adds
/// nu (1 - a^2 Lap) Lap u.
class DissipationMode {
 public:
  static DissipationMode inviscid() { return DissipationMode(Dissipation::inviscid, 0.0); }
  static DissipationMode viscous(double nu) { return DissipationMode(Dissipation::viscous, nu); }
  static DissipationMode strong(double nu) { return DissipationMode(Dissipation::strong, nu); }

  Dissipation variant() const { return variant_; }
  double nu() const { return nu_; }

 private:
  DissipationMode(Dissipation v, double nu);
  Dissipation variant_;
  double nu_;
};

std::string to_string(Dissipation d);
Dissipation dissipation_from_string(const std::string& s);

/// Thrown when the state becomes non-finite or its largest coefficient
/// exceeds the blow-up threshold.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double last_good_t)
      : std::runtime_error(what), last_good_t_(last_good_t) {}
  double last_good_t() const { return last_good_t_; }

 private:
  double last_good_t_;
};

class CflError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kBlowUpThreshold = 1e12;

/// Velocity with zero mean recovered from potential vorticity:
/// omega = (1 - a^2 Lap)^{-1} q, Lap psi = omega, u = perp grad psi.
VectorField velocity_from_q(const ScalarField& q, AlphaParam alpha);

/// Prognostic state of the 2D solver.  The derived fields are computed once
/// on construction; the object is immutable afterwards.
class VorticityState {
 public:
  VorticityState(ScalarField q, AlphaParam alpha, double t = 0.0, Vec2 mean_velocity = {});

  /// q = (1 - a^2 Lap) curl u, mean velocity taken from the k = 0 mode of u.
  static VorticityState from_velocity(const VectorField& u, AlphaParam alpha, double t = 0.0);

  const ScalarField& q() const { return q_; }
  const ScalarField& omega() const { return omega_; }
  const ScalarField& psi() const { return psi_; }
  /// Full velocity, mean mode included.
  const VectorField& velocity() const { return u_; }
  AlphaParam alpha() const { return alpha_; }
  double t() const { return t_; }
  Vec2 mean_velocity() const { return mean_; }
  const TorusGrid2D& grid() const { return q_.grid(); }

 private:
  ScalarField q_;
  AlphaParam alpha_;
  double t_;
  Vec2 mean_;
  ScalarField omega_;
  ScalarField psi_;
  VectorField u_;
};

/// dq/dt = -dealias(u . grad q) + {0 | nu Lap omega | nu Lap q}.
ScalarField rhs_vorticity(const VorticityState& state, const DissipationMode& mode);

/// Same right side without building a state; also reports max |u| over the
/// collocation points through max_speed when non-null.
ScalarField rhs_vorticity(const ScalarField& q, AlphaParam alpha, Vec2 mean_velocity,
                          const DissipationMode& mode, double* max_speed = nullptr);

/// Classical RK4 step on q.  Throws std::invalid_argument for dt <= 0,
/// CflError when dt max|u| max|k| >= 1 and BlowUpError on a bad result.
VorticityState step_rk4(const VorticityState& state, double dt, const DissipationMode& mode);

/// Courant number dt * max|u| * max|k| of the current state.
double courant_number(const VorticityState& state, double dt);

/// [int q, int q^2, ..., int q^nmax] by alias-free quadrature on a padded grid.
std::vector<double> casimirs(const ScalarField& q, int nmax);

/// 1/2 <u, u>_alpha including the mean flow.
double energy_alpha(const VorticityState& state);

/// Generic classical RK4 for any vector-space value type.
template <class State, class Rhs>
State rk4_step(const State& y, double dt, Rhs&& f) {
  State k1 = f(y);
  State y2 = y;
  y2.axpy(0.5 * dt, k1);
  State k2 = f(y2);
  State y3 = y;
  y3.axpy(0.5 * dt, k2);
  State k3 = f(y3);
  State y4 = y;
  y4.axpy(dt, k3);
  State k4 = f(y4);
  State out = y;
  out.axpy(dt / 6.0, k1);
  out.axpy(dt / 3.0, k2);
  out.axpy(dt / 3.0, k3);
  out.axpy(dt / 6.0, k4);
  return out;
}

}  // namespace alfl
