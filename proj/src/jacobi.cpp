#include "alpha_fluids/jacobi.hpp"

#include <cmath>
#include <stdexcept>

#include "alpha_fluids/helmholtz.hpp"

namespace alfl {

namespace {

struct Linearized {
  ScalarField q, dq;
  VectorField J;

  void axpy(double a, const Linearized& o) {
    q.axpy(a, o.q);
    dq.axpy(a, o.dq);
    J.axpy(a, o.J);
  }
};

VectorField velocity_with_mean(const ScalarField& q, AlphaParam alpha, Vec2 mean) {
  VectorField u = velocity_from_q(q, alpha);
  u.x.mode(0, 0) = mean.x;
  u.y.mode(0, 0) = mean.y;
  return u;
}

ScalarField advect(const VectorField& u, const ScalarField& f) {
  return multiply(u.x, dx(f)) + multiply(u.y, dy(f));
}

VectorField advect(const VectorField& u, const VectorField& f) { return {advect(u, f.x), advect(u, f.y)}; }

void require_divergence_free(const VectorField& u, const char* name) {
  const double scale = std::max(u.max_abs(), 1.0);
  if (divergence(u).max_abs() > 1e-10 * scale)
    throw std::invalid_argument(std::string(name) + " is not divergence free");
}

}  // namespace

JacobiRun jacobi_evolve(const VectorField& u0, const VectorField& y0, const VectorField& ydot0, double T,
                        double dt, AlphaParam alpha, const std::function<void(const JacobiRun&)>& observe) {
  require_same_grid(u0.grid(), y0.grid());
  require_same_grid(u0.grid(), ydot0.grid());
  require_divergence_free(u0, "u0");
  require_divergence_free(y0, "y0");
  require_divergence_free(ydot0, "ydot0");
  if (!(dt > 0.0) || !(T >= 0.0)) throw std::invalid_argument("need dt > 0 and T >= 0");

  const auto base0 = VorticityState::from_velocity(u0, alpha);
  const auto var0 = VorticityState::from_velocity(ydot0, alpha);
  const Vec2 mean = base0.mean_velocity(), dmean = var0.mean_velocity();

  auto rhs = [&](const Linearized& s) {
    const VectorField u = velocity_with_mean(s.q, alpha, mean);
    const VectorField du = velocity_with_mean(s.dq, alpha, dmean);
    Linearized out{-dealias_two_thirds(advect(u, s.q)),
                   -dealias_two_thirds(advect(du, s.q) + advect(u, s.dq)),
                   leray_project(du - dealias_two_thirds(advect(u, s.J) - advect(s.J, u)))};
    return out;
  };

  Linearized s{base0.q(), var0.q(), y0};
  JacobiRun run{base0, y0, ydot0, {}};
  auto record = [&](double t) {
    run.base = VorticityState(s.q, alpha, t, mean);
    run.displacement = s.J;
    run.velocity_variation = velocity_with_mean(s.dq, alpha, dmean);
    run.samples.push_back({t, std::sqrt(inner_product_alpha(s.J, s.J, alpha)),
                           std::sqrt(inner_product_alpha(run.velocity_variation, run.velocity_variation, alpha))});
    if (observe) observe(run);
  };
  record(0.0);

  const long steps = std::lround(T / dt);
  for (long n = 0; n < steps; ++n) {
    const double c = courant_number(run.base, dt);
    if (c >= 1.0) throw CflError("time step violates the CFL guard (Courant number " + std::to_string(c) + ")");
    s = rk4_step(s, dt, rhs);
    const double t = static_cast<double>(n + 1) * dt;
    if (!s.q.all_finite() || !s.dq.all_finite() || !s.J.x.all_finite() || !s.J.y.all_finite() ||
        s.q.max_abs() > kBlowUpThreshold)
      throw BlowUpError("Jacobi integration blew up after t = " + std::to_string(t - dt), t - dt);
    record(t);
  }
  return run;
}

}  // namespace alfl
