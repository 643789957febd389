#include "alpha_fluids/euler_alpha.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>

#include "alpha_fluids/helmholtz.hpp"

namespace alfl {

DissipationMode::DissipationMode(Dissipation v, double nu) : variant_(v), nu_(nu) {
  if (v != Dissipation::inviscid && !(nu > 0.0 && std::isfinite(nu)))
    throw std::invalid_argument("viscous and strong dissipation need nu > 0");
}

std::string to_string(Dissipation d) {
  switch (d) {
    case Dissipation::inviscid: return "inviscid";
    case Dissipation::viscous: return "viscous";
    case Dissipation::strong: return "strong";
  }
  return "?";
}

Dissipation dissipation_from_string(const std::string& s) {
  if (s == "inviscid") return Dissipation::inviscid;
  if (s == "viscous") return Dissipation::viscous;
  if (s == "strong") return Dissipation::strong;
  throw std::invalid_argument("unknown dissipation variant '" + s + "'");
}

VectorField velocity_from_q(const ScalarField& q, AlphaParam alpha) {
  return perp_gradient(inverse_laplacian(helmholtz_inverse(q, alpha)));
}

VorticityState::VorticityState(ScalarField q, AlphaParam alpha, double t, Vec2 mean_velocity)
    : q_(std::move(q)),
      alpha_(alpha),
      t_(t),
      mean_(mean_velocity),
      omega_(helmholtz_inverse(q_, alpha)),
      psi_(inverse_laplacian(omega_)),
      u_(perp_gradient(psi_)) {
  u_.x.mode(0, 0) = mean_.x;
  u_.y.mode(0, 0) = mean_.y;
}

VorticityState VorticityState::from_velocity(const VectorField& u, AlphaParam alpha, double t) {
  const Vec2 mean{u.x.mode(0, 0).real(), u.y.mode(0, 0).real()};
  return VorticityState(helmholtz_apply(curl(u), alpha), alpha, t, mean);
}

ScalarField rhs_vorticity(const ScalarField& q, AlphaParam alpha, Vec2 mean_velocity,
                          const DissipationMode& mode, double* max_speed) {
  const ScalarField omega = helmholtz_inverse(q, alpha);
  VectorField u = perp_gradient(inverse_laplacian(omega));
  u.x.mode(0, 0) = mean_velocity.x;
  u.y.mode(0, 0) = mean_velocity.y;

  RealField ux = inverse(u.x);
  const RealField uy = inverse(u.y);
  const RealField qx = inverse(dx(q));
  const RealField qy = inverse(dy(q));
  double speed2 = 0.0;
  auto adv = ux.values();
  for (std::size_t i = 0; i < adv.size(); ++i) {
    const double a = adv[i], b = uy.values()[i];
    speed2 = std::max(speed2, a * a + b * b);
    adv[i] = a * qx.values()[i] + b * qy.values()[i];
  }
  if (max_speed) *max_speed = std::sqrt(speed2);

  ScalarField out = dealias_two_thirds(forward(ux));
  out *= -1.0;
  switch (mode.variant()) {
    case Dissipation::inviscid: break;
    case Dissipation::viscous: out.axpy(mode.nu(), laplacian(omega)); break;
    case Dissipation::strong: out.axpy(mode.nu(), laplacian(q)); break;
  }
  return out;
}

ScalarField rhs_vorticity(const VorticityState& state, const DissipationMode& mode) {
  return rhs_vorticity(state.q(), state.alpha(), state.mean_velocity(), mode);
}

namespace {

double max_wavenumber(const TorusGrid2D& g) {
  const double kx = kPi * g.nx() / g.lx();
  const double ky = kPi * g.ny() / g.ly();
  return std::sqrt(kx * kx + ky * ky);
}

void check_courant(double c) {
  if (c >= 1.0)
    throw CflError("time step violates the CFL guard (Courant number " + std::to_string(c) + ")");
  static bool warned = false;
  if (c > 0.5 && !warned) {
    warned = true;
    std::clog << "warning: Courant number " << c << " exceeds 0.5\n";
  }
}

}  // namespace

double courant_number(const VorticityState& state, double dt) {
  const RealField ux = inverse(state.velocity().x);
  const RealField uy = inverse(state.velocity().y);
  double s2 = 0.0;
  for (std::size_t i = 0; i < ux.values().size(); ++i)
    s2 = std::max(s2, ux.values()[i] * ux.values()[i] + uy.values()[i] * uy.values()[i]);
  return dt * std::sqrt(s2) * max_wavenumber(state.grid());
}

VorticityState step_rk4(const VorticityState& state, double dt, const DissipationMode& mode) {
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive");
  const AlphaParam alpha = state.alpha();
  const Vec2 mean = state.mean_velocity();
  bool first = true;
  ScalarField q = rk4_step(state.q(), dt, [&](const ScalarField& y) {
    if (!first) return rhs_vorticity(y, alpha, mean, mode);
    first = false;
    double speed = 0.0;
    ScalarField k1 = rhs_vorticity(y, alpha, mean, mode, &speed);
    check_courant(dt * speed * max_wavenumber(y.grid()));
    return k1;
  });
  if (!q.all_finite() || q.max_abs() > kBlowUpThreshold)
    throw BlowUpError("potential vorticity blew up after t = " + std::to_string(state.t()),
                      state.t());
  return VorticityState(std::move(q), alpha, state.t() + dt, mean);
}

std::vector<double> casimirs(const ScalarField& q, int nmax) {
  if (nmax < 1) throw std::invalid_argument("casimirs: nmax must be at least 1");
  const auto& g = q.grid();
  std::vector<double> out(nmax, 0.0);
  out[0] = q.mode(0, 0).real() * g.area();
  if (nmax == 1) return out;

  // q^n has support n*K; a padded grid of size > n*K integrates it exactly.
  const auto supp = spectral_support(q);
  if (supp[0] < 0) return out;
  auto padded_size = [&](int n, int k) {
    int m = std::max(n, nmax * k + 1);
    return m + (m % 2);
  };
  const RealField r = inverse_padded(q, padded_size(g.nx(), supp[0]), padded_size(g.ny(), supp[1]));
  const auto v = r.values();
  std::vector<double> sums(nmax, 0.0);
  for (double x : v) {
    double p = x;
    for (int n = 1; n < nmax; ++n) {
      p *= x;
      sums[n] += p;
    }
  }
  for (int n = 1; n < nmax; ++n) out[n] = sums[n] * g.area() / static_cast<double>(v.size());
  return out;
}

double energy_alpha(const VorticityState& state) {
  return 0.5 * inner_product_alpha(state.velocity(), state.velocity(), state.alpha());
}

}  // namespace alfl
