#include "alpha_fluids/blobs.hpp"

#include <cmath>
#include <stdexcept>

#include "alpha_fluids/euler_alpha.hpp"
#include "alpha_fluids/parallel.hpp"

namespace alfl {

namespace {

constexpr double kEulerGamma = 0.57721566490153286061;
// K0 and K1 underflow to zero well before this argument.
constexpr double kBesselCutoff = 700.0;

}  // namespace

BlobEnsemble::BlobEnsemble(std::vector<Vec2> pos, std::vector<double> gamma, AlphaParam a, double time)
    : positions(std::move(pos)), circulations(std::move(gamma)), alpha(a), t(time) {
  if (positions.size() != circulations.size())
    throw std::invalid_argument("blob ensemble: positions and circulations differ in length");
  if (!(alpha.value() > 0.0)) throw std::invalid_argument("blob ensemble: alpha must be positive");
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (!std::isfinite(circulations[i]) || !std::isfinite(positions[i].x) || !std::isfinite(positions[i].y))
      throw std::invalid_argument("blob ensemble: non-finite data");
    for (std::size_t j = 0; j < i; ++j)
      if (positions[i] == positions[j])
        throw std::invalid_argument("blob ensemble: coincident initial positions");
  }
}

double blob_velocity_factor(double r, double alpha) {
  if (r == 0.0) return 0.0;
  const double z = r / alpha;
  double one_minus_zk1;
  if (z < 1e-3) {
    // z K1(z) = 1 + (z^2/2)(L + g - 1/2) + (z^4/16)(L + g - 5/4) + O(z^6 L), L = ln(z/2)
    const double l = std::log(0.5 * z) + kEulerGamma;
    one_minus_zk1 = -0.5 * z * z * (l - 0.5) - z * z * z * z / 16.0 * (l - 1.25);
  } else if (z > kBesselCutoff) {
    one_minus_zk1 = 1.0;
  } else {
    one_minus_zk1 = 1.0 - z * std::cyl_bessel_k(1.0, z);
  }
  return one_minus_zk1 / (kTwoPi * r * r);
}

double blob_stream_kernel(double r, double alpha) {
  const double z = r / alpha;
  if (z < 1e-8) {
    // K0(z) = -ln(z/2) - g + O(z^2 ln z)
    return std::log(2.0 * alpha) - kEulerGamma;
  }
  if (z > kBesselCutoff) return std::log(r);
  return std::log(r) + std::cyl_bessel_k(0.0, z);
}

std::vector<Vec2> blob_rhs(const BlobEnsemble& e, int threads) {
  const std::size_t n = e.size();
  std::vector<Vec2> vel(n);
  const double a = e.alpha.value();
  parallel_blocks(n, threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t j = begin; j < end; ++j) {
      double vx = 0.0, vy = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        if (i == j) continue;
        const double dxv = e.positions[j].x - e.positions[i].x;
        const double dyv = e.positions[j].y - e.positions[i].y;
        const double w = e.circulations[i] * blob_velocity_factor(std::hypot(dxv, dyv), a);
        vx -= w * dyv;
        vy += w * dxv;
      }
      vel[j] = {vx, vy};
    }
  });
  return vel;
}

BlobEnsemble blob_step_rk4(const BlobEnsemble& e, double dt, int threads) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  const std::size_t n = e.size();
  auto shifted = [&](const std::vector<Vec2>& k, double h) {
    BlobEnsemble s = e;
    for (std::size_t i = 0; i < n; ++i) s.positions[i] = e.positions[i] + h * k[i];
    return s;
  };
  const auto k1 = blob_rhs(e, threads);
  const auto k2 = blob_rhs(shifted(k1, 0.5 * dt), threads);
  const auto k3 = blob_rhs(shifted(k2, 0.5 * dt), threads);
  const auto k4 = blob_rhs(shifted(k3, dt), threads);
  BlobEnsemble out = e;
  for (std::size_t i = 0; i < n; ++i) {
    out.positions[i].x += dt / 6.0 * (k1[i].x + 2.0 * k2[i].x + 2.0 * k3[i].x + k4[i].x);
    out.positions[i].y += dt / 6.0 * (k1[i].y + 2.0 * k2[i].y + 2.0 * k3[i].y + k4[i].y);
    if (!std::isfinite(out.positions[i].x) || !std::isfinite(out.positions[i].y))
      throw BlowUpError("blob positions became non-finite", e.t);
  }
  out.t = e.t + dt;
  return out;
}

BlobDiagnostics blob_diagnostics(const BlobEnsemble& e) {
  BlobDiagnostics d;
  const std::size_t n = e.size();
  const double a = e.alpha.value();
  double h = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double g = e.circulations[i];
    const Vec2 p = e.positions[i];
    d.total_circulation += g;
    d.linear_impulse.x += g * p.x;
    d.linear_impulse.y += g * p.y;
    d.angular_impulse += g * (p.x * p.x + p.y * p.y);
    for (std::size_t j = i + 1; j < n; ++j) {
      const double r = std::hypot(p.x - e.positions[j].x, p.y - e.positions[j].y);
      h += g * e.circulations[j] * blob_stream_kernel(r, a);
    }
  }
  // sum over ordered pairs i != j is twice the unordered sum
  d.hamiltonian = -h / (2.0 * kPi);
  return d;
}

}  // namespace alfl
