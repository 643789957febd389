#include "alpha_fluids/initial_conditions.hpp"

#include <cmath>
#include <stdexcept>

#include "alpha_fluids/geometry.hpp"
#include "alpha_fluids/rng.hpp"

namespace alfl {

VectorField single_mode(const TorusGrid2D& grid, Wavevector k, double amp) { return stream_mode(grid, k, amp); }

VectorField two_mode(const TorusGrid2D& grid, Wavevector k1, Wavevector k2, double amp1, double amp2) {
  return stream_mode(grid, k1, amp1) + stream_mode(grid, k2, amp2);
}

VectorField random_seeded(const TorusGrid2D& grid, std::uint64_t seed, double slope, int kmax, double rms) {
  if (kmax < 1 || !(rms > 0.0)) throw std::invalid_argument("random_seeded needs kmax >= 1 and rms > 0");
  SplitMix64 rng(seed);
  ScalarField psi(grid);
  const int jx_max = grid.nx() / 2 - 1, jy_max = grid.ny() / 2 - 1;
  const double kx1 = kTwoPi / grid.lx(), ky1 = kTwoPi / grid.ly();
  for (int jx = -jx_max; jx <= jx_max; ++jx)
    for (int jy = 0; jy <= jy_max; ++jy) {
      if (jy == 0 && jx <= 0) continue;
      const double kk = std::hypot(jx * kx1, jy * ky1);
      if (kk > kmax) continue;
      const double phase = kTwoPi * rng.uniform();
      // |u_k|^2 ~ |k|^2 |psi_k|^2 and the shell holds ~|k| modes.
      const double amp = std::pow(kk, 0.5 * (slope - 1.0)) / kk;
      const Complex c = std::polar(amp, phase);
      psi.mode(jx, jy) = c;
      psi.mode(-jx, -jy) = std::conj(c);
    }
  VectorField u = perp_gradient(psi);
  double power = 0.0;
  for (const ScalarField* f : {&u.x, &u.y})
    for (const Complex& z : f->coeffs()) power += std::norm(z);
  if (power == 0.0) throw std::invalid_argument("random_seeded: no modes with 0 < |k| <= kmax fit the grid");
  u *= rms / std::sqrt(power);
  return u;
}

BlobEnsemble blob_ring(int n, double radius, double gamma, double alpha) {
  if (n < 1 || !(radius > 0.0)) throw std::invalid_argument("blob_ring needs n >= 1 and radius > 0");
  std::vector<Vec2> pos(n);
  for (int i = 0; i < n; ++i) {
    const double th = kTwoPi * i / n;
    pos[i] = {radius * std::cos(th), radius * std::sin(th)};
  }
  return BlobEnsemble(std::move(pos), std::vector<double>(n, gamma), AlphaParam(alpha));
}

}  // namespace alfl
