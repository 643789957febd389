#include "alpha_fluids/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include "alpha_fluids/helmholtz.hpp"
#include "alpha_fluids/parallel.hpp"

namespace alfl {

namespace {

// Coefficients below this fraction of a field's largest coefficient are
// roundoff and do not count toward its support.
constexpr double kSupportTol = 1e-13;

using Grad = std::array<std::array<ScalarField, 2>, 2>;

Grad spectral_gradient(const VectorField& u) {
  return {{{dx(u.x), dy(u.x)}, {dx(u.y), dy(u.y)}}};
}

ScalarField exact_product(const ScalarField& a, const ScalarField& b) {
  const auto& g = a.grid();
  const auto sa = spectral_support(a, kSupportTol);
  const auto sb = spectral_support(b, kSupportTol);
  if (sa[0] < 0 || sb[0] < 0) return ScalarField(g);
  const int sx = sa[0] + sb[0], sy = sa[1] + sb[1];
  if (sx > g.nx() / 2 - 1 || sy > g.ny() / 2 - 1)
    throw SupportOverflow("product needs modes up to (" + std::to_string(sx) + ", " +
                          std::to_string(sy) + "); use a grid of at least " +
                          std::to_string(2 * (std::max(sx, sy) + 1)) + " points per side");
  return truncate_to_box(multiply(truncate_to_box(a, sa[0], sa[1]), truncate_to_box(b, sb[0], sb[1])), sx, sy);
}

VectorField project(const VectorField& u, AlphaParam alpha) { return stokes_project(u, alpha); }

}  // namespace

VectorField stream_mode(const TorusGrid2D& grid, Wavevector k, double amplitude) {
  if (std::abs(k.jx) >= grid.nx() / 2 || std::abs(k.jy) >= grid.ny() / 2)
    throw SupportOverflow("stream mode does not fit the grid");
  ScalarField psi(grid);
  psi.mode(k.jx, k.jy) += 0.5 * amplitude;
  psi.mode(-k.jx, -k.jy) += 0.5 * amplitude;
  return perp_gradient(psi);
}

int curvature_grid_size(int max_mode_index) {
  const int need = 2 * (3 * std::max(max_mode_index, 1) + 1);
  int n = 16;
  while (n < need) n *= 2;
  return n;
}

VectorField directional_derivative(const VectorField& x, const VectorField& y) {
  require_same_grid(x.grid(), y.grid());
  const Grad gy = spectral_gradient(y);
  VectorField out(x.grid());
  for (int i = 0; i < 2; ++i) out[i] = exact_product(x.x, gy[i][0]) + exact_product(x.y, gy[i][1]);
  return out;
}

VectorField bracket(const VectorField& x, const VectorField& y) {
  return directional_derivative(x, y) - directional_derivative(y, x);
}

VectorField frakU(const VectorField& x, const VectorField& y, AlphaParam alpha) {
  require_same_grid(x.grid(), y.grid());
  const auto& g = x.grid();
  const Grad a = spectral_gradient(x);
  const Grad b = spectral_gradient(y);

  // P(i, j, k, l) = a_ij * b_kl
  std::vector<ScalarField> prod;
  prod.reserve(16);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        for (int l = 0; l < 2; ++l) prod.push_back(exact_product(a[i][j], b[k][l]));
  auto P = [&](int i, int j, int k, int l) -> const ScalarField& { return prod[((i * 2 + j) * 2 + k) * 2 + l]; };

  // Polarized T(G) = G G^T + G G - G^T G and tr(G G), with G = a + b and
  // the a-a, b-b parts dropped.
  VectorField out(g);
  ScalarField trace(g);
  for (int i = 0; i < 2; ++i)
    for (int k = 0; k < 2; ++k) trace.axpy(2.0, P(i, k, k, i));
  for (int i = 0; i < 2; ++i) {
    ScalarField acc = (i == 0) ? dx(trace) : dy(trace);
    for (int j = 0; j < 2; ++j) {
      ScalarField t(g);
      for (int k = 0; k < 2; ++k) {
        t += P(i, k, j, k) + P(j, k, i, k);  // G G^T
        t += P(i, k, k, j) + P(k, j, i, k);  // G G
        t -= P(k, i, k, j) + P(k, j, k, i);  // G^T G
      }
      acc += (j == 0) ? dx(t) : dy(t);
    }
    out[i] = alpha.squared() * helmholtz_inverse(acc, alpha);
  }
  return out;
}

VectorField calU(const VectorField& u, AlphaParam alpha) {
  VectorField out = frakU(u, u, alpha);
  out *= 0.5;
  return out;
}

VectorField covariant_derivative(const VectorField& x, const VectorField& y, AlphaParam alpha) {
  VectorField s = directional_derivative(x, y);
  s.axpy(0.5, frakU(x, y, alpha));
  return project(s, alpha);
}

VectorField M_op(const VectorField& x, const VectorField& y, AlphaParam alpha) {
  const VectorField d = directional_derivative(x, y);
  VectorField out = d - project(d, alpha);
  out.axpy(0.5, project(frakU(x, y, alpha), alpha));
  return out;
}

VectorField connection_difference(const VectorField& x, const VectorField& y, AlphaParam alpha) {
  const VectorField d = directional_derivative(x, y);
  VectorField out = project(d, alpha) - d;
  out.axpy(0.5, project(frakU(x, y, alpha), alpha));
  return out;
}

VectorField curvature_op(const VectorField& x, const VectorField& y, const VectorField& z,
                         AlphaParam alpha) {
  auto N = [&](const VectorField& a, const VectorField& b) { return connection_difference(a, b, alpha); };
  auto D = [](const VectorField& a, const VectorField& b) { return directional_derivative(a, b); };
  const VectorField nxz = N(x, z);
  const VectorField nyz = N(y, z);
  VectorField r = N(y, nxz) - N(x, nyz) + N(bracket(x, y), z);
  r += D(y, nxz) - N(x, D(y, z));
  r += N(y, D(x, z)) - D(x, nyz);
  return r;
}

VectorField curvature_op_direct(const VectorField& x, const VectorField& y, const VectorField& z,
                                AlphaParam alpha) {
  auto C = [&](const VectorField& a, const VectorField& b) { return covariant_derivative(a, b, alpha); };
  return C(y, C(x, z)) - C(x, C(y, z)) + C(bracket(x, y), z);
}

double sectional_curvature(const VectorField& x, const VectorField& y, AlphaParam alpha) {
  const double xx = inner_product_alpha(x, x, alpha);
  const double yy = inner_product_alpha(y, y, alpha);
  const double xy = inner_product_alpha(x, y, alpha);
  const double gram = xx * yy - xy * xy;
  if (!(gram > 1e-12 * xx * yy)) throw DegeneratePlane("sectional curvature of a degenerate plane");
  return -inner_product_alpha(curvature_op(x, y, y, alpha), x, alpha) / gram;
}

double arnold_closed_form(Wavevector k, Wavevector l, double area) {
  if ((k.jx == 0 && k.jy == 0) || (l.jx == 0 && l.jy == 0))
    throw std::invalid_argument("wavevectors must be nonzero");
  if ((k.jx == l.jx && k.jy == l.jy) || (k.jx == -l.jx && k.jy == -l.jy))
    throw std::invalid_argument("k = +-l leaves the angle between k + l and k - l undefined");
  auto sin2 = [](double ax, double ay, double bx, double by) {
    const double cr = ax * by - ay * bx;
    return cr * cr / ((ax * ax + ay * ay) * (bx * bx + by * by));
  };
  const double k2 = k.jx * k.jx + k.jy * k.jy;
  const double l2 = l.jx * l.jx + l.jy * l.jy;
  const double sb = sin2(k.jx, k.jy, l.jx, l.jy);
  const double sg = sin2(k.jx + l.jx, k.jy + l.jy, k.jx - l.jx, k.jy - l.jy);
  return -(k2 + l2) * sb * sg / (4.0 * area);
}

double stream_mode_curvature(Wavevector k, Wavevector l, AlphaParam alpha) {
  const int m = std::max({std::abs(k.jx), std::abs(k.jy), std::abs(l.jx), std::abs(l.jy)});
  const int n = curvature_grid_size(m);
  const TorusGrid2D g(n, n);
  return sectional_curvature(stream_mode(g, k), stream_mode(g, l), alpha);
}

Alpha0Search find_alpha0(Wavevector k, Wavevector eps, double tol, double scan_step, int threads) {
  const Wavevector l{k.jx + eps.jx, k.jy + eps.jy};
  auto K = [&](double a) { return stream_mode_curvature(k, l, AlphaParam(a)); };
  Alpha0Search out;
  out.curvature_at_zero = K(0.0);

  const int count = static_cast<int>(std::ceil(1.0 / scan_step - 1e-9));
  out.samples.resize(count);
  parallel_blocks(static_cast<std::size_t>(count), threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      const double a = std::min(1.0, scan_step * static_cast<double>(i + 1));
      out.samples[i] = {a, K(a)};
    }
  });

  double lo = 0.0, k_lo = out.curvature_at_zero;
  for (const auto& [a, ka] : out.samples) {
    if ((k_lo < 0.0) != (ka < 0.0)) {
      double hi = a;
      while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        if ((K(mid) < 0.0) == (k_lo < 0.0))
          lo = mid;
        else
          hi = mid;
      }
      out.found = true;
      out.alpha0 = 0.5 * (lo + hi);
      return out;
    }
    lo = a;
    k_lo = ka;
  }
  return out;
}

}  // namespace alfl
