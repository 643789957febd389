#include "alpha_fluids/helmholtz.hpp"

#include <cmath>
#include <stdexcept>

namespace alfl {

namespace {

template <class Symbol>
ScalarField scale_modes(const ScalarField& f, Symbol&& sym) {
  const auto& g = f.grid();
  ScalarField out(g);
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) out(ix, iy) = sym(g.k_squared(ix, iy)) * f(ix, iy);
  return out;
}

// 2x2 symmetric matrix (1 + a^2|k|^2) I + a^2 k k^T
struct ModeMatrix {
  double a11, a12, a22;

  ModeMatrix(double kx, double ky, double a2) {
    const double d = 1.0 + a2 * (kx * kx + ky * ky);
    a11 = d + a2 * kx * kx;
    a12 = a2 * kx * ky;
    a22 = d + a2 * ky * ky;
  }
  void apply(Complex& x, Complex& y) const {
    const Complex nx = a11 * x + a12 * y;
    const Complex ny = a12 * x + a22 * y;
    x = nx;
    y = ny;
  }
  void solve(Complex& x, Complex& y) const {
    const double det = a11 * a22 - a12 * a12;
    const Complex nx = (a22 * x - a12 * y) / det;
    const Complex ny = (-a12 * x + a11 * y) / det;
    x = nx;
    y = ny;
  }
};

}  // namespace

ScalarField helmholtz_inverse(const ScalarField& f, AlphaParam alpha) {
  const double a2 = alpha.squared();
  return scale_modes(f, [a2](double k2) { return 1.0 / (1.0 + a2 * k2); });
}

VectorField helmholtz_inverse(const VectorField& u, AlphaParam alpha) {
  return {helmholtz_inverse(u.x, alpha), helmholtz_inverse(u.y, alpha)};
}

ScalarField helmholtz_apply(const ScalarField& f, AlphaParam alpha) {
  const double a2 = alpha.squared();
  return scale_modes(f, [a2](double k2) { return 1.0 + a2 * k2; });
}

VectorField helmholtz_apply(const VectorField& u, AlphaParam alpha) {
  return {helmholtz_apply(u.x, alpha), helmholtz_apply(u.y, alpha)};
}

VectorField leray_project(const VectorField& u) {
  const auto& g = u.grid();
  VectorField out = u;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double k2 = g.k_squared(ix, iy);
      if (k2 == 0.0) continue;
      const double kx = g.kx(ix), ky = g.ky(iy);
      const Complex kdotu = kx * u.x(ix, iy) + ky * u.y(ix, iy);
      out.x(ix, iy) -= kx * kdotu / k2;
      out.y(ix, iy) -= ky * kdotu / k2;
    }
  return out;
}

VectorField stokes_project(const VectorField& f, AlphaParam alpha) {
  const auto& g = f.grid();
  const double a2 = alpha.squared();
  VectorField out = f;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const double kx = g.kx(ix), ky = g.ky(iy);
      if (kx == 0.0 && ky == 0.0) continue;
      // w = A^{-1} (i k): the (1 - a^2 L)^{-1} grad direction for this mode.
      ModeMatrix a(kx, ky, a2);
      Complex wx(0.0, kx), wy(0.0, ky);
      a.solve(wx, wy);
      // Choose p so that k.(F - p w) = 0.
      const Complex kw = kx * wx + ky * wy;
      const Complex kf = kx * f.x(ix, iy) + ky * f.y(ix, iy);
      const Complex p = kf / kw;
      out.x(ix, iy) -= p * wx;
      out.y(ix, iy) -= p * wy;
    }
  return out;
}

VectorField deformation_helmholtz_apply(const VectorField& u, AlphaParam alpha) {
  const auto& g = u.grid();
  VectorField out = u;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy)
      ModeMatrix(g.kx(ix), g.ky(iy), alpha.squared()).apply(out.x(ix, iy), out.y(ix, iy));
  return out;
}

VectorField deformation_helmholtz_inverse(const VectorField& u, AlphaParam alpha) {
  const auto& g = u.grid();
  VectorField out = u;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy)
      ModeMatrix(g.kx(ix), g.ky(iy), alpha.squared()).solve(out.x(ix, iy), out.y(ix, iy));
  return out;
}

DirichletGrid1D::DirichletGrid1D(int n_interior) : n(n_interior) {
  if (n_interior < 3) throw std::invalid_argument("Dirichlet grid needs at least 3 interior points");
}

std::vector<double> helmholtz_solve_dirichlet_1d(const std::vector<double>& f,
                                                 AlphaParam alpha) {
  const int n = static_cast<int>(f.size());
  DirichletGrid1D grid(n);
  const double h = grid.h();
  const double off = -alpha.squared() / (h * h);
  const double diag = 1.0 - 2.0 * off;

  // Thomas algorithm; the matrix is symmetric, diagonally dominant.
  std::vector<double> cp(n), dp(n), w(n);
  cp[0] = off / diag;
  dp[0] = f[0] / diag;
  for (int i = 1; i < n; ++i) {
    const double m = diag - off * cp[i - 1];
    cp[i] = off / m;
    dp[i] = (f[i] - off * dp[i - 1]) / m;
  }
  w[n - 1] = dp[n - 1];
  for (int i = n - 2; i >= 0; --i) w[i] = dp[i] - cp[i] * w[i + 1];
  return w;
}

namespace {

std::vector<double> thomas(double sub, const std::vector<double>& diag, double sup,
                           const std::vector<double>& rhs) {
  const std::size_t n = rhs.size();
  std::vector<double> cp(n), dp(n), x(n);
  cp[0] = sup / diag[0];
  dp[0] = rhs[0] / diag[0];
  for (std::size_t i = 1; i < n; ++i) {
    const double m = diag[i] - sub * cp[i - 1];
    cp[i] = sup / m;
    dp[i] = (rhs[i] - sub * dp[i - 1]) / m;
  }
  x[n - 1] = dp[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = dp[i] - cp[i] * x[i + 1];
  return x;
}

}  // namespace

std::vector<double> helmholtz_solve_periodic_1d(const std::vector<double>& f, double length,
                                                AlphaParam alpha) {
  const std::size_t n = f.size();
  if (n < 3) throw std::invalid_argument("periodic grid needs at least 3 points");
  const double h = length / static_cast<double>(n);
  const double off = -alpha.squared() / (h * h);
  const double b = 1.0 - 2.0 * off;
  if (off == 0.0) return f;

  // A = T + u v^T with the corner entries moved into the rank-one term.
  const double gamma = -b;
  std::vector<double> diag(n, b);
  diag[0] = b - gamma;
  diag[n - 1] = b - off * off / gamma;
  std::vector<double> u(n, 0.0);
  u[0] = gamma;
  u[n - 1] = off;
  const std::vector<double> y = thomas(off, diag, off, f);
  const std::vector<double> z = thomas(off, diag, off, u);
  const double vy = y[0] + off / gamma * y[n - 1];
  const double vz = z[0] + off / gamma * z[n - 1];
  const double factor = vy / (1.0 + vz);
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = y[i] - factor * z[i];
  return x;
}

}  // namespace alfl
