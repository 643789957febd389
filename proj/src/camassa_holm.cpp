#include "alpha_fluids/camassa_holm.hpp"

#include <cmath>

// Boost 1.74's pchip.hpp calls isnan unqualified.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <string>

#include "alpha_fluids/euler_alpha.hpp"
#include "alpha_fluids/geometry.hpp"
#include "alpha_fluids/helmholtz.hpp"

namespace alfl {

namespace {

using Vec = std::vector<double>;

Vec add(Vec a, const Vec& b, double s = 1.0) {
  for (std::size_t i = 0; i < a.size(); ++i) a[i] += s * b[i];
  return a;
}

Vec times(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

void require_size(const CHGrid& g, const Vec& v) {
  if (static_cast<int>(v.size()) != g.n) throw std::invalid_argument("sample count does not match the grid");
}

// Monotone cubic through (0, 0), (p_i, v_i), (1, 0).
boost::math::interpolators::pchip<Vec> interval_interpolant(const Vec& p, const Vec& v) {
  Vec xs{0.0}, ys{0.0};
  xs.insert(xs.end(), p.begin(), p.end());
  ys.insert(ys.end(), v.begin(), v.end());
  xs.push_back(1.0);
  ys.push_back(0.0);
  return boost::math::interpolators::pchip<Vec>(std::move(xs), std::move(ys));
}

void check_monotone(const Vec& eta, double t) {
  double prev = 0.0;
  for (std::size_t i = 0; i <= eta.size(); ++i) {
    const double cur = i < eta.size() ? eta[i] : 1.0;
    if (!(cur > prev))
      throw MonotonicityError("particles " + std::to_string(i) + " and " + std::to_string(i + 1) +
                                  " crossed after t = " + std::to_string(t),
                              t);
    prev = cur;
  }
}

}  // namespace

CHGrid CHGrid::dirichlet(int n_interior) {
  if (n_interior < 3) throw std::invalid_argument("need at least 3 interior nodes");
  return {Boundary::dirichlet, n_interior, 1.0};
}

CHGrid CHGrid::periodic(int n, double length) {
  if (n < 4 || n % 2 != 0 || !(length > 0.0))
    throw std::invalid_argument("need an even n >= 4 and a positive length");
  return {Boundary::periodic, n, length};
}

CHState::CHState(CHGrid g, std::vector<double> values, double time) : grid(g), u(std::move(values)), t(time) {
  require_size(grid, u);
  for (double v : u)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite sample");
}

CHLagrangianState CHLagrangianState::from_eulerian(const CHState& u0) {
  if (u0.grid.bc != Boundary::dirichlet) throw std::invalid_argument("the spray form is implemented for Dirichlet data");
  CHLagrangianState s{u0.grid, Vec(u0.grid.n), u0.u, u0.t};
  for (int i = 0; i < u0.grid.n; ++i) s.eta[i] = u0.grid.x(i);
  return s;
}

Vec diff1(const CHGrid& g, const Vec& u) {
  require_size(g, u);
  if (g.bc == Boundary::periodic)
    return periodic_multiplier_1d(u, g.length, [](double k) { return Complex(0.0, k); });
  const int n = g.n;
  auto at = [&](int i) { return i < 0 || i >= n ? 0.0 : u[i]; };
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = (at(i + 1) - at(i - 1)) / (2 * g.h());
  return out;
}

Vec diff2(const CHGrid& g, const Vec& u) {
  require_size(g, u);
  if (g.bc == Boundary::periodic)
    return periodic_multiplier_1d(u, g.length, [](double k) { return Complex(-k * k); });
  const int n = g.n;
  auto at = [&](int i) { return i < 0 || i >= n ? 0.0 : u[i]; };
  const double h2 = g.h() * g.h();
  Vec out(n);
  for (int i = 0; i < n; ++i) out[i] = (at(i + 1) - 2 * u[i] + at(i - 1)) / h2;
  return out;
}

Vec ch_helmholtz_inverse(const CHGrid& g, const Vec& f) {
  require_size(g, f);
  if (g.bc == Boundary::dirichlet) return helmholtz_solve_dirichlet_1d(f, AlphaParam(1.0));
  return periodic_multiplier_1d(f, g.length, [](double k) { return Complex(1.0 / (1.0 + k * k)); });
}

Vec ch_rhs_eulerian(const CHState& s) {
  const Vec m = add(s.u, diff2(s.grid, s.u), -1.0);
  const Vec r = add(diff1(s.grid, times(s.u, m)), times(m, diff1(s.grid, s.u)));
  Vec out = ch_helmholtz_inverse(s.grid, r);
  for (double& v : out) v = -v;
  return out;
}

CHState ch_step_rk4(const CHState& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  struct U {
    Vec v;
    void axpy(double a, const U& o) { v = add(std::move(v), o.v, a); }
  };
  const U next = rk4_step(U{s.u}, dt, [&](const U& y) {
    return U{ch_rhs_eulerian(CHState(s.grid, y.v, s.t))};
  });
  for (double v : next.v)
    if (!std::isfinite(v)) throw BlowUpError("Camassa-Holm state blew up after t = " + std::to_string(s.t), s.t);
  return CHState(s.grid, next.v, s.t + dt);
}

double ch_energy(const CHState& s) {
  const auto& g = s.grid;
  const double h = g.h();
  double e = 0.0;
  for (double v : s.u) e += v * v;
  double d = 0.0;
  if (g.bc == Boundary::periodic) {
    for (double v : diff1(g, s.u)) d += v * v;
  } else {
    const int n = g.n;
    auto at = [&](int i) { return i < 0 || i >= n ? 0.0 : s.u[i]; };
    for (int i = -1; i < n; ++i) {
      const double s1 = (at(i + 1) - at(i)) / h;
      d += s1 * s1;
    }
  }
  return h * (e + d);
}

double ch_inner(const CHGrid& g, const Vec& u, const Vec& v) {
  const Vec av = add(v, diff2(g, v), -1.0);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * av[i];
  return g.h() * s;
}

Vec frakU_1d(const CHGrid& g, const Vec& u, const Vec& v) {
  require_size(g, v);
  const Vec ux = diff1(g, u), vx = diff1(g, v);
  Vec f(g.n);
  for (int i = 0; i < g.n; ++i) f[i] = u[i] * v[i] + 0.5 * ux[i] * vx[i];
  return ch_helmholtz_inverse(g, diff1(g, f));
}

double ch_sectional_curvature(const CHGrid& g, const Vec& x, const Vec& y) {
  const double xx = ch_inner(g, x, x), yy = ch_inner(g, y, y), xy = ch_inner(g, x, y);
  const double gram = xx * yy - xy * xy;
  if (!(gram > 1e-12 * xx * yy)) throw DegeneratePlane("sectional curvature of a degenerate plane");

  auto D = [&](const Vec& a, const Vec& b) { return times(a, diff1(g, b)); };
  auto N = [&](const Vec& a, const Vec& b) { return frakU_1d(g, a, b); };
  const Vec br = add(D(x, y), D(y, x), -1.0);
  const Vec nxy = N(x, y), nyy = N(y, y);
  Vec r = add(N(y, nxy), N(x, nyy), -1.0);
  r = add(r, N(br, y));
  r = add(r, D(y, nxy));
  r = add(r, N(x, D(y, y)), -1.0);
  r = add(r, N(y, D(x, y)));
  r = add(r, D(x, nyy), -1.0);
  return -ch_inner(g, r, x) / gram;
}

CHState ch_to_eulerian(const CHLagrangianState& s) {
  const auto u = interval_interpolant(s.eta, s.etadot);
  Vec out(s.grid.n);
  for (int i = 0; i < s.grid.n; ++i) out[i] = u(s.grid.x(i));
  return CHState(s.grid, std::move(out), s.t);
}

CHLagrangianState ch_spray_step(const CHLagrangianState& s, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (s.grid.bc != Boundary::dirichlet) throw std::invalid_argument("the spray form is implemented for Dirichlet data");
  check_monotone(s.eta, s.t);
  const CHGrid& g = s.grid;
  struct Phase {
    Vec eta, etadot;
    void axpy(double a, const Phase& o) {
      eta = add(std::move(eta), o.eta, a);
      etadot = add(std::move(etadot), o.etadot, a);
    }
  };
  auto spray = [&](const Phase& p) {
    check_monotone(p.eta, s.t);
    const auto interp = interval_interpolant(p.eta, p.etadot);
    Vec u(g.n);
    for (int i = 0; i < g.n; ++i) u[i] = interp(g.x(i));
    Vec grid_nodes(g.n);
    for (int i = 0; i < g.n; ++i) grid_nodes[i] = g.x(i);
    const auto force = interval_interpolant(grid_nodes, frakU_1d(g, u, u));
    Vec acc(g.n);
    for (int i = 0; i < g.n; ++i) acc[i] = -force(p.eta[i]);
    return Phase{p.etadot, std::move(acc)};
  };
  Phase next = rk4_step(Phase{s.eta, s.etadot}, dt, spray);
  check_monotone(next.eta, s.t);
  return {g, std::move(next.eta), std::move(next.etadot), s.t + dt};
}

double sup_norm_difference(const CHState& a, const CHState& b) {
  if (!(a.grid == b.grid)) throw std::invalid_argument("grids differ");
  double m = 0.0;
  for (int i = 0; i < a.grid.n; ++i) m = std::max(m, std::abs(a.u[i] - b.u[i]));
  return m;
}

}  // namespace alfl
