#include <doctest.h>

#include <cmath>
#include <vector>

#include "alpha_fluids/camassa_holm.hpp"
#include "alpha_fluids/geometry.hpp"
#include "alpha_fluids/rng.hpp"

using namespace alfl;

namespace {

using Vec = std::vector<double>;

template <class F>
double max_error(const CHGrid& g, const Vec& v, F&& f) {
  double e = 0.0;
  for (int i = 0; i < g.n; ++i) e = std::max(e, std::abs(v[i] - f(g.x(i))));
  return e;
}

Vec random_samples(const CHGrid& g, SplitMix64& rng) {
  Vec v(g.n);
  for (double& x : v) x = rng.uniform(-1.0, 1.0);
  return v;
}

// Dense Gaussian elimination with partial pivoting.
Vec dense_solve(std::vector<Vec> a, Vec b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double f = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= f * a[c][k];
      b[r] -= f * b[c];
    }
  }
  Vec x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

Vec dense_apply(const std::vector<Vec>& a, const Vec& x) {
  Vec y(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t k = 0; k < x.size(); ++k) y[i] += a[i][k] * x[k];
  return y;
}

}  // namespace

TEST_CASE("Eulerian right side") {
  const auto zero = CHState(CHGrid::periodic(32), Vec(32, 0.0));
  for (double v : ch_rhs_eulerian(zero)) CHECK(v == 0.0);

  auto periodic_error = [](int n) {
    const auto s = CHState::sample(CHGrid::periodic(n), [](double x) { return std::sin(x); });
    return max_error(s.grid, ch_rhs_eulerian(s), [](double x) { return -0.6 * std::sin(2 * x); });
  };
  // spectral derivatives are exact on this trigonometric polynomial
  CHECK(periodic_error(16) < 1e-14);
  CHECK(periodic_error(128) < 1e-14);

  // Dirichlet: self convergence against a grid four times finer
  auto error_vs_fine = [](int n) {
    auto f = [](double x) { return std::sin(kPi * x); };
    const auto coarse = CHState::sample(CHGrid::dirichlet(n), f);
    const auto fine = CHState::sample(CHGrid::dirichlet(4 * (n + 1) - 1), f);
    const Vec rc = ch_rhs_eulerian(coarse), rf = ch_rhs_eulerian(fine);
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(rc[i] - rf[4 * (i + 1) - 1]));
    return e;
  };
  const double d1 = error_vs_fine(31), d2 = error_vs_fine(63);
  CHECK(d1 / d2 == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("energy") {
  CHECK(ch_energy(CHState(CHGrid::dirichlet(16), Vec(16, 0.0))) == 0.0);
  const auto s = CHState::sample(CHGrid::dirichlet(511), [](double x) { return std::sin(kPi * x); });
  CHECK(ch_energy(s) == doctest::Approx((1 + kPi * kPi) / 2).epsilon(1e-5));
  CHECK(ch_energy(s) == doctest::Approx(ch_inner(s.grid, s.u, s.u)).epsilon(1e-13));
  const auto p = CHState::sample(CHGrid::periodic(32), [](double x) { return std::sin(x); });
  CHECK(ch_energy(p) == doctest::Approx(2 * kPi).epsilon(1e-14));
}

TEST_CASE("energy is conserved by the Eulerian integration") {
  auto drift = [](CHState s, double dt, int steps) {
    const double e0 = ch_energy(s);
    for (int i = 0; i < steps; ++i) s = ch_step_rk4(s, dt);
    return std::abs(ch_energy(s) - e0) / e0;
  };
  CHECK(drift(CHState::sample(CHGrid::dirichlet(128), [](double x) { return std::sin(kPi * x) + 0.3 * std::sin(2 * kPi * x); }), 1e-3, 200) < 1e-10);
  CHECK(drift(CHState::sample(CHGrid::periodic(128), [](double x) { return std::sin(x) + 0.2 * std::cos(3 * x); }), 1e-3, 200) < 1e-10);
}

TEST_CASE("frakU_1d") {
  auto error = [](int n) {
    const auto g = CHGrid::periodic(n);
    Vec s(n);
    for (int i = 0; i < n; ++i) s[i] = std::sin(g.x(i));
    return max_error(g, frakU_1d(g, s, s), [](double x) { return 0.1 * std::sin(2 * x); });
  };
  CHECK(error(16) < 1e-15);
  CHECK(error(128) < 1e-15);

  SplitMix64 rng(5);
  for (const auto& g : {CHGrid::dirichlet(40), CHGrid::periodic(40)}) {
    const Vec u = random_samples(g, rng), v = random_samples(g, rng), w = random_samples(g, rng);
    for (double x : frakU_1d(g, u, Vec(g.n, 0.0))) CHECK(x == 0.0);
    const Vec uv = frakU_1d(g, u, v), vu = frakU_1d(g, v, u);
    Vec upw(g.n);
    for (int i = 0; i < g.n; ++i) upw[i] = u[i] - 2.5 * w[i];
    const Vec lin = frakU_1d(g, upw, v), wv = frakU_1d(g, w, v);
    for (int i = 0; i < g.n; ++i) {
      CHECK(std::abs(uv[i] - vu[i]) < 1e-11);
      CHECK(std::abs(lin[i] - (uv[i] - 2.5 * wv[i])) < 1e-11);
    }
  }

  // Dirichlet against dense matrices
  const auto g = CHGrid::dirichlet(30);
  const int n = g.n;
  const double h = g.h();
  std::vector<Vec> d1(n, Vec(n, 0.0)), a(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i) {
    if (i + 1 < n) d1[i][i + 1] = 1 / (2 * h), a[i][i + 1] = -1 / (h * h);
    if (i > 0) d1[i][i - 1] = -1 / (2 * h), a[i][i - 1] = -1 / (h * h);
    a[i][i] = 1 + 2 / (h * h);
  }
  const Vec u = random_samples(g, rng), v = random_samples(g, rng);
  const Vec ux = dense_apply(d1, u), vx = dense_apply(d1, v);
  Vec f(n);
  for (int i = 0; i < n; ++i) f[i] = u[i] * v[i] + 0.5 * ux[i] * vx[i];
  const Vec ref = dense_solve(a, dense_apply(d1, f));
  const Vec got = frakU_1d(g, u, v);
  for (int i = 0; i < n; ++i) CHECK(std::abs(got[i] - ref[i]) < 1e-10);
}

TEST_CASE("sectional curvature") {
  const auto g = CHGrid::periodic(128);
  Vec x(g.n), y(g.n);
  for (int i = 0; i < g.n; ++i) x[i] = std::sin(g.x(i)), y[i] = std::cos(2 * g.x(i));
  const double K = ch_sectional_curvature(g, x, y);
  CHECK(std::isfinite(K));
  Vec x2 = x;
  for (double& v : x2) v *= 2;
  CHECK(ch_sectional_curvature(g, x2, y) == doctest::Approx(K).epsilon(1e-9));
  CHECK(ch_sectional_curvature(g, y, x) == doctest::Approx(K).epsilon(1e-9));
  CHECK_THROWS_AS(ch_sectional_curvature(g, x, x), DegeneratePlane);

  auto at = [](int n) {
    const auto gg = CHGrid::periodic(n);
    Vec a(n), b(n);
    for (int i = 0; i < n; ++i) a[i] = std::sin(gg.x(i)), b[i] = std::cos(2 * gg.x(i));
    return ch_sectional_curvature(gg, a, b);
  };
  // band-limited data: refinement changes the value only at roundoff level
  const double k256 = at(256), k512 = at(512), k1024 = at(1024);
  CHECK(std::abs(k256 - k512) < 1e-13 * std::abs(k512));
  CHECK(std::abs(k512 - k1024) < 1e-13 * std::abs(k512));
  CHECK(k512 == doctest::Approx(K).epsilon(1e-12));

  const auto gd = CHGrid::dirichlet(63);
  Vec p(gd.n), q(gd.n);
  for (int i = 0; i < gd.n; ++i) p[i] = std::sin(kPi * gd.x(i)), q[i] = std::sin(2 * kPi * gd.x(i));
  CHECK(std::isfinite(ch_sectional_curvature(gd, p, q)));
}

TEST_CASE("Lagrangian spray") {
  const auto g = CHGrid::dirichlet(255);
  SUBCASE("zero velocity keeps the identity") {
    auto s = CHLagrangianState::from_eulerian(CHState(g, Vec(g.n, 0.0)));
    const Vec eta0 = s.eta;
    for (int i = 0; i < 10; ++i) s = ch_spray_step(s, 0.01);
    CHECK(s.eta == eta0);
  }
  SUBCASE("agrees with the Eulerian integration") {
    auto e = CHState::sample(g, [](double x) { return 0.1 * std::sin(kPi * x); });
    auto l = CHLagrangianState::from_eulerian(e);
    const double dt = 1e-2;
    for (int i = 0; i < 50; ++i) {
      e = ch_step_rk4(e, dt);
      l = ch_spray_step(l, dt);
    }
    CHECK(l.t == doctest::Approx(0.5));
    CHECK(sup_norm_difference(ch_to_eulerian(l), e) < 1e-4);
  }
  SUBCASE("geodesic homogeneity") {
    const auto u0 = CHState::sample(g, [](double x) { return 0.1 * std::sin(kPi * x); });
    auto u2 = u0;
    for (double& v : u2.u) v *= 2;
    auto a = CHLagrangianState::from_eulerian(u2), b = CHLagrangianState::from_eulerian(u0);
    for (int i = 0; i < 20; ++i) a = ch_spray_step(a, 0.01);
    for (int i = 0; i < 20; ++i) b = ch_spray_step(b, 0.02);
    double d = 0.0;
    for (int i = 0; i < g.n; ++i) d = std::max(d, std::abs(a.eta[i] - b.eta[i]));
    CHECK(d < 1e-12);
  }
  SUBCASE("particle crossing is detected") {
    auto s = CHLagrangianState::from_eulerian(CHState(g, Vec(g.n, 0.0)));
    std::swap(s.eta[3], s.eta[4]);
    CHECK_THROWS_AS(ch_spray_step(s, 0.01), MonotonicityError);
  }
  CHECK_THROWS(CHLagrangianState::from_eulerian(CHState(CHGrid::periodic(16), Vec(16, 0.0))));
}
