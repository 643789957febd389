#include <doctest.h>

#include <cmath>

#include "alpha_fluids/helmholtz.hpp"
#include "support.hpp"

using namespace alfl;
using namespace testsupport;

namespace {

// Dense Gaussian elimination with partial pivoting.
std::vector<double> dense_solve(std::vector<std::vector<double>> a, std::vector<double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(a[r][c]) > std::abs(a[p][c])) p = r;
    std::swap(a[c], a[p]);
    std::swap(b[c], b[p]);
    for (std::size_t r = c + 1; r < n; ++r) {
      const double m = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) a[r][k] -= m * a[c][k];
      b[r] -= m * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t k = i + 1; k < n; ++k) s -= a[i][k] * x[k];
    x[i] = s / a[i][i];
  }
  return x;
}

double div_norm(const VectorField& u) { return divergence(u).max_abs(); }

}  // namespace

TEST_CASE("helmholtz inverse") {
  auto g = make_grid(32, 32);
  auto f = forward(RealField::sample(g, [](double x, double) { return std::cos(x); }));
  CHECK(max_error_vs(helmholtz_inverse(f, AlphaParam(1.0)), [](double x, double) { return 0.5 * std::cos(x); }) < 1e-15);

  auto c = forward(RealField::sample(g, [](double, double) { return 1.75; }));
  CHECK(max_abs_diff(helmholtz_inverse(c, AlphaParam(3.0)), c) < 1e-15);

  SplitMix64 rng(3);
  for (double a : {0.0, 0.2, 1.0}) {
    auto r = random_scalar(g, rng, 10);
    const AlphaParam al(a);
    auto back = helmholtz_inverse(r, al) - a * a * laplacian(helmholtz_inverse(r, al));
    CHECK(max_abs_diff(back, r) < 1e-12);
    CHECK(max_abs_diff(helmholtz_apply(helmholtz_inverse(r, al), al), r) < 1e-12);
    // commutes with differentiation
    CHECK(max_abs_diff(dx(helmholtz_inverse(r, al)), helmholtz_inverse(dx(r), al)) < 1e-12);
  }
}

TEST_CASE("leray projection") {
  auto g = make_grid(32, 32);
  auto phi = forward(RealField::sample(g, [](double x, double y) { return std::sin(x) * std::cos(y); }));
  CHECK(leray_project(gradient(phi)).max_abs() < 1e-15);

  VectorField shear(forward(RealField::sample(g, [](double, double y) { return std::sin(y); })), ScalarField(g));
  CHECK(max_abs_diff(leray_project(shear), shear) < 1e-15);

  auto c2 = forward(RealField::sample(g, [](double x, double) { return std::cos(2 * x); }));
  CHECK(max_abs_diff(leray_project(shear + gradient(c2)), shear) < 1e-14);

  SplitMix64 rng(9);
  auto u = random_vector(g, rng, 12);
  u.x.mode(0, 0) = 0.3;
  auto p = leray_project(u);
  CHECK(div_norm(p) < 1e-12);
  CHECK(max_abs_diff(leray_project(p), p) < 1e-12);
  CHECK(p.x.mode(0, 0) == Complex(0.3));
}

TEST_CASE("stokes projection") {
  auto g = make_grid(32, 32);
  SplitMix64 rng(21);
  for (double a : {0.0, 0.5, 1.3}) {
    const AlphaParam al(a);
    auto f = random_vector(g, rng, 12);
    auto w = stokes_project(f, al);
    CHECK(div_norm(w) < 1e-11);
    CHECK(max_abs_diff(stokes_project(w, al), w) < 1e-12);
    CHECK(max_abs_diff(w, leray_project(f)) < 1e-12);
    const double orth = inner_product_alpha(w, f - w, al);
    CHECK(std::abs(orth) < 1e-11 * inner_product_alpha(f, f, al));

    auto s = random_solenoidal(g, rng, 8);
    CHECK(max_abs_diff(stokes_project(s, al), s) < 1e-12);

    auto c = forward(RealField::sample(g, [](double x, double) { return std::cos(x); }));
    auto complement = deformation_helmholtz_inverse(gradient(c), al);
    CHECK(stokes_project(complement, al).max_abs() < 1e-15);
    CHECK(max_abs_diff(deformation_helmholtz_apply(complement, al), gradient(c)) < 1e-14);
  }
}

TEST_CASE("dirichlet helmholtz solve") {
  SUBCASE("eigenfunction") {
    double prev = 0.0;
    for (int n : {31, 63, 127}) {
      DirichletGrid1D grid(n);
      std::vector<double> f(n);
      for (int i = 0; i < n; ++i) f[i] = (1.0 + kPi * kPi) * std::sin(kPi * grid.x(i));
      auto w = helmholtz_solve_dirichlet_1d(f, AlphaParam(1.0));
      double err = 0.0;
      for (int i = 0; i < n; ++i) err = std::max(err, std::abs(w[i] - std::sin(kPi * grid.x(i))));
      CHECK(err < 0.2 * grid.h() * grid.h() * 10.0);
      if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
      prev = err;
    }
  }
  SUBCASE("zero") {
    auto w = helmholtz_solve_dirichlet_1d(std::vector<double>(10, 0.0), AlphaParam(1.0));
    for (double v : w) CHECK(v == 0.0);
  }
  SUBCASE("dense oracle and contraction") {
    SplitMix64 rng(4);
    const int n = 60;
    for (double a : {0.1, 1.0}) {
      std::vector<double> f(n);
      for (auto& v : f) v = rng.uniform(-1.0, 1.0);
      const double h = 1.0 / (n + 1);
      std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
      for (int i = 0; i < n; ++i) {
        m[i][i] = 1.0 + 2.0 * a * a / (h * h);
        if (i > 0) m[i][i - 1] = -a * a / (h * h);
        if (i + 1 < n) m[i][i + 1] = -a * a / (h * h);
      }
      auto ref = dense_solve(m, f);
      auto w = helmholtz_solve_dirichlet_1d(f, AlphaParam(a));
      double err = 0.0, nw = 0.0, nf = 0.0;
      for (int i = 0; i < n; ++i) {
        err = std::max(err, std::abs(w[i] - ref[i]));
        nw += w[i] * w[i];
        nf += f[i] * f[i];
      }
      CHECK(err < 1e-12);
      CHECK(nw <= nf);
    }
  }
  CHECK_THROWS(helmholtz_solve_dirichlet_1d(std::vector<double>(2, 1.0), AlphaParam(1.0)));
}

TEST_CASE("periodic helmholtz solve matches dense oracle") {
  SplitMix64 rng(8);
  const int n = 40;
  const double len = kTwoPi;
  std::vector<double> f(n);
  for (auto& v : f) v = rng.uniform(-1.0, 1.0);
  const double h = len / n;
  std::vector<std::vector<double>> m(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    m[i][i] = 1.0 + 2.0 / (h * h);
    m[i][(i + 1) % n] = -1.0 / (h * h);
    m[i][(i + n - 1) % n] = -1.0 / (h * h);
  }
  auto ref = dense_solve(m, f);
  auto w = helmholtz_solve_periodic_1d(f, len, AlphaParam(1.0));
  for (int i = 0; i < n; ++i) CHECK(w[i] == doctest::Approx(ref[i]).epsilon(1e-12));
}
