#include <doctest.h>

#include <cmath>

#include "alpha_fluids/geometry.hpp"
#include "alpha_fluids/jacobi.hpp"
#include "support.hpp"

using namespace alfl;
using namespace testsupport;

namespace {

VectorField shear(const TorusGrid2D& g) {
  return {forward(RealField::sample(g, [](double, double y) { return std::sin(y); })), ScalarField(g)};
}

}  // namespace

TEST_CASE("zero Jacobi field stays zero") {
  auto g = make_grid(16, 16);
  SplitMix64 rng(1);
  auto u0 = random_solenoidal(g, rng, 3);
  u0 *= 0.1 / u0.max_abs();
  auto run = jacobi_evolve(u0, VectorField(g), VectorField(g), 0.1, 0.01, AlphaParam(0.3));
  CHECK(run.samples.size() == 11);
  CHECK(run.displacement.max_abs() == 0.0);
  CHECK(run.velocity_variation.max_abs() == 0.0);
  CHECK(run.samples.back().t == doctest::Approx(0.1));
}

TEST_CASE("steady shear") {
  auto g = make_grid(32, 32);
  const AlphaParam al(0.4);
  const auto u = shear(g);
  SUBCASE("tangential displacement is preserved") {
    auto run = jacobi_evolve(u, u, VectorField(g), 1.0, 0.01, al);
    const double n0 = run.samples.front().displacement_norm;
    for (const auto& s : run.samples) CHECK(std::abs(s.displacement_norm - n0) < 1e-8 * n0);
  }
  SUBCASE("tangential velocity variation grows the displacement linearly") {
    auto run = jacobi_evolve(u, VectorField(g), u, 1.0, 0.01, al);
    const double n0 = std::sqrt(inner_product_alpha(u, u, al));
    for (const auto& s : run.samples) {
      CHECK(std::abs(s.velocity_variation_norm - n0) < 1e-10 * n0);
      CHECK(std::abs(s.displacement_norm - s.t * n0) < 1e-10 * n0);
    }
  }
}

TEST_CASE("velocity variation matches finite differences of the nonlinear flow") {
  auto g = make_grid(32, 32);
  const AlphaParam al(0.3);
  SplitMix64 rng(77);
  auto u0 = random_solenoidal(g, rng, 3);
  u0 *= 0.1 / u0.max_abs();
  const auto v = random_solenoidal(g, rng, 3);
  const double T = 0.5, dt = 0.01;
  auto run = jacobi_evolve(u0, VectorField(g), v, T, dt, al);

  auto solve = [&](const VectorField& init) {
    auto st = VorticityState::from_velocity(init, al);
    for (int n = 0; n < 50; ++n) st = step_rk4(st, dt, DissipationMode::inviscid());
    return st.velocity();
  };
  const auto base = solve(u0);
  auto error = [&](double eps) {
    VectorField fd = solve(u0 + eps * v) - base;
    fd *= 1.0 / eps;
    return max_abs_diff(fd, run.velocity_variation);
  };
  const double e1 = error(1e-4), e2 = error(5e-5);
  CHECK(e1 < 1e-3 * run.velocity_variation.max_abs());
  CHECK(e1 / e2 == doctest::Approx(2.0).epsilon(0.3));
}

TEST_CASE("displacement grows along the shear in a negatively curved plane") {
  auto g = make_grid(32, 32);
  const AlphaParam al(0.0);
  const auto u = shear(g);
  const auto y = stream_mode(g, {1, 0});
  CHECK(sectional_curvature(u, y, al) < 0.0);
  auto run = jacobi_evolve(u, VectorField(g), y, 3.0, 0.01, al);
  std::vector<double> slope;
  for (std::size_t i = 100; i + 50 < run.samples.size(); i += 50) {
    const auto& a = run.samples[i];
    const auto& b = run.samples[i + 50];
    slope.push_back((std::log(b.displacement_norm) - std::log(a.displacement_norm)) / (b.t - a.t));
  }
  REQUIRE(slope.size() == 4);
  for (double s : slope) CHECK(s > 0.0);
  CHECK(slope.back() > 0.5 * slope.front());
}

TEST_CASE("input validation") {
  auto g = make_grid(16, 16);
  const auto u = shear(g);
  VectorField bad = u;
  bad.x = forward(RealField::sample(g, [](double x, double) { return std::sin(x); }));
  CHECK_THROWS_AS(jacobi_evolve(u, bad, VectorField(g), 0.1, 0.01, AlphaParam(0.1)), std::invalid_argument);
  CHECK_THROWS_AS(jacobi_evolve(u, u, VectorField(g), 0.1, 0.0, AlphaParam(0.1)), std::invalid_argument);
}
