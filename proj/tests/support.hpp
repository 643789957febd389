#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "alpha_fluids/rng.hpp"
#include "alpha_fluids/spectral.hpp"

namespace testsupport {

using namespace alfl;

/// Random real trigonometric polynomial with |jx|, |jy| <= kmax, sampled in
/// real space so the coefficients are not produced by the code under test.
inline RealField random_real(const TorusGrid2D& g, SplitMix64& rng, int kmax) {
  struct Term {
    double kx, ky, a, b;
  };
  std::vector<Term> terms;
  for (int jx = 0; jx <= kmax; ++jx)
    for (int jy = -kmax; jy <= kmax; ++jy) {
      if (jx == 0 && jy < 0) continue;
      const double a = rng.uniform(-1.0, 1.0);
      const double b = (jx == 0 && jy == 0) ? 0.0 : rng.uniform(-1.0, 1.0);
      terms.push_back({kTwoPi / g.lx() * jx, kTwoPi / g.ly() * jy, a, b});
    }
  return RealField::sample(g, [&](double x, double y) {
    double s = 0.0;
    for (const auto& t : terms) {
      const double ph = t.kx * x + t.ky * y;
      s += t.a * std::cos(ph) + t.b * std::sin(ph);
    }
    return s;
  });
}

inline ScalarField random_scalar(const TorusGrid2D& g, SplitMix64& rng, int kmax) {
  return forward(random_real(g, rng, kmax));
}

inline VectorField random_vector(const TorusGrid2D& g, SplitMix64& rng, int kmax) {
  return {random_scalar(g, rng, kmax), random_scalar(g, rng, kmax)};
}

/// Divergence-free: perpendicular gradient of a random stream function.
inline VectorField random_solenoidal(const TorusGrid2D& g, SplitMix64& rng, int kmax) {
  return perp_gradient(random_scalar(g, rng, kmax));
}

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline double max_abs_diff(const ScalarField& a, const ScalarField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    m = std::max(m, std::abs(a.coeffs()[i] - b.coeffs()[i]));
  return m;
}

inline double max_abs_diff(const VectorField& a, const VectorField& b) {
  return std::max(max_abs_diff(a.x, b.x), max_abs_diff(a.y, b.y));
}

/// Largest deviation between a field's real-space samples and f(x, y).
template <class F>
double max_error_vs(const ScalarField& s, F&& f) {
  const RealField r = inverse(s);
  const RealField ref = RealField::sample(s.grid(), f);
  return max_abs_diff(r.values(), ref.values());
}

}  // namespace testsupport
