#include "alpha_fluids/flow_map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "alpha_fluids/parallel.hpp"

namespace alfl {

FlowMap FlowMap::identity(int m, double lx, double ly) {
  if (m < 2) throw std::invalid_argument("flow map lattice needs m >= 2");
  FlowMap f;
  f.m = m;
  f.lx = lx;
  f.ly = ly;
  f.reference.resize(static_cast<std::size_t>(m) * m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) f.reference[f.index(i, j)] = {lx * i / m, ly * j / m};
  f.positions = f.reference;
  return f;
}

FlowMap FlowMap::subsample(int coarse) const {
  if (coarse < 2 || m % coarse != 0)
    throw std::invalid_argument("subsample: lattice " + std::to_string(coarse) + " does not divide " + std::to_string(m));
  const int stride = m / coarse;
  FlowMap f = identity(coarse, lx, ly);
  f.t = t;
  for (int i = 0; i < coarse; ++i)
    for (int j = 0; j < coarse; ++j) f.positions[f.index(i, j)] = positions[index(i * stride, j * stride)];
  return f;
}

Vec2 FlowMap::wrapped(std::size_t k) const {
  const Vec2 p = positions[k];
  double x = std::fmod(p.x, lx), y = std::fmod(p.y, ly);
  if (x < 0) x += lx;
  if (y < 0) y += ly;
  return {x, y};
}

// ---------------------------------------------------------------------------

PointEvaluator::PointEvaluator(const VectorField& u, double rel_tol) : grid_(u.grid()) {
  build(u.x, &u.y, rel_tol);
}

PointEvaluator::PointEvaluator(const ScalarField& f, double rel_tol) : grid_(f.grid()) {
  build(f, nullptr, rel_tol);
}

void PointEvaluator::build(const ScalarField& a, const ScalarField* b, double rel_tol) {
  const auto& g = grid_;
  double scale = a.max_abs();
  if (b) scale = std::max(scale, b->max_abs());
  const double thresh2 = rel_tol * scale * rel_tol * scale;
  for (int ix = 0; ix < g.nx(); ++ix)
    for (int iy = 0; iy < g.ny(); ++iy) {
      const int jx = g.mode_x(ix), jy = g.mode_y(iy);
      const Complex ca = a(ix, iy);
      const Complex cb = b ? (*b)(ix, iy) : Complex(0.0);
      const double mag2 = std::max(std::norm(ca), std::norm(cb));
      if (mag2 == 0.0 || mag2 <= thresh2) continue;
      double weight;
      if (g.is_nyquist(ix, iy) || (jx == 0 && jy == 0)) {
        weight = 1.0;
      } else if (jx > 0 || (jx == 0 && jy > 0)) {
        weight = 2.0;  // folded with the conjugate mode
      } else {
        continue;
      }
      if (rows_.empty() || rows_.back().jx != jx) rows_.push_back({jx, modes_.size(), modes_.size()});
      modes_.push_back({jx, jy, weight * ca, weight * cb});
      ++rows_.back().end;
      jx_max_ = std::max(jx_max_, std::abs(jx));
      jy_max_ = std::max(jy_max_, std::abs(jy));
    }
}

template <class Out>
void PointEvaluator::evaluate(const std::vector<Vec2>& points, int threads, Out&& out) const {
  const double kx1 = kTwoPi / grid_.lx(), ky1 = kTwoPi / grid_.ly();
  const int wx = 2 * jx_max_ + 1, wy = 2 * jy_max_ + 1;
  parallel_blocks(points.size(), threads, [&](std::size_t begin, std::size_t end) {
    std::vector<Complex> ex(wx), ey(wy);
    for (std::size_t p = begin; p < end; ++p) {
      // e^{i j k1 x} for |j| <= jmax by repeated multiplication
      const Complex bx = std::polar(1.0, kx1 * points[p].x);
      const Complex by = std::polar(1.0, ky1 * points[p].y);
      ex[jx_max_] = 1.0;
      ey[jy_max_] = 1.0;
      for (int j = 1; j <= jx_max_; ++j) {
        ex[jx_max_ + j] = ex[jx_max_ + j - 1] * bx;
        ex[jx_max_ - j] = std::conj(ex[jx_max_ + j]);
      }
      for (int j = 1; j <= jy_max_; ++j) {
        ey[jy_max_ + j] = ey[jy_max_ + j - 1] * by;
        ey[jy_max_ - j] = std::conj(ey[jy_max_ + j]);
      }
      // Row sums over jy first, then one multiplication by the x phase per
      // row.  Complex products are spelled out; std::complex multiplication
      // goes through the slow NaN-recovering path.
      double sx = 0.0, sy = 0.0;
      for (const Row& r : rows_) {
        double axr = 0.0, axi = 0.0, ayr = 0.0, ayi = 0.0;
        for (std::size_t k = r.begin; k < r.end; ++k) {
          const Mode& m = modes_[k];
          const double er = ey[jy_max_ + m.jy].real(), ei = ey[jy_max_ + m.jy].imag();
          axr += m.cx.real() * er - m.cx.imag() * ei;
          axi += m.cx.real() * ei + m.cx.imag() * er;
          ayr += m.cy.real() * er - m.cy.imag() * ei;
          ayi += m.cy.real() * ei + m.cy.imag() * er;
        }
        const double fr = ex[jx_max_ + r.jx].real(), fi = ex[jx_max_ + r.jx].imag();
        sx += axr * fr - axi * fi;
        sy += ayr * fr - ayi * fi;
      }
      out(p, sx, sy);
    }
  });
}

std::vector<Vec2> PointEvaluator::velocity(const std::vector<Vec2>& points, int threads) const {
  std::vector<Vec2> v(points.size());
  evaluate(points, threads, [&](std::size_t p, double a, double b) { v[p] = {a, b}; });
  return v;
}

std::vector<double> PointEvaluator::scalar(const std::vector<Vec2>& points, int threads) const {
  std::vector<double> v(points.size());
  evaluate(points, threads, [&](std::size_t p, double a, double) { v[p] = a; });
  return v;
}

std::vector<Vec2> eval_velocity_at(const VectorField& u, const std::vector<Vec2>& points,
                                   double rel_tol, int threads) {
  return PointEvaluator(u, rel_tol).velocity(points, threads);
}

std::vector<double> eval_scalar_at(const ScalarField& f, const std::vector<Vec2>& points,
                                   double rel_tol, int threads) {
  return PointEvaluator(f, rel_tol).scalar(points, threads);
}

// ---------------------------------------------------------------------------

SteadyVelocity::SteadyVelocity(const VectorField& u, double rel_tol, int threads)
    : eval_(u, rel_tol), threads_(threads) {}

std::vector<Vec2> SteadyVelocity::at(double, const std::vector<Vec2>& points) const {
  return eval_.velocity(points, threads_);
}

SnapshotVelocity::SnapshotVelocity(double rel_tol, int threads) : rel_tol_(rel_tol), threads_(threads) {}

void SnapshotVelocity::add(double t, VectorField u) {
  if (!snaps_.empty() && !(t > snaps_.back().first))
    throw std::invalid_argument("snapshots must be added in increasing time");
  snaps_.emplace_back(t, std::move(u));
}

void SnapshotVelocity::trim(std::size_t keep) {
  if (snaps_.size() > keep) snaps_.erase(snaps_.begin(), snaps_.end() - static_cast<std::ptrdiff_t>(keep));
}

std::vector<Vec2> SnapshotVelocity::at(double t, const std::vector<Vec2>& points) const {
  if (snaps_.empty()) throw std::logic_error("no velocity snapshots stored");
  const double tol = 1e-12 * std::max(1.0, std::abs(t));
  if (t < snaps_.front().first - tol || t > snaps_.back().first + tol)
    throw std::out_of_range("requested time outside the stored snapshots");
  std::size_t k = 0;
  while (k + 2 < snaps_.size() && t > snaps_[k + 1].first) ++k;
  if (snaps_.size() == 1 || std::abs(t - snaps_[k].first) <= tol)
    return PointEvaluator(snaps_[k].second, rel_tol_).velocity(points, threads_);
  const auto& [t0, u0] = snaps_[k];
  const auto& [t1, u1] = snaps_[k + 1];
  if (std::abs(t - t1) <= tol) return PointEvaluator(u1, rel_tol_).velocity(points, threads_);
  const double theta = (t - t0) / (t1 - t0);
  VectorField blend = u0;
  blend *= 1.0 - theta;
  blend.axpy(theta, u1);
  return PointEvaluator(blend, rel_tol_).velocity(points, threads_);
}

// ---------------------------------------------------------------------------

FlowMap advect_step(const VelocitySource& source, const FlowMap& map, double dt) {
  const std::size_t n = map.positions.size();
  auto shifted = [&](const std::vector<Vec2>& k, double h) {
    std::vector<Vec2> p(n);
    for (std::size_t i = 0; i < n; ++i) p[i] = map.positions[i] + h * k[i];
    return p;
  };
  const auto k1 = source.at(map.t, map.positions);
  const auto k2 = source.at(map.t + 0.5 * dt, shifted(k1, 0.5 * dt));
  const auto k3 = source.at(map.t + 0.5 * dt, shifted(k2, 0.5 * dt));
  const auto k4 = source.at(map.t + dt, shifted(k3, dt));
  FlowMap out = map;
  for (std::size_t i = 0; i < n; ++i) {
    Vec2& p = out.positions[i];
    p.x += dt / 6.0 * (k1[i].x + 2.0 * k2[i].x + 2.0 * k3[i].x + k4[i].x);
    p.y += dt / 6.0 * (k1[i].y + 2.0 * k2[i].y + 2.0 * k3[i].y + k4[i].y);
    if (!std::isfinite(p.x) || !std::isfinite(p.y))
      throw std::runtime_error("flow map particle position became non-finite");
  }
  out.t = map.t + dt;
  return out;
}

namespace {

long step_count(double dt, double T) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(T >= 0.0)) throw std::invalid_argument("final time must be nonnegative");
  return std::lround(T / dt);
}

}  // namespace

FlowMap advect_flow_map(const VelocitySource& source, const FlowMap& map0, double dt, double T) {
  const long steps = step_count(dt, T);
  if (steps == 0 && T > 0.0) throw std::invalid_argument("final time must be at least one step");
  FlowMap m = map0;
  const double t0 = map0.t;
  for (long s = 0; s < steps; ++s) {
    m = advect_step(source, m, dt);
    m.t = t0 + (s + 1) * dt;
  }
  return m;
}

CoupledRun advect_along_solution(const VorticityState& state0, const DissipationMode& mode,
                                 const FlowMap& map0, double dt, double T, double rel_tol,
                                 int threads,
                                 const std::function<void(const VorticityState&, const FlowMap&)>& observe) {
  const long steps = step_count(dt, T);
  SnapshotVelocity snaps(rel_tol, threads);
  VorticityState state = state0;
  FlowMap map = map0;
  map.t = state.t();
  snaps.add(state.t(), state.velocity());
  for (long s = 0; s < steps; ++s) {
    state = step_rk4(state, dt, mode);
    snaps.add(state.t(), state.velocity());
    snaps.trim(2);
    map = advect_step(snaps, map, dt);
    map.t = state.t();
    if (observe) observe(state, map);
  }
  return {std::move(state), std::move(map)};
}

double volume_check(const FlowMap& map) {
  const int m = map.m;
  const double hx = map.lx / m, hy = map.ly / m;
  auto disp = [&](int i, int j) {
    const std::size_t k = map.index(((i % m) + m) % m, ((j % m) + m) % m);
    return map.positions[k] - map.reference[k];
  };
  double worst = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const Vec2 di = 0.5 / hx * (disp(i + 1, j) - disp(i - 1, j));
      const Vec2 dj = 0.5 / hy * (disp(i, j + 1) - disp(i, j - 1));
      const double det = (1.0 + di.x) * (1.0 + dj.y) - dj.x * di.y;
      worst = std::max(worst, std::abs(det - 1.0));
    }
  return worst;
}

double transport_check(const ScalarField& q0, const ScalarField& qt, const FlowMap& map, int threads) {
  require_same_grid(q0.grid(), qt.grid());
  const auto now = eval_scalar_at(qt, map.positions, 0.0, threads);
  const auto then = eval_scalar_at(q0, map.reference, 0.0, threads);
  double worst = 0.0;
  for (std::size_t i = 0; i < now.size(); ++i) worst = std::max(worst, std::abs(now[i] - then[i]));
  return worst;
}

FlowMap exponential_map(const VectorField& u0, double T, ExponentialKind kind, double dt,
                        AlphaParam alpha, int lattice, double rel_tol, int threads) {
  const auto& g = u0.grid();
  FlowMap id = FlowMap::identity(lattice, g.lx(), g.ly());
  if (T == 0.0) return id;
  if (kind == ExponentialKind::group) {
    SteadyVelocity frozen(u0, rel_tol, threads);
    return advect_flow_map(frozen, id, dt, T);
  }
  const auto state = VorticityState::from_velocity(u0, alpha);
  return advect_along_solution(state, DissipationMode::inviscid(), id, dt, T, rel_tol, threads).map;
}

double max_particle_distance(const FlowMap& a, const FlowMap& b) {
  if (a.positions.size() != b.positions.size())
    throw std::invalid_argument("flow maps have different lattices");
  double worst = 0.0;
  for (std::size_t i = 0; i < a.positions.size(); ++i) {
    double dx = std::remainder(a.positions[i].x - b.positions[i].x, a.lx);
    double dy = std::remainder(a.positions[i].y - b.positions[i].y, a.ly);
    worst = std::max(worst, std::hypot(dx, dy));
  }
  return worst;
}

}  // namespace alfl
