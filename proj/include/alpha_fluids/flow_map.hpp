#pragma once

#include <functional>
#include <memory>
#include <vector>

#include "alpha_fluids/euler_alpha.hpp"
#include "alpha_fluids/spectral.hpp"

namespace alfl {

/// Images eta(t, x_i) of a uniform m x m reference lattice on the torus.
/// Positions are stored unwrapped, so eta - id is a periodic lattice function.
struct FlowMap {
  int m = 0;
  double lx = kTwoPi;
  double ly = kTwoPi;
  double t = 0.0;
  std::vector<Vec2> reference;
  std::vector<Vec2> positions;

  static FlowMap identity(int m, double lx = kTwoPi, double ly = kTwoPi);
  /// Every (m / coarse)-th particle in each direction; coarse must divide m.
  FlowMap subsample(int coarse) const;
  std::size_t index(int i, int j) const { return static_cast<std::size_t>(i) * m + j; }
  /// Position reduced to the fundamental cell [0, lx) x [0, ly).
  Vec2 wrapped(std::size_t k) const;
};

/// Band-limited field prepared for evaluation at arbitrary points.  Modes are
/// kept on one half plane and folded with their conjugates.  Coefficients
/// below rel_tol * (largest coefficient) are dropped; rel_tol = 0 keeps every
/// nonzero mode and makes the evaluation exact.
class PointEvaluator {
 public:
  explicit PointEvaluator(const VectorField& u, double rel_tol = 0.0);
  explicit PointEvaluator(const ScalarField& f, double rel_tol = 0.0);

  std::size_t mode_count() const { return modes_.size(); }
  std::vector<Vec2> velocity(const std::vector<Vec2>& points, int threads = 1) const;
  std::vector<double> scalar(const std::vector<Vec2>& points, int threads = 1) const;

 private:
  struct Mode {
    int jx, jy;
    Complex cx, cy;
  };
  // Consecutive modes sharing jx.
  struct Row {
    int jx;
    std::size_t begin, end;
  };
  void build(const ScalarField& a, const ScalarField* b, double rel_tol);
  template <class Out>
  void evaluate(const std::vector<Vec2>& points, int threads, Out&& out) const;

  TorusGrid2D grid_;
  std::vector<Mode> modes_;
  std::vector<Row> rows_;
  int jx_max_ = 0;
  int jy_max_ = 0;
};

std::vector<Vec2> eval_velocity_at(const VectorField& u, const std::vector<Vec2>& points,
                                   double rel_tol = 0.0, int threads = 1);
std::vector<double> eval_scalar_at(const ScalarField& f, const std::vector<Vec2>& points,
                                   double rel_tol = 0.0, int threads = 1);

/// Velocity as a function of time at particle positions.
class VelocitySource {
 public:
  virtual ~VelocitySource() = default;
  virtual std::vector<Vec2> at(double t, const std::vector<Vec2>& points) const = 0;
};

/// Time-independent field.
class SteadyVelocity : public VelocitySource {
 public:
  explicit SteadyVelocity(const VectorField& u, double rel_tol = 0.0, int threads = 1);
  std::vector<Vec2> at(double t, const std::vector<Vec2>& points) const override;

 private:
  PointEvaluator eval_;
  int threads_;
};

/// Stored snapshots (t_k, u_k), linearly interpolated in time.  The bracketing
/// pair is blended in coefficient space, then evaluated once.
class SnapshotVelocity : public VelocitySource {
 public:
  explicit SnapshotVelocity(double rel_tol = 0.0, int threads = 1);
  void add(double t, VectorField u);
  /// Drops all but the newest `keep` snapshots.
  void trim(std::size_t keep);
  std::vector<Vec2> at(double t, const std::vector<Vec2>& points) const override;

 private:
  double rel_tol_;
  int threads_;
  std::vector<std::pair<double, VectorField>> snaps_;
};

/// One RK4 step of d eta/dt = u(t, eta) for every particle.
FlowMap advect_step(const VelocitySource& source, const FlowMap& map, double dt);

/// Repeats advect_step round(T/dt) times starting at map0.t.
FlowMap advect_flow_map(const VelocitySource& source, const FlowMap& map0, double dt, double T);

/// Advances the 2D solver and the flow map together.  Velocity snapshots are
/// taken at every solver step; observe (may be empty) sees each new pair.
struct CoupledRun {
  VorticityState state;
  FlowMap map;
};
CoupledRun advect_along_solution(
    const VorticityState& state0, const DissipationMode& mode, const FlowMap& map0, double dt,
    double T, double rel_tol = 0.0, int threads = 1,
    const std::function<void(const VorticityState&, const FlowMap&)>& observe = {});

/// max |det D eta - 1| with centered differences of the periodic displacement.
double volume_check(const FlowMap& map);

/// max_i |q_t(eta(t, x_i)) - q_0(x_i)|
double transport_check(const ScalarField& q0, const ScalarField& qt, const FlowMap& map,
                       int threads = 1);

enum class ExponentialKind { riemannian, group };

/// Riemannian: flow of the Euler-alpha solution with initial velocity u0.
/// Group: flow of the frozen field u0.
FlowMap exponential_map(const VectorField& u0, double T, ExponentialKind kind, double dt,
                        AlphaParam alpha, int lattice = 16, double rel_tol = 0.0, int threads = 1);

/// Largest distance between corresponding particles, measured on the torus.
double max_particle_distance(const FlowMap& a, const FlowMap& b);

}  // namespace alfl
