#include "alpha_fluids/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "alpha_fluids/blobs.hpp"
#include "alpha_fluids/camassa_holm.hpp"
#include "alpha_fluids/checkpoint.hpp"
#include "alpha_fluids/euler_alpha.hpp"
#include "alpha_fluids/flow_map.hpp"
#include "alpha_fluids/geometry.hpp"
#include "alpha_fluids/initial_conditions.hpp"
#include "alpha_fluids/jacobi.hpp"
#include "alpha_fluids/output.hpp"
#include "alpha_fluids/parallel.hpp"
#include "alpha_fluids/rng.hpp"

#ifndef ALFL_VERSION
#define ALFL_VERSION "unknown"
#endif

namespace alfl {

namespace fs = std::filesystem;

namespace {

// Guard that fired; carries the last time at which the state was still good.
struct NumericalAbort {
  std::string what;
  double last_good_t;
};

class Run {
 public:
  Run(const RunConfig& cfg, std::ostream* log) : cfg(cfg), log_(log), start_(std::chrono::steady_clock::now()) {
    dir = fs::path(cfg.out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw std::runtime_error("cannot create output directory '" + cfg.out_dir + "'");
  }

  std::string path(const std::string& name) const { return (dir / name).string(); }

  void note(const std::string& line) const {
    if (log_) *log_ << "[" << cfg.experiment << "] " << line << std::endl;
  }

  void result(const std::string& key, double v) { results_.emplace_back("result." + key, format_double(v)); }
  void result(const std::string& key, const std::string& v) { results_.emplace_back("result." + key, v); }

  // Summary rows are (quantity, value) pairs mirrored from the results.
  void finish(const std::string& status, std::optional<double> last_good_t, const std::string& error) {
    const std::string text = serialize_config(cfg);
    Manifest m;
    m.set("experiment", cfg.experiment);
    m.set("status", status);
    m.set("last_good_t", last_good_t ? format_double(*last_good_t) : std::string("none"));
    if (!error.empty()) m.set("abort_reason", error);
    m.set("config_hash", "fnv1a64:" + fnv1a_hex(text));
    m.set("code_version", ALFL_VERSION);
    m.set("seed", std::to_string(cfg.seed));
    m.set("threads", std::to_string(cfg.threads));
    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    m.set("wall_time_s", wall);
    for (const auto& [k, v] : results_) m.set(k, v);
    std::string section;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (line.empty()) continue;
      if (line.front() == '[') {
        section = line.substr(1, line.size() - 2);
        continue;
      }
      const auto eq = line.find(" = ");
      m.set("config." + (section.empty() ? "" : section + ".") + line.substr(0, eq), line.substr(eq + 3));
    }
    m.write(path("manifest.txt"));

    CsvWriter summary(path("summary.csv"), {"quantity", "value"});
    summary.row_text({"status", status});
    for (const auto& [k, v] : results_) summary.row_text({k.substr(7), v});
    summary.close();
  }

  const RunConfig& cfg;
  fs::path dir;
  double last_good_t = 0.0;

 private:
  std::ostream* log_;
  std::chrono::steady_clock::time_point start_;
  std::vector<std::pair<std::string, std::string>> results_;
};

long long step_count(double span, double dt, const std::string& what) {
  if (span < 0.0) throw ConfigError(what + " ends before it starts", 0);
  const double n = span / dt;
  const long long steps = std::llround(n);
  if (std::abs(n - static_cast<double>(steps)) > 1e-9 * std::max(1.0, n))
    throw ConfigError(what + ": duration " + format_double(span) + " is not a whole number of steps of dt = " +
                          format_double(dt),
                      0);
  return steps;
}

DissipationMode dissipation_mode(Dissipation d, double nu) {
  switch (d) {
    case Dissipation::viscous:
      return DissipationMode::viscous(nu);
    case Dissipation::strong:
      return DissipationMode::strong(nu);
    default:
      return DissipationMode::inviscid();
  }
}

TorusGrid2D config_grid(const RunConfig& c) { return TorusGrid2D(c.nx, c.ny, c.lx, c.ly); }

// Scale for Casimir drift: int |q|^n by collocation.  int q is zero for any
// field without a mean, so its own value cannot be the reference.
std::vector<double> casimir_scales(const ScalarField& q, int nmax) {
  const RealField r = inverse(q);
  const double w = q.grid().area() / static_cast<double>(q.grid().size());
  std::vector<double> s(nmax, 0.0);
  for (double v : r.values()) {
    double p = 1.0;
    for (int n = 0; n < nmax; ++n) s[n] += w * (p *= std::abs(v));
  }
  return s;
}

std::string step_name(long long step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "checkpoint_%08lld.alfl", step);
  return buf;
}

// ---------------------------------------------------------------------------

void simulate2d(Run& run) {
  const RunConfig& c = run.cfg;
  const AlphaParam alpha(c.alpha);
  const auto mode = dissipation_mode(c.dissipation, c.nu);
  std::optional<VorticityState> st;
  if (!c.restart_from.empty()) {
    const Checkpoint cp = read_checkpoint(c.restart_from);
    if (cp.nx != static_cast<std::uint32_t>(c.nx) || cp.ny != static_cast<std::uint32_t>(c.ny) || cp.lx != c.lx ||
        cp.ly != c.ly || cp.alpha != c.alpha)
      throw ConfigError("checkpoint '" + c.restart_from + "' does not match the configured grid or alpha", 0);
    st.emplace(state_from_checkpoint(cp));
    run.note("restarted from " + c.restart_from + " at t = " + format_double(st->t()));
  } else {
    st.emplace(VorticityState::from_velocity(initial_velocity(c), alpha));
  }
  const double t0 = st->t();
  const long long first_step = std::llround(t0 / c.dt);
  const long long steps = step_count(c.t_final - t0, c.dt, "simulate2d");

  const double e0 = energy_alpha(*st);
  const auto c0 = casimirs(st->q(), 4);
  const auto scale = casimir_scales(st->q(), 4);
  const Complex mode0 = st->q().mode(c.k1.jx, c.k1.jy);
  double energy_drift = 0.0;
  std::vector<double> drift(4, 0.0);

  CsvWriter ts(run.path("timeseries.csv"), {"t[T]", "E_alpha[L^4/T^2]", "casimir_1[L^2/T]", "casimir_2[L^2/T^2]",
                                            "casimir_3[L^2/T^3]", "casimir_4[L^2/T^4]", "courant[1]"});
  auto record = [&](const VorticityState& s) {
    const double e = energy_alpha(s);
    const auto cn = casimirs(s.q(), 4);
    energy_drift = std::max(energy_drift, std::abs(e - e0) / e0);
    for (int n = 0; n < 4; ++n) drift[n] = std::max(drift[n], std::abs(cn[n] - c0[n]) / scale[n]);
    ts.row({s.t(), e, cn[0], cn[1], cn[2], cn[3], courant_number(s, c.dt)});
  };
  record(*st);
  run.last_good_t = t0;
  for (long long i = 1; i <= steps; ++i) {
    st.emplace(step_rk4(*st, c.dt, mode));
    run.last_good_t = st->t();
    if (i % c.output_every == 0 || i == steps) record(*st);
    if (c.checkpoint_every > 0 && (first_step + i) % c.checkpoint_every == 0)
      write_checkpoint(run.path(step_name(first_step + i)), checkpoint_from_state(*st, c.experiment, c.nu));
  }
  ts.close();
  write_checkpoint(run.path("final.alfl"), checkpoint_from_state(*st, c.experiment, c.nu));

  run.result("t_final", st->t());
  run.result("steps", static_cast<double>(steps));
  run.result("energy_alpha_final", energy_alpha(*st));
  run.result("energy_alpha_drift", energy_drift);
  for (int n = 0; n < 4; ++n) run.result("casimir_" + std::to_string(n + 1) + "_drift", drift[n]);
  const Complex mode_t = st->q().mode(c.k1.jx, c.k1.jy);
  if (std::abs(mode0) > 0.0 && std::abs(mode_t) > 0.0 && st->t() > t0)
    run.result("mode_k1_decay_rate", -std::log(std::abs(mode_t) / std::abs(mode0)) / (st->t() - t0));
}

// ---------------------------------------------------------------------------

void flowmap(Run& run) {
  const RunConfig& c = run.cfg;
  const AlphaParam alpha(c.alpha);
  const auto mode = dissipation_mode(c.dissipation, c.nu);
  const VorticityState s0 = VorticityState::from_velocity(initial_velocity(c), alpha);
  const long long steps = step_count(c.t_final, c.dt, "flowmap");
  std::vector<int> lattices{c.lattice};
  for (int m : c.refine_lattice) lattices.push_back(m);
  std::sort(lattices.begin(), lattices.end());
  lattices.erase(std::unique(lattices.begin(), lattices.end()), lattices.end());
  const int top = lattices.back();

  CsvWriter ts(run.path("timeseries.csv"), {"t[T]", "E_alpha[L^4/T^2]", "casimir_2[L^2/T^2]", "volume_error[1]"});
  long long step = 0;
  auto observe = [&](const VorticityState& s, const FlowMap& m) {
    run.last_good_t = s.t();
    if (++step % c.output_every == 0 || step == steps)
      ts.row({s.t(), energy_alpha(s), casimirs(s.q(), 2)[1], volume_check(m.subsample(c.lattice))});
  };
  run.note("advecting " + std::to_string(top) + "^2 particles, " + std::to_string(steps) + " steps");
  const CoupledRun main = advect_along_solution(s0, mode, FlowMap::identity(top, c.lx, c.ly), c.dt, c.t_final,
                                                c.mode_tol, c.threads, observe);
  ts.close();

  const FlowMap coarse = main.map.subsample(c.lattice);
  CsvWriter pos(run.path("flowmap.csv"), {"x0[L]", "y0[L]", "x[L]", "y[L]"});
  for (std::size_t k = 0; k < coarse.positions.size(); ++k)
    pos.row({coarse.reference[k].x, coarse.reference[k].y, coarse.positions[k].x, coarse.positions[k].y});
  pos.close();

  const double transport = transport_check(s0.q(), main.state.q(), coarse, c.threads);
  run.result("transport_error", transport);
  run.result("energy_alpha_drift", std::abs(energy_alpha(main.state) - energy_alpha(s0)) / energy_alpha(s0));

  CsvWriter vol(run.path("volume_refinement.csv"), {"lattice[1]", "spacing[L]", "volume_error[1]"});
  double vol_main = 0.0, vol_fine = 0.0;
  for (int m : lattices) {
    const double v = volume_check(main.map.subsample(m));
    vol.row({static_cast<double>(m), c.lx / m, v});
    if (m == c.lattice) vol_main = v;
    vol_fine = v;
  }
  vol.close();
  run.result("volume_error", vol_main);
  if (top != c.lattice) {
    run.result("volume_error_finest", vol_fine);
    run.result("volume_improvement", vol_main / vol_fine);
  }

  CsvWriter tr(run.path("transport_refinement.csv"), {"dt[T]", "transport_error[1/T]"});
  tr.row({c.dt, transport});
  double last = transport;
  for (double dt : c.refine_dt) {
    step_count(c.t_final, dt, "flowmap.refine_dt");
    run.note("transport refinement with dt = " + format_double(dt));
    const CoupledRun r = advect_along_solution(s0, mode, FlowMap::identity(c.lattice, c.lx, c.ly), dt, c.t_final,
                                               c.mode_tol, c.threads);
    last = transport_check(s0.q(), r.state.q(), r.map, c.threads);
    tr.row({dt, last});
  }
  tr.close();
  if (!c.refine_dt.empty()) {
    run.result("transport_error_finest", last);
    run.result("transport_improvement", transport / last);
  }
  run.last_good_t = main.state.t();
}

// ---------------------------------------------------------------------------

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = std::log(x[i]), b = std::log(y[i]);
    sx += a;
    sy += b;
    sxx += a * a;
    sxy += a * b;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

void visc_limit(Run& run) {
  const RunConfig& c = run.cfg;
  const AlphaParam alpha(c.alpha);
  const VorticityState s0 = VorticityState::from_velocity(initial_velocity(c), alpha);
  const long long steps = step_count(c.t_final, c.dt, "visc-limit");

  struct Task {
    DissipationMode mode;
    std::optional<VorticityState> out;
    std::optional<NumericalAbort> abort;
  };
  std::vector<Task> tasks;
  tasks.push_back({DissipationMode::inviscid(), {}, {}});
  for (Dissipation d : c.variants)
    for (double nu : c.nu_list) tasks.push_back({dissipation_mode(d, nu), {}, {}});

  // Each run is independent; workers take contiguous blocks of tasks.
  run.note(std::to_string(tasks.size()) + " runs of " + std::to_string(steps) + " steps");
  parallel_blocks(tasks.size(), c.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      VorticityState s = s0;
      try {
        for (long long n = 0; n < steps; ++n) s = step_rk4(s, c.dt, tasks[i].mode);
        tasks[i].out.emplace(std::move(s));
      } catch (const BlowUpError& err) {
        tasks[i].abort = NumericalAbort{err.what(), err.last_good_t()};
      } catch (const CflError& err) {
        tasks[i].abort = NumericalAbort{err.what(), s.t()};
      }
    }
  });
  for (const auto& t : tasks)
    if (t.abort) throw *t.abort;
  run.last_good_t = c.t_final;

  const VectorField u0 = tasks[0].out->velocity();
  CsvWriter csv(run.path("visc_limit.csv"), {"variant", "nu[L^2/T]", "h1_error[L^2/T]"});
  std::map<Dissipation, std::pair<std::vector<double>, std::vector<double>>> series;
  for (std::size_t i = 1; i < tasks.size(); ++i) {
    const double err = h1_norm(tasks[i].out->velocity() - u0);
    const Dissipation d = tasks[i].mode.variant();
    csv.row_text({to_string(d), format_double(tasks[i].mode.nu()), format_double(err)});
    series[d].first.push_back(tasks[i].mode.nu());
    series[d].second.push_back(err);
  }
  csv.close();
  run.result("t_final", c.t_final);
  for (const auto& [d, xy] : series) {
    const auto& [nus, errs] = xy;
    std::vector<std::size_t> order(nus.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return nus[a] > nus[b]; });
    bool decreasing = true;
    for (std::size_t i = 1; i < order.size(); ++i) decreasing = decreasing && errs[order[i]] < errs[order[i - 1]];
    run.result("strictly_decreasing." + to_string(d), decreasing ? "true" : "false");
    if (nus.size() >= 2) run.result("loglog_slope." + to_string(d), fitted_slope(nus, errs));
  }
}

// ---------------------------------------------------------------------------

void alpha_sweep(Run& run) {
  const RunConfig& c = run.cfg;
  const Wavevector l{c.k.jx + c.eps.jx, c.k.jy + c.eps.jy};
  const Alpha0Search s = find_alpha0(c.k, c.eps, c.alpha_tol, c.alpha_step, c.threads);
  CsvWriter csv(run.path("alpha_sweep.csv"), {"alpha[L]", "K[T^2/L^4]"});
  for (const auto& [a, k] : s.samples) csv.row({a, k});
  csv.close();
  run.result("curvature_at_zero", s.curvature_at_zero);
  run.result("found", s.found ? "true" : "false");
  if (!s.found) {
    run.note("no sign change of K on (0, 1]");
    return;
  }
  run.result("alpha0", s.alpha0);
  const double below = s.alpha0 - 1e-3, above = s.alpha0 + 1e-3;
  run.result("K_below_alpha0", stream_mode_curvature(c.k, l, AlphaParam(std::max(below, 0.0))));
  run.result("K_above_alpha0", stream_mode_curvature(c.k, l, AlphaParam(above)));
  CsvWriter tail(run.path("alpha_tail.csv"), {"alpha[L]", "K[T^2/L^4]"});
  double tail_min = INFINITY;
  for (int i = 1; i <= 10; ++i) {
    const double a = s.alpha0 + (1.0 - s.alpha0) * i / 10.0;
    const double k = stream_mode_curvature(c.k, l, AlphaParam(a));
    tail.row({a, k});
    tail_min = std::min(tail_min, k);
  }
  tail.close();
  run.result("K_min_above_alpha0", tail_min);
}

// ---------------------------------------------------------------------------

void curvature(Run& run) {
  const RunConfig& c = run.cfg;
  const AlphaParam alpha(c.alpha);
  const double k = stream_mode_curvature(c.k, c.l, alpha);
  run.result("K", k);
  if (c.alpha == 0.0) run.result("arnold_closed_form", arnold_closed_form(c.k, c.l, kTwoPi * kTwoPi));
  if (c.random_pairs == 0) return;

  SplitMix64 rng(auxiliary_seed(c));
  auto draw = [&] {
    const int span = 2 * c.random_kmax + 1;
    return Wavevector{static_cast<int>(rng.next() % span) - c.random_kmax,
                      static_cast<int>(rng.next() % span) - c.random_kmax};
  };
  std::vector<std::pair<Wavevector, Wavevector>> pairs;
  while (static_cast<int>(pairs.size()) < c.random_pairs) {
    const Wavevector a = draw(), b = draw();
    if (a.jx * b.jy - a.jy * b.jx == 0) continue;  // zero or parallel: degenerate plane
    pairs.emplace_back(a, b);
  }
  std::vector<double> ks(pairs.size());
  parallel_blocks(pairs.size(), c.threads, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) ks[i] = stream_mode_curvature(pairs[i].first, pairs[i].second, alpha);
  });
  CsvWriter csv(run.path("random_pairs.csv"), {"kx[1]", "ky[1]", "lx[1]", "ly[1]", "K[T^2/L^4]"});
  for (std::size_t i = 0; i < pairs.size(); ++i)
    csv.row({double(pairs[i].first.jx), double(pairs[i].first.jy), double(pairs[i].second.jx),
             double(pairs[i].second.jy), ks[i]});
  csv.close();
  run.result("random_pairs", static_cast<double>(pairs.size()));
  run.result("random_K_max", *std::max_element(ks.begin(), ks.end()));
}

// ---------------------------------------------------------------------------

void jacobi(Run& run) {
  const RunConfig& c = run.cfg;
  const AlphaParam alpha(c.alpha);
  const auto g = config_grid(c);
  const VectorField u0 = initial_velocity(c);
  const long long steps = step_count(c.t_final, c.dt, "jacobi");
  CsvWriter csv(run.path("jacobi.csv"), {"t[T]", "displacement_norm[L^3/T]", "velocity_variation_norm[L^3/T]"});

  if (c.jacobi_mode == "tangential") {
    const JacobiRun r = jacobi_evolve(u0, u0, VectorField(g), c.t_final, c.dt, alpha);
    const double n0 = r.samples.front().displacement_norm;
    double var = 0.0;
    for (const auto& s : r.samples) {
      csv.row({s.t, s.displacement_norm, s.velocity_variation_norm});
      var = std::max(var, std::abs(s.displacement_norm - n0) / n0);
    }
    csv.close();
    run.last_good_t = r.base.t();
    run.result("tangential_norm_variation", var);
    return;
  }

  const VectorField v =
      random_seeded(g, auxiliary_seed(c), c.spectrum_slope, c.perturbation_kmax, c.perturbation_amplitude);
  const JacobiRun r = jacobi_evolve(u0, VectorField(g), v, c.t_final, c.dt, alpha);
  for (const auto& s : r.samples) csv.row({s.t, s.displacement_norm, s.velocity_variation_norm});
  csv.close();
  run.last_good_t = r.base.t();

  auto solve = [&](const VectorField& init) {
    auto st = VorticityState::from_velocity(init, alpha);
    for (long long n = 0; n < steps; ++n) st = step_rk4(st, c.dt, DissipationMode::inviscid());
    return st.velocity();
  };
  const VectorField base = solve(u0);
  CsvWriter fd(run.path("jacobi_fd.csv"), {"eps[1]", "max_error[L/T]"});
  std::vector<double> errors;
  for (double eps : c.fd_eps) {
    VectorField diff = solve(u0 + eps * v) - base;
    diff *= 1.0 / eps;
    diff -= r.velocity_variation;
    errors.push_back(diff.max_abs());
    fd.row({eps, errors.back()});
  }
  fd.close();
  run.result("velocity_variation_max", r.velocity_variation.max_abs());
  run.result("fd_error_first", errors.front());
  if (errors.size() >= 2) run.result("fd_error_ratio", errors[0] / errors[1]);
  run.result("displacement_norm_final", r.samples.back().displacement_norm);
}

// ---------------------------------------------------------------------------

void camassa_holm(Run& run) {
  const RunConfig& c = run.cfg;
  const bool periodic = c.ch_bc == "periodic";
  if (periodic && c.ch_n % 2 != 0) throw ConfigError("ch.n must be even for the periodic grid", 0);
  const CHGrid g = periodic ? CHGrid::periodic(c.ch_n) : CHGrid::dirichlet(c.ch_n);
  const double k = periodic ? c.ch_mode : c.ch_mode * kPi;
  CHState e = CHState::sample(g, [&](double x) { return c.ch_amplitude * std::sin(k * x); });
  std::optional<CHLagrangianState> l;
  if (c.ch_compare_spray) l.emplace(CHLagrangianState::from_eulerian(e));
  const long long steps = step_count(c.t_final, c.dt, "ch");
  const double e0 = ch_energy(e);
  double drift = 0.0;

  CsvWriter ts(run.path("ch_timeseries.csv"), {"t[T]", "energy[L^3/T^2]"});
  ts.row({e.t, e0});
  for (long long i = 1; i <= steps; ++i) {
    e = ch_step_rk4(e, c.dt);
    if (l) l.emplace(ch_spray_step(*l, c.dt));
    run.last_good_t = e.t;
    const double en = ch_energy(e);
    drift = std::max(drift, std::abs(en - e0) / e0);
    if (i % c.output_every == 0 || i == steps) ts.row({e.t, en});
  }
  ts.close();
  run.result("energy_drift", drift);

  std::vector<std::string> header{"x[L]", "u_eulerian[L/T]"};
  std::optional<CHState> fromspray;
  if (l) {
    fromspray.emplace(ch_to_eulerian(*l));
    header.push_back("u_spray[L/T]");
    run.result("spray_sup_difference", sup_norm_difference(*fromspray, e));
  }
  CsvWriter prof(run.path("ch_profile.csv"), header);
  for (int i = 0; i < g.n; ++i) {
    std::vector<double> row{g.x(i), e.u[i]};
    if (fromspray) row.push_back(fromspray->u[i]);
    prof.row(row);
  }
  prof.close();
}

// ---------------------------------------------------------------------------

// Rigid rotation rate of a ring of equal blobs, from the velocity that the
// others induce at blob 0.
double ring_rotation_rate(const BlobEnsemble& e) {
  const Vec2 p0 = e.positions[0];
  double vt = 0.0;
  for (std::size_t j = 1; j < e.size(); ++j) {
    const Vec2 r = p0 - e.positions[j];
    const double f = e.circulations[j] * blob_velocity_factor(std::hypot(r.x, r.y), e.alpha.value());
    vt += f * (-r.y * (-p0.y) + r.x * p0.x) / std::hypot(p0.x, p0.y);
  }
  return vt / std::hypot(p0.x, p0.y);
}

void blob(Run& run) {
  const RunConfig& c = run.cfg;
  if (c.blob_count < 2) throw ConfigError("the blob experiment needs initial.blob_count >= 2", 0);
  if (!(c.alpha > 0.0)) throw ConfigError("the blob experiment needs physics.alpha > 0", 0);
  BlobEnsemble e = blob_ring(c.blob_count, c.ring_radius, c.circulation, c.alpha);
  const double omega = ring_rotation_rate(e);
  const double T = c.periods > 0.0 ? c.periods * kTwoPi / std::abs(omega) : c.t_final;
  const long long steps = std::max<long long>(1, static_cast<long long>(std::ceil(T / c.dt - 1e-9)));
  const double dt = T / static_cast<double>(steps);

  const BlobDiagnostics d0 = blob_diagnostics(e);
  double dh = 0.0, dp = 0.0, di = 0.0;
  const double pscale = std::abs(d0.total_circulation) * c.ring_radius;
  double angle = 0.0, prev = std::atan2(e.positions[0].y, e.positions[0].x);

  CsvWriter ts(run.path("blob_timeseries.csv"), {"t[T]", "x0[L]", "y0[L]", "angle0[1]", "H[L^4/T^2]",
                                                 "impulse_x[L^3/T]", "impulse_y[L^3/T]", "angular_impulse[L^4/T]"});
  auto record = [&] {
    const BlobDiagnostics d = blob_diagnostics(e);
    dh = std::max(dh, std::abs(d.hamiltonian - d0.hamiltonian) / std::abs(d0.hamiltonian));
    dp = std::max(dp, std::hypot(d.linear_impulse.x - d0.linear_impulse.x, d.linear_impulse.y - d0.linear_impulse.y) /
                          pscale);
    di = std::max(di, std::abs(d.angular_impulse - d0.angular_impulse) / std::abs(d0.angular_impulse));
    ts.row({e.t, e.positions[0].x, e.positions[0].y, angle, d.hamiltonian, d.linear_impulse.x, d.linear_impulse.y,
            d.angular_impulse});
  };
  record();
  for (long long i = 1; i <= steps; ++i) {
    e = blob_step_rk4(e, dt, c.threads);
    run.last_good_t = e.t;
    const double a = std::atan2(e.positions[0].y, e.positions[0].x);
    angle += std::remainder(a - prev, kTwoPi);
    prev = a;
    if (i % c.output_every == 0 || i == steps) record();
  }
  ts.close();
  run.result("t_final", e.t);
  run.result("dt_used", dt);
  run.result("rotation_rate_ring", omega);
  run.result("rotation_rate_measured", angle / e.t);
  run.result("hamiltonian_drift", dh);
  run.result("linear_impulse_drift", dp);
  run.result("angular_impulse_drift", di);
}

}  // namespace

// ---------------------------------------------------------------------------

std::uint64_t initial_condition_seed(const RunConfig& cfg) { return SplitMix64(cfg.seed).next(); }

std::uint64_t auxiliary_seed(const RunConfig& cfg) {
  SplitMix64 r(cfg.seed);
  r.next();
  return r.next();
}

VectorField initial_velocity(const RunConfig& c) {
  const auto g = config_grid(c);
  if (c.preset == "single_mode") return single_mode(g, c.k1, c.amp1);
  if (c.preset == "two_mode") return two_mode(g, c.k1, c.k2, c.amp1, c.amp2);
  if (c.preset == "random_seeded") return random_seeded(g, initial_condition_seed(c), c.spectrum_slope, c.kmax, c.rms_velocity);
  throw ConfigError("initial.preset = " + c.preset + " does not define a velocity field", 0);
}

int run_experiment(const RunConfig& cfg, std::ostream* log) {
  static const std::map<std::string, void (*)(Run&)> table{
      {"simulate2d", simulate2d}, {"flowmap", flowmap},         {"visc-limit", visc_limit},
      {"alpha-sweep", alpha_sweep}, {"curvature", curvature},   {"jacobi", jacobi},
      {"ch", camassa_holm},       {"blob", blob}};
  const auto it = table.find(cfg.experiment);
  if (it == table.end()) throw ConfigError("unknown experiment '" + cfg.experiment + "'", 0);
  Run run(cfg, log);
  std::optional<NumericalAbort> abort;
  try {
    it->second(run);
  } catch (const NumericalAbort& a) {
    abort = a;
  } catch (const BlowUpError& e) {
    abort = NumericalAbort{e.what(), e.last_good_t()};
  } catch (const MonotonicityError& e) {
    abort = NumericalAbort{e.what(), e.last_good_t()};
  } catch (const CflError& e) {
    abort = NumericalAbort{e.what(), run.last_good_t};
  }
  if (abort) {
    run.note("aborted: " + abort->what);
    run.finish("INCOMPLETE", abort->last_good_t, abort->what);
    return kExitNumericalAbort;
  }
  run.finish("COMPLETE", run.last_good_t, "");
  run.note("done");
  return kExitOk;
}

}  // namespace alfl
