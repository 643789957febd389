// One pass/fail line per acceptance criterion.  Experiments are launched
// from the shipped configs; reference values are computed here.

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "../support.hpp"
#include "alpha_fluids/camassa_holm.hpp"
#include "alpha_fluids/checkpoint.hpp"
#include "alpha_fluids/config.hpp"
#include "alpha_fluids/euler_alpha.hpp"
#include "alpha_fluids/experiments.hpp"
#include "alpha_fluids/helmholtz.hpp"
#include "alpha_fluids/output.hpp"
#include "alpha_fluids/third_grade.hpp"

using namespace alfl;
using namespace testsupport;
namespace fs = std::filesystem;

namespace {

struct Options {
  fs::path config_dir;
  fs::path work_dir;
  std::string cli;
  int threads = 1;
};

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  // Records one check and a short description of the measured value.
  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    if (detail.tellp() > 0) detail << "; ";
    detail << what << (ok ? "" : " [FAILED]");
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(3);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Launched {
  RunConfig cfg;
  int exit_code = -1;
  Manifest manifest;
  double seconds = 0.0;

  double result(const std::string& key) const {
    const std::string* v = manifest.find("result." + key);
    if (!v) throw std::runtime_error("manifest has no result." + key);
    return std::stod(*v);
  }
  std::string text(const std::string& key) const {
    const std::string* v = manifest.find(key);
    return v ? *v : std::string("<missing>");
  }
};

Launched launch(const Options& o, const std::string& name, const std::function<void(RunConfig&)>& edit = {}) {
  Launched l;
  l.cfg = load_config((o.config_dir / (name + ".cfg")).string());
  l.cfg.out_dir = (o.work_dir / name).string();
  l.cfg.threads = o.threads;
  if (edit) edit(l.cfg);
  fs::remove_all(l.cfg.out_dir);
  const auto t0 = std::chrono::steady_clock::now();
  l.exit_code = run_experiment(l.cfg);
  l.seconds = seconds_since(t0);
  l.manifest = Manifest::read(l.cfg.out_dir + "/manifest.txt");
  return l;
}

void check_complete(Verdict& v, const Launched& l) {
  v.check(l.exit_code == kExitOk && l.text("status") == "COMPLETE",
          l.cfg.out_dir.substr(l.cfg.out_dir.find_last_of('/') + 1) + " status " + l.text("status"));
}

// Real trigonometric polynomial built term by term, with its exact x and y
// derivatives and mean square.
struct TrigPoly {
  struct Term {
    int jx, jy;
    double a, b;
  };
  std::vector<Term> terms;

  TrigPoly(SplitMix64& rng, int kmax) {
    for (int jx = 0; jx <= kmax; ++jx)
      for (int jy = -kmax; jy <= kmax; ++jy)
        if (jx > 0 || jy >= 0) terms.push_back({jx, jy, rng.uniform(-1, 1), (jx || jy) ? rng.uniform(-1, 1) : 0.0});
  }
  double value(double x, double y, int dx, int dy) const {
    double s = 0.0;
    for (const auto& t : terms) {
      const double ph = t.jx * x + t.jy * y;
      const double f = std::pow(t.jx, dx) * std::pow(t.jy, dy);
      // d/dph (a cos + b sin) = -a sin + b cos
      const int order = dx + dy;
      const double c = std::cos(ph), s1 = std::sin(ph);
      double v = 0.0;
      switch (order % 4) {
        case 0: v = t.a * c + t.b * s1; break;
        case 1: v = -t.a * s1 + t.b * c; break;
        case 2: v = -t.a * c - t.b * s1; break;
        case 3: v = t.a * s1 - t.b * c; break;
      }
      s += f * v;
    }
    return s;
  }
  double mean_square() const {
    double s = 0.0;
    for (const auto& t : terms) s += (t.jx || t.jy) ? 0.5 * (t.a * t.a + t.b * t.b) : t.a * t.a;
    return s;
  }
};

// ---------------------------------------------------------------------------

Verdict spectral_infrastructure(const Options&) {
  Verdict v;
  double elapsed = 0.0;  // library calls only, not the reference evaluation
  SplitMix64 rng(101);
  for (int n : {64, 128}) {
    const auto g = make_grid(n, n);
    const TrigPoly p(rng, 12);
    const RealField f = RealField::sample(g, [&](double x, double y) { return p.value(x, y, 0, 0); });
    auto t0 = std::chrono::steady_clock::now();
    const ScalarField c = forward(f);
    const RealField back = inverse(c);
    const RealField fx = inverse(dx(c)), fyy = inverse(dy(dy(c))), lap = inverse(laplacian(c));
    elapsed += seconds_since(t0);
    double power = 0.0;
    for (const Complex& z : c.coeffs()) power += std::norm(z);
    const double parseval = std::abs(power - p.mean_square()) / p.mean_square();
    double round = 0.0, scale = 0.0, deriv = 0.0, dscale = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const double x = g.x(i), y = g.y(j);
        round = std::max(round, std::abs(back(i, j) - f(i, j)));
        scale = std::max(scale, std::abs(f(i, j)));
        const double ex = p.value(x, y, 1, 0), eyy = p.value(x, y, 0, 2), el = p.value(x, y, 2, 0) + eyy;
        deriv = std::max({deriv, std::abs(fx(i, j) - ex), std::abs(fyy(i, j) - eyy), std::abs(lap(i, j) - el)});
        dscale = std::max({dscale, std::abs(ex), std::abs(eyy), std::abs(el)});
      }
    const std::string at = " " + std::to_string(n) + "^2 ";
    v.check(parseval < 1e-12, "Parseval" + at + num(parseval));
    v.check(round / scale < 1e-12, "round trip" + at + num(round / scale));
    v.check(deriv / dscale < 1e-12, "derivatives" + at + num(deriv / dscale));
  }
  v.check(elapsed < 1.0, "runtime " + num(elapsed) + " s");
  return v;
}

Verdict helmholtz_leray_stokes(const Options&) {
  Verdict v;
  const auto g = make_grid(64, 64);
  SplitMix64 rng(202);
  double inv = 0, idem = 0, orth = 0, same = 0;
  for (double a : {0.0, 0.3, 1.0, 2.5}) {
    const AlphaParam al(a);
    const ScalarField s = random_scalar(g, rng, 20);
    inv = std::max({inv, max_abs_diff(helmholtz_apply(helmholtz_inverse(s, al), al), s) / s.max_abs(),
                    max_abs_diff(helmholtz_inverse(helmholtz_apply(s, al), al), s) / s.max_abs()});
    const VectorField f = random_vector(g, rng, 20);
    const VectorField p = leray_project(f);
    idem = std::max(idem, max_abs_diff(leray_project(p), p) / f.max_abs());
    const VectorField w = stokes_project(f, al);
    orth = std::max(orth, std::abs(inner_product_alpha(w, f - w, al)) / inner_product_alpha(f, f, al));
    same = std::max(same, max_abs_diff(w, p) / f.max_abs());
  }
  v.check(inv < 1e-12, "Helmholtz round trip " + num(inv));
  v.check(idem < 1e-12, "Leray idempotence " + num(idem));
  v.check(orth < 1e-11, "Stokes alpha-orthogonality " + num(orth));
  v.check(same < 1e-12, "Stokes = Leray " + num(same));
  return v;
}

Verdict linear_decay(const Options& o) {
  Verdict v;
  for (const std::string name : {"decay_viscous", "decay_strong"}) {
    const Launched l = launch(o, name);
    check_complete(v, l);
    const RunConfig& c = l.cfg;
    const double k2 = std::pow(kTwoPi / c.lx * c.k1.jx, 2) + std::pow(kTwoPi / c.ly * c.k1.jy, 2);
    const double expected =
        c.dissipation == Dissipation::viscous ? c.nu * k2 / (1 + c.alpha * c.alpha * k2) : c.nu * k2;
    const double rel = std::abs(l.result("mode_k1_decay_rate") - expected) / expected;
    v.check(rel < 1e-6, to_string(c.dissipation) + " rate rel. error " + num(rel));
  }
  return v;
}

Verdict casimirs_conserved(const Options& o) {
  Verdict v;
  const Launched l = launch(o, "casimir_two_mode");
  check_complete(v, l);
  const double e = l.result("energy_alpha_drift");
  v.check(e < 1e-8, "energy drift " + num(e));
  for (int n = 1; n <= 4; ++n) {
    const double d = l.result("casimir_" + std::to_string(n) + "_drift");
    v.check(d < 1e-8, "int q^" + std::to_string(n) + " drift " + num(d));
  }
  v.check(l.seconds < 300, "runtime " + num(l.seconds) + " s");
  return v;
}

Verdict transport_and_volume(const Options& o) {
  Verdict v;
  const Launched l = launch(o, "flowmap_two_mode");
  check_complete(v, l);
  const double tr = l.result("transport_error"), vol = l.result("volume_error");
  const double ti = l.result("transport_improvement"), vi = l.result("volume_improvement");
  v.check(tr < 1e-4, "transport " + num(tr));
  v.check(vol < 1e-3, "volume on " + std::to_string(l.cfg.lattice) + "^2 lattice " + num(vol));
  v.check(ti >= 8, "transport gain for dt/4 " + num(ti) + "x");
  v.check(vi >= 8, "volume gain for h/4 " + num(vi) + "x");
  return v;
}

Verdict viscosity_limit(const Options& o) {
  Verdict v;
  const Launched l = launch(o, "visc_limit");
  check_complete(v, l);
  for (Dissipation d : l.cfg.variants) {
    const std::string n = to_string(d);
    v.check(l.text("result.strictly_decreasing." + n) == "true", n + " errors strictly decreasing");
    const double s = l.result("loglog_slope." + n);
    v.check(s >= 0.8 && s <= 1.2, n + " slope " + num(s));
  }
  v.check(l.seconds < 1200, "runtime " + num(l.seconds) + " s");
  return v;
}

Verdict arnold_anchor(const Options& o) {
  Verdict v;
  const Launched l = launch(o, "curvature_arnold");
  check_complete(v, l);
  const double anchor = -1.0 / (8 * kPi * kPi);
  const double rel = std::abs(l.result("K") - anchor) / std::abs(anchor);
  v.check(rel < 1e-10, "K(cos x, cos y) rel. error " + num(rel));
  const double kmax = l.result("random_K_max");
  v.check(l.result("random_pairs") == 50 && kmax <= 1e-12, "max K over 50 random planes " + num(kmax));
  v.check(l.seconds < 60, "runtime " + num(l.seconds) + " s");
  return v;
}

Verdict alpha0_sign_flip(const Options& o) {
  Verdict v;
  const Launched l = launch(o, "alpha_sweep");
  check_complete(v, l);
  const bool found = l.text("result.found") == "true";
  v.check(found, found ? "sign change found" : "no sign change of K on (0, 1], K(0) = " + l.text("result.curvature_at_zero"));
  if (!found) return v;
  const double a0 = l.result("alpha0");
  v.check(a0 > 0 && a0 < 1, "alpha0 = " + l.text("result.alpha0"));
  const double below = l.result("K_below_alpha0"), above = l.result("K_above_alpha0");
  v.check(below < 0 && above > 0, "bracket K(alpha0 -/+ 1e-3) = " + num(below) + ", " + num(above));
  const double tail = l.result("K_min_above_alpha0");
  v.check(tail > 0, "min K at 10 alphas above alpha0 " + num(tail));
  return v;
}

Verdict jacobi_fields(const Options& o) {
  Verdict v;
  const Launched fd = launch(o, "jacobi_fd");
  check_complete(v, fd);
  const double r = fd.result("fd_error_ratio");
  v.check(std::abs(r - 2.0) <= 0.6, "error ratio for eps halved " + num(r));
  const Launched sh = launch(o, "jacobi_shear");
  check_complete(v, sh);
  const double var = sh.result("tangential_norm_variation");
  v.check(var < 1e-8, "steady shear tangential norm variation " + num(var));
  return v;
}

Verdict camassa_holm_checks(const Options& o) {
  Verdict v;
  for (const std::string name : {"ch_dirichlet", "ch_periodic"}) {
    const Launched l = launch(o, name);
    check_complete(v, l);
    const double d = l.result("energy_drift");
    v.check(d < 1e-6, l.cfg.ch_bc + " energy drift " + num(d));
  }
  const Launched s = launch(o, "ch_spray");
  check_complete(v, s);
  const double diff = s.result("spray_sup_difference");
  v.check(diff < 1e-4, "Eulerian vs spray at t = " + num(s.cfg.t_final) + ": " + num(diff));
  // u = sin x on the circle: u_t = -(3/5) sin 2x
  double worst = 0.0;
  for (int n : {64, 128, 256}) {
    const auto st = CHState::sample(CHGrid::periodic(n), [](double x) { return std::sin(x); });
    const auto r = ch_rhs_eulerian(st);
    double e = 0.0;
    for (int i = 0; i < n; ++i) e = std::max(e, std::abs(r[i] + 0.6 * std::sin(2 * st.grid.x(i))));
    worst = std::max(worst, e / (st.grid.h() * st.grid.h()));
  }
  v.check(worst <= 1.0, "sin-mode right side error / h^2 " + num(worst));
  return v;
}

Verdict blob_checks(const Options& o) {
  Verdict v;
  auto drifts = [&](const Launched& l) {
    for (const std::string k : {"hamiltonian_drift", "linear_impulse_drift", "angular_impulse_drift"}) {
      const double d = l.result(k);
      v.check(d < 1e-8, k + " " + num(d));
    }
  };
  const Launched b = launch(o, "blob_corotation");
  check_complete(v, b);
  const double d = 2 * b.cfg.ring_radius, z = d / b.cfg.alpha;
  const double omega = b.cfg.circulation / (kPi * d * d) * (1 - z * std::cyl_bessel_k(1.0, z));
  const double rel = std::abs(b.result("rotation_rate_measured") - omega) / omega;
  v.check(rel < 1e-4, "co-rotation rate rel. error " + num(rel));
  drifts(b);
  const Launched p = launch(o, "blob_point_limit");
  check_complete(v, p);
  const double dp = 2 * p.cfg.ring_radius;
  const double point = p.cfg.circulation / (kPi * dp * dp);
  const double relp = std::abs(p.result("rotation_rate_measured") - point) / point;
  v.check(relp < 1e-4, "alpha = " + num(p.cfg.alpha) + " vs point vortex " + num(relp));
  drifts(p);
  return v;
}

Verdict third_grade_checks(const Options&) {
  Verdict v;
  const auto g = make_grid(32, 32);
  SplitMix64 rng(303);
  double red = 0.0;
  for (int trial = 0; trial < 6; ++trial) {
    const VectorField u = random_solenoidal(g, rng, 6);
    const double a = rng.uniform(0.1, 1.0), nu = trial % 2 ? 0.02 : 0.0;
    const AlphaParam al(a);
    const ScalarField qt_mom = helmholtz_apply(curl(third_grade_rhs(u, ThirdGradeParams(a * a, 0.0, 0.0, nu))), al);
    const auto mode = nu > 0 ? DissipationMode::viscous(nu) : DissipationMode::inviscid();
    const ScalarField qt = rhs_vorticity(VorticityState::from_velocity(u, al), mode);
    red = std::max(red, max_abs_diff(qt_mom, qt) / qt.max_abs());
  }
  v.check(red < 1e-10, "alpha2 = beta = 0 vs LANS-alpha " + num(red));

  VectorField u = random_solenoidal(g, rng, 4);
  u *= 0.1 / u.max_abs();
  const ThirdGradeParams p(0.04, 0.1, 0.3, 0.01);
  double prev = third_grade_energy(u, p), worst = -INFINITY;
  const double e0 = prev;
  for (int i = 0; i < 100; ++i) {
    u = third_grade_step_rk4(u, 0.01, p);
    const double e = third_grade_energy(u, p);
    worst = std::max(worst, e - prev);
    prev = e;
  }
  v.check(worst <= 0.0, "largest energy increment over t = 1: " + num(worst) + " (E " + num(e0) + " -> " + num(prev) + ")");
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Every byte of every output file, with the wall time line of the manifest removed.
std::string outputs_without_wall_time(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) files.push_back(e.path());
  std::sort(files.begin(), files.end());
  std::string all;
  for (const auto& f : files) {
    std::string body = slurp(f);
    if (f.filename() == "manifest.txt") {
      std::istringstream in(body);
      body.clear();
      for (std::string line; std::getline(in, line);)
        if (line.rfind("wall_time_s=", 0) != 0) body += line + "\n";
    }
    all += f.filename().string() + "\n" + body;
  }
  return all;
}

int run_cli(const Options& o, const std::string& args) {
  const std::string cmd = "\"" + o.cli + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Verdict infrastructure(const Options& o) {
  Verdict v;
  // restart: run to t = 0.1, resume from its final checkpoint to t = 0.2
  const Launched full = launch(o, "restart");
  check_complete(v, full);
  const Launched first = launch(o, "restart", [&](RunConfig& c) {
    c.t_final = 0.1;
    c.out_dir = (o.work_dir / "restart_first").string();
  });
  const Launched second = launch(o, "restart", [&](RunConfig& c) {
    c.restart_from = (o.work_dir / "restart_first" / "final.alfl").string();
    c.out_dir = (o.work_dir / "restart_second").string();
  });
  check_complete(v, second);
  const Checkpoint a = read_checkpoint(full.cfg.out_dir + "/final.alfl");
  const Checkpoint b = read_checkpoint(second.cfg.out_dir + "/final.alfl");
  double diff = a.payload.size() == b.payload.size() && a.t == b.t ? 0.0 : INFINITY;
  for (std::size_t i = 0; std::isfinite(diff) && i < a.payload.size(); ++i)
    diff = std::max(diff, std::abs(a.payload[i] - b.payload[i]));
  v.check(diff <= 1e-14, "restart vs uninterrupted max coefficient difference " + num(diff));

  bool round = true;
  for (const auto& e : fs::directory_iterator(o.config_dir)) {
    const RunConfig c = load_config(e.path().string());
    const std::string text = serialize_config(c);
    round = round && parse_config(text) == c && serialize_config(parse_config(text)) == text;
  }
  v.check(round, "config round trip for every shipped config");

  // Two single-threaded reruns through the command line.  The output
  // directory is part of the echoed config, so both use the same one.
  const std::string cfg = (o.config_dir / "restart.cfg").string();
  const fs::path r = o.work_dir / "rerun";
  const std::string args = "simulate2d --config \"" + cfg + "\" --out \"" + r.string() + "\" --threads 1";
  fs::remove_all(r);
  const int c1 = run_cli(o, args);
  const std::string first_bytes = outputs_without_wall_time(r);
  fs::remove_all(r);
  const int c2 = run_cli(o, args);
  v.check(c1 == 0 && c2 == 0, "command line exit codes " + std::to_string(c1) + ", " + std::to_string(c2));
  v.check(c1 == 0 && first_bytes == outputs_without_wall_time(r), "reruns byte-identical apart from wall_time_s");
  const int bad = run_cli(o, "flowmap --config \"" + cfg + "\" --out \"" + (o.work_dir / "mismatch").string() + "\"");
  v.check(bad == kExitUsage, "usage error exit code " + std::to_string(bad));
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"alpha-fluids acceptance checks"};
  int criterion = 0;
  Options o;
  std::string config_dir, work_dir;
  o.threads = static_cast<int>(std::min(4u, std::max(1u, std::thread::hardware_concurrency())));
  app.add_option("--criterion", criterion, "criterion number, 0 for all")->check(CLI::Range(0, 13));
  app.add_option("--config-dir", config_dir, "directory with the shipped configs")->required();
  app.add_option("--work-dir", work_dir, "scratch directory for run outputs")->required();
  app.add_option("--cli", o.cli, "path of the alpha-fluids executable")->required();
  app.add_option("--threads", o.threads, "worker threads for the runs")->check(CLI::Range(1, 1024));
  CLI11_PARSE(app, argc, argv);
  o.config_dir = config_dir;
  o.work_dir = work_dir;
  fs::create_directories(o.work_dir);

  const std::vector<std::pair<std::string, Verdict (*)(const Options&)>> all{
      {"spectral transforms and derivatives", spectral_infrastructure},
      {"Helmholtz, Leray and Stokes projections", helmholtz_leray_stokes},
      {"single-mode decay rates", linear_decay},
      {"energy and Casimirs of the inviscid two-mode run", casimirs_conserved},
      {"transport of q and volume preservation", transport_and_volume},
      {"viscosity limit", viscosity_limit},
      {"Euler curvature anchor and non-positivity", arnold_anchor},
      {"curvature sign change for k = (1,0), l = (1,1)", alpha0_sign_flip},
      {"Jacobi fields", jacobi_fields},
      {"Camassa-Holm", camassa_holm_checks},
      {"vortex blobs", blob_checks},
      {"third-grade fluid", third_grade_checks},
      {"restart, config round trip and reruns", infrastructure},
  };
  bool ok = true;
  for (std::size_t i = 0; i < all.size(); ++i) {
    const int n = static_cast<int>(i) + 1;
    if (criterion != 0 && criterion != n) continue;
    std::string line;
    bool pass = false;
    try {
      Verdict v = all[i].second(o);
      pass = v.pass;
      line = v.detail.str();
    } catch (const std::exception& e) {
      line = std::string("error: ") + e.what();
    }
    ok = ok && pass;
    std::cout << "criterion " << n << " [" << all[i].first << "]: " << (pass ? "PASS" : "FAIL") << " | " << line
              << std::endl;
  }
  return ok ? 0 : 1;
}
