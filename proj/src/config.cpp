#include "alpha_fluids/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

namespace alfl {

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& v) {
  std::string s = trim(v);
  if (s.size() >= 2 && s.front() == '(' && s.back() == ')') s = s.substr(1, s.size() - 2);
  std::vector<std::string> out;
  if (trim(s).empty()) return out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(trim(item));
  return out;
}

// Failures inside a setter are reported with the key name; the caller adds the line.
struct ValueError {
  std::string what;
};

double to_double(const std::string& s) {
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || !std::isfinite(v))
    throw ValueError{"expected a finite number, got '" + s + "'"};
  return v;
}

long long to_integer(const std::string& s) {
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) throw ValueError{"expected an integer, got '" + s + "'"};
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  std::uint64_t v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size())
    throw ValueError{"expected an unsigned 64-bit integer, got '" + s + "'"};
  return v;
}

std::string fmt(double v) {
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

template <class T>
std::string join(const std::vector<T>& v, const std::function<std::string(const T&)>& f) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + f(v[i]);
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ValueError{what};
}

int bounded_int(const std::string& s, long long lo, long long hi) {
  const long long v = to_integer(s);
  require(v >= lo && v <= hi, "must be in [" + std::to_string(lo) + ", " + std::to_string(hi) + "], got " + s);
  return static_cast<int>(v);
}

int even_grid(const std::string& s) {
  const int v = bounded_int(s, 4, 8192);
  require(v % 2 == 0, "must be even, got " + s);
  return v;
}

double positive(const std::string& s) {
  const double v = to_double(s);
  require(v > 0.0, "must be positive, got " + s);
  return v;
}

double nonnegative(const std::string& s) {
  const double v = to_double(s);
  require(v >= 0.0, "must be non-negative, got " + s);
  return v;
}

Wavevector wavevector(const std::string& s) {
  const auto parts = split_list(s);
  require(parts.size() == 2, "expected two integers 'jx,jy', got '" + s + "'");
  return {static_cast<int>(to_integer(parts[0])), static_cast<int>(to_integer(parts[1]))};
}

std::string fmt(Wavevector k) { return std::to_string(k.jx) + "," + std::to_string(k.jy); }

std::string one_of(const std::string& s, std::initializer_list<const char*> allowed) {
  std::string names;
  for (const char* a : allowed) {
    if (s == a) return s;
    names += std::string(names.empty() ? "" : ", ") + a;
  }
  throw ValueError{"must be one of {" + names + "}, got '" + s + "'"};
}

std::vector<double> positive_list(const std::string& s) {
  std::vector<double> out;
  for (const auto& p : split_list(s)) out.push_back(positive(p));
  return out;
}

struct Key {
  std::string section;
  std::string name;
  std::function<void(RunConfig&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& keys() {
  static const std::vector<Key> table = [] {
    std::vector<Key> t;
    auto add = [&](std::string sec, std::string name, std::function<void(RunConfig&, const std::string&)> set,
                   std::function<std::string(const RunConfig&)> get) {
      t.push_back({std::move(sec), std::move(name), std::move(set), std::move(get)});
    };
    add("", "experiment",
        [](RunConfig& c, const std::string& v) {
          const auto& n = experiment_names();
          require(std::find(n.begin(), n.end(), v) != n.end(), "unknown experiment '" + v + "'");
          c.experiment = v;
        },
        [](const RunConfig& c) { return c.experiment; });

    add("grid", "nx", [](RunConfig& c, const std::string& v) { c.nx = even_grid(v); },
        [](const RunConfig& c) { return std::to_string(c.nx); });
    add("grid", "ny", [](RunConfig& c, const std::string& v) { c.ny = even_grid(v); },
        [](const RunConfig& c) { return std::to_string(c.ny); });
    add("grid", "lx", [](RunConfig& c, const std::string& v) { c.lx = positive(v); },
        [](const RunConfig& c) { return fmt(c.lx); });
    add("grid", "ly", [](RunConfig& c, const std::string& v) { c.ly = positive(v); },
        [](const RunConfig& c) { return fmt(c.ly); });

    add("time", "dt", [](RunConfig& c, const std::string& v) { c.dt = positive(v); },
        [](const RunConfig& c) { return fmt(c.dt); });
    add("time", "t_final", [](RunConfig& c, const std::string& v) { c.t_final = nonnegative(v); },
        [](const RunConfig& c) { return fmt(c.t_final); });
    add("time", "output_every", [](RunConfig& c, const std::string& v) { c.output_every = bounded_int(v, 1, 1 << 30); },
        [](const RunConfig& c) { return std::to_string(c.output_every); });
    add("time", "checkpoint_every",
        [](RunConfig& c, const std::string& v) { c.checkpoint_every = bounded_int(v, 0, 1 << 30); },
        [](const RunConfig& c) { return std::to_string(c.checkpoint_every); });
    add("time", "periods", [](RunConfig& c, const std::string& v) { c.periods = nonnegative(v); },
        [](const RunConfig& c) { return fmt(c.periods); });

    add("physics", "alpha", [](RunConfig& c, const std::string& v) { c.alpha = nonnegative(v); },
        [](const RunConfig& c) { return fmt(c.alpha); });
    add("physics", "nu", [](RunConfig& c, const std::string& v) { c.nu = nonnegative(v); },
        [](const RunConfig& c) { return fmt(c.nu); });
    add("physics", "dissipation",
        [](RunConfig& c, const std::string& v) {
          c.dissipation = dissipation_from_string(one_of(v, {"inviscid", "viscous", "strong"}));
        },
        [](const RunConfig& c) { return to_string(c.dissipation); });

    add("initial", "preset",
        [](RunConfig& c, const std::string& v) {
          c.preset = one_of(v, {"single_mode", "two_mode", "random_seeded", "blob_ring"});
        },
        [](const RunConfig& c) { return c.preset; });
    add("initial", "k1", [](RunConfig& c, const std::string& v) { c.k1 = wavevector(v); },
        [](const RunConfig& c) { return fmt(c.k1); });
    add("initial", "k2", [](RunConfig& c, const std::string& v) { c.k2 = wavevector(v); },
        [](const RunConfig& c) { return fmt(c.k2); });
    add("initial", "amp1", [](RunConfig& c, const std::string& v) { c.amp1 = to_double(v); },
        [](const RunConfig& c) { return fmt(c.amp1); });
    add("initial", "amp2", [](RunConfig& c, const std::string& v) { c.amp2 = to_double(v); },
        [](const RunConfig& c) { return fmt(c.amp2); });
    add("initial", "spectrum_slope", [](RunConfig& c, const std::string& v) { c.spectrum_slope = to_double(v); },
        [](const RunConfig& c) { return fmt(c.spectrum_slope); });
    add("initial", "kmax", [](RunConfig& c, const std::string& v) { c.kmax = bounded_int(v, 1, 4096); },
        [](const RunConfig& c) { return std::to_string(c.kmax); });
    add("initial", "rms_velocity", [](RunConfig& c, const std::string& v) { c.rms_velocity = positive(v); },
        [](const RunConfig& c) { return fmt(c.rms_velocity); });
    add("initial", "blob_count", [](RunConfig& c, const std::string& v) { c.blob_count = bounded_int(v, 1, 1 << 20); },
        [](const RunConfig& c) { return std::to_string(c.blob_count); });
    add("initial", "ring_radius", [](RunConfig& c, const std::string& v) { c.ring_radius = positive(v); },
        [](const RunConfig& c) { return fmt(c.ring_radius); });
    add("initial", "circulation",
        [](RunConfig& c, const std::string& v) {
          c.circulation = to_double(v);
          require(c.circulation != 0.0, "must be nonzero");
        },
        [](const RunConfig& c) { return fmt(c.circulation); });
    add("initial", "restart_from", [](RunConfig& c, const std::string& v) { c.restart_from = v; },
        [](const RunConfig& c) { return c.restart_from; });

    add("ch", "bc", [](RunConfig& c, const std::string& v) { c.ch_bc = one_of(v, {"dirichlet", "periodic"}); },
        [](const RunConfig& c) { return c.ch_bc; });
    add("ch", "n", [](RunConfig& c, const std::string& v) { c.ch_n = bounded_int(v, 4, 1 << 22); },
        [](const RunConfig& c) { return std::to_string(c.ch_n); });
    add("ch", "amplitude", [](RunConfig& c, const std::string& v) { c.ch_amplitude = to_double(v); },
        [](const RunConfig& c) { return fmt(c.ch_amplitude); });
    add("ch", "mode", [](RunConfig& c, const std::string& v) { c.ch_mode = bounded_int(v, 1, 1 << 20); },
        [](const RunConfig& c) { return std::to_string(c.ch_mode); });
    add("ch", "compare_spray",
        [](RunConfig& c, const std::string& v) { c.ch_compare_spray = one_of(v, {"true", "false"}) == "true"; },
        [](const RunConfig& c) { return std::string(c.ch_compare_spray ? "true" : "false"); });

    add("curvature", "k", [](RunConfig& c, const std::string& v) { c.k = wavevector(v); },
        [](const RunConfig& c) { return fmt(c.k); });
    add("curvature", "l", [](RunConfig& c, const std::string& v) { c.l = wavevector(v); },
        [](const RunConfig& c) { return fmt(c.l); });
    add("curvature", "eps", [](RunConfig& c, const std::string& v) { c.eps = wavevector(v); },
        [](const RunConfig& c) { return fmt(c.eps); });
    add("curvature", "random_pairs", [](RunConfig& c, const std::string& v) { c.random_pairs = bounded_int(v, 0, 1 << 20); },
        [](const RunConfig& c) { return std::to_string(c.random_pairs); });
    add("curvature", "random_kmax", [](RunConfig& c, const std::string& v) { c.random_kmax = bounded_int(v, 1, 64); },
        [](const RunConfig& c) { return std::to_string(c.random_kmax); });
    add("curvature", "alpha_step",
        [](RunConfig& c, const std::string& v) {
          c.alpha_step = positive(v);
          require(c.alpha_step <= 1.0, "must be at most 1");
        },
        [](const RunConfig& c) { return fmt(c.alpha_step); });
    add("curvature", "alpha_tol", [](RunConfig& c, const std::string& v) { c.alpha_tol = positive(v); },
        [](const RunConfig& c) { return fmt(c.alpha_tol); });

    add("visc-limit", "nu_list",
        [](RunConfig& c, const std::string& v) {
          c.nu_list = positive_list(v);
          require(!c.nu_list.empty(), "needs at least one value");
        },
        [](const RunConfig& c) { return join<double>(c.nu_list, [](const double& x) { return fmt(x); }); });
    add("visc-limit", "variants",
        [](RunConfig& c, const std::string& v) {
          c.variants.clear();
          for (const auto& p : split_list(v)) c.variants.push_back(dissipation_from_string(one_of(p, {"viscous", "strong"})));
          require(!c.variants.empty(), "needs at least one variant");
        },
        [](const RunConfig& c) { return join<Dissipation>(c.variants, [](const Dissipation& d) { return to_string(d); }); });

    add("jacobi", "mode",
        [](RunConfig& c, const std::string& v) { c.jacobi_mode = one_of(v, {"fd_compare", "tangential"}); },
        [](const RunConfig& c) { return c.jacobi_mode; });
    add("jacobi", "fd_eps",
        [](RunConfig& c, const std::string& v) {
          c.fd_eps = positive_list(v);
          require(!c.fd_eps.empty(), "needs at least one value");
        },
        [](const RunConfig& c) { return join<double>(c.fd_eps, [](const double& x) { return fmt(x); }); });
    add("jacobi", "perturbation_amplitude",
        [](RunConfig& c, const std::string& v) { c.perturbation_amplitude = positive(v); },
        [](const RunConfig& c) { return fmt(c.perturbation_amplitude); });
    add("jacobi", "perturbation_kmax",
        [](RunConfig& c, const std::string& v) { c.perturbation_kmax = bounded_int(v, 1, 4096); },
        [](const RunConfig& c) { return std::to_string(c.perturbation_kmax); });

    add("flowmap", "lattice", [](RunConfig& c, const std::string& v) { c.lattice = bounded_int(v, 2, 1 << 14); },
        [](const RunConfig& c) { return std::to_string(c.lattice); });
    add("flowmap", "mode_tol",
        [](RunConfig& c, const std::string& v) {
          c.mode_tol = nonnegative(v);
          require(c.mode_tol < 1.0, "must be below 1");
        },
        [](const RunConfig& c) { return fmt(c.mode_tol); });
    add("flowmap", "refine_lattice",
        [](RunConfig& c, const std::string& v) {
          c.refine_lattice.clear();
          for (const auto& p : split_list(v)) c.refine_lattice.push_back(bounded_int(p, 2, 1 << 14));
        },
        [](const RunConfig& c) { return join<int>(c.refine_lattice, [](const int& x) { return std::to_string(x); }); });
    add("flowmap", "refine_dt", [](RunConfig& c, const std::string& v) { c.refine_dt = positive_list(v); },
        [](const RunConfig& c) { return join<double>(c.refine_dt, [](const double& x) { return fmt(x); }); });

    add("run", "seed", [](RunConfig& c, const std::string& v) { c.seed = to_u64(v); },
        [](const RunConfig& c) { return std::to_string(c.seed); });
    add("run", "threads", [](RunConfig& c, const std::string& v) { c.threads = bounded_int(v, 1, 1024); },
        [](const RunConfig& c) { return std::to_string(c.threads); });
    add("run", "out",
        [](RunConfig& c, const std::string& v) {
          require(!v.empty(), "must not be empty");
          c.out_dir = v;
        },
        [](const RunConfig& c) { return c.out_dir; });
    return t;
  }();
  return table;
}

void validate(const RunConfig& c) {
  if (!c.refine_lattice.empty()) {
    const int top = std::max(c.lattice, *std::max_element(c.refine_lattice.begin(), c.refine_lattice.end()));
    for (int m : c.refine_lattice)
      if (top % m != 0)
        throw ConfigError("flowmap.refine_lattice: every lattice must divide the largest one (" + std::to_string(top) + ")", 0);
    if (top % c.lattice != 0) throw ConfigError("flowmap.lattice must divide the largest refine_lattice entry", 0);
  }
  if (c.experiment == "ch" && c.ch_compare_spray && c.ch_bc != "dirichlet")
    throw ConfigError("ch.compare_spray requires ch.bc = dirichlet", 0);
  if (c.experiment == "blob" && c.preset != "blob_ring") throw ConfigError("the blob experiment needs initial.preset = blob_ring", 0);
  const bool field_run = c.experiment == "simulate2d" || c.experiment == "visc-limit" || c.experiment == "jacobi" ||
                         c.experiment == "flowmap";
  if (field_run && c.preset == "blob_ring")
    throw ConfigError("initial.preset = blob_ring is only valid for the blob experiment", 0);
  if (c.dissipation != Dissipation::inviscid && !(c.nu > 0.0))
    throw ConfigError("physics.dissipation = " + to_string(c.dissipation) + " needs nu > 0", 0);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  static const std::set<std::string> sections = [] {
    std::set<std::string> s;
    for (const auto& k : keys()) s.insert(k.section);
    return s;
  }();
  RunConfig cfg;
  std::string section;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string s = trim(raw);
    if (s.empty() || s[0] == '#' || s[0] == ';') continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ConfigError("malformed section header '" + s + "'", line);
      section = trim(s.substr(1, s.size() - 2));
      if (section.empty() || !sections.count(section)) throw ConfigError("unknown section [" + section + "]", line);
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value', got '" + s + "'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string value = trim(s.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    const auto it = std::find_if(keys().begin(), keys().end(),
                                 [&](const Key& k) { return k.section == section && k.name == key; });
    if (it == keys().end()) throw ConfigError("unknown key '" + full + "'", line);
    if (!seen.insert(full).second) throw ConfigError("duplicate key '" + full + "'", line);
    try {
      it->set(cfg, value);
    } catch (const ValueError& e) {
      throw ConfigError(full + ": " + e.what, line);
    } catch (const std::invalid_argument& e) {
      throw ConfigError(full + ": " + e.what(), line);
    }
  }
  validate(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot open config file '" + path + "'", 0);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const RunConfig& cfg) {
  std::string out;
  std::string section = "\x01";
  for (const auto& k : keys()) {
    if (k.section != section) {
      section = k.section;
      if (!section.empty()) out += "\n[" + section + "]\n";
    }
    out += k.name + " = " + k.get(cfg) + "\n";
  }
  return out;
}

}  // namespace alfl
