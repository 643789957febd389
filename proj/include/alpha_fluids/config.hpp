#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "alpha_fluids/euler_alpha.hpp"

namespace alfl {

/// Parse or validation failure.  line() is 0 for checks that involve more
/// than one key.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

inline const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"simulate2d", "blob",        "ch",     "curvature",
                                              "visc-limit", "alpha-sweep", "jacobi", "flowmap"};
  return names;
}

/// Everything a run needs.  Section and key names in the text format are
/// listed in docs/config_format.md.
struct RunConfig {
  std::string experiment = "simulate2d";

  // [grid]
  int nx = 64;
  int ny = 64;
  double lx = kTwoPi;
  double ly = kTwoPi;

  // [time]
  double dt = 1e-3;
  double t_final = 1.0;
  int output_every = 10;
  int checkpoint_every = 0;
  /// blob runs: if positive, the run lasts this many rotation periods of the
  /// ring instead of t_final.
  double periods = 0.0;

  // [physics]
  double alpha = 0.0;
  double nu = 0.0;
  Dissipation dissipation = Dissipation::inviscid;

  // [initial]
  std::string preset = "single_mode";
  Wavevector k1{1, 0};
  Wavevector k2{1, 1};
  double amp1 = 1.0;
  double amp2 = 0.0;
  double spectrum_slope = -3.0;
  int kmax = 8;
  double rms_velocity = 1.0;
  int blob_count = 2;
  double ring_radius = 0.5;
  double circulation = 1.0;
  std::string restart_from;

  // [ch]
  std::string ch_bc = "dirichlet";
  int ch_n = 512;
  double ch_amplitude = 1.0;
  int ch_mode = 1;
  bool ch_compare_spray = false;

  // [curvature]  (also alpha-sweep)
  Wavevector k{1, 0};
  Wavevector l{0, 1};
  Wavevector eps{0, 1};
  int random_pairs = 0;
  int random_kmax = 4;
  double alpha_step = 0.05;
  double alpha_tol = 1e-4;

  // [visc-limit]
  std::vector<double> nu_list{1e-1, 1e-2, 1e-3, 1e-4};
  std::vector<Dissipation> variants{Dissipation::viscous, Dissipation::strong};

  // [jacobi]
  std::string jacobi_mode = "fd_compare";
  std::vector<double> fd_eps{1e-4, 5e-5};
  double perturbation_amplitude = 0.1;
  int perturbation_kmax = 3;

  // [flowmap]
  int lattice = 32;
  double mode_tol = 0.0;
  std::vector<int> refine_lattice;
  std::vector<double> refine_dt;

  // [run]
  std::uint64_t seed = 0;
  int threads = 1;
  std::string out_dir = "alpha-fluids-out";

  bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Every key, in document order.  parse_config(serialize_config(c)) == c.
std::string serialize_config(const RunConfig& cfg);

}  // namespace alfl
