#pragma once

#include <iosfwd>
#include <string>

#include "alpha_fluids/config.hpp"
#include "alpha_fluids/spectral.hpp"

namespace alfl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumericalAbort = 2;

/// Runs cfg.experiment and writes its CSV files, summary.csv and
/// manifest.txt into cfg.out_dir (created if missing).  Returns kExitOk, or
/// kExitNumericalAbort after a blow-up, CFL or monotonicity guard fired; in
/// that case the manifest says status=INCOMPLETE.  Invalid configurations
/// throw ConfigError and I/O failures std::runtime_error.  Progress lines go
/// to log when it is non-null.
int run_experiment(const RunConfig& cfg, std::ostream* log = nullptr);

/// Initial velocity for the single_mode, two_mode and random_seeded presets.
VectorField initial_velocity(const RunConfig& cfg);

/// Seeds derived from cfg.seed: the first SplitMix64 output seeds the
/// initial condition, the second the auxiliary draws of an experiment
/// (perturbations, random curvature pairs).
std::uint64_t initial_condition_seed(const RunConfig& cfg);
std::uint64_t auxiliary_seed(const RunConfig& cfg);

}  // namespace alfl
