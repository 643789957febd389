#include <CLI11.hpp>

#include <charconv>
#include <cstdlib>
#include <iostream>
#include <string>

#include "alpha_fluids/config.hpp"
#include "alpha_fluids/experiments.hpp"

namespace {

int threads_from_env(const char* text) {
  const std::string s(text);
  int v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size() || v < 1 || v > 1024)
    throw alfl::ConfigError("ALPHA_FLUIDS_THREADS must be an integer in [1, 1024], got '" + s + "'", 0);
  return v;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Euler-alpha, Camassa-Holm and vortex blob experiments on the torus"};
  std::string experiment, config_path, out;
  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("experiment", experiment, "simulate2d | blob | ch | curvature | visc-limit | alpha-sweep | jacobi | flowmap")
      ->required()
      ->check(CLI::IsMember(alfl::experiment_names()));
  app.add_option("--config", config_path, "run configuration file")->required();
  auto* out_opt = app.add_option("--out", out, "output directory (overrides run.out)");
  auto* seed_opt = app.add_option("--seed", seed, "64-bit seed (overrides run.seed)");
  auto* threads_opt = app.add_option("--threads", threads, "worker threads (overrides ALPHA_FLUIDS_THREADS and run.threads)")
                          ->check(CLI::Range(1, 1024));
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? alfl::kExitOk : alfl::kExitUsage;
  }

  try {
    alfl::RunConfig cfg = alfl::load_config(config_path);
    if (cfg.experiment != experiment)
      throw alfl::ConfigError("'" + config_path + "' configures experiment '" + cfg.experiment + "', not '" +
                                  experiment + "'",
                              0);
    if (*out_opt) cfg.out_dir = out;
    if (*seed_opt) cfg.seed = seed;
    if (*threads_opt)
      cfg.threads = threads;
    else if (const char* env = std::getenv("ALPHA_FLUIDS_THREADS"))
      cfg.threads = threads_from_env(env);
    return alfl::run_experiment(cfg, &std::cerr);
  } catch (const alfl::ConfigError& e) {
    std::cerr << "alpha-fluids: configuration error: " << e.what() << "\n";
    return alfl::kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "alpha-fluids: " << e.what() << "\n";
    return alfl::kExitUsage;
  }
}
