#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "alpha_fluids/euler_alpha.hpp"

namespace alfl {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Contents of a checkpoint file; layout in docs/checkpoint_format.md.
struct Checkpoint {
  std::string tag;  ///< experiment name, at most 16 bytes
  std::uint32_t nx = 0, ny = 0;
  double lx = 0.0, ly = 0.0;
  double alpha = 0.0, nu = 0.0, t = 0.0;
  Vec2 mean_velocity;
  std::uint32_t rank = 0;  ///< 1 scalar, 2 vector
  /// rank * nx * ny coefficients, row-major over (ix, iy) per component.
  std::vector<Complex> payload;
};

void write_checkpoint(const std::string& path, const Checkpoint& c);
Checkpoint read_checkpoint(const std::string& path);

/// Potential vorticity coefficients plus mean flow.
Checkpoint checkpoint_from_state(const VorticityState& s, const std::string& tag, double nu);
VorticityState state_from_checkpoint(const Checkpoint& c);

}  // namespace alfl
