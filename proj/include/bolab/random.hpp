#pragma once

// Per-sample random streams. Sample i of a run with seed s draws from its own
// engine seeded by mix(s, i), so results do not depend on how samples are
// distributed over workers.

#include <cstdint>
#include <random>

#include "bolab/spectral.hpp"

namespace bolab {

/// splitmix64 finalizer applied to (seed, index).
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) noexcept;

class SampleRng {
 public:
  SampleRng(std::uint64_t seed, std::uint64_t index);

  double normal();
  /// Complex Gaussian with independent Normal(0, 1/2) parts, so E|g|^2 = 1.
  complex complex_gaussian();
  double uniform();

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace bolab
