#pragma once

#include <array>
#include <cstdint>

#include "mtcnn/types.hpp"

namespace mtcnn {

// Deterministic uniform generator: xoshiro256++ with splitmix64 seed
// expansion. The algorithm is pinned (here and in docs/file-formats.md) so a
// (seed, config) pair reproduces the same stream on every run of this
// codebase. Single-owner: do not share one instance across threads.
class SeededGenerator {
 public:
  explicit SeededGenerator(std::uint64_t seed);

  std::uint64_t next_u64();
  // Uniform in [0, 1), 53 mantissa bits.
  double next_double();
  // Uniform integer in [0, bound), rejection-sampled. bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
  std::array<std::uint64_t, 4> state_;
};

// Derives an independent child seed, e.g. one stream per realization or
// per epoch, so parallel generation stays deterministic.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// n uniform draws in [lo, hi). Throws InvalidArgumentError if lo >= hi
// or n < 1.
Vector uniform_in(SeededGenerator& gen, double lo, double hi, Eigen::Index n);

// He uniform: [-L, L] with L = sqrt(6 / fan_in).
Vector he_uniform(SeededGenerator& gen, Eigen::Index fan_in, Eigen::Index n);

// Glorot uniform: [-L, L] with L = sqrt(6 / (fan_in + fan_out)).
Vector glorot_uniform(SeededGenerator& gen, Eigen::Index fan_in, Eigen::Index fan_out,
                      Eigen::Index n);

}  // namespace mtcnn
