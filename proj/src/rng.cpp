#include "mtcnn/rng.hpp"

#include <cmath>

#include "mtcnn/errors.hpp"

namespace mtcnn {
namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t rotl(std::uint64_t v, int k) {
  return (v << k) | (v >> (64 - k));
}

}  // namespace

SeededGenerator::SeededGenerator(std::uint64_t seed) : seed_(seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64(s);
  // xoshiro requires a nonzero state; splitmix expansion cannot realistically
  // produce four zero words, but guard anyway.
  if (state_[0] == 0 && state_[1] == 0 && state_[2] == 0 && state_[3] == 0) state_[0] = 1;
}

std::uint64_t SeededGenerator::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double SeededGenerator::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

std::uint64_t SeededGenerator::next_below(std::uint64_t bound) {
  if (bound == 0) throw InvalidArgumentError("next_below: bound must be positive");
  const std::uint64_t threshold = -bound % bound;  // 2^64 mod bound
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t x = seed ^ (0xA0761D6478BD642FULL * (index + 1));
  splitmix64(x);
  return splitmix64(x);
}

Vector uniform_in(SeededGenerator& gen, double lo, double hi, Eigen::Index n) {
  if (!(lo < hi))
    throw InvalidArgumentError("uniform_in: empty interval [" + std::to_string(lo) + ", " +
                               std::to_string(hi) + ")");
  if (n < 1) throw InvalidArgumentError("uniform_in: need at least one draw");
  Vector out(n);
  for (Eigen::Index i = 0; i < n; ++i) out[i] = lo + (hi - lo) * gen.next_double();
  return out;
}

Vector he_uniform(SeededGenerator& gen, Eigen::Index fan_in, Eigen::Index n) {
  if (fan_in < 1) throw InvalidArgumentError("he_uniform: fan_in must be positive");
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in));
  return uniform_in(gen, -limit, limit, n);
}

Vector glorot_uniform(SeededGenerator& gen, Eigen::Index fan_in, Eigen::Index fan_out,
                      Eigen::Index n) {
  if (fan_in < 1 || fan_out < 1)
    throw InvalidArgumentError("glorot_uniform: fans must be positive");
  const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  return uniform_in(gen, -limit, limit, n);
}

}  // namespace mtcnn
