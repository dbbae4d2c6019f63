#pragma once

#include <cstdint>

namespace rbmp {

/// xoshiro256** 1.0 (Blackman and Vigna), state seeded from a 64-bit value by
/// SplitMix64. Fully specified here so sampled instances are bit-identical on
/// every platform; std distributions are deliberately not used.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  /// Poisson variate by inversion; means above 30 are split into independent
  /// chunks of at most 30.
  int poisson(double mean);

 private:
  std::uint64_t state_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace rbmp
