#include "rbmp/random.hpp"

#include <cmath>
#include <stdexcept>

namespace rbmp {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

int poisson_inversion(Rng& rng, double mean) {
  const double u = rng.uniform01();
  double pmf = std::exp(-mean);
  double cdf = pmf;
  int k = 0;
  while (u >= cdf) {
    ++k;
    pmf *= mean / k;
    cdf += pmf;
    if (k > 1000) break;  // cdf stalled at 1 - ulp
  }
  return k;
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Rng::Rng(std::uint64_t seed) {
  std::uint64_t s = seed;
  for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Rng::next() {
  const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double Rng::uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

int Rng::poisson(double mean) {
  if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::domain_error("poisson: mean must be finite and >= 0");
  if (mean == 0.0) return 0;
  constexpr double kChunk = 30.0;
  int total = 0;
  double remaining = mean;
  while (remaining > kChunk) {
    total += poisson_inversion(*this, kChunk);
    remaining -= kChunk;
  }
  return total + poisson_inversion(*this, remaining);
}

}  // namespace rbmp
