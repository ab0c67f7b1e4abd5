#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>

#include "tvcn/errors.hpp"

namespace tvcn {

// Seeded random source. The distribution transforms are implemented here
// instead of using <random> distributions, whose output sequences are
// implementation-defined; this keeps generated streams identical for a
// given seed no matter which standard library the project is built with.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform double in [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  // Uniform integer in [lo, hi], inclusive. Requires lo <= hi.
  int uniform_int(int lo, int hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(eng_() % span);
  }

  // Index sampled proportionally to non-negative weights.
  std::size_t sample_index(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0))
      throw DegenerateDistribution("sample_index: weights sum to zero");
    double r = uniform() * total;
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
      acc += weights[i];
      if (r < acc) return i;
    }
    // r landed in the last strictly positive cell (rounding).
    for (std::size_t i = weights.size(); i-- > 0;)
      if (weights[i] > 0.0) return i;
    throw DegenerateDistribution("sample_index: no positive weight");
  }

  // Poisson draw via Knuth's product method; means above 30 are split so
  // the running product stays well away from underflow.
  int poisson(double mean) {
    int count = 0;
    while (mean > 30.0) {
      count += poisson_small(30.0);
      mean -= 30.0;
    }
    return count + poisson_small(mean);
  }

 private:
  int poisson_small(double mean) {
    if (mean <= 0.0) return 0;
    const double limit = std::exp(-mean);
    int k = 0;
    double p = 1.0;
    do {
      ++k;
      p *= uniform();
    } while (p > limit);
    return k - 1;
  }

  std::mt19937_64 eng_;
};

// Independent stream seed derived from a base seed and a salt
// (splitmix64 finalizer).
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t salt) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (salt + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

}  // namespace tvcn
