#pragma once

#include <cstdint>
#include <random>
#include <span>

// Random number plumbing shared by the samplers.
//
// Parallel sampling uses one independent engine per sample ("stream").
// Stream k of a master seed s is an mt19937_64 engine seeded with
// splitmix64(s + (k+1) * 0x9E3779B97F4A7C15), so results do not depend
// on how samples are scheduled across threads.

namespace shapegram {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

inline std::uint64_t stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + (stream + 1) * 0x9E3779B97F4A7C15ull);
}

inline std::mt19937_64 make_engine(std::uint64_t master, std::uint64_t stream = 0) {
  return std::mt19937_64(stream_seed(master, stream));
}

// Uniform double in [0, 1) with 53 random bits. Used instead of
// std::uniform_real_distribution so draws are identical across
// standard library implementations.
inline double uniform_unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Draw an index proportional to non-negative linear weights by
// cumulative inversion with a single uniform variate.
// Returns weights.size() if the total weight is zero.
inline std::size_t sample_discrete(std::span<const double> weights, std::mt19937_64& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) return weights.size();
  const double u = uniform_unit(rng) * total;
  double acc = 0.0;
  std::size_t last_positive = weights.size();
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i] > 0.0) {
      acc += weights[i];
      last_positive = i;
      if (u < acc) return i;
    }
  }
  return last_positive;  // u landed in the rounding tail
}

}  // namespace shapegram
