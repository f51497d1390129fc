#pragma once

#include <cstdint>
#include <vector>

#include "stepfun/rational.hpp"

namespace stepfun {

// splitmix64: the generator named in the sampling contract. Small state,
// trivially splittable into independent substreams by hashing (seed, tag,
// index), so per-row / per-column draws can be produced in any order.
struct SplitMix64 {
  std::uint64_t state = 0;

  explicit SplitMix64(std::uint64_t seed) : state(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d49bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound), bound >= 1. Rejection-free is not
  /// required here; we use rejection sampling for exact uniformity.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = bound * (UINT64_MAX / bound);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % bound;
  }
};

/// Derives an independent substream from (seed, tag, index).
SplitMix64 substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index);

/// Cumulative sums of a weight vector (weights[0], weights[0]+weights[1], ...).
std::vector<Rational> cumulative_weights(const std::vector<Rational>& weights);

/// Inverse-CDF draw of an atom index: interprets `draw` as the exact rational
/// draw/2^64 in [0,1) and returns the first index whose cumulative weight
/// exceeds it. Exact rational comparison, no floating point.
int sample_atom(const std::vector<Rational>& cumulative, std::uint64_t draw);

}  // namespace stepfun
