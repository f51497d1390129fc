#include "stepfun/rng.hpp"

namespace stepfun {

namespace {
std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d49bb133111ebULL;
  return z ^ (z >> 31);
}
}  // namespace

SplitMix64 substream(std::uint64_t seed, std::uint64_t tag, std::uint64_t index) {
  // Hash the triple so that substreams are pairwise independent for
  // distinct (tag, index); the per-stream state then advances normally.
  std::uint64_t s = mix(seed ^ 0x2545f4914f6cdd1dULL);
  s = mix(s ^ (tag * 0x9e3779b97f4a7c15ULL));
  s = mix(s ^ (index * 0xd1342543de82ef95ULL));
  return SplitMix64(s);
}

std::vector<Rational> cumulative_weights(const std::vector<Rational>& weights) {
  std::vector<Rational> cumulative;
  cumulative.reserve(weights.size());
  Rational running = 0;
  for (const Rational& w : weights) {
    running += w;
    cumulative.push_back(running);
  }
  return cumulative;
}

int sample_atom(const std::vector<Rational>& cumulative, std::uint64_t draw) {
  // draw/2^64 < cumulative[i]  <=>  draw * den < num * 2^64, exactly.
  static const BigInt two64 = BigInt(1) << 64;
  const BigInt d(draw);
  int lo = 0;
  int hi = static_cast<int>(cumulative.size()) - 1;
  while (lo < hi) {
    const int mid = (lo + hi) / 2;
    const Rational& c = cumulative[mid];
    if (d * denominator(c) < numerator(c) * two64) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

}  // namespace stepfun
