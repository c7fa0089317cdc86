#pragma once
// Deterministic counter-derived random streams.
//
// Simulation code derives one independent stream per trial (or per
// realization) from a user seed and a trial index, so results are
// reproducible for a given seed regardless of evaluation order and
// trials never share state.

#include <cstdint>

namespace msalloc {

// splitmix64 output finalizer (Steele, Lea, Flood 2014).
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

struct SplitMix64 {
  std::uint64_t state = 0;

  std::uint64_t next() {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
  }

  // Uniform in [0, 1), 53 significant bits.
  double next_double() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  // Unbiased integer in [0, bound); bound must be positive.
  std::uint64_t next_below(std::uint64_t bound) {
    // Lemire's multiply-shift rejection method.
    std::uint64_t x = next();
    __uint128_t m = static_cast<__uint128_t>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      std::uint64_t threshold = -bound % bound;
      while (low < threshold) {
        x = next();
        m = static_cast<__uint128_t>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }
};

// Stream for trial `index` under `seed`. The counter is finalized before
// use: raw `seed + GAMMA*index` starting states would make adjacent
// streams overlapping shifts of one master sequence.
inline SplitMix64 derive_stream(std::uint64_t seed, std::uint64_t index) {
  return SplitMix64{mix64(seed + 0x9E3779B97F4A7C15ULL * (index + 1))};
}

}  // namespace msalloc
