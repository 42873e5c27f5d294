#pragma once

#include <cmath>
#include <cstdint>

namespace dgft {

// Counter-based pseudo-random generator (splitmix64 finalizer applied to
// seed + counter). The i-th output depends only on (seed, stream, i), so
// derived streams can be replayed independently of draw order elsewhere.
class CounterRng {
public:
  explicit CounterRng(std::uint64_t seed, std::uint64_t stream = 0)
      : key_(mix(seed + 0x9e3779b97f4a7c15ull * (stream + 1))) {}

  std::uint64_t next_u64() { return mix(key_ + 0x9e3779b97f4a7c15ull * ++counter_); }

  // Uniform in [0, 1), 53-bit mantissa.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  // Box-Muller; uses two uniforms per draw, the sine partner is discarded
  // so the stream position stays a pure function of the draw index.
  double gaussian(double mean, double stddev) {
    const double u1 = 1.0 - next_double();  // (0, 1], keeps log finite
    const double u2 = next_double();
    const double r = std::sqrt(-2.0 * std::log(u1));
    constexpr double two_pi = 6.283185307179586476925286766559;
    return mean + stddev * r * std::cos(two_pi * u2);
  }

  // Derived generator for an independent substream (per-trial seeds etc).
  CounterRng derive(std::uint64_t stream) const { return CounterRng(key_, stream); }

  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace dgft
