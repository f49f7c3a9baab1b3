#pragma once

// Counter-based random numbers: every draw is a pure function of
// (seed, stream, counter), so results do not depend on scheduling.

#include <cstdint>

namespace skewlab {

inline std::uint64_t splitmix64(std::uint64_t z) noexcept {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

class CounterRng {
 public:
  constexpr CounterRng(std::uint64_t seed, std::uint64_t stream) noexcept
      : seed_(seed), stream_(stream) {}

  std::uint64_t bits(std::uint64_t counter) const noexcept {
    return splitmix64(splitmix64(splitmix64(seed_) ^ stream_) ^ counter);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform(std::uint64_t counter) const noexcept {
    return double(bits(counter) >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi, std::uint64_t counter) const noexcept {
    return lo + (hi - lo) * uniform(counter);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
};

}  // namespace skewlab
