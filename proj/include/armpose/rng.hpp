#pragma once

#include <cstdint>

namespace armpose {

/// Counter-based SplitMix64 stream. Draw i of a stream is
/// mix(seed + (i + 1) * 0x9E3779B97F4A7C15), so identical (seed, counter)
/// pairs always give identical draws on every platform.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed = 0, std::uint64_t counter = 0)
      : seed_(seed), counter_(counter) {}

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t counter() const noexcept { return counter_; }

  std::uint64_t next_u64() noexcept {
    std::uint64_t z = seed_ + (++counter_) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// Uniform in [lo, hi].
  double uniform(double lo, double hi) noexcept {
    return lo + (hi - lo) * uniform();
  }

  /// Uniform integer in [0, n), n > 0. Lemire-style rejection keeps it unbiased.
  std::uint64_t below(std::uint64_t n) noexcept {
    const std::uint64_t limit = (~std::uint64_t{0}) - (~std::uint64_t{0}) % n;
    std::uint64_t x = next_u64();
    while (x >= limit) x = next_u64();
    return x % n;
  }

  /// Independent child stream, e.g. one per training arm.
  RngStream fork(std::uint64_t salt) const noexcept {
    RngStream mixer(seed_ ^ (salt * 0xD1B54A32D192ED03ULL), salt);
    return RngStream(mixer.next_u64(), 0);
  }

 private:
  std::uint64_t seed_;
  std::uint64_t counter_;
};

}  // namespace armpose
