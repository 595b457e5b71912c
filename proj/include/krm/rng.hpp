#pragma once

#include <cstdint>
#include <string_view>

namespace krm {

// Counter-based SplitMix64: draw i of a stream is mix64(seed + (i + 1) * golden_gamma),
// so any draw can be produced independently of the others. The mixing function and
// the double conversion below are frozen; changing either bumps the version tag.
class CounterRng {
 public:
  static constexpr std::string_view kName = "splitmix64-counter/v1";

  explicit CounterRng(std::uint64_t seed) : seed_(seed) {}

  std::uint64_t bits(std::uint64_t i) const {
    std::uint64_t z = seed_ + (i + 1) * 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  // Uniform on [0, 1) with 53 random bits.
  double uniform01(std::uint64_t i) const { return static_cast<double>(bits(i) >> 11) * 0x1.0p-53; }

  std::uint64_t seed() const { return seed_; }

 private:
  std::uint64_t seed_;
};

// Per-trial seed used by all Monte-Carlo drivers.
constexpr std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial) { return base_seed ^ trial; }

}  // namespace krm
