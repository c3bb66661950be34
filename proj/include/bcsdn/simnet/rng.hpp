#pragma once

// Counter-based generator. Each stream is keyed by (seed, stream name); the
// k-th draw (k = 1, 2, ...) is splitmix64_mix(key + k * 0x9E3779B97F4A7C15)
// with key = splitmix64_mix(seed ^ fnv1a64(name)). Draws depend only on the
// key and the counter, so any implementation reproduces them.

#include <cstdint>
#include <string_view>

namespace bcsdn::simnet {

constexpr std::uint64_t splitmix64_mix(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

constexpr std::uint64_t fnv1a64(std::string_view s) noexcept {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<std::uint8_t>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

class CounterRng {
 public:
  static constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

  constexpr CounterRng(std::uint64_t seed, std::string_view stream) noexcept
      : key_(splitmix64_mix(seed ^ fnv1a64(stream))) {}

  constexpr std::uint64_t next() noexcept {
    ++counter_;
    return splitmix64_mix(key_ + counter_ * kGamma);
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform() noexcept { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// Uniform integer on [0, bound); bound > 0. Uses the multiply-high map.
  std::uint64_t below(std::uint64_t bound) noexcept {
    __extension__ using u128 = unsigned __int128;
    return static_cast<std::uint64_t>((static_cast<u128>(next()) * bound) >> 64);
  }

  constexpr std::uint64_t counter() const noexcept { return counter_; }

 private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
};

}  // namespace bcsdn::simnet
