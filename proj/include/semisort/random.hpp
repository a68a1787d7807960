#pragma once

#include <cstdint>

#include "semisort/hash.hpp"

namespace semisort {

/// splitmix64 stream. Each state advance is a Weyl step by the golden-ratio
/// constant; outputs are the mix64 finalizer of the state.
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

  constexpr std::uint64_t operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform in [0, bound) by 128-bit multiply-shift. bound must be nonzero.
  constexpr std::uint64_t bounded(std::uint64_t bound) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>((*this)()) * bound) >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  constexpr double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  static constexpr std::uint64_t min() { return 0; }
  static constexpr std::uint64_t max() { return ~std::uint64_t{0}; }

 private:
  std::uint64_t state_;
};

/// Counter-based stream key: independent streams for (seed, counter) pairs.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t counter) {
  return mix64(mix64(seed ^ 0x6a09e667f3bcc909ULL) + counter * 0x9e3779b97f4a7c15ULL);
}

}  // namespace semisort
