#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

#include "semisort/types.hpp"

namespace semisort {

/// User-facing tuning knobs. Unset subarray_length is derived from n.
struct TuningParams {
  std::size_t light_buckets = std::size_t{1} << 10;  // n_L
  std::optional<std::size_t> subarray_length;        // l
  std::size_t base_case_threshold = std::size_t{1} << 14;  // alpha
  std::size_t max_heavy = 500;
  double sample_factor = 500.0;
  std::uint64_t seed = 0x5eed5eed5eed5eedULL;
};

/// Parameters fixed for one top-level call; identical at every recursion level.
struct ResolvedParams {
  std::size_t n = 0;  // top-level size
  std::size_t light_buckets = 0;
  unsigned light_bits = 0;
  std::size_t subarray_length = 1;
  std::size_t base_case_threshold = 1;
  std::size_t max_heavy = 0;
  std::size_t sample_count = 0;  // before the min(n', .) clamp
  double heavy_threshold = 0.0;  // sample occurrences needed to be heavy
  std::uint64_t seed = 0;

  std::size_t num_buckets_max() const { return light_buckets + max_heavy; }
};

// Bucket ids are stored as 16-bit values.
inline constexpr std::size_t kMaxBuckets = std::size_t{1} << 16;

inline double log2_size(std::size_t n) { return n < 2 ? 0.0 : std::log2(static_cast<double>(n)); }

inline ResolvedParams resolve(const TuningParams& p, std::size_t n) {
  if (p.light_buckets < 2 || !std::has_single_bit(p.light_buckets))
    throw ConfigError("light bucket count must be a power of two >= 2, got " +
                      std::to_string(p.light_buckets));
  if (p.light_buckets + p.max_heavy > kMaxBuckets)
    throw ConfigError("light buckets + max heavy must not exceed 65536");
  if (p.base_case_threshold < 1) throw ConfigError("base case threshold must be >= 1");
  if (!(p.sample_factor > 0.0) || !std::isfinite(p.sample_factor))
    throw ConfigError("sample factor must be positive");

  ResolvedParams r;
  r.n = n;
  r.light_buckets = p.light_buckets;
  r.light_bits = static_cast<unsigned>(std::countr_zero(p.light_buckets));
  if (p.subarray_length) {
    if (*p.subarray_length < p.light_buckets)
      throw ConfigError("subarray length " + std::to_string(*p.subarray_length) +
                        " is smaller than the light bucket count " +
                        std::to_string(p.light_buckets));
    r.subarray_length = *p.subarray_length;
  } else {
    const std::size_t derived = (n + 4999) / 5000;
    r.subarray_length = derived < p.light_buckets ? p.light_buckets : derived;
  }
  r.base_case_threshold = p.base_case_threshold;
  r.max_heavy = p.max_heavy;
  r.heavy_threshold = log2_size(n);
  r.sample_count = static_cast<std::size_t>(std::ceil(p.sample_factor * log2_size(n)));
  r.seed = p.seed;
  return r;
}

}  // namespace semisort
