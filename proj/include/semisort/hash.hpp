#pragma once

#include <cstdint>
#include <string_view>

#include "semisort/types.hpp"

namespace semisort {

// 64-bit finalizer (splitmix64 / murmur3-style avalanche).
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Order-dependent combination of two 64-bit values.
constexpr std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t v) {
  return mix64(seed ^ (v + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2)));
}

constexpr std::uint64_t hash_key(std::uint32_t k) { return mix64(k); }
constexpr std::uint64_t hash_key(std::uint64_t k) { return mix64(k); }
constexpr std::uint64_t hash_key(const Key128& k) { return hash_combine(mix64(k.lo), k.hi); }

/// hash(k) = k; 128-bit keys are truncated to their low word.
constexpr std::uint64_t identity_hash(std::uint32_t k) { return k; }
constexpr std::uint64_t identity_hash(std::uint64_t k) { return k; }
constexpr std::uint64_t identity_hash(const Key128& k) { return k.lo; }

// Polynomial byte hash followed by a finalizer.
constexpr std::uint64_t hash_bytes(std::string_view bytes) {
  std::uint64_t h = 0x84222325cbf29ce4ULL;
  for (unsigned char c : bytes) h = h * 0x100000001b3ULL + c;
  return mix64(h ^ bytes.size());
}

}  // namespace semisort
