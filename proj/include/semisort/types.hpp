#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace semisort {

// Error categories surfaced by the library.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct ContractError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ResourceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// 128-bit unsigned key stored as two little-endian 64-bit words.
struct Key128 {
  std::uint64_t lo = 0;
  std::uint64_t hi = 0;

  friend constexpr bool operator==(const Key128&, const Key128&) = default;
  friend constexpr std::strong_ordering operator<=>(const Key128& a, const Key128& b) {
    if (auto c = a.hi <=> b.hi; c != 0) return c;
    return a.lo <=> b.lo;
  }
};

/// Empty value payload; occupies no storage inside a Record.
struct NoValue {
  friend constexpr bool operator==(NoValue, NoValue) { return true; }
};

/// Fixed-layout (key, value) record. RecordArray is a std::span<Record<K, V>>.
template <class K, class V = K>
struct Record {
  using key_type = K;
  using value_type = V;

  K key{};
  [[no_unique_address]] V value{};

  friend constexpr bool operator==(const Record&, const Record&) = default;
};

template <class K>
inline constexpr bool is_record_key_v =
    std::is_same_v<K, std::uint32_t> || std::is_same_v<K, std::uint64_t> || std::is_same_v<K, Key128>;

template <class K>
constexpr unsigned key_bits() {
  static_assert(is_record_key_v<K>);
  return sizeof(K) * 8;
}

using Record32 = Record<std::uint32_t>;
using Record64 = Record<std::uint64_t>;
using Record128 = Record<Key128>;

static_assert(sizeof(Record32) == 8);
static_assert(sizeof(Record64) == 16);
static_assert(sizeof(Record128) == 32);
static_assert(sizeof(Record<std::uint64_t, NoValue>) == 8);

/// Hex rendering, high word first ("0x" + 32 digits).
inline std::string to_string(const Key128& k) {
  char buf[35];
  std::snprintf(buf, sizeof(buf), "0x%016llx%016llx", static_cast<unsigned long long>(k.hi),
                static_cast<unsigned long long>(k.lo));
  return buf;
}

}  // namespace semisort
