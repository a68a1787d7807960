#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <vector>

#include "semisort/adapter.hpp"
#include "semisort/hash.hpp"
#include "semisort/parallel.hpp"
#include "semisort/params.hpp"
#include "semisort/random.hpp"
#include "semisort/types.hpp"

namespace semisort {

enum class Family { uniform, exponential, zipfian };

std::string to_string(Family f);
Family parse_family(const std::string& name);

struct DistributionSpec {
  Family family = Family::uniform;
  double parameter = 10;  // mu (integer), lambda, or s
  std::size_t n = 0;
  unsigned key_bits = 64;
  std::uint64_t seed = 1;
};

/// Throws ConfigError for mu < 1 (or non-integral), lambda <= 0, s <= 0,
/// unsupported key width, or a key range that does not fit the width.
void validate(const DistributionSpec& spec);

/// Zipf(s) over ranks [1, n] by rejection-inversion (Hoermann & Derflinger).
/// Exact for every s > 0 with O(1) expected draws per sample.
class ZipfSampler {
 public:
  ZipfSampler(std::uint64_t n, double s);
  std::uint64_t operator()(SplitMix64& rng) const;

 private:
  double h(double x) const;
  double h_integral(double x) const;
  double h_integral_inverse(double x) const;

  std::uint64_t n_;
  double s_;
  double h_integral_x1_;
  double h_integral_n_;
  double squeeze_;
};

/// Raw key and value words of record i. Every record draws from its own
/// counter-based stream, so output does not depend on how work is split.
class KeyStream {
 public:
  explicit KeyStream(const DistributionSpec& spec);

  struct Draw {
    std::uint64_t key;
    std::uint64_t value_lo;
    std::uint64_t value_hi;
  };
  Draw operator()(std::size_t i) const;

 private:
  DistributionSpec spec_;
  std::uint64_t mu_ = 1;
  ZipfSampler zipf_;
};

template <class K>
K make_key(std::uint64_t raw) {
  if constexpr (std::is_same_v<K, Key128>)
    return Key128{raw, mix64(raw ^ 0x0123456789abcdefULL)};
  else
    return static_cast<K>(raw);
}

template <class V>
V make_value(const KeyStream::Draw& d) {
  if constexpr (std::is_same_v<V, NoValue>)
    return {};
  else if constexpr (std::is_same_v<V, Key128>)
    return Key128{d.value_lo, d.value_hi};
  else
    return static_cast<V>(d.value_lo);
}

/// Generates spec.n records. Record key width must match spec.key_bits.
template <class Rec>
std::vector<Rec> generate(const DistributionSpec& spec) {
  validate(spec);
  if (key_bits<typename Rec::key_type>() != spec.key_bits)
    throw ConfigError("record key width does not match spec.key_bits");
  const KeyStream stream(spec);
  std::vector<Rec> out(spec.n);
  constexpr std::size_t kBlock = 1 << 15;
  parallel_for(0, (spec.n + kBlock - 1) / kBlock, [&](std::size_t b) {
    const std::size_t end = std::min(spec.n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const auto d = stream(i);
      out[i].key = make_key<typename Rec::key_type>(d.key);
      out[i].value = make_value<typename Rec::value_type>(d);
    }
  });
  return out;
}

struct InputStats {
  std::size_t distinct_keys = 0;
  std::size_t max_frequency = 0;
  double heavy_freq_ratio = 0.0;  // share of records whose key occurs > 500 log2 n times
};

/// Exact statistics by one sequential counting pass.
template <KeyAdapter Adapter>
InputStats compute_stats(std::span<const typename Adapter::record_type> data, const Adapter& adapter) {
  using Key = typename Adapter::key_type;
  struct H {
    const Adapter* a;
    std::size_t operator()(const Key& k) const { return a->hash(k); }
  };
  struct E {
    const Adapter* a;
    bool operator()(const Key& x, const Key& y) const { return a->eq(x, y); }
  };
  std::unordered_map<Key, std::size_t, H, E> counts(16, H{&adapter}, E{&adapter});
  for (const auto& r : data) ++counts[adapter.key_of(r)];

  InputStats s;
  s.distinct_keys = counts.size();
  const double threshold = 500.0 * log2_size(data.size());
  std::size_t heavy_records = 0;
  for (const auto& [k, c] : counts) {
    s.max_frequency = std::max(s.max_frequency, c);
    if (static_cast<double>(c) > threshold) heavy_records += c;
  }
  s.heavy_freq_ratio = data.empty() ? 0.0 : static_cast<double>(heavy_records) / data.size();
  return s;
}

}  // namespace semisort
