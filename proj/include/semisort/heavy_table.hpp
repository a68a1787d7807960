#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "semisort/adapter.hpp"
#include "semisort/hash.hpp"
#include "semisort/params.hpp"
#include "semisort/random.hpp"

namespace semisort {

/// Sequential open-addressed map from heavy key to bucket id. Ids are
/// consecutive from first_id in insertion order.
template <KeyAdapter Adapter>
class HeavyTable {
 public:
  using key_type = typename Adapter::key_type;

  HeavyTable() = default;
  explicit HeavyTable(std::uint32_t first_id, std::size_t expected = 0) : first_id_(first_id) {
    reserve(expected);
  }

  std::uint32_t first_id() const { return first_id_; }
  std::size_t size() const { return keys_.size(); }
  bool empty() const { return keys_.empty(); }

  /// Key of the heavy bucket first_id() + i.
  const key_type& key(std::size_t i) const { return keys_[i]; }

  std::uint32_t insert(const key_type& k, const Adapter& adapter) {
    if ((keys_.size() + 1) * 2 > slots_.size()) grow(adapter);
    const auto id = static_cast<std::uint32_t>(keys_.size());
    keys_.push_back(k);
    place(id, adapter.hash(k));
    return first_id_ + id;
  }

  std::optional<std::uint32_t> find(const key_type& k, const Adapter& adapter) const {
    if (keys_.empty()) return std::nullopt;
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t s = slot_of(adapter.hash(k)) & mask;; s = (s + 1) & mask) {
      const std::uint32_t e = slots_[s];
      if (e == kEmpty) return std::nullopt;
      if (adapter.eq(keys_[e], k)) return first_id_ + e;
    }
  }

 private:
  static constexpr std::uint32_t kEmpty = ~std::uint32_t{0};

  static std::size_t slot_of(std::uint64_t h) { return static_cast<std::size_t>(mix64(h ^ 0xa5a5a5a5ULL)); }

  void reserve(std::size_t expected) {
    keys_.reserve(expected);
    slots_.assign(std::bit_ceil(std::max<std::size_t>(8, expected * 2)), kEmpty);
  }

  void place(std::uint32_t id, std::uint64_t h) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t s = slot_of(h) & mask;
    while (slots_[s] != kEmpty) s = (s + 1) & mask;
    slots_[s] = id;
  }

  void grow(const Adapter& adapter) {
    slots_.assign(std::max<std::size_t>(8, slots_.size() * 2), kEmpty);
    for (std::uint32_t i = 0; i < keys_.size(); ++i) place(i, adapter.hash(keys_[i]));
  }

  std::uint32_t first_id_ = 0;
  std::vector<key_type> keys_;
  std::vector<std::uint32_t> slots_ = std::vector<std::uint32_t>(8, kEmpty);
};

/// Light bucket of a hash at recursion level `level` (0 = top). Each level
/// consumes the next `bits`-wide slice of the hash; once 64 bits run out, or
/// when `salt` is nonzero, the hash is remixed with a level-dependent salt.
constexpr std::uint32_t light_bucket_of(std::uint64_t hash, unsigned bits, unsigned level,
                                        unsigned salt = 0) {
  const unsigned per_word = 64 / bits;
  const unsigned round = level / per_word + salt;
  const unsigned slot = level % per_word;
  const std::uint64_t h = round == 0 ? hash : mix64(hash + round * 0xd1b54a32d192ed03ULL);
  return static_cast<std::uint32_t>((h >> (slot * bits)) & ((std::uint64_t{1} << bits) - 1));
}

/// Where a key goes at one recursion node: its heavy id if it is in the
/// heavy table, else its light bucket.
template <KeyAdapter Adapter>
std::uint32_t get_bucket_id(const typename Adapter::key_type& k, const HeavyTable<Adapter>& heavy,
                            const Adapter& adapter, const ResolvedParams& params, unsigned level,
                            unsigned salt = 0) {
  if (!heavy.empty()) {
    if (auto id = heavy.find(k, adapter)) return *id;
  }
  return light_bucket_of(adapter.hash(k), params.light_bits, level, salt);
}

/// Samples keys of `data` with replacement and returns the table of heavy
/// keys: those with at least params.heavy_threshold sample occurrences. If
/// more than max_heavy qualify, the most-sampled are kept (ties go to the
/// earlier first appearance). Ids follow first appearance in the sample stream.
template <KeyAdapter Adapter>
HeavyTable<Adapter> sample_and_bucket(std::span<const typename Adapter::record_type> data,
                                      const Adapter& adapter, const ResolvedParams& params,
                                      std::uint64_t stream) {
  using Key = typename Adapter::key_type;
  const auto first_id = static_cast<std::uint32_t>(params.light_buckets);
  const std::size_t samples = std::min(data.size(), params.sample_count);
  if (samples == 0 || params.max_heavy == 0) return HeavyTable<Adapter>(first_id);

  struct Candidate {
    Key key;
    std::uint64_t hash;
    std::size_t count;
    std::size_t first_seen;
  };
  std::vector<Candidate> distinct;
  std::vector<std::uint32_t> slots(std::bit_ceil(samples * 2), ~std::uint32_t{0});
  const std::size_t mask = slots.size() - 1;

  SplitMix64 rng(stream);
  for (std::size_t s = 0; s < samples; ++s) {
    const Key k = adapter.key_of(data[rng.bounded(data.size())]);
    const std::uint64_t h = adapter.hash(k);
    std::size_t pos = static_cast<std::size_t>(mix64(h ^ 0x3c6ef372fe94f82bULL)) & mask;
    for (;; pos = (pos + 1) & mask) {
      const std::uint32_t e = slots[pos];
      if (e == ~std::uint32_t{0}) {
        slots[pos] = static_cast<std::uint32_t>(distinct.size());
        distinct.push_back({k, h, 1, s});
        break;
      }
      if (distinct[e].hash == h && adapter.eq(distinct[e].key, k)) {
        ++distinct[e].count;
        break;
      }
    }
  }

  std::vector<Candidate> heavy;
  for (auto& c : distinct)
    if (static_cast<double>(c.count) >= params.heavy_threshold) heavy.push_back(std::move(c));
  if (heavy.size() > params.max_heavy) {
    std::stable_sort(heavy.begin(), heavy.end(),
                     [](const Candidate& a, const Candidate& b) { return a.count > b.count; });
    heavy.resize(params.max_heavy);
    std::sort(heavy.begin(), heavy.end(), [](const Candidate& a, const Candidate& b) {
      return a.first_seen < b.first_seen;
    });
  }

  HeavyTable<Adapter> table(first_id, heavy.size());
  for (const auto& c : heavy) table.insert(c.key, adapter);
  return table;
}

}  // namespace semisort
