#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "semisort/adapter.hpp"
#include "semisort/hash.hpp"

namespace semisort {

/// Sequential hash table with separate chaining used by the base cases.
/// Capacity is the smallest power of two >= 2 * size. Each cell chains the
/// distinct keys (groups) hashed to it in discovery order, and each group
/// chains its records in insertion order. Chains are index links into flat
/// arrays.
template <KeyAdapter Adapter>
class ChainedGroupTable {
 public:
  using record_type = typename Adapter::record_type;
  using key_type = typename Adapter::key_type;
  static constexpr std::uint32_t kNil = ~std::uint32_t{0};

  ChainedGroupTable(std::span<const record_type> slice, const Adapter& adapter)
      : slice_(slice),
        adapter_(adapter),
        shift_(64 - std::countr_zero(std::bit_ceil(std::max<std::size_t>(2, slice.size() * 2)))),
        cell_head_(std::size_t{1} << (64 - shift_), kNil),
        cell_tail_(cell_head_.size(), kNil),
        record_next_(slice.size(), kNil) {
    groups_.reserve(slice.size() / 2 + 1);
    record_group_.reserve(slice.size());
    for (std::size_t i = 0; i < slice.size(); ++i) insert(static_cast<std::uint32_t>(i));
  }

  std::size_t capacity() const { return cell_head_.size(); }
  std::size_t num_groups() const { return groups_.size(); }

  /// Group index of each inserted record, in slice order.
  std::uint32_t group_of(std::size_t record) const { return record_group_[record]; }

  /// Visits groups by cell index, then chain order.
  template <class F>
  void for_each_group(F&& f) const {
    for (std::uint32_t head : cell_head_)
      for (std::uint32_t g = head; g != kNil; g = groups_[g].next) f(g);
  }

  /// Visits the records of group g in insertion order.
  template <class F>
  void for_each_record(std::uint32_t g, F&& f) const {
    for (std::uint32_t r = groups_[g].first; r != kNil; r = record_next_[r]) f(r);
  }

  /// Index of the first record of group g.
  std::uint32_t representative(std::uint32_t g) const { return groups_[g].first; }

 private:
  struct Group {
    std::uint32_t first;
    std::uint32_t last;
    std::uint32_t next;
  };

  void insert(std::uint32_t i) {
    const key_type k = adapter_.key_of(slice_[i]);
    const auto cell = static_cast<std::size_t>(mix64(adapter_.hash(k) ^ 0x243f6a8885a308d3ULL) >> shift_);
    for (std::uint32_t g = cell_head_[cell]; g != kNil; g = groups_[g].next) {
      if (adapter_.eq(adapter_.key_of(slice_[groups_[g].first]), k)) {
        record_next_[groups_[g].last] = i;
        groups_[g].last = i;
        record_group_.push_back(g);
        return;
      }
    }
    const auto g = static_cast<std::uint32_t>(groups_.size());
    groups_.push_back({i, i, kNil});
    if (cell_tail_[cell] == kNil)
      cell_head_[cell] = g;
    else
      groups_[cell_tail_[cell]].next = g;
    cell_tail_[cell] = g;
    record_group_.push_back(g);
  }

  std::span<const record_type> slice_;
  const Adapter& adapter_;
  unsigned shift_;
  std::vector<std::uint32_t> cell_head_;
  std::vector<std::uint32_t> cell_tail_;
  std::vector<std::uint32_t> record_next_;
  std::vector<std::uint32_t> record_group_;
  std::vector<Group> groups_;
};

/// Stable semisort of src written to dst (same length, disjoint).
template <KeyAdapter Adapter>
void base_case_eq_into(std::span<const typename Adapter::record_type> src,
                       std::span<typename Adapter::record_type> dst, const Adapter& adapter) {
  ChainedGroupTable<Adapter> table(src, adapter);
  std::size_t out = 0;
  table.for_each_group([&](std::uint32_t g) {
    table.for_each_record(g, [&](std::uint32_t r) { dst[out++] = src[r]; });
  });
}

/// Stable semisort of a slice through a chained hash table.
template <KeyAdapter Adapter>
void base_case_eq(std::span<typename Adapter::record_type> slice, const Adapter& adapter) {
  std::vector<typename Adapter::record_type> tmp(slice.begin(), slice.end());
  base_case_eq_into<Adapter>(tmp, slice, adapter);
}

/// Stable comparison sort of a slice by key.
template <OrderedKeyAdapter Adapter>
void base_case_lt(std::span<typename Adapter::record_type> slice, const Adapter& adapter) {
  using R = typename Adapter::record_type;
  std::stable_sort(slice.begin(), slice.end(), [&](const R& a, const R& b) {
    return adapter.lt(adapter.key_of(a), adapter.key_of(b));
  });
}

}  // namespace semisort
