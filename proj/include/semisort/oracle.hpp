#pragma once

// Sequential reference checks. Slow, simple, and independent of the
// parallel code paths: everything here uses std::unordered_map and sorting.

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstring>
#include <optional>
#include <span>
#include <string>
#include <type_traits>
#include <unordered_map>
#include <utility>
#include <vector>

#include "semisort/adapter.hpp"
#include "semisort/aggregate.hpp"

namespace semisort::oracle {

struct Violation {
  std::size_t index = 0;
  std::string description;
};

struct ValidationReport {
  bool is_permutation = true;
  bool is_contiguous = true;
  bool is_stable = true;
  std::optional<Violation> first_violation;

  bool ok() const { return is_permutation && is_contiguous && is_stable; }
};

namespace detail {

template <class A>
struct HashBy {
  const A* adapter;
  std::size_t operator()(const typename A::key_type& k) const { return adapter->hash(k); }
};

template <class A>
struct EqBy {
  const A* adapter;
  bool operator()(const typename A::key_type& a, const typename A::key_type& b) const {
    return adapter->eq(a, b);
  }
};

template <class A, class V>
using KeyMap = std::unordered_map<typename A::key_type, V, HashBy<A>, EqBy<A>>;

template <class A, class V>
KeyMap<A, V> make_key_map(const A& adapter) {
  return KeyMap<A, V>(16, HashBy<A>{&adapter}, EqBy<A>{&adapter});
}

template <class R>
using Bytes = std::array<unsigned char, sizeof(R)>;

// Key-only records hold an empty value member that adds no bytes.
template <class R>
constexpr bool key_only_record = false;
template <class K>
constexpr bool key_only_record<Record<K, NoValue>> =
    sizeof(Record<K, NoValue>) == sizeof(K) && std::has_unique_object_representations_v<K>;

template <class R>
Bytes<R> bytes_of(const R& r) {
  static_assert(std::has_unique_object_representations_v<R> || key_only_record<R>,
                "oracle compares records by their object representation");
  Bytes<R> b;
  std::memcpy(b.data(), &r, sizeof(R));
  return b;
}

inline void note(ValidationReport& rep, std::size_t index, std::string what) {
  if (!rep.first_violation) rep.first_violation = Violation{index, std::move(what)};
}

}  // namespace detail

/// Checks that `output` is a stable semisort of `input`: a permutation in
/// which each key forms one contiguous run and equal-key records keep input
/// order. O(n log n), sequential.
template <KeyAdapter Adapter>
ValidationReport validate_semisort(std::span<const typename Adapter::record_type> input,
                                   std::span<const typename Adapter::record_type> output,
                                   const Adapter& adapter) {
  using R = typename Adapter::record_type;
  ValidationReport rep;

  if (input.size() != output.size()) {
    rep.is_permutation = false;
    detail::note(rep, std::min(input.size(), output.size()),
                 "length mismatch: input " + std::to_string(input.size()) + ", output " +
                     std::to_string(output.size()));
  } else {
    std::vector<detail::Bytes<R>> a, b;
    a.reserve(input.size());
    b.reserve(output.size());
    for (const R& r : input) a.push_back(detail::bytes_of(r));
    for (const R& r : output) b.push_back(detail::bytes_of(r));
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b) {
      rep.is_permutation = false;
      detail::note(rep, 0, "output is not a permutation of the input");
    }
  }

  // Contiguity: a key seen before must not start a new run.
  auto seen = detail::make_key_map<Adapter, std::size_t>(adapter);
  for (std::size_t i = 0; i < output.size(); ++i) {
    const auto k = adapter.key_of(output[i]);
    if (i > 0 && adapter.eq(adapter.key_of(output[i - 1]), k)) continue;
    auto [it, fresh] = seen.emplace(k, i);
    if (!fresh && rep.is_contiguous) {
      rep.is_contiguous = false;
      detail::note(rep, i, "key run split: run starting at " + std::to_string(i) +
                               " repeats a key first seen at " + std::to_string(it->second));
    }
  }

  // Stability: each key's subsequence of records must match input order.
  auto per_key_in = detail::make_key_map<Adapter, std::vector<detail::Bytes<R>>>(adapter);
  for (const R& r : input) per_key_in[adapter.key_of(r)].push_back(detail::bytes_of(r));
  auto cursor = detail::make_key_map<Adapter, std::size_t>(adapter);
  for (std::size_t i = 0; i < output.size() && rep.is_stable; ++i) {
    const auto k = adapter.key_of(output[i]);
    auto it = per_key_in.find(k);
    if (it == per_key_in.end()) continue;  // reported by the permutation check
    std::size_t& c = cursor[k];
    if (c >= it->second.size() || it->second[c] != detail::bytes_of(output[i])) {
      rep.is_stable = false;
      detail::note(rep, i, "equal-key records out of input order at index " + std::to_string(i));
    }
    ++c;
  }
  return rep;
}

/// Sequential left fold per key; keys in order of first occurrence.
template <KeyAdapter Adapter, class Spec>
KeyedResult<typename Adapter::key_type, typename Spec::value_type> oracle_collect_reduce(
    std::span<const typename Adapter::record_type> input, const Adapter& adapter, const Spec& spec) {
  KeyedResult<typename Adapter::key_type, typename Spec::value_type> out;
  auto index = detail::make_key_map<Adapter, std::size_t>(adapter);
  for (const auto& r : input) {
    const auto k = adapter.key_of(r);
    auto [it, fresh] = index.emplace(k, out.size());
    if (fresh) out.emplace_back(k, spec.identity);
    auto& acc = out[it->second].second;
    acc = spec.combine(std::move(acc), spec.map(r));
  }
  return out;
}

/// Order-insensitive equality of two (key, aggregate) multisets.
template <KeyAdapter Adapter, class E>
bool multiset_equal(const KeyedResult<typename Adapter::key_type, E>& a,
                    const KeyedResult<typename Adapter::key_type, E>& b, const Adapter& adapter) {
  if (a.size() != b.size()) return false;
  auto pool = detail::make_key_map<Adapter, std::vector<const E*>>(adapter);
  for (const auto& [k, v] : a) pool[k].push_back(&v);
  for (const auto& [k, v] : b) {
    auto it = pool.find(k);
    if (it == pool.end()) return false;
    auto& vals = it->second;
    auto m = std::find_if(vals.begin(), vals.end(), [&](const E* p) { return *p == v; });
    if (m == vals.end()) return false;
    vals.erase(m);
  }
  return true;
}

}  // namespace semisort::oracle
