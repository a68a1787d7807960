#pragma once

#include <concepts>
#include <cstdint>
#include <functional>
#include <type_traits>
#include <utility>

#include "semisort/hash.hpp"
#include "semisort/types.hpp"

namespace semisort {

/// A key adapter exposes record_type, key_type, key_of, eq and hash.
/// eq is ground truth for grouping; hash only routes keys to buckets and
/// must agree with eq (eq(a, b) implies hash(a) == hash(b)).
template <class A>
concept KeyAdapter = requires(const A& a, const typename A::record_type& r,
                              const typename A::key_type& k) {
  { a.key_of(r) } -> std::convertible_to<typename A::key_type>;
  { a.eq(k, k) } -> std::convertible_to<bool>;
  { a.hash(k) } -> std::convertible_to<std::uint64_t>;
};

/// Adapter that also provides a strict total order consistent with eq.
template <class A>
concept OrderedKeyAdapter = KeyAdapter<A> && requires(const A& a, const typename A::key_type& k) {
  { a.lt(k, k) } -> std::convertible_to<bool>;
};

enum class Mode { eq, lt };

struct NoLess {};

/// Generic adapter assembled from callables.
template <class Record, class Key, class KeyOf, class Hash, class Eq = std::equal_to<Key>,
          class Less = NoLess>
struct FunctionAdapter {
  using record_type = Record;
  using key_type = Key;

  KeyOf key_of_fn;
  Hash hash_fn;
  Eq eq_fn{};
  [[no_unique_address]] Less lt_fn{};

  Key key_of(const Record& r) const { return key_of_fn(r); }
  bool eq(const Key& a, const Key& b) const { return eq_fn(a, b); }
  std::uint64_t hash(const Key& k) const { return hash_fn(k); }
  bool lt(const Key& a, const Key& b) const
    requires(!std::is_same_v<Less, NoLess>)
  {
    return lt_fn(a, b);
  }
};

template <class Record, class Key, class KeyOf, class Hash, class Eq = std::equal_to<Key>>
auto make_adapter(KeyOf key_of, Hash hash, Eq eq = {}) {
  return FunctionAdapter<Record, Key, KeyOf, Hash, Eq>{std::move(key_of), std::move(hash),
                                                       std::move(eq)};
}

template <class Record, class Key, class KeyOf, class Hash, class Eq, class Less>
auto make_ordered_adapter(KeyOf key_of, Hash hash, Eq eq, Less lt) {
  return FunctionAdapter<Record, Key, KeyOf, Hash, Eq, Less>{std::move(key_of), std::move(hash),
                                                             std::move(eq), std::move(lt)};
}

/// Adapter for fixed-width integer keys of Record<K, V>. In identity mode
/// hash(k) = k, otherwise keys go through the 64-bit mixer.
template <class Rec>
struct IntegerKeyAdapter {
  using record_type = Rec;
  using key_type = typename Rec::key_type;

  bool identity_mode = false;

  key_type key_of(const Rec& r) const { return r.key; }
  bool eq(const key_type& a, const key_type& b) const { return a == b; }
  bool lt(const key_type& a, const key_type& b) const { return a < b; }
  std::uint64_t hash(const key_type& k) const {
    return identity_mode ? identity_hash(k) : hash_key(k);
  }
};

}  // namespace semisort
