#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <new>
#include <span>
#include <string>
#include <type_traits>

#include "semisort/adapter.hpp"
#include "semisort/base_case.hpp"
#include "semisort/bucket_plan.hpp"
#include "semisort/heavy_table.hpp"
#include "semisort/instrumentation.hpp"
#include "semisort/parallel.hpp"
#include "semisort/params.hpp"
#include "semisort/random.hpp"

namespace semisort {

/// Uninitialized array of trivially copyable T.
template <class T>
class RawBuffer {
  static_assert(std::is_trivially_copyable_v<T>);

 public:
  explicit RawBuffer(std::size_t n) : size_(n) {
    if (n == 0) return;
    try {
      data_ = std::allocator<T>().allocate(n);
    } catch (const std::bad_alloc&) {
      throw ResourceError("cannot allocate scratch buffer of " + std::to_string(n) + " elements");
    }
  }
  ~RawBuffer() {
    if (data_) std::allocator<T>().deallocate(data_, size_);
  }
  RawBuffer(const RawBuffer&) = delete;
  RawBuffer& operator=(const RawBuffer&) = delete;

  std::span<T> span() { return {data_, size_}; }

 private:
  T* data_ = nullptr;
  std::size_t size_ = 0;
};

template <class T>
void parallel_copy(std::span<const T> src, std::span<T> dst) {
  constexpr std::size_t kBlock = std::size_t{1} << 14;
  const std::size_t blocks = (src.size() + kBlock - 1) / kBlock;
  parallel_for(0, blocks, [&](std::size_t b) {
    const std::size_t lo = b * kBlock;
    const std::size_t hi = std::min(src.size(), lo + kBlock);
    std::copy(src.begin() + lo, src.begin() + hi, dst.begin() + lo);
  });
}

/// Two equal-length buffers. The live data of a subproblem sits in either;
/// the final output always ends up in `primary`.
template <class R>
struct WorkBuffers {
  std::span<R> primary;
  std::span<R> scratch;

  std::span<R> live(bool in_primary) const { return in_primary ? primary : scratch; }
  std::span<R> other(bool in_primary) const { return in_primary ? scratch : primary; }
};

namespace detail {

template <KeyAdapter Adapter>
class SemisortRun {
 public:
  using R = typename Adapter::record_type;

  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool in_primary = true;
    unsigned level = 0;
    unsigned salt = 0;
    bool after_rehash = false;  // this node was itself a non-shrinking child
    bool force_base = false;
    std::uint64_t path = 0;
  };

  SemisortRun(WorkBuffers<R> buffers, std::span<std::uint16_t> ids, const Adapter& adapter, Mode mode,
              const ResolvedParams& params, Instrumentation& inst)
      : buf_(buffers), ids_(ids), adapter_(adapter), mode_(mode), params_(params), inst_(inst) {}

  void solve(const Node& node) {
    const std::size_t size = node.end - node.begin;
    inst_.note_depth(node.level + 1);
    if (size == 0) return;
    if (node.force_base || size < params_.base_case_threshold || node.level + 1 >= kMaxLevels) {
      base_case(node, size >= params_.base_case_threshold);
      return;
    }

    auto src = buf_.live(node.in_primary).subspan(node.begin, size);
    auto dst = buf_.other(node.in_primary).subspan(node.begin, size);
    auto ids = ids_.subspan(node.begin, size);

    const auto heavy = sample_and_bucket<Adapter>(src, adapter_, params_,
                                                  stream_seed(params_.seed, node.path));
    const std::size_t light = params_.light_buckets;
    const std::size_t buckets = light + heavy.size();

    CountMatrix counts = count_into_matrix(size, params_.subarray_length, buckets, [&](std::size_t p) {
      const auto id = get_bucket_id(adapter_.key_of(src[p]), heavy, adapter_, params_, node.level, node.salt);
      ids[p] = static_cast<std::uint16_t>(id);
      return id;
    });
    inst_.add_bucket_id_calls(size);
    inst_.add_matrix_counters(node.level + 1, counts.size());

    const auto offsets = column_major_scan_in_place(counts);
    distribute<R>(src, counts, params_.subarray_length, [&](std::size_t p) { return ids[p]; }, dst);
    if (node.in_primary) inst_.add_scratch_moves(size);

    // Heavy buckets are final; move them home if they landed in scratch.
    if (node.in_primary && !heavy.empty()) {
      const std::size_t h = offsets[light];
      parallel_copy<R>(dst.subspan(h), src.subspan(h));
    }

    parallel_for(0, light, [&](std::size_t j) {
      const std::size_t child_size = offsets[j + 1] - offsets[j];
      if (child_size == 0) return;
      Node child;
      child.begin = node.begin + offsets[j];
      child.end = node.begin + offsets[j + 1];
      child.in_primary = !node.in_primary;
      child.level = node.level + 1;
      child.salt = node.salt;
      child.path = hash_combine(node.path, j + 1);
      if (child_size >= params_.base_case_threshold && child_size * 2 > size) {
        if (node.after_rehash) {
          child.force_base = true;
        } else {
          child.salt = node.salt + 1;
          child.after_rehash = true;
        }
      }
      inst_.add_recursive_call();
      solve(child);
    });
  }

 private:
  void base_case(const Node& node, bool forced) {
    const std::size_t size = node.end - node.begin;
    inst_.add_base_case(forced);
    auto src = buf_.live(node.in_primary).subspan(node.begin, size);
    auto dst = buf_.other(node.in_primary).subspan(node.begin, size);

    bool sort_by_lt = mode_ == Mode::lt || forced;
    if constexpr (OrderedKeyAdapter<Adapter>) {
      if (sort_by_lt) {
        base_case_lt<Adapter>(src, adapter_);
        if (!node.in_primary) std::copy(src.begin(), src.end(), dst.begin());
        return;
      }
    }
    base_case_eq_into<Adapter>(src, dst, adapter_);
    if (node.in_primary) {
      inst_.add_scratch_moves(size);
      std::copy(dst.begin(), dst.end(), src.begin());
    }
  }

  WorkBuffers<R> buf_;
  std::span<std::uint16_t> ids_;
  const Adapter& adapter_;
  Mode mode_;
  const ResolvedParams& params_;
  Instrumentation& inst_;
};

}  // namespace detail

/// Stable parallel semisort of `data` in place. Records with eq-equal keys
/// end up contiguous and keep their input order. The output depends only on
/// the input, the adapter and params.seed, never on the worker count.
///
/// Mode::lt requires an OrderedKeyAdapter and sorts base cases by key.
template <KeyAdapter Adapter>
RunReport semisort(std::span<typename Adapter::record_type> data, const Adapter& adapter,
                   Mode mode = Mode::eq, const TuningParams& tuning = {}) {
  using R = typename Adapter::record_type;
  if (mode == Mode::lt && !OrderedKeyAdapter<Adapter>)
    throw ContractError("semisort in lt mode requires an adapter with a less-than test");
  const ResolvedParams params = resolve(tuning, data.size());

  Instrumentation inst;
  RawBuffer<R> scratch(data.size());
  inst.add_scratch_allocation(data.size());
  RawBuffer<std::uint16_t> ids(data.size());

  detail::SemisortRun<Adapter> run({data, scratch.span()}, ids.span(), adapter, mode, params, inst);
  typename detail::SemisortRun<Adapter>::Node root;
  root.end = data.size();
  root.path = 1;
  run.solve(root);
  return inst.report();
}

}  // namespace semisort
