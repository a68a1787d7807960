#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "semisort/semisort.hpp"

namespace semisort {

/// (key, aggregate) pairs with pairwise distinct keys.
template <class Key, class E>
using KeyedResult = std::vector<std::pair<Key, E>>;

/// Map from record to E plus an associative combine with two-sided identity.
/// Commutativity is not required. combine is always called as
/// combine(std::move(acc), x), so it may take acc by value and append to it.
template <class E, class Map, class Combine>
struct ReduceSpec {
  using value_type = E;
  Map map;
  Combine combine;
  E identity;
};

template <class E, class Map, class Combine>
ReduceSpec<E, Map, Combine> make_reduce_spec(Map map, Combine combine, E identity) {
  return {std::move(map), std::move(combine), std::move(identity)};
}

namespace detail {

template <KeyAdapter Adapter, class Spec>
class ReduceRun {
 public:
  using R = typename Adapter::record_type;
  using Key = typename Adapter::key_type;
  using E = typename Spec::value_type;
  using Result = KeyedResult<Key, E>;

  struct Node {
    std::size_t begin = 0;
    std::size_t end = 0;
    bool in_primary = true;
    unsigned level = 0;
    unsigned salt = 0;
    bool after_rehash = false;
    bool force_base = false;
    std::uint64_t path = 0;
  };

  ReduceRun(WorkBuffers<R> buffers, std::span<std::uint16_t> ids, const Adapter& adapter,
            const Spec& spec, const ResolvedParams& params, Instrumentation& inst)
      : buf_(buffers), ids_(ids), adapter_(adapter), spec_(spec), params_(params), inst_(inst) {}

  Result solve(const Node& node) {
    const std::size_t size = node.end - node.begin;
    inst_.note_depth(node.level + 1);
    if (size == 0) return {};
    auto src = buf_.live(node.in_primary).subspan(node.begin, size);
    if (node.force_base || size < params_.base_case_threshold || node.level + 1 >= kMaxLevels) {
      inst_.add_base_case(size >= params_.base_case_threshold);
      return base_case(src);
    }

    auto dst = buf_.other(node.in_primary).subspan(node.begin, size);
    auto ids = ids_.subspan(node.begin, size);
    const auto heavy = sample_and_bucket<Adapter>(src, adapter_, params_,
                                                  stream_seed(params_.seed, node.path));
    const std::size_t light = params_.light_buckets;
    const std::size_t num_heavy = heavy.size();
    const std::size_t l = params_.subarray_length;

    // Heavy records are reduced per subarray and never moved.
    CountMatrix counts(num_subarrays(size, l), light);
    std::vector<E> partial(counts.rows() * num_heavy, spec_.identity);
    parallel_for(0, counts.rows(), [&](std::size_t i) {
      auto row = counts.row(i);
      E* heavy_row = partial.data() + i * num_heavy;
      const std::size_t end = std::min(size, (i + 1) * l);
      for (std::size_t p = i * l; p < end; ++p) {
        const auto id = get_bucket_id(adapter_.key_of(src[p]), heavy, adapter_, params_, node.level, node.salt);
        ids[p] = static_cast<std::uint16_t>(id);
        if (id >= light) {
          E& acc = heavy_row[id - light];
          acc = spec_.combine(std::move(acc), spec_.map(src[p]));
        } else {
          ++row[id];
        }
      }
    });
    inst_.add_bucket_id_calls(size);
    inst_.add_matrix_counters(node.level + 1, counts.size());

    const auto offsets = column_major_scan_in_place(counts);
    const std::size_t num_light_records = offsets[light];
    parallel_for(0, counts.rows(), [&](std::size_t i) {
      auto cursor = counts.row(i);
      const std::size_t end = std::min(size, (i + 1) * l);
      for (std::size_t p = i * l; p < end; ++p)
        if (ids[p] < light) dst[cursor[ids[p]]++] = src[p];
    });
    if (node.in_primary) inst_.add_scratch_moves(num_light_records);

    Result heavy_out(num_heavy);
    parallel_for(0, num_heavy, [&](std::size_t h) {
      E acc = spec_.identity;
      for (std::size_t i = 0; i < counts.rows(); ++i)
        acc = spec_.combine(std::move(acc), std::move(partial[i * num_heavy + h]));
      heavy_out[h] = {heavy.key(h), std::move(acc)};
    });

    std::vector<Result> children(light);
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
      children[j] = solve(child);
    });

    // Pack: heavy keys in heavy-id order, then light buckets in bucket order.
    std::vector<std::size_t> start(light + 1, num_heavy);
    for (std::size_t j = 0; j < light; ++j) start[j + 1] = start[j] + children[j].size();
    Result out(start[light]);
    std::move(heavy_out.begin(), heavy_out.end(), out.begin());
    parallel_for(0, light, [&](std::size_t j) {
      std::move(children[j].begin(), children[j].end(), out.begin() + start[j]);
    });
    return out;
  }

 private:
  Result base_case(std::span<const R> src) {
    ChainedGroupTable<Adapter> table(src, adapter_);
    std::vector<E> acc(table.num_groups(), spec_.identity);
    for (std::size_t i = 0; i < src.size(); ++i) {
      E& a = acc[table.group_of(i)];
      a = spec_.combine(std::move(a), spec_.map(src[i]));
    }
    Result out;
    out.reserve(table.num_groups());
    table.for_each_group([&](std::uint32_t g) {
      out.emplace_back(adapter_.key_of(src[table.representative(g)]), std::move(acc[g]));
    });
    return out;
  }

  WorkBuffers<R> buf_;
  std::span<std::uint16_t> ids_;
  const Adapter& adapter_;
  const Spec& spec_;
  const ResolvedParams& params_;
  Instrumentation& inst_;
};

}  // namespace detail

/// Per-key left fold of spec.map over the records of each key, in input
/// order. Output order: heavy keys of the top level first, then the light
/// buckets in bucket order; deterministic for a fixed seed.
///
/// `data` serves as working storage and is left in an unspecified order.
template <KeyAdapter Adapter, class Spec>
KeyedResult<typename Adapter::key_type, typename Spec::value_type> collect_reduce(
    std::span<typename Adapter::record_type> data, const Adapter& adapter, const Spec& spec,
    const TuningParams& tuning = {}, RunReport* report = nullptr) {
  using R = typename Adapter::record_type;
  const ResolvedParams params = resolve(tuning, data.size());
  Instrumentation inst;
  RawBuffer<R> scratch(data.size());
  inst.add_scratch_allocation(data.size());
  RawBuffer<std::uint16_t> ids(data.size());

  detail::ReduceRun<Adapter, Spec> run({data, scratch.span()}, ids.span(), adapter, spec, params, inst);
  typename detail::ReduceRun<Adapter, Spec>::Node root;
  root.end = data.size();
  root.path = 1;
  auto result = run.solve(root);
  if (report) *report = inst.report();
  return result;
}

/// Multiplicity of every distinct key.
template <KeyAdapter Adapter>
KeyedResult<typename Adapter::key_type, std::uint64_t> histogram(
    std::span<typename Adapter::record_type> data, const Adapter& adapter,
    const TuningParams& tuning = {}, RunReport* report = nullptr) {
  using R = typename Adapter::record_type;
  const auto spec = make_reduce_spec<std::uint64_t>(
      [](const R&) { return std::uint64_t{1}; },
      [](std::uint64_t a, std::uint64_t b) { return a + b; }, std::uint64_t{0});
  return collect_reduce(data, adapter, spec, tuning, report);
}

}  // namespace semisort
