#pragma once

#include <array>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace semisort {

inline constexpr unsigned kMaxLevels = 64;

/// Plain snapshot of the counters gathered during one call.
struct RunReport {
  unsigned max_depth = 0;  // deepest nesting of calls; the top-level call is depth 1
  std::uint64_t bucket_id_calls = 0;
  std::uint64_t scratch_allocations = 0;
  std::uint64_t scratch_records = 0;  // size of the scratch allocation(s)
  std::uint64_t scratch_moves = 0;    // records written into the scratch buffer
  std::uint64_t recursive_calls = 0;
  std::uint64_t base_cases = 0;
  std::uint64_t forced_base_cases = 0;  // safety valve or depth limit
  std::vector<std::uint64_t> matrix_counters_per_level;  // index = depth - 1
};

/// Thread-safe counters. Parallel tasks accumulate locally and publish once.
class Instrumentation {
 public:
  void note_depth(unsigned depth) {
    unsigned cur = max_depth_.load(std::memory_order_relaxed);
    while (depth > cur && !max_depth_.compare_exchange_weak(cur, depth, std::memory_order_relaxed)) {
    }
  }
  void add_bucket_id_calls(std::uint64_t n) { bucket_id_calls_.fetch_add(n, std::memory_order_relaxed); }
  void add_scratch_allocation(std::uint64_t records) {
    scratch_allocations_.fetch_add(1, std::memory_order_relaxed);
    scratch_records_.fetch_add(records, std::memory_order_relaxed);
  }
  void add_scratch_moves(std::uint64_t n) { scratch_moves_.fetch_add(n, std::memory_order_relaxed); }
  void add_recursive_call() { recursive_calls_.fetch_add(1, std::memory_order_relaxed); }
  void add_base_case(bool forced) {
    base_cases_.fetch_add(1, std::memory_order_relaxed);
    if (forced) forced_base_cases_.fetch_add(1, std::memory_order_relaxed);
  }
  void add_matrix_counters(unsigned depth, std::uint64_t n) {
    if (depth >= 1 && depth <= kMaxLevels) matrix_counters_[depth - 1].fetch_add(n, std::memory_order_relaxed);
  }

  RunReport report() const {
    RunReport r;
    r.max_depth = max_depth_.load();
    r.bucket_id_calls = bucket_id_calls_.load();
    r.scratch_allocations = scratch_allocations_.load();
    r.scratch_records = scratch_records_.load();
    r.scratch_moves = scratch_moves_.load();
    r.recursive_calls = recursive_calls_.load();
    r.base_cases = base_cases_.load();
    r.forced_base_cases = forced_base_cases_.load();
    for (unsigned d = 0; d < r.max_depth && d < kMaxLevels; ++d)
      r.matrix_counters_per_level.push_back(matrix_counters_[d].load());
    return r;
  }

 private:
  std::atomic<unsigned> max_depth_{0};
  std::atomic<std::uint64_t> bucket_id_calls_{0};
  std::atomic<std::uint64_t> scratch_allocations_{0};
  std::atomic<std::uint64_t> scratch_records_{0};
  std::atomic<std::uint64_t> scratch_moves_{0};
  std::atomic<std::uint64_t> recursive_calls_{0};
  std::atomic<std::uint64_t> base_cases_{0};
  std::atomic<std::uint64_t> forced_base_cases_{0};
  std::array<std::atomic<std::uint64_t>, kMaxLevels> matrix_counters_{};
};

}  // namespace semisort
