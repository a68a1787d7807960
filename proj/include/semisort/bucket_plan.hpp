#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "semisort/parallel.hpp"

namespace semisort {

/// Dense rows x cols matrix, row-major. Rows are subarrays, columns buckets.
class CountMatrix {
 public:
  CountMatrix() = default;
  CountMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols, 0) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return data_.size(); }

  std::size_t& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  std::size_t operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<std::size_t> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const std::size_t> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  friend bool operator==(const CountMatrix&, const CountMatrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> data_;
};

inline std::size_t num_subarrays(std::size_t n, std::size_t subarray_length) {
  return (n + subarray_length - 1) / subarray_length;
}

/// C[i][j] = number of positions p in subarray i (positions [i*l, (i+1)*l))
/// with bucket_of(p) == j. Subarrays are counted in parallel, each sequentially.
template <class BucketOf>
CountMatrix count_into_matrix(std::size_t n, std::size_t subarray_length, std::size_t buckets,
                              BucketOf&& bucket_of) {
  CountMatrix c(num_subarrays(n, subarray_length), buckets);
  parallel_for(0, c.rows(), [&](std::size_t i) {
    auto row = c.row(i);
    const std::size_t end = std::min(n, (i + 1) * subarray_length);
    for (std::size_t p = i * subarray_length; p < end; ++p) ++row[bucket_of(p)];
  });
  return c;
}

struct PrefixPlan {
  CountMatrix prefix;                // X
  std::vector<std::size_t> offsets;  // bucket starts, size cols + 1
};

/// Rewrites C into its exclusive prefix sum taken in column-major order and
/// returns the bucket offsets (offsets[j] = X[0][j], offsets[cols] = total).
inline std::vector<std::size_t> column_major_scan_in_place(CountMatrix& c) {
  const std::size_t rows = c.rows();
  const std::size_t cols = c.cols();
  std::vector<std::size_t> offsets(cols + 1, 0);
  parallel_for(0, cols, [&](std::size_t j) {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < rows; ++i) sum += c(i, j);
    offsets[j + 1] = sum;
  }, 64);
  for (std::size_t j = 0; j < cols; ++j) offsets[j + 1] += offsets[j];
  parallel_for(0, cols, [&](std::size_t j) {
    std::size_t run = offsets[j];
    for (std::size_t i = 0; i < rows; ++i) {
      const std::size_t count = c(i, j);
      c(i, j) = run;
      run += count;
    }
  }, 64);
  return offsets;
}

inline PrefixPlan column_major_exclusive_scan(const CountMatrix& c) {
  PrefixPlan plan{c, {}};
  plan.offsets = column_major_scan_in_place(plan.prefix);
  return plan;
}

/// Moves src[p] to dst[X[i][bucket_of(p)]++] for every p of subarray i.
/// Each subarray owns its row of cursors, so writes never collide, and
/// within a bucket records keep input order. `prefix` is consumed.
template <class T, class BucketOf>
void distribute(std::span<const T> src, CountMatrix& prefix, std::size_t subarray_length,
                BucketOf&& bucket_of, std::span<T> dst) {
  const std::size_t n = src.size();
  parallel_for(0, prefix.rows(), [&](std::size_t i) {
    auto cursor = prefix.row(i);
    const std::size_t end = std::min(n, (i + 1) * subarray_length);
    for (std::size_t p = i * subarray_length; p < end; ++p) dst[cursor[bucket_of(p)]++] = src[p];
  });
}

}  // namespace semisort
