#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "semisort/datagen.hpp"
#include "semisort/params.hpp"
#include "semisort/types.hpp"

namespace semisort::bench {

enum class Algo { eq, lt, int_eq, int_lt, histogram, collect_reduce };

std::string to_string(Algo a);
Algo parse_algo(const std::string& name);

struct BenchConfig {
  Algo algo = Algo::eq;
  DistributionSpec dist;
  std::optional<std::string> input_file;  // binary record dump; overrides dist
  std::size_t threads = 1;
  std::size_t reps = 4;
  bool verify = false;
  TuningParams tuning;
};

/// One CSV row:
/// algo,dist,param,n,key_bits,threads,seed,median_seconds,depth_max,verified
/// `verified` is true/false, or "na" when verification was not requested.
struct BenchRow {
  std::string algo;
  std::string dist;
  double param = 0;
  std::size_t n = 0;
  unsigned key_bits = 64;
  std::size_t threads = 1;
  std::uint64_t seed = 0;
  double median_seconds = 0;
  unsigned depth_max = 0;
  std::optional<bool> verified;

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchResult {
  BenchRow row;
  std::vector<double> seconds;  // every run, in order
  std::string first_violation;  // set when verification failed
};

/// Median of runs 2..reps (the first run is warm-up); a single run is
/// reported as is.
double median_of_runs(std::span<const double> seconds);

std::string bench_csv_header();
std::string to_csv(const BenchRow& row);
/// Parses the output of bench_csv_header() + to_csv() lines. Throws
/// InputError on a malformed header or row.
std::vector<BenchRow> parse_bench_csv(std::string_view text);

/// Runs cfg.reps timed repetitions on fresh copies of the same input. Only
/// the library call is timed. Throws ConfigError on an invalid config.
BenchResult run_bench(const BenchConfig& cfg);

/// One line of a grid file: "dist,param,n,algo". Kept as text so that a bad
/// cell fails alone when it runs.
struct GridCell {
  std::string dist;
  std::string param;
  std::string n;
  std::string algo;
};

/// Grid file: one cell per line; blank lines and '#' comments are skipped.
std::vector<GridCell> parse_grid(std::istream& in);

struct GridOptions {
  std::size_t threads = 1;
  std::size_t reps = 4;
  std::uint64_t seed = 1;
  unsigned key_bits = 64;
  bool verify = false;
  TuningParams tuning;
};

/// CSV with the bench columns plus `normalized` (median over the fastest
/// median among cells sharing dist,param,n) and `error`. A failing cell
/// yields a row with only its error set.
std::string emit_grid(std::span<const GridCell> cells, const GridOptions& opts);

/// Applies SEMISORT_LIGHT_BUCKETS, SEMISORT_SUBARRAY_LENGTH, SEMISORT_BASE_CASE,
/// SEMISORT_MAX_HEAVY, SEMISORT_SAMPLE_FACTOR and SEMISORT_SEED when set.
TuningParams tuning_from_env(TuningParams base = {});

/// Calls f(std::type_identity<Rec>{}) with the record type for a key width
/// and value presence.
template <class F>
decltype(auto) dispatch_record(unsigned key_bits, bool with_values, F&& f) {
  switch (key_bits) {
    case 32:
      return with_values ? f(std::type_identity<Record<std::uint32_t>>{})
                         : f(std::type_identity<Record<std::uint32_t, NoValue>>{});
    case 64:
      return with_values ? f(std::type_identity<Record<std::uint64_t>>{})
                         : f(std::type_identity<Record<std::uint64_t, NoValue>>{});
    case 128:
      return with_values ? f(std::type_identity<Record<Key128>>{})
                         : f(std::type_identity<Record<Key128, NoValue>>{});
  }
  throw ConfigError("key width must be 32, 64 or 128 bits");
}

}  // namespace semisort::bench
