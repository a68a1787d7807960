#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <set>
#include <vector>

#include "semisort/datagen.hpp"
#include "semisort/oracle.hpp"
#include "semisort/parallel.hpp"
#include "semisort/semisort.hpp"

using namespace semisort;

namespace {

using Rec = Record<std::uint64_t>;
using A = IntegerKeyAdapter<Rec>;

template <class R>
std::size_t count_runs(const std::vector<R>& v) {
  std::size_t runs = 0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (i == 0 || !(v[i].key == v[i - 1].key)) ++runs;
  return runs;
}

// Small thresholds so that modest inputs recurse several levels.
TuningParams tiny() {
  TuningParams t;
  t.light_buckets = 8;
  t.subarray_length = 64;
  t.base_case_threshold = 64;
  t.max_heavy = 4;
  t.sample_factor = 20;
  return t;
}

template <class R>
std::vector<R> make(Family f, double param, std::size_t n, std::uint64_t seed) {
  DistributionSpec s;
  s.family = f;
  s.parameter = param;
  s.n = n;
  s.key_bits = key_bits<typename R::key_type>();
  s.seed = seed;
  return generate<R>(s);
}

template <class R>
bool same_bytes(const std::vector<R>& a, const std::vector<R>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(R)) == 0;
}

}  // namespace

TEST_CASE("worked examples") {
  const A a;
  SUBCASE("empty") {
    std::vector<Rec> v;
    const auto rep = semisort<A>(v, a);
    CHECK(v.empty());
    CHECK(rep.scratch_allocations == 1);
  }
  SUBCASE("all equal") {
    std::vector<Rec> v{{5, 1}, {5, 2}, {5, 3}};
    const auto in = v;
    semisort<A>(v, a);
    CHECK(v == in);
  }
  SUBCASE("two key-2 records stay in order") {
    const std::vector<Rec> in{{2, 'a'}, {1, 'b'}, {2, 'c'}};
    for (Mode m : {Mode::eq, Mode::lt}) {
      auto v = in;
      semisort<A>(v, a, m);
      CHECK(oracle::validate_semisort<A>(in, v, a).ok());
    }
  }
  SUBCASE("a million keys over ten values form ten runs") {
    const auto in = make<Rec>(Family::uniform, 10, 1'000'000, 4);
    for (Mode m : {Mode::eq, Mode::lt}) {
      auto v = in;
      semisort<A>(v, a, m);
      CHECK(count_runs(v) == 10);
    }
  }
}

TEST_CASE("lt mode needs a less-than test") {
  auto a = make_adapter<Rec, std::uint64_t>([](const Rec& r) { return r.key; },
                                            [](std::uint64_t k) { return mix64(k); });
  std::vector<Rec> v{{1, 0}, {2, 0}};
  CHECK_THROWS_AS(semisort<decltype(a)>(v, a, Mode::lt), ContractError);
  CHECK_NOTHROW(semisort<decltype(a)>(v, a, Mode::eq));
}

TEST_CASE("invalid parameters are rejected before any work") {
  const A a;
  std::vector<Rec> v(10);
  TuningParams t;
  t.light_buckets = 12;
  CHECK_THROWS_AS(semisort<A>(v, a, Mode::eq, t), ConfigError);
}

TEST_CASE("scratch allocation failure is a resource error") {
  CHECK_THROWS_AS(RawBuffer<Rec>(std::size_t{1} << 60), ResourceError);
}

TEST_CASE("valid on every distribution, mode and key width") {
  const std::vector<std::pair<Family, double>> dists{
      {Family::uniform, 10},       {Family::uniform, 1000},   {Family::uniform, 1e9},
      {Family::exponential, 1e-2}, {Family::zipfian, 0.6},    {Family::zipfian, 1.5}};
  for (const auto& [f, p] : dists)
    for (std::uint64_t seed : {1, 2}) {
      const auto in64 = make<Rec>(f, p, 20'000, seed);
      const auto in32 = make<Record<std::uint32_t>>(f, p, 20'000, seed);
      const auto in128 = make<Record<Key128, NoValue>>(f, p, 20'000, seed);
      for (bool identity : {false, true})
        for (Mode m : {Mode::eq, Mode::lt}) {
          for (const TuningParams& t : {TuningParams{}, tiny()}) {
            auto v = in64;
            semisort::semisort(std::span<Rec>(v), A{identity}, m, t);
            CHECK(oracle::validate_semisort<A>(in64, v, A{identity}).ok());

            using A32 = IntegerKeyAdapter<Record<std::uint32_t>>;
            auto w = in32;
            semisort::semisort(std::span<Record<std::uint32_t>>(w), A32{identity}, m, t);
            CHECK(oracle::validate_semisort<A32>(in32, w, A32{identity}).ok());

            using A128 = IntegerKeyAdapter<Record<Key128, NoValue>>;
            auto x = in128;
            semisort::semisort(std::span<Record<Key128, NoValue>>(x), A128{identity}, m, t);
            CHECK(oracle::validate_semisort<A128>(in128, x, A128{identity}).ok());
          }
        }
    }
}

TEST_CASE("deep recursion with one-bit buckets") {
  TuningParams t;
  t.light_buckets = 2;
  t.subarray_length = 8;
  t.base_case_threshold = 2;
  t.max_heavy = 0;
  std::vector<Rec> in(5000);
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = {mix64(i) % 3000, i};
  auto v = in;
  const auto rep = semisort<A>(v, A{}, Mode::eq, t);
  CHECK(oracle::validate_semisort<A>(in, v, A{}).ok());
  CHECK(rep.max_depth > 8);
  CHECK(rep.max_depth <= kMaxLevels);
}

TEST_CASE("deterministic across worker counts") {
  const auto in = make<Rec>(Family::zipfian, 1.2, 300'000, 17);
  for (bool identity : {false, true})
    for (Mode m : {Mode::eq, Mode::lt}) {
      std::vector<std::vector<Rec>> outs;
      for (std::size_t w : {1, 2, 8}) {
        WorkerPool pool(w);
        auto v = in;
        pool.run([&] { semisort::semisort(std::span<Rec>(v), A{identity}, m, tiny()); });
        outs.push_back(std::move(v));
      }
      CHECK(same_bytes(outs[0], outs[1]));
      CHECK(same_bytes(outs[0], outs[2]));
    }
}

TEST_CASE("a different sampling seed still gives a valid result") {
  const auto in = make<Rec>(Family::zipfian, 1.0, 100'000, 3);
  auto t = tiny();
  t.seed = 99;
  auto v = in;
  semisort<A>(v, A{}, Mode::eq, t);
  CHECK(oracle::validate_semisort<A>(in, v, A{}).ok());
}

TEST_CASE("instrumentation") {
  SUBCASE("one key: heavy at the top, no recursion") {
    std::vector<Rec> v(100'000, Rec{9, 0});
    for (std::size_t i = 0; i < v.size(); ++i) v[i].value = i;
    const auto rep = semisort<A>(v, A{});
    CHECK(rep.recursive_calls == 0);
    CHECK(rep.max_depth == 1);
    for (std::size_t i = 0; i < v.size(); ++i) CHECK(v[i].value == i);
  }
  SUBCASE("below the base-case threshold") {
    std::vector<Rec> v(1000);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = {i % 7, i};
    const auto rep = semisort<A>(v, A{});
    CHECK(rep.max_depth == 1);
    CHECK(rep.base_cases == 1);
    CHECK(rep.bucket_id_calls == 0);
    CHECK(rep.matrix_counters_per_level == std::vector<std::uint64_t>{0});
  }
  SUBCASE("linear bucket work and a single scratch array") {
    for (const auto& [f, p] : std::vector<std::pair<Family, double>>{
             {Family::uniform, 1e9}, {Family::zipfian, 1.2}, {Family::exponential, 1e-3}}) {
      const auto in = make<Rec>(f, p, 200'000, 5);
      for (const TuningParams& t : {TuningParams{}, tiny()}) {
        auto v = in;
        const auto rep = semisort<A>(v, A{}, Mode::eq, t);
        CHECK(rep.bucket_id_calls <= rep.max_depth * in.size());
        CHECK(rep.scratch_allocations == 1);
        CHECK(rep.scratch_records == in.size());
      }
    }
  }
  SUBCASE("matrix counters per level stay within the arena bound") {
    const auto in = make<Rec>(Family::uniform, 1e9, 500'000, 2);
    auto v = in;
    const auto rep = semisort<A>(v, A{});
    const auto p = resolve({}, in.size());
    const std::uint64_t bound = (p.light_buckets + 500) * num_subarrays(in.size(), p.subarray_length);
    for (auto c : rep.matrix_counters_per_level) CHECK(c <= bound);
  }
}

TEST_CASE("heavy keys end up final at the tail") {
  // Three dominant keys among many singletons. Heavy buckets follow the
  // light buckets, so the tail holds exactly the heavy records.
  std::vector<Rec> in;
  for (std::size_t i = 0; i < 150'000; ++i) {
    const std::uint64_t r = mix64(i) % 10;
    in.push_back({r < 6 ? (1ULL << 40) + r % 3 : i, i});
  }
  auto v = in;
  TuningParams t;
  t.base_case_threshold = 1024;
  semisort<A>(v, A{}, Mode::eq, t);
  CHECK(oracle::validate_semisort<A>(in, v, A{}).ok());
  std::size_t heavy = 0;
  for (const auto& r : in) heavy += r.key >= (1ULL << 40);
  for (std::size_t i = v.size() - heavy; i < v.size(); ++i) CHECK(v[i].key >= (1ULL << 40));
}

TEST_CASE("a constant hash terminates through the safety valve") {
  auto a = make_adapter<Rec, std::uint64_t>([](const Rec& r) { return r.key; },
                                            [](std::uint64_t) { return std::uint64_t{12345}; });
  using CA = decltype(a);
  std::vector<Rec> in(40'000);
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = {mix64(i) % 200, i};
  TuningParams t;
  t.base_case_threshold = 1000;
  t.max_heavy = 0;
  auto v = in;
  const auto rep = semisort<CA>(v, a, Mode::eq, t);
  CHECK(oracle::validate_semisort<CA>(in, v, a).ok());
  CHECK(rep.forced_base_cases >= 1);
  CHECK(rep.max_depth <= 3);
}

TEST_CASE("identity mode with shared low bits is rescued by the rehash") {
  std::vector<Rec> in(100'000);
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = {(mix64(i) % 5000) << 20, i};
  TuningParams t;
  t.max_heavy = 0;
  t.base_case_threshold = 512;
  auto v = in;
  const auto rep = semisort<A>(v, A{true}, Mode::eq, t);
  CHECK(oracle::validate_semisort<A>(in, v, A{true}).ok());
  CHECK(rep.max_depth <= 4);
}
