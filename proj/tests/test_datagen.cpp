#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstring>
#include <sstream>
#include <unordered_map>
#include <vector>

#include "semisort/datagen.hpp"
#include "semisort/parallel.hpp"
#include "semisort/record_io.hpp"

using namespace semisort;

namespace {

using Rec = Record<std::uint64_t>;

DistributionSpec spec(Family f, double p, std::size_t n, std::uint64_t seed = 1, unsigned bits = 64) {
  DistributionSpec s;
  s.family = f;
  s.parameter = p;
  s.n = n;
  s.seed = seed;
  s.key_bits = bits;
  return s;
}

std::unordered_map<std::uint64_t, std::size_t> counts(const std::vector<Rec>& v) {
  std::unordered_map<std::uint64_t, std::size_t> c;
  for (const auto& r : v) ++c[r.key];
  return c;
}

template <class R>
void round_trip(const DistributionSpec& s) {
  const auto v = generate<R>(s);
  std::stringstream io;
  write_records<R>(io, v);
  CHECK(io.str().size() == 16 + v.size() * (io_detail::width_of<typename R::key_type>() +
                                            io_detail::width_of<typename R::value_type>()));
  const auto h = read_header(io);
  CHECK(h == header_for<R>(v.size()));
  const auto back = read_records<R>(io, h);
  REQUIRE(back.size() == v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    CHECK(back[i].key == v[i].key);
    if constexpr (!std::is_same_v<typename R::value_type, NoValue>) CHECK(back[i].value == v[i].value);
  }
}

}  // namespace

TEST_CASE("uniform mu=10 gives exactly ten keys with balanced counts") {
  const auto v = generate<Rec>(spec(Family::uniform, 10, 1'000'000, 42));
  const auto c = counts(v);
  CHECK(c.size() == 10);
  for (const auto& [k, n] : c) {
    CHECK(k < 10);
    CHECK(std::abs(static_cast<double>(n) - 1e5) <= 0.05 * 1e5);
  }
  const auto s = compute_stats(std::span<const Rec>(v), IntegerKeyAdapter<Rec>{});
  CHECK(s.distinct_keys == 10);
  CHECK(s.heavy_freq_ratio == 1.0);
}

TEST_CASE("uniform mu=1e5 at n=1e6 has no heavy keys") {
  const auto v = generate<Rec>(spec(Family::uniform, 1e5, 1'000'000, 3));
  const auto s = compute_stats(std::span<const Rec>(v), IntegerKeyAdapter<Rec>{});
  CHECK(s.heavy_freq_ratio == 0.0);
  CHECK(s.distinct_keys <= 100'000);
}

TEST_CASE("exponential max frequency follows n(1 - e^-lambda)") {
  for (double lambda : {1e-3, 1e-2}) {
    const std::size_t n = 1'000'000;
    const auto v = generate<Rec>(spec(Family::exponential, lambda, n, 5));
    const auto s = compute_stats(std::span<const Rec>(v), IntegerKeyAdapter<Rec>{});
    const double expected = n * (1 - std::exp(-lambda));
    CHECK(std::abs(s.max_frequency - expected) <= 0.1 * expected);
    // Key 0 is the most likely key; its own count sits within 5 sd of the mean.
    const double sd = std::sqrt(expected);
    CHECK(std::abs(static_cast<double>(counts(v).at(0)) - expected) <= 5 * sd);
  }
}

TEST_CASE("zipfian rank frequencies match the normalized power law") {
  for (double s : {0.6, 1.0, 1.5}) {
    const std::size_t n = 400'000;
    const auto v = generate<Rec>(spec(Family::zipfian, s, n, 9));
    const auto c = counts(v);
    double harmonic = 0;
    for (std::size_t r = 1; r <= n; ++r) harmonic += std::pow(static_cast<double>(r), -s);
    for (std::uint64_t r : {1, 2, 3, 10}) {
      const double p = std::pow(static_cast<double>(r), -s) / harmonic;
      const double mean = n * p;
      const double sd = std::sqrt(n * p * (1 - p));
      const double got = c.count(r) ? static_cast<double>(c.at(r)) : 0.0;
      CHECK_MESSAGE(std::abs(got - mean) <= 5 * sd, "s=" << s << " rank=" << r);
    }
    for (const auto& [k, cnt] : c) {
      CHECK(k >= 1);
      CHECK(k <= n);
    }
  }
}

TEST_CASE("generation is reproducible and independent of worker count") {
  const auto s = spec(Family::zipfian, 1.2, 200'000, 77);
  std::vector<std::vector<Rec>> outs;
  for (std::size_t w : {1, 3}) {
    WorkerPool pool(w);
    pool.run([&] { outs.push_back(generate<Rec>(s)); });
  }
  CHECK(outs[0] == outs[1]);
  auto other = s;
  other.seed = 78;
  CHECK(generate<Rec>(other) != outs[0]);
}

TEST_CASE("key widths") {
  const auto v32 = generate<Record<std::uint32_t>>(spec(Family::uniform, 4294967296.0, 1000, 1, 32));
  CHECK(v32.size() == 1000);
  const auto e32 = generate<Record<std::uint32_t>>(spec(Family::exponential, 1e-12, 1000, 1, 32));
  for (const auto& r : e32) CHECK(r.key <= 0xffffffffu);
  const auto v128 = generate<Record<Key128>>(spec(Family::uniform, 10, 1000, 1, 128));
  std::unordered_map<std::uint64_t, std::uint64_t> hi_of;
  for (const auto& r : v128) {
    CHECK(r.key.lo < 10);
    auto [it, fresh] = hi_of.emplace(r.key.lo, r.key.hi);
    CHECK(it->second == r.key.hi);
  }
  CHECK_THROWS_AS(generate<Record<std::uint32_t>>(spec(Family::uniform, 10, 10, 1, 64)), ConfigError);
}

TEST_CASE("invalid specs") {
  CHECK_THROWS_AS(validate(spec(Family::uniform, 0, 10)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::uniform, 2.5, 10)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::uniform, 1e30, 10)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::uniform, 5e9, 10, 1, 32)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::exponential, 0, 10)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::exponential, -1, 10)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::zipfian, 0, 10)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::zipfian, NAN, 10)), ConfigError);
  CHECK_THROWS_AS(validate(spec(Family::uniform, 10, 10, 1, 16)), ConfigError);
  CHECK_THROWS_AS(parse_family("normal"), ConfigError);
  CHECK(parse_family("zipf") == Family::zipfian);
  CHECK(parse_family("exp") == Family::exponential);
}

TEST_CASE("compute_stats small example") {
  const std::vector<Rec> v{{1, 0}, {1, 0}, {2, 0}};
  const auto s = compute_stats(std::span<const Rec>(v), IntegerKeyAdapter<Rec>{});
  CHECK(s.distinct_keys == 2);
  CHECK(s.max_frequency == 2);
  CHECK(s.heavy_freq_ratio == 0.0);
  const std::vector<Rec> empty;
  CHECK(compute_stats(std::span<const Rec>(empty), IntegerKeyAdapter<Rec>{}).distinct_keys == 0);
}

TEST_CASE("record files round trip for every layout") {
  round_trip<Record<std::uint32_t>>(spec(Family::uniform, 1000, 70'000, 1, 32));
  round_trip<Record<std::uint32_t, NoValue>>(spec(Family::uniform, 1000, 100, 1, 32));
  round_trip<Record<std::uint64_t>>(spec(Family::zipfian, 1.0, 1000, 1, 64));
  round_trip<Record<std::uint64_t, NoValue>>(spec(Family::zipfian, 1.0, 1000, 1, 64));
  round_trip<Record<Key128>>(spec(Family::exponential, 1e-3, 1000, 1, 128));
  round_trip<Record<Key128, NoValue>>(spec(Family::exponential, 1e-3, 0, 1, 128));
}

TEST_CASE("record files are little-endian") {
  std::stringstream io;
  const std::vector<Record<std::uint32_t>> v{{0x01020304u, 0x0a0b0c0du}};
  write_records<Record<std::uint32_t>>(io, v);
  const std::string s = io.str();
  REQUIRE(s.size() == 24);
  CHECK(s.substr(0, 4) == "SSRT");
  CHECK(s[4] == 4);
  CHECK(s[5] == 4);
  CHECK(s[8] == 1);
  CHECK(s[16] == 0x04);
  CHECK(s[19] == 0x01);
  CHECK(s[20] == 0x0d);
}

TEST_CASE("malformed record files") {
  SUBCASE("bad magic") {
    std::stringstream io(std::string("XXXX\x08\x08\0\0\0\0\0\0\0\0\0\0", 16));
    CHECK_THROWS_AS(read_header(io), InputError);
  }
  SUBCASE("truncated header") {
    std::stringstream io("SSRT");
    CHECK_THROWS_AS(read_header(io), InputError);
  }
  SUBCASE("truncated body and huge count") {
    std::stringstream io;
    write_header(io, RecordFileHeader{8, 8, std::uint64_t{1} << 50});
    io << "short";
    const auto h = read_header(io);
    CHECK_THROWS_AS(read_records<Rec>(io, h), InputError);
  }
  SUBCASE("width mismatch") {
    std::stringstream io;
    write_records<Record<std::uint32_t>>(io, std::vector<Record<std::uint32_t>>{{1, 2}});
    const auto h = read_header(io);
    CHECK_THROWS_AS(read_records<Rec>(io, h), InputError);
  }
  SUBCASE("bad widths") {
    std::stringstream io;
    write_header(io, RecordFileHeader{8, 4, 0});
    CHECK_THROWS_AS(read_header(io), InputError);
  }
}
