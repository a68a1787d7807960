#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <sstream>
#include <vector>

#include "semisort/apps/graph.hpp"
#include "semisort/apps/ngram.hpp"
#include "semisort/oracle.hpp"
#include "semisort/random.hpp"
#include "semisort/semisort.hpp"

using namespace semisort;
using namespace semisort::apps;

namespace {

CsrGraph random_graph(std::uint64_t n, std::size_t m, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<Edge> edges(m);
  for (auto& e : edges)
    e = {static_cast<std::uint32_t>(rng.bounded(n)), static_cast<std::uint32_t>(rng.bounded(n))};
  return from_edges(n, edges);
}

}  // namespace

TEST_CASE("transpose examples") {
  SUBCASE("2-cycle is its own transpose") {
    const std::vector<Edge> e{{0, 1}, {1, 0}};
    const auto g = from_edges(2, e);
    CHECK(transpose(g) == g);
  }
  SUBCASE("star") {
    const std::uint32_t k = 50;
    std::vector<Edge> e;
    for (std::uint32_t i = 1; i <= k; ++i) e.push_back({0, i});
    const auto t = transpose(from_edges(k + 1, e));
    CHECK(t.m() == k);
    CHECK(t.neighbors(0).empty());
    for (std::uint32_t i = 1; i <= k; ++i) {
      REQUIRE(t.neighbors(i).size() == 1);
      CHECK(t.neighbors(i)[0] == 0);
    }
  }
  SUBCASE("empty graphs") {
    CsrGraph g;
    CHECK(transpose(g) == g);
    const auto isolated = from_edges(5, std::vector<Edge>{});
    CHECK(transpose(isolated) == isolated);
  }
}

TEST_CASE("transpose matches the sequential reference") {
  for (std::uint64_t seed = 1; seed <= 6; ++seed) {
    const auto g = random_graph(1000, 10'000 * seed, seed);
    for (Mode m : {Mode::eq, Mode::lt}) {
      RunReport rep;
      const auto t = transpose(g, m, {}, &rep);
      CHECK(t == transpose_reference(g));
      CHECK(rep.scratch_allocations == 1);
    }
  }
}

TEST_CASE("transpose twice restores sorted adjacency, degrees are conserved") {
  const auto g = random_graph(500, 20'000, 99);
  const auto t = transpose(g);
  const auto tt = transpose(t);
  for (std::uint64_t v = 0; v < g.n; ++v) {
    std::vector<std::uint32_t> a(g.neighbors(v).begin(), g.neighbors(v).end());
    std::sort(a.begin(), a.end());
    CHECK(std::equal(a.begin(), a.end(), tt.neighbors(v).begin(), tt.neighbors(v).end()));
  }
  std::vector<std::uint64_t> in_deg(g.n, 0);
  for (auto v : g.targets) ++in_deg[v];
  for (std::uint64_t v = 0; v < g.n; ++v) CHECK(t.neighbors(v).size() == in_deg[v]);
  CHECK(t.m() == g.m());
}

TEST_CASE("graph files") {
  const auto g = random_graph(200, 3000, 5);
  SUBCASE("binary round trip") {
    std::stringstream io;
    write_csr_binary(io, g);
    CHECK(read_csr_binary(io) == g);
  }
  SUBCASE("edge list round trip") {
    std::stringstream io;
    io << "# comment\n\n";
    write_edge_list(io, g);
    auto back = read_edge_list(io);
    // n is inferred from the largest id.
    CHECK(back.m() == g.m());
    CHECK(std::equal(back.targets.begin(), back.targets.end(), g.targets.begin()));
  }
  SUBCASE("bad inputs") {
    std::stringstream bad_line("0 1\nfoo\n");
    CHECK_THROWS_AS(read_edge_list(bad_line), InputError);
    std::stringstream big("0 4294967296\n");
    CHECK_THROWS_AS(read_edge_list(big), InputError);
    std::stringstream io;
    write_csr_binary(io, g);
    std::string s = io.str();
    s.resize(s.size() - 3);
    std::stringstream truncated(s);
    CHECK_THROWS_AS(read_csr_binary(truncated), InputError);
    CsrGraph broken = g;
    broken.targets[0] = 1000;
    CHECK_THROWS_AS(validate(broken), InputError);
    broken = g;
    broken.offsets[1] = broken.offsets[2] + 1;
    CHECK_THROWS_AS(validate(broken), InputError);
  }
}

TEST_CASE("text cleaning") {
  CHECK(clean_text("The cat. the dog") == "the cat the dog");
  CHECK(clean_text("  Hello,  WORLD!! 42abc ") == "hello world abc");
  CHECK(clean_text("caf\xc3\xa9 ok") == "caf ok");
  CHECK(clean_text("don't") == "don t");
  CHECK(clean_text("").empty());
}

TEST_CASE("n-gram extraction") {
  SUBCASE("empty") { CHECK(build_ngrams("", 2).records.empty()); }
  SUBCASE("gram size below 2") { CHECK_THROWS_AS(build_ngrams("a b", 1), ContractError); }
  SUBCASE("worked example") {
    const auto c = build_ngrams("The cat. the dog", 2);
    REQUIRE(c.records.size() == 3);
    CHECK(c.key(c.records[0]) == "the");
    CHECK(c.value(c.records[0]) == "cat");
    CHECK(c.key(c.records[1]) == "cat");
    CHECK(c.value(c.records[1]) == "the");
    CHECK(c.key(c.records[2]) == "the");
    CHECK(c.value(c.records[2]) == "dog");

    auto recs = c.records;
    const NGramAdapter a{&c};
    semisort::semisort(std::span<NGramRecord>(recs), a);
    CHECK(oracle::validate_semisort<NGramAdapter>(c.records, recs, a).ok());
    auto first_the = std::find_if(recs.begin(), recs.end(), [&](const NGramRecord& r) { return c.key(r) == "the"; });
    REQUIRE(first_the + 1 < recs.end());
    CHECK(c.value(*first_the) == "cat");
    CHECK(c.value(*(first_the + 1)) == "dog");
  }
  SUBCASE("trigram keys span two words") {
    const auto c = build_ngrams("a b c d", 3);
    REQUIRE(c.records.size() == 2);
    CHECK(c.key(c.records[0]) == "a b");
    CHECK(c.value(c.records[0]) == "c");
    CHECK(c.key(c.records[1]) == "b c");
    CHECK(c.value(c.records[1]) == "d");
  }
  SUBCASE("count is max(0, words - n + 1)") {
    for (std::size_t words : {0, 1, 2, 3, 7})
      for (std::size_t n : {2, 3, 5}) {
        std::string text;
        for (std::size_t w = 0; w < words; ++w) text += "w" + std::string(1, static_cast<char>('a' + w)) + " ";
        const auto c = build_ngrams(text, n);
        CHECK(c.word_count == words);
        CHECK(c.records.size() == (words + 1 > n ? words - n + 1 : 0));
      }
  }
}

TEST_CASE("n-gram semisort on a larger corpus") {
  SplitMix64 rng(4);
  const char* vocab[] = {"alpha", "beta", "gamma", "delta", "eps", "zeta", "eta", "theta"};
  std::string text;
  for (int i = 0; i < 60'000; ++i) {
    text += vocab[rng.bounded(8)];
    text += rng.bounded(10) == 0 ? ". " : " ";
  }
  const auto c = build_ngrams(text, 3);
  const NGramAdapter a{&c};
  for (Mode m : {Mode::eq, Mode::lt}) {
    auto recs = c.records;
    semisort::semisort(std::span<NGramRecord>(recs), a, m);
    CHECK(oracle::validate_semisort<NGramAdapter>(c.records, recs, a).ok());
  }
}
