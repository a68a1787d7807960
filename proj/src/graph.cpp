#include "semisort/apps/graph.hpp"

#include <algorithm>
#include <sstream>
#include <string>

#include "semisort/parallel.hpp"
#include "semisort/record_io.hpp"
#include "semisort/semisort.hpp"

namespace semisort::apps {

void validate(const CsrGraph& g) {
  if (g.offsets.size() != g.n + 1)
    throw InputError("csr: expected " + std::to_string(g.n + 1) + " offsets, got " +
                     std::to_string(g.offsets.size()));
  if (g.offsets.front() != 0) throw InputError("csr: offsets[0] must be 0");
  for (std::uint64_t v = 0; v < g.n; ++v)
    if (g.offsets[v + 1] < g.offsets[v])
      throw InputError("csr: offsets decrease at vertex " + std::to_string(v));
  if (g.offsets.back() != g.m())
    throw InputError("csr: offsets[n] = " + std::to_string(g.offsets.back()) + " but m = " +
                     std::to_string(g.m()));
  for (std::uint64_t e = 0; e < g.m(); ++e)
    if (g.targets[e] >= g.n)
      throw InputError("csr: target " + std::to_string(g.targets[e]) + " out of range at edge " +
                       std::to_string(e));
}

CsrGraph from_edges(std::uint64_t n, std::span<const Edge> edges) {
  CsrGraph g;
  g.n = n;
  g.offsets.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw InputError("edge (" + std::to_string(u) + ", " + std::to_string(v) + ") out of range");
    ++g.offsets[u + 1];
  }
  for (std::uint64_t v = 0; v < n; ++v) g.offsets[v + 1] += g.offsets[v];
  g.targets.resize(edges.size());
  std::vector<std::uint64_t> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& [u, v] : edges) g.targets[cursor[u]++] = v;
  return g;
}

CsrGraph transpose(const CsrGraph& g, Mode mode, const TuningParams& tuning, RunReport* report) {
  validate(g);
  using Rec = Record<std::uint32_t, std::uint32_t>;
  std::vector<Rec> pairs(g.m());
  parallel_for(0, g.n, [&](std::size_t u) {
    for (std::uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
      pairs[e] = Rec{g.targets[e], static_cast<std::uint32_t>(u)};
  }, 256);

  const IntegerKeyAdapter<Rec> adapter{.identity_mode = true};
  auto rep = semisort(std::span<Rec>(pairs), adapter, mode, tuning);
  if (report) *report = rep;

  // Runs of equal targets become the transposed adjacency lists.
  CsrGraph t;
  t.n = g.n;
  t.offsets.assign(g.n + 1, 0);
  std::vector<std::size_t> run_starts;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i == 0 || pairs[i].key != pairs[i - 1].key) run_starts.push_back(i);
    ++t.offsets[pairs[i].key + 1];
  }
  for (std::uint64_t v = 0; v < g.n; ++v) t.offsets[v + 1] += t.offsets[v];
  t.targets.resize(g.m());
  run_starts.push_back(pairs.size());
  parallel_for(0, run_starts.size() - 1, [&](std::size_t r) {
    const std::uint32_t v = pairs[run_starts[r]].key;
    std::uint64_t out = t.offsets[v];
    for (std::size_t i = run_starts[r]; i < run_starts[r + 1]; ++i) t.targets[out++] = pairs[i].value;
  }, 64);
  return t;
}

CsrGraph transpose_reference(const CsrGraph& g) {
  CsrGraph t;
  t.n = g.n;
  t.offsets.assign(g.n + 1, 0);
  for (std::uint32_t v : g.targets) ++t.offsets[v + 1];
  for (std::uint64_t v = 0; v < g.n; ++v) t.offsets[v + 1] += t.offsets[v];
  t.targets.resize(g.m());
  std::vector<std::uint64_t> cursor(t.offsets.begin(), t.offsets.end() - 1);
  for (std::uint64_t u = 0; u < g.n; ++u)
    for (std::uint64_t e = g.offsets[u]; e < g.offsets[u + 1]; ++e)
      t.targets[cursor[g.targets[e]]++] = static_cast<std::uint32_t>(u);
  return t;
}

CsrGraph read_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::uint64_t max_id = 0;
  bool any = false;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    std::uint64_t u = 0, v = 0;
    if (!(ss >> u >> v)) throw InputError("edge list line " + std::to_string(line_no) + ": expected 'u v'");
    if (u > 0xffffffffULL || v > 0xffffffffULL)
      throw InputError("edge list line " + std::to_string(line_no) + ": vertex id exceeds 32 bits");
    edges.emplace_back(static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v));
    max_id = std::max({max_id, u, v});
    any = true;
  }
  return from_edges(any ? max_id + 1 : 0, edges);
}

void write_edge_list(std::ostream& out, const CsrGraph& g) {
  for (std::uint64_t u = 0; u < g.n; ++u)
    for (std::uint32_t v : g.neighbors(u)) out << u << ' ' << v << '\n';
}

CsrGraph read_csr_binary(std::istream& in) {
  unsigned char head[16];
  if (!in.read(reinterpret_cast<char*>(head), 16)) throw InputError("csr file: truncated header");
  CsrGraph g;
  g.n = io_detail::get_u64(head);
  const std::uint64_t m = io_detail::get_u64(head + 8);
  if (g.n > 0x100000000ULL) throw InputError("csr file: vertex count exceeds 32-bit ids");
  std::vector<unsigned char> buf((g.n + 1) * 8);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
    throw InputError("csr file: truncated offsets");
  g.offsets.resize(g.n + 1);
  for (std::uint64_t v = 0; v <= g.n; ++v) g.offsets[v] = io_detail::get_u64(buf.data() + 8 * v);
  buf.resize(m * 4);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
    throw InputError("csr file: truncated targets");
  g.targets.resize(m);
  for (std::uint64_t e = 0; e < m; ++e) g.targets[e] = io_detail::get_u32(buf.data() + 4 * e);
  validate(g);
  return g;
}

void write_csr_binary(std::ostream& out, const CsrGraph& g) {
  std::vector<unsigned char> buf(16 + 8 * g.offsets.size() + 4 * g.targets.size());
  io_detail::put_u64(buf.data(), g.n);
  io_detail::put_u64(buf.data() + 8, g.m());
  unsigned char* p = buf.data() + 16;
  for (std::uint64_t o : g.offsets) io_detail::put_u64(p, o), p += 8;
  for (std::uint32_t t : g.targets) io_detail::put_u32(p, t), p += 4;
  out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
  if (!out) throw InputError("csr file: write failed");
}

}  // namespace semisort::apps
