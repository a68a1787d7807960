#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <ostream>
#include <span>
#include <utility>
#include <vector>

#include "semisort/adapter.hpp"
#include "semisort/instrumentation.hpp"
#include "semisort/params.hpp"

namespace semisort::apps {

/// Directed graph in compressed sparse row form.
struct CsrGraph {
  std::uint64_t n = 0;
  std::vector<std::uint64_t> offsets{0};  // n + 1 entries
  std::vector<std::uint32_t> targets;     // m entries

  std::uint64_t m() const { return targets.size(); }
  std::span<const std::uint32_t> neighbors(std::uint64_t v) const {
    return {targets.data() + offsets[v], offsets[v + 1] - offsets[v]};
  }

  friend bool operator==(const CsrGraph&, const CsrGraph&) = default;
};

using Edge = std::pair<std::uint32_t, std::uint32_t>;

/// Throws InputError unless offsets start at 0, never decrease, end at m,
/// and every target is below n.
void validate(const CsrGraph& g);

/// Builds a CSR from an edge list; each adjacency list keeps edge-list order.
CsrGraph from_edges(std::uint64_t n, std::span<const Edge> edges);

/// Transposed graph: (v, u) for every edge (u, v). Implemented with an
/// integer-key (identity hash) semisort of (target, source) records; each
/// transposed adjacency list comes out in ascending source order.
CsrGraph transpose(const CsrGraph& g, Mode mode = Mode::eq, const TuningParams& tuning = {},
                   RunReport* report = nullptr);

/// Sequential counting-sort transpose, kept independent of the library.
CsrGraph transpose_reference(const CsrGraph& g);

/// Text edge list: one "u v" pair per line; blank lines and lines starting
/// with '#' are skipped. n is one more than the largest vertex id.
CsrGraph read_edge_list(std::istream& in);
void write_edge_list(std::ostream& out, const CsrGraph& g);

/// Binary CSR: n and m as u64 LE, then n + 1 u64 offsets, then m u32 targets.
CsrGraph read_csr_binary(std::istream& in);
void write_csr_binary(std::ostream& out, const CsrGraph& g);

}  // namespace semisort::apps
