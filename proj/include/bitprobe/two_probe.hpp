#pragma once
// Two-probe adaptive scheme: query graph from a high-girth bipartite graph,
// constraints compiled to 2-SAT over the first array, storing by solving and
// extending the model.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "bitprobe/bipartite.hpp"
#include "bitprobe/scheme.hpp"
#include "bitprobe/twosat.hpp"

namespace bitprobe::twoprobe {

/// Build a two-probe scheme with girth > 4n asserted on the labeled query
/// graph. With no override the per-array size is ceil(4 * m^(1 - 1/(4n+1)))
/// and the scheme falls back to a characteristic vector whenever 3s >= m
/// (that regime covers every n >= lg(m)/40 and all desk-scale m). An
/// explicit s_override always builds the real scheme.
Scheme build(std::uint64_t m, std::uint64_t n, std::uint64_t seed,
             std::optional<std::uint64_t> s_override = std::nullopt);

/// The underlying labeled query graph of a two-probe scheme as a bipartite
/// graph: left = block A, right = A0 (offsets [0,s)) then A1 ([s,2s)).
graphs::BipartiteGraph underlying_graph(const TwoProbeQueryGraph& g);

/// One clause per pair (x in S, y not in S) meeting in A0 (both-positive)
/// or in A1 (both-negative), over variables A[0..s-1].
twosat::Instance compile_constraints(const TwoProbeQueryGraph& g,
                                     std::span<const std::uint64_t> set_sorted);

/// Solve the compiled constraints and extend the model to A0 and A1:
/// A0[j] = 1 iff some x in S has A[first(x)] = 0 and on0(x) = j, and A1
/// symmetrically. All m queries are verified before returning. Throws
/// twosat::UnsatisfiableError (carrying the implication chain) when the
/// constraints cannot be met.
BitMemory store(const Scheme& scheme, const std::vector<std::uint64_t>& set);

/// Post-hoc invariant scan: even degrees in block A, no edge with two
/// labels, girth of the labeled graph above the floor.
void check_query_graph(const TwoProbeQueryGraph& g, std::uint64_t girth_floor);

}  // namespace bitprobe::twoprobe
