#pragma once
// Executable lower bounds: pseudo-graph extraction from systematic
// two-probe schemes, the forcing argument along pseudo-cycles,
// intersecting-short-cycle search, fooling-set construction for t >= 2,
// and the girth-versus-density bound.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bitprobe/decision_tree.hpp"
#include "bitprobe/scheme.hpp"

namespace bitprobe::adversary {

/// A systematic two-probe scheme reduced to its essentials: per element,
/// the first-probe cell and the two second-probe cells (global addresses).
struct Triple {
  std::uint64_t first = 0;
  std::uint64_t on0 = 0;
  std::uint64_t on1 = 0;
};

struct SystematicTwoProbeView {
  std::uint64_t total_bits = 0;
  std::vector<Triple> triples;
};

/// View of a block-layout two-probe scheme (addresses globalized).
SystematicTwoProbeView view_of(const Scheme& scheme);

/// View of an explicit systematic depth-2 tree scheme.
SystematicTwoProbeView view_of_trees(const TreeScheme& scheme);

/// Uniformly random triples over [total_bits]: the undersized-scheme
/// fixture the lower bound is demonstrated against.
SystematicTwoProbeView random_view(std::uint64_t m, std::uint64_t total_bits,
                                   std::uint64_t seed);

// ---------------------------------------------------------------------------
// Pseudo-graph
// ---------------------------------------------------------------------------

/// Vertex sides: A0[c] is cell c in its role as a 0-branch second probe,
/// A1[c] the same cell as a 1-branch second probe. One edge per ordered
/// pair of same-first-cell elements: {A0[on0(x)], A1[on1(x')]} labeled with
/// (x at the A0 end, x' at the A1 end).
struct PseudoEdge {
  std::uint32_t a0_cell = 0;
  std::uint32_t a1_cell = 0;
  std::uint64_t elem_at_a0 = 0;
  std::uint64_t elem_at_a1 = 0;
};

struct PseudoGraph {
  std::uint64_t cells = 0;  // vertex count per side
  std::vector<PseudoEdge> edges;
};

/// Pair the elements of every first-probe cell in element-index order,
/// excluding one element when the class is odd. Edge count is at least
/// (m - cells)/2 for a full scheme.
PseudoGraph build_pseudo_graph(const SystematicTwoProbeView& view);

/// A cycle of pseudo-edges. Walking step i traverses edge_ids[i]; the walk
/// starts (and ends) at the given side/cell vertex. Cycle lengths are even:
/// the pseudo-graph is bipartite between the A0 and A1 sides.
struct Cycle {
  bool start_on_a1 = false;
  std::uint32_t start_cell = 0;
  std::vector<std::uint32_t> edge_ids;

  std::size_t length() const { return edge_ids.size(); }
};

/// Forced location: a cycle, a target bit, and element sets such that any
/// memory representing a set S with s1 <= S <= complement(s0) must assign
/// `bit` to `location`. |s1| = |C|-1 for bit 0 and |C|+1 for bit 1.
struct ForcingWitness {
  std::uint64_t location = 0;
  bool bit = false;
  std::vector<std::uint64_t> s0;  // excluded elements
  std::vector<std::uint64_t> s1;  // included elements
  Cycle cycle;
};

/// Derive the forcing sets of a cycle. Cycles whose label elements repeat
/// (making s0 and s1 intersect) are rejected via CorruptionError; label
/// elements are unique by construction in a well-formed pseudo-graph.
ForcingWitness forcing_sets(const PseudoGraph& pg, const Cycle& cycle, bool bit);

/// Replay the systematic propagation along the witness cycle and confirm
/// the contradiction that forces the location.
bool check_forcing(const SystematicTwoProbeView& view, const PseudoGraph& pg,
                   const ForcingWitness& witness);

/// Two edge-disjoint cycles of length <= floor(n/2) sharing a vertex.
/// Short cycles are peeled off (removing their edges) until either an
/// intersecting pair appears or no short cycle remains; absence is not
/// certified beyond this search.
std::optional<std::pair<Cycle, Cycle>> find_conflicting_cycles(const PseudoGraph& pg,
                                                               std::uint64_t n);

// ---------------------------------------------------------------------------
// Fooling pairs
// ---------------------------------------------------------------------------

/// Disjoint sets that no single memory can accept and reject: for every
/// assignment, some member answers No or some excluded element answers Yes.
struct FoolingPair {
  std::vector<std::uint64_t> members;   // S
  std::vector<std::uint64_t> excluded;  // T
  /// Two-probe evidence (absent for pairs assembled by the recursion,
  /// whose base-case witnesses are validated before being merged).
  std::optional<std::uint64_t> forced_location;
  std::optional<ForcingWitness> witness0, witness1;
  /// Set when the pair was confirmed by exhaustive memory enumeration
  /// (touched cells within the threshold); propagation checks always run.
  bool exhaustively_confirmed = false;
};

std::optional<FoolingPair> fooling_set_two_probe(const SystematicTwoProbeView& view,
                                                 std::uint64_t n);

/// Recursive fooling construction for t >= 2: restrict to the most popular
/// first-probe cell (ties: lowest address), recurse on both branch values
/// with halved set sizes, take unions; the t = 2 base case delegates to the
/// pseudo-graph machinery. Input trees may carry Yes/No leaves; the scheme
/// is made systematic internally.
std::optional<FoolingPair> fooling_set_recursive(const TreeScheme& scheme, std::uint64_t n);

/// Enumerate all memories over the cells the pair's elements touch and
/// confirm that none represents (members in, excluded out). Returns nullopt
/// when more than max_cells are touched (enumeration skipped).
std::optional<bool> confirm_fooling_exhaustive(const TreeScheme& scheme, const FoolingPair& pair,
                                               std::size_t max_cells = 20);

/// Parameter-regime report for the recursive lower bound; the search still
/// runs outside the regime, flagged best-effort.
struct RegimeReport {
  bool within = false;
  std::string note;
};
RegimeReport regime_check(std::uint64_t m, std::uint64_t n, std::uint64_t t, std::uint64_t s);

/// Girth-versus-density bound: (num_vertices/2)^(1/floor(n/4)) + 1, with
/// the root snapped to an exact integer when one exists.
double moore_bound(std::uint64_t num_vertices, std::uint64_t n);

}  // namespace bitprobe::adversary
