#pragma once
// Bipartite-graph toolkit shared by the scheme constructors: seeded random
// generation with short-cycle repair, girth computation, Hall-style
// b-matchings, and neighborhood expansion checks.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "bitprobe/errors.hpp"
#include "bitprobe/rng.hpp"

namespace bitprobe::graphs {

struct BipartiteGraph {
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  /// Per left vertex, ascending list of right neighbors (simple graph).
  std::vector<std::vector<std::uint32_t>> adj;

  std::size_t edge_count() const;

  /// Text dump: header "bipartite <left> <right>", then "L<i>: <neighbors>".
  void dump(std::ostream& os) const;
  static BipartiteGraph parse(std::istream& is);
};

/// Length of the shortest cycle (always even, >= 4 for a simple bipartite
/// graph); nullopt if the graph is a forest.
std::optional<std::size_t> girth(const BipartiteGraph& g);

struct SampleOverrides {
  std::optional<std::uint64_t> side_size;  // vertices per side
  std::optional<unsigned> degree;          // even left degree before repair
  /// Accept degree 2 (the closed-form regime needs >= 4; desk-scale
  /// constructions with an explicit size override run at 2).
  bool allow_degree_two = false;
};

/// Random bipartite graph with girth > k, every left degree even, and at
/// least 2*m edges. Defaults follow the closed forms: both sides get
/// ceil(4 * m^(1 - 1/(k+1))) vertices and left vertices draw the largest
/// even degree at most side^(1/k) without replacement; graphs with short
/// cycles are repaired by deleting, per cycle, both cycle edges at one of
/// its left vertices (keeping degrees even), iterated to a fixpoint.
/// All output invariants are re-checked post hoc; failing samples are
/// redrawn from derived seeds up to an attempt budget.
BipartiteGraph sample_high_girth(std::uint64_t m, unsigned k, std::uint64_t seed,
                                 const SampleOverrides& ov = {});

struct HallResult {
  bool ok = false;
  /// Per element, its b private right vertices (pairwise disjoint overall).
  std::vector<std::vector<std::uint32_t>> assignment;
  /// On failure, a Hall violator: elements W with |N(W)| < b * |W|.
  std::vector<std::size_t> violator;
};

/// Assign b distinct private right vertices to each element, drawn from its
/// neighborhood, disjoint across elements. Failure certifies that no such
/// system exists (maximum matching argument).
HallResult hall_b_matching(const std::vector<std::vector<std::uint32_t>>& neighborhoods,
                           std::size_t b);

struct ExpansionReport {
  bool ok = true;
  bool exhaustive = true;  // false => sampled, may miss violations
  std::vector<std::uint32_t> witness;
};

/// Exact check of |N(W)| >= factor * |W| over every nonempty W of size at
/// most r_max. Throws BudgetExceededError if that requires enumerating more
/// than `budget` subsets.
ExpansionReport check_expansion_exhaustive(const BipartiteGraph& g, std::size_t r_max,
                                           double factor, std::uint64_t budget = 2'000'000);

/// Randomized spot check of the same property (flagged non-exhaustive).
ExpansionReport check_expansion_sampled(const BipartiteGraph& g, std::size_t r_max,
                                        double factor, std::size_t trials, Rng& rng);

/// Largest r such that sum_{i<=r} C(left, i) fits the budget.
std::size_t max_exhaustive_subset_size(std::size_t left, std::size_t r_max,
                                       std::uint64_t budget);

}  // namespace bitprobe::graphs
