#pragma once
// General-t schemes: the non-adaptive majority scheme and the AND-composed
// adaptive scheme for odd t >= 5, plus the decision-tree forcing primitive.
// Both schemes are built over a padded universe of m + n elements; elements
// m..m+n-1 are reserved padding and never queryable through the public API.

#include <cstdint>
#include <optional>
#include <vector>

#include "bitprobe/bit_memory.hpp"
#include "bitprobe/scheme.hpp"

namespace bitprobe::multiprobe {

/// A systematic decision tree viewed as node positions over a memory:
/// position h (heap order) reads addresses[h].
struct TreeView {
  unsigned depth = 0;
  std::vector<std::uint64_t> addresses;  // 2^depth - 1, heap order
};

/// Mutate only the controlled positions so that evaluating the tree yields
/// b for every setting of the uncontrolled positions. Under a controlled
/// node the probe is steered into the child subtree with fewer uncontrolled
/// nodes (ties: left); under an uncontrolled node both subtrees are forced.
/// Requires |uncontrolled| <= depth - 1 (throws TooFewControlledError).
void force_answer(const TreeView& tree, const std::vector<std::uint8_t>& controlled, bool b,
                  BitMemory& memory);

/// Controlled-position mask from a set of private memory addresses.
std::vector<std::uint8_t> controlled_mask(const TreeView& tree,
                                          const std::vector<std::uint64_t>& private_addresses);

// ---------------------------------------------------------------------------
// Non-adaptive majority scheme (Theorem: odd t >= 5)
// ---------------------------------------------------------------------------

/// Default block size ceil(60 * m^(2/(t-1)) * n^(1-2/(t-1)) * lg(2m/n));
/// falls back to a characteristic vector when t*s >= m and no override is
/// given. Validation is budgeted: expansion spot checks at factor (t+1)/2
/// and sampled bounds on |T_S|.
Scheme build_nonadaptive(std::uint64_t m, std::uint64_t n, std::uint64_t t, std::uint64_t seed,
                         std::optional<std::uint64_t> s_override = std::nullopt);

/// Pad S to exactly n elements (with reserved padding elements), collect
/// T = {y : |N(y) /\ N(S')| >= (t+1)/2}, Hall-match (t+1)/2 private
/// locations per element of S' u T, write 1s only on the private locations
/// of real members, verify all m public queries.
BitMemory store_nonadaptive(const Scheme& scheme, const std::vector<std::uint64_t>& set);

// ---------------------------------------------------------------------------
// AND-composed adaptive scheme (odd t >= 5; t = 3 is rejected)
// ---------------------------------------------------------------------------

struct SurvivorSets {
  /// Non-members whose whole G1 neighborhood lies inside G1(S').
  std::vector<std::uint64_t> survivors;
  /// Survivors whose G2 leaves meet the G2 leaves of S'.
  std::vector<std::uint64_t> survivors_plus;
};

SurvivorSets compute_survivors(const AdaptivePairGraph& pair,
                               const std::vector<std::uint64_t>& set_exact_n);

Scheme build_adaptive(std::uint64_t m, std::uint64_t n, std::uint64_t t, std::uint64_t seed,
                      std::optional<std::uint64_t> s_override = std::nullopt);

/// Set 1 on G1(S'), force b=1 for members and b=0 for survivors-plus on
/// beta private G2 nodes each (Hall matching), leave everything else 0,
/// verify all m public queries.
BitMemory store_adaptive(const Scheme& scheme, const std::vector<std::uint64_t>& set);

}  // namespace bitprobe::multiprobe
