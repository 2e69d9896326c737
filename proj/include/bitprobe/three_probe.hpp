#pragma once
// Three-probe adaptive scheme: sample-and-validate probe graphs, store by
// peeling non-members whose leaves barely interact with the live set, then
// Hall-matching the remaining core and unwinding the peel stack in reverse.

#include <cstdint>
#include <optional>
#include <vector>

#include "bitprobe/bit_memory.hpp"
#include "bitprobe/scheme.hpp"

namespace bitprobe::threeprobe {

/// Non-member y is peelable when its level-3 leaves avoid the leaves of S
/// entirely, or when writing a steering plan (one or two of y's internal
/// nodes, each free of the rest of the live set) routes every consistent
/// probe path to one of y's unshared, zeroed leaves.
struct PeelRecord {
  std::uint64_t y = 0;
  bool leaf_disjoint = false;
  /// Overlap case: leaves of y shared with leaves(S) (never zeroed).
  std::vector<std::uint64_t> shared_leaves;
  /// Steering plan: (internal address, bit) writes applied at unwind time.
  std::vector<std::pair<std::uint64_t, bool>> steering;
  /// All internal nodes of y free of the live set at its peel step
  /// (empty for allocated records).
  std::vector<std::uint64_t> free_internal;
  /// Set when the plan's cells were granted by the store's global cell
  /// allocation (for residual elements) instead of live-set freeness.
  bool allocated = false;
};

struct PeelResult {
  std::vector<std::uint64_t> core;       // residual non-members, size <= threshold
  std::vector<PeelRecord> stack;         // peel order; unwound back-to-front
};

/// ceil(n * lg(2m/n)): the residual-set size the core handles via Hall.
std::uint64_t peel_threshold(std::uint64_t m, std::uint64_t n);

/// Peel [m] \ S down to the threshold, lowest peelable index first.
/// Throws NotAdmissibleError with the stuck residual set as witness.
PeelResult peel(const AdaptiveProbeGraph& graph, const std::vector<std::uint64_t>& set_sorted,
                std::uint64_t n);

/// Default block size ceil(500 * sqrt(m n lg(2m/n))); falls back to a
/// characteristic vector when 7s >= m and no override is given.
Scheme build(std::uint64_t m, std::uint64_t n, std::uint64_t seed,
             std::optional<std::uint64_t> s_override = std::nullopt);

/// Optional instrumentation captured by store for validation.
struct StoreTrace {
  PeelResult peel;
  std::vector<std::uint64_t> hall_elements;              // S then core
  std::vector<std::vector<std::uint64_t>> hall_private;  // parallel to hall_elements
  /// Internal-node writes made while unwinding, in processing order.
  std::vector<std::pair<std::uint64_t, std::vector<std::uint64_t>>> steering_writes;
};

/// Zero memory; force the answer of every element of S u core on its five
/// private nodes; unwind the stack last-peeled-first, zeroing each record's
/// free leaves and steering overlap cases away from the shared leaf.
/// All m queries are verified before returning.
BitMemory store(const Scheme& scheme, const std::vector<std::uint64_t>& set,
                StoreTrace* trace = nullptr);

}  // namespace bitprobe::threeprobe
