#pragma once
// The scheme abstraction: parameters, kind-specific query graphs, query
// evaluation, the systematic transformation, and the exhaustive
// correctness oracle. Elements are 0-indexed throughout.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bitprobe/bit_memory.hpp"
#include "bitprobe/decision_tree.hpp"
#include "bitprobe/errors.hpp"

namespace bitprobe {

enum class SchemeKind : std::uint8_t {
  CharVector = 0,
  TwoProbe = 1,
  ThreeProbe = 2,
  NonAdaptive = 3,
  Adaptive = 4,
};

const char* kind_name(SchemeKind kind);

struct SchemeParams {
  std::uint64_t m = 0;  // universe size (public, 0-indexed elements)
  std::uint64_t n = 0;  // maximum stored set size
  std::uint64_t t = 0;  // probe count
  std::uint64_t s = 0;  // per-array block size
  std::uint64_t total_bits = 0;
  std::uint64_t seed = 0;
  SchemeKind kind = SchemeKind::CharVector;

  /// Enforces m >= 1, 1 <= n <= m, t >= 1, s >= 1 and the per-kind
  /// total_bits shape (3s, 7s, t*s, t1*s + (2^t2 - 1)*s, or m).
  void validate() const;
};

/// Adaptive split for the composed scheme: t1 non-adaptive then t2 adaptive.
struct AdaptiveSplit {
  unsigned t1 = 0;
  unsigned t2 = 0;
  std::uint64_t alpha = 0;  // 2^t2 - 1, nodes of a depth-t2 tree
  std::uint64_t beta = 0;   // 2^t2 - t2, nodes that force either answer

  static AdaptiveSplit for_t(std::uint64_t t);
};

// ---------------------------------------------------------------------------
// Query graphs
// ---------------------------------------------------------------------------

struct TwoProbeTriple {
  std::uint64_t first = 0;  // index into block A
  std::uint64_t on0 = 0;    // index into block A0
  std::uint64_t on1 = 0;    // index into block A1
};

/// Memory layout [A | A0 | A1], each block s bits. Query x: read A[first];
/// 0 -> A0[on0], 1 -> A1[on1]; answer = last bit read.
struct TwoProbeQueryGraph {
  std::uint64_t s = 0;
  std::vector<TwoProbeTriple> triples;
};

/// One neighbor per (element, block) over blocks A_sigma for every
/// sigma in {0,1}^(<depth), heap order; block h occupies [h*s, (h+1)*s).
/// The probe after outcomes sigma reads block A_sigma; answer = last bit.
struct AdaptiveProbeGraph {
  unsigned depth = 0;
  std::uint64_t s = 0;
  std::uint64_t universe = 0;
  std::vector<std::uint64_t> nbr;  // universe * (2^depth - 1), heap order

  std::size_t blocks() const { return (std::size_t{1} << depth) - 1; }
  std::uint64_t neighbor(std::uint64_t u, std::size_t block) const {
    return nbr[u * blocks() + block];
  }
  /// Level-(depth) neighbors of u as block-relative offsets plus block ids.
  std::vector<std::uint64_t> leaf_addresses(std::uint64_t u, std::uint64_t base) const;
  /// Internal (levels < depth) addresses of u.
  std::vector<std::uint64_t> internal_addresses(std::uint64_t u, std::uint64_t base) const;
  std::vector<std::uint64_t> all_addresses(std::uint64_t u, std::uint64_t base) const;
};

/// Blocks V_1..V_t of s bits each; element u reads its neighbor in every
/// block and answers Yes iff the majority of the bits read are 1.
struct NonAdaptiveProbeGraph {
  unsigned t = 0;
  std::uint64_t s = 0;
  std::uint64_t universe = 0;
  std::vector<std::uint64_t> nbr;  // universe * t

  std::uint64_t neighbor(std::uint64_t u, std::size_t block) const { return nbr[u * t + block]; }
  std::vector<std::uint64_t> addresses(std::uint64_t u, std::uint64_t base) const;
};

/// AND composition: all G1 bits must be 1 and the last G2 bit must be 1.
/// Memory layout [G1 blocks | G2 blocks].
struct AdaptivePairGraph {
  NonAdaptiveProbeGraph g1;
  AdaptiveProbeGraph g2;
};

// ---------------------------------------------------------------------------
// Scheme
// ---------------------------------------------------------------------------

class Scheme {
 public:
  Scheme(SchemeParams params, TwoProbeQueryGraph graph);
  Scheme(SchemeParams params, AdaptiveProbeGraph graph);
  Scheme(SchemeParams params, NonAdaptiveProbeGraph graph);
  Scheme(SchemeParams params, AdaptivePairGraph graph);
  static Scheme char_vector(std::uint64_t m, std::uint64_t n, std::uint64_t seed);

  const SchemeParams& params() const { return params_; }
  SchemeKind kind() const { return params_.kind; }

  const TwoProbeQueryGraph& two_probe() const;
  const AdaptiveProbeGraph& three_probe() const;
  const NonAdaptiveProbeGraph& nonadaptive() const;
  const AdaptivePairGraph& adaptive() const;

  /// The decision tree element u evaluates (materialized on demand).
  DecisionTree decision_tree(std::uint64_t u) const;

 private:
  explicit Scheme(SchemeParams params);  // characteristic vector

  SchemeParams params_;
  std::variant<std::monostate, TwoProbeQueryGraph, AdaptiveProbeGraph, NonAdaptiveProbeGraph,
               AdaptivePairGraph>
      graph_;
};

struct QueryResult {
  bool yes = false;
  std::vector<ProbeStep> trace;
};

/// Evaluate element u against the memory. Exactly t probes for the
/// graph-based kinds; out-of-range addresses raise corruption errors.
QueryResult query(const Scheme& scheme, const BitMemory& memory, std::uint64_t u);

/// Materialize the whole scheme as explicit decision trees.
TreeScheme to_tree_scheme(const Scheme& scheme);

// ---------------------------------------------------------------------------
// Systematic transformation
// ---------------------------------------------------------------------------

using Storer = std::function<BitMemory(const std::vector<std::uint64_t>&)>;

struct SystematicScheme {
  TreeScheme scheme;  // systematic trees over 2s+2 bits
  Storer storer;
};

/// Rebuild any Yes/No-leaf scheme as a systematic one over 2s+2 bits:
/// original bits B, complement block C with C[j] = !B[j], and two constant
/// cells holding 0 and 1. Final probes are redirected to B[j], C[j] or a
/// constant cell so the last bit read equals the original leaf answer.
SystematicScheme make_systematic(const TreeScheme& scheme, Storer storer);

/// The tree transformation alone (callers that never store).
TreeScheme make_systematic_trees(const TreeScheme& scheme);

/// Memory extension used by the transform: [B | ~B | 0 | 1].
BitMemory systematic_extend(const BitMemory& original);

// ---------------------------------------------------------------------------
// Exhaustive correctness oracle
// ---------------------------------------------------------------------------

struct VerifyFailure {
  std::vector<std::uint64_t> set;
  std::optional<std::uint64_t> element;  // empty when the storer itself failed
  std::string diagnostic;
};

struct VerifyReport {
  std::uint64_t sets_tested = 0;
  std::vector<VerifyFailure> failures;

  bool ok() const { return failures.empty(); }
};

/// Store every S with |S| <= n and query all m elements; stops at the first
/// failure. Storer exceptions are recorded as failures for that set.
VerifyReport verify_exhaustive(const Scheme& scheme, const Storer& storer, std::uint64_t n,
                               std::uint64_t budget = 5'000'000);

/// Randomized variant: `samples` uniformly drawn sets of size <= n.
VerifyReport verify_sampled(const Scheme& scheme, const Storer& storer, std::uint64_t n,
                            std::uint64_t samples, std::uint64_t seed);

/// Enumerate subsets of [m] with size min_k..max_k in lexicographic order;
/// fn returning false stops the walk. Returns the number of sets visited.
std::uint64_t for_each_subset(std::uint64_t m, std::uint64_t min_k, std::uint64_t max_k,
                              const std::function<bool(const std::vector<std::uint64_t>&)>& fn);

/// Number of subsets of [m] with size <= n, clamped to UINT64_MAX.
std::uint64_t count_subsets_upto(std::uint64_t m, std::uint64_t n);

}  // namespace bitprobe
