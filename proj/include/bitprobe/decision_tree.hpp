#pragma once
// Depth-t Boolean decision trees over a bit memory. Trees are complete and
// stored in heap order; a tree without leaf labels is systematic (the answer
// is the last bit read).

#include <cstdint>
#include <vector>

#include "bitprobe/bit_memory.hpp"

namespace bitprobe {

struct ProbeStep {
  std::uint64_t address = 0;
  bool bit = false;

  bool operator==(const ProbeStep&) const = default;
};

struct DecisionTree {
  unsigned depth = 0;
  /// 2^depth - 1 memory addresses, heap order (node i children 2i+1, 2i+2).
  std::vector<std::uint64_t> addresses;
  /// 2^depth Yes/No labels indexed by the probe outcome path read as a
  /// binary number (MSB = first probe); empty means systematic.
  std::vector<std::uint8_t> leaf_answers;

  bool systematic() const { return leaf_answers.empty(); }
  std::size_t node_count() const { return (std::size_t{1} << depth) - 1; }
};

struct Evaluation {
  bool yes = false;
  std::vector<ProbeStep> trace;
};

/// Walk the tree against the memory. Addresses outside the memory raise
/// the memory's range error (corruption, never "No").
Evaluation evaluate(const DecisionTree& tree, const BitMemory& memory);

/// An explicit query scheme: one decision tree per element.
struct TreeScheme {
  std::uint64_t m = 0;
  std::uint64_t n = 0;
  std::uint64_t total_bits = 0;
  unsigned t = 0;
  std::vector<DecisionTree> trees;
};

}  // namespace bitprobe
