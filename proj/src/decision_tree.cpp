#include "bitprobe/decision_tree.hpp"

#include <stdexcept>

namespace bitprobe {

Evaluation evaluate(const DecisionTree& tree, const BitMemory& memory) {
  if (tree.addresses.size() != tree.node_count())
    throw std::invalid_argument("decision tree node count mismatch");
  Evaluation ev;
  ev.trace.reserve(tree.depth);
  std::size_t node = 0;
  std::size_t path = 0;
  bool last = false;
  for (unsigned level = 0; level < tree.depth; ++level) {
    last = memory.get(tree.addresses[node]);
    ev.trace.push_back({tree.addresses[node], last});
    path = (path << 1) | (last ? 1u : 0u);
    node = 2 * node + (last ? 2 : 1);
  }
  ev.yes = tree.systematic() ? last : tree.leaf_answers.at(path) != 0;
  return ev;
}

}  // namespace bitprobe
