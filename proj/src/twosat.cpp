#include "bitprobe/twosat.hpp"

#include <algorithm>
#include <cassert>
#include <queue>
#include <stdexcept>

namespace bitprobe::twosat {

namespace {

// Literal encoding: 2*var for positive, 2*var+1 for negated.
inline std::uint32_t enc(Literal l) { return 2 * l.var + (l.negated ? 1u : 0u); }
inline Literal dec(std::uint32_t v) { return {v >> 1, (v & 1u) != 0}; }
inline std::uint32_t negation(std::uint32_t v) { return v ^ 1u; }

struct ImplicationGraph {
  std::size_t nodes;
  std::vector<std::uint32_t> offsets;  // CSR
  std::vector<std::uint32_t> targets;

  explicit ImplicationGraph(const Instance& in) : nodes(2 * in.num_vars) {
    std::vector<std::uint32_t> degree(nodes, 0);
    for (const Clause& c : in.clauses) {
      ++degree[negation(enc(c.first))];
      ++degree[negation(enc(c.second))];
    }
    offsets.assign(nodes + 1, 0);
    for (std::size_t i = 0; i < nodes; ++i) offsets[i + 1] = offsets[i] + degree[i];
    targets.resize(offsets[nodes]);
    std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
    for (const Clause& c : in.clauses) {
      // (a or b)  ==>  !a -> b, !b -> a
      targets[fill[negation(enc(c.first))]++] = enc(c.second);
      targets[fill[negation(enc(c.second))]++] = enc(c.first);
    }
  }
};

// Iterative Tarjan; components are numbered in completion order, so lower
// component ids are closer to the sinks of the condensation.
struct Tarjan {
  const ImplicationGraph& g;
  std::vector<std::uint32_t> index, low, comp;
  std::vector<std::uint8_t> on_stack;
  std::vector<std::uint32_t> stack;
  std::uint32_t counter = 0, comp_count = 0;
  static constexpr std::uint32_t kUnvisited = UINT32_MAX;

  explicit Tarjan(const ImplicationGraph& g)
      : g(g),
        index(g.nodes, kUnvisited),
        low(g.nodes, 0),
        comp(g.nodes, kUnvisited),
        on_stack(g.nodes, 0) {}

  void run(std::uint32_t root) {
    if (index[root] != kUnvisited) return;
    struct Frame {
      std::uint32_t v;
      std::uint32_t next_edge;
    };
    std::vector<Frame> frames{{root, g.offsets[root]}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;

    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next_edge < g.offsets[f.v + 1]) {
        const std::uint32_t w = g.targets[f.next_edge++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, g.offsets[w]});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
      } else {
        const std::uint32_t v = f.v;
        if (low[v] == index[v]) {
          while (true) {
            const std::uint32_t w = stack.back();
            stack.pop_back();
            on_stack[w] = 0;
            comp[w] = comp_count;
            if (w == v) break;
          }
          ++comp_count;
        }
        frames.pop_back();
        if (!frames.empty()) low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      }
    }
  }
};

// BFS path from literal `from` to literal `to` in the implication graph.
std::vector<Literal> implication_path(const ImplicationGraph& g, std::uint32_t from,
                                      std::uint32_t to) {
  std::vector<std::uint32_t> parent(g.nodes, UINT32_MAX);
  std::queue<std::uint32_t> q;
  q.push(from);
  parent[from] = from;
  while (!q.empty()) {
    const std::uint32_t v = q.front();
    q.pop();
    if (v == to) break;
    for (std::uint32_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
      const std::uint32_t w = g.targets[e];
      if (parent[w] == UINT32_MAX) {
        parent[w] = v;
        q.push(w);
      }
    }
  }
  assert(parent[to] != UINT32_MAX);
  std::vector<Literal> path;
  for (std::uint32_t v = to;; v = parent[v]) {
    path.push_back(dec(v));
    if (v == from) break;
  }
  std::reverse(path.begin(), path.end());
  return path;
}

}  // namespace

bool satisfies(const Instance& instance, const std::vector<std::uint8_t>& assignment) {
  if (assignment.size() != instance.num_vars) return false;
  auto value = [&](Literal l) {
    const bool v = assignment[l.var] != 0;
    return l.negated ? !v : v;
  };
  for (const Clause& c : instance.clauses)
    if (!value(c.first) && !value(c.second)) return false;
  return true;
}

Result solve(const Instance& instance) {
  for (const Clause& c : instance.clauses)
    if (c.first.var >= instance.num_vars || c.second.var >= instance.num_vars)
      throw std::invalid_argument("twosat: clause variable out of range");

  ImplicationGraph g(instance);
  Tarjan tarjan(g);
  // Negated literal is visited first so that an unconstrained variable lands
  // in a sink-side component as false: the canonical model of the empty
  // instance is all-zero.
  for (std::uint32_t v = 0; v < instance.num_vars; ++v) {
    tarjan.run(2 * v + 1);
    tarjan.run(2 * v);
  }

  Result res;
  for (std::uint32_t v = 0; v < instance.num_vars; ++v) {
    if (tarjan.comp[2 * v] == tarjan.comp[2 * v + 1]) {
      res.satisfiable = false;
      res.contradiction_chain = implication_path(g, 2 * v, 2 * v + 1);
      return res;
    }
  }
  res.satisfiable = true;
  res.assignment.resize(instance.num_vars);
  for (std::uint32_t v = 0; v < instance.num_vars; ++v)
    res.assignment[v] = tarjan.comp[2 * v] < tarjan.comp[2 * v + 1] ? 1 : 0;
  if (!satisfies(instance, res.assignment))
    throw std::logic_error("twosat: model failed the direct re-check");
  return res;
}

}  // namespace bitprobe::twosat
