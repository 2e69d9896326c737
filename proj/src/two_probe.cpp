#include "bitprobe/two_probe.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "bitprobe/formulas.hpp"

namespace bitprobe::twoprobe {

graphs::BipartiteGraph underlying_graph(const TwoProbeQueryGraph& g) {
  graphs::BipartiteGraph h;
  h.left_size = g.s;
  h.right_size = 2 * g.s;
  h.adj.resize(g.s);
  for (const auto& tr : g.triples) {
    h.adj[tr.first].push_back(static_cast<std::uint32_t>(tr.on0));
    h.adj[tr.first].push_back(static_cast<std::uint32_t>(g.s + tr.on1));
  }
  for (auto& row : h.adj) std::sort(row.begin(), row.end());
  return h;
}

void check_query_graph(const TwoProbeQueryGraph& g, std::uint64_t girth_floor) {
  std::vector<std::size_t> degree(g.s, 0);
  std::set<std::pair<std::uint64_t, std::uint64_t>> edges;
  for (const auto& tr : g.triples) {
    degree[tr.first] += 2;
    if (!edges.insert({tr.first, tr.on0}).second)
      throw CorruptionError("two-probe graph: A0 edge carries two labels");
    if (!edges.insert({tr.first, g.s + tr.on1}).second)
      throw CorruptionError("two-probe graph: A1 edge carries two labels");
  }
  for (auto d : degree)
    if (d % 2 != 0) throw CorruptionError("two-probe graph: odd degree in block A");
  const auto gg = graphs::girth(underlying_graph(g));
  if (gg && *gg <= girth_floor)
    throw CorruptionError("two-probe graph: girth " + std::to_string(*gg) +
                          " not above floor " + std::to_string(girth_floor));
}

Scheme build(std::uint64_t m, std::uint64_t n, std::uint64_t seed,
             std::optional<std::uint64_t> s_override) {
  if (m < 2 || n < 1 || n > m) throw std::invalid_argument("two-probe build: need m >= 2, 1 <= n <= m");
  const unsigned k = static_cast<unsigned>(4 * n);

  std::uint64_t s;
  if (s_override) {
    s = *s_override;
  } else {
    s = two_probe_array_size(m, n);
    if (3 * s >= m) return Scheme::char_vector(m, n, seed);
  }

  graphs::SampleOverrides ov;
  ov.side_size = s;
  // The closed-form regime wants degree >= 4; desk-scale overrides run the
  // repair loop at degree 2 and rely on the post-hoc checks.
  ov.allow_degree_two = s_override.has_value();
  {
    const auto root = std::pow(static_cast<long double>(s), 1.0L / k);
    auto d = static_cast<unsigned>(root);
    d -= d % 2;
    if (s_override && d < 2) d = 2;
    ov.degree = d;
  }

  Rng base(seed);
  const int attempts = 64;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    graphs::BipartiteGraph g;
    try {
      g = graphs::sample_high_girth(m, k, base.fork(attempt).seed(), ov);
    } catch (const RetriesExhaustedError&) {
      continue;
    }

    // Pair consecutive neighbors of each left vertex: the odd-position
    // neighbor becomes the A1 edge, the even-position one the A0 edge;
    // the first m pairs in vertex order receive labels, surplus is dropped.
    TwoProbeQueryGraph qg;
    qg.s = s;
    qg.triples.reserve(m);
    for (std::uint32_t v = 0; v < g.left_size && qg.triples.size() < m; ++v) {
      const auto& row = g.adj[v];
      for (std::size_t i = 0; i + 1 < row.size() && qg.triples.size() < m; i += 2)
        qg.triples.push_back({v, row[i + 1], row[i]});
    }
    if (qg.triples.size() < m) continue;  // not enough labeled pairs, resample

    try {
      check_query_graph(qg, 4 * n);
    } catch (const CorruptionError&) {
      continue;
    }

    SchemeParams p;
    p.m = m;
    p.n = n;
    p.t = 2;
    p.s = s;
    p.total_bits = 3 * s;
    p.seed = seed;
    p.kind = SchemeKind::TwoProbe;
    return Scheme(p, std::move(qg));
  }
  throw RetriesExhaustedError("two-probe build: no valid query graph in budget (m=" +
                              std::to_string(m) + ", n=" + std::to_string(n) + ")");
}

twosat::Instance compile_constraints(const TwoProbeQueryGraph& g,
                                     std::span<const std::uint64_t> set_sorted) {
  twosat::Instance inst;
  inst.num_vars = g.s;

  // Bucket elements by their second-probe cells.
  std::vector<std::vector<std::uint32_t>> bucket0(g.s), bucket1(g.s);
  for (std::uint32_t x = 0; x < g.triples.size(); ++x) {
    bucket0[g.triples[x].on0].push_back(x);
    bucket1[g.triples[x].on1].push_back(x);
  }
  auto in_set = [&](std::uint32_t x) {
    return std::binary_search(set_sorted.begin(), set_sorted.end(), x);
  };

  for (const std::uint64_t x : set_sorted) {
    const auto& tr = g.triples[x];
    for (const std::uint32_t y : bucket0[tr.on0]) {
      if (in_set(y)) continue;
      inst.clauses.push_back({twosat::pos(static_cast<std::uint32_t>(tr.first)),
                              twosat::pos(static_cast<std::uint32_t>(g.triples[y].first))});
    }
    for (const std::uint32_t y : bucket1[tr.on1]) {
      if (in_set(y)) continue;
      inst.clauses.push_back({twosat::neg(static_cast<std::uint32_t>(tr.first)),
                              twosat::neg(static_cast<std::uint32_t>(g.triples[y].first))});
    }
  }
  return inst;
}

BitMemory store(const Scheme& scheme, const std::vector<std::uint64_t>& set) {
  const auto& p = scheme.params();
  if (set.size() > p.n) throw std::invalid_argument("store: |S| exceeds n");
  std::vector<std::uint64_t> sorted(set);
  std::sort(sorted.begin(), sorted.end());
  for (auto u : sorted)
    if (u >= p.m) throw std::out_of_range("store: element out of range");

  const auto& g = scheme.two_probe();
  const auto inst = compile_constraints(g, sorted);
  const auto res = twosat::solve(inst);
  if (!res.satisfiable)
    throw twosat::UnsatisfiableError("two-probe store: constraints unsatisfiable for this set",
                                     res.contradiction_chain);

  BitMemory memory(p.total_bits);
  for (std::uint64_t j = 0; j < g.s; ++j)
    if (res.assignment[j]) memory.set(j, true);
  for (const std::uint64_t x : sorted) {
    const auto& tr = g.triples[x];
    if (res.assignment[tr.first])
      memory.set(2 * g.s + tr.on1, true);
    else
      memory.set(g.s + tr.on0, true);
  }

  for (std::uint64_t u = 0; u < p.m; ++u) {
    const bool expect = std::binary_search(sorted.begin(), sorted.end(), u);
    if (query(scheme, memory, u).yes != expect)
      throw VerificationFailedError("two-probe store: post-store verification failed", sorted, u);
  }
  return memory;
}

}  // namespace bitprobe::twoprobe
