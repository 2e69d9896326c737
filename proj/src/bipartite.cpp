#include "bitprobe/bipartite.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <deque>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>

namespace bitprobe::graphs {

std::size_t BipartiteGraph::edge_count() const {
  std::size_t e = 0;
  for (const auto& row : adj) e += row.size();
  return e;
}

void BipartiteGraph::dump(std::ostream& os) const {
  os << "bipartite " << left_size << ' ' << right_size << '\n';
  for (std::size_t i = 0; i < left_size; ++i) {
    os << 'L' << i << ':';
    for (auto v : adj[i]) os << ' ' << v;
    os << '\n';
  }
}

BipartiteGraph BipartiteGraph::parse(std::istream& is) {
  std::string tag;
  BipartiteGraph g;
  if (!(is >> tag) || tag != "bipartite") throw CorruptionError("graph dump: missing header");
  if (!(is >> g.left_size >> g.right_size)) throw CorruptionError("graph dump: bad sizes");
  g.adj.resize(g.left_size);
  std::string line;
  std::getline(is, line);
  for (std::size_t i = 0; i < g.left_size; ++i) {
    if (!std::getline(is, line)) throw CorruptionError("graph dump: truncated");
    std::istringstream ls(line);
    std::string label;
    ls >> label;
    if (label != "L" + std::to_string(i) + ":")
      throw CorruptionError("graph dump: bad line label " + label);
    std::uint32_t v;
    while (ls >> v) {
      if (v >= g.right_size) throw CorruptionError("graph dump: neighbor out of range");
      g.adj[i].push_back(v);
    }
    if (!std::is_sorted(g.adj[i].begin(), g.adj[i].end()))
      throw CorruptionError("graph dump: neighbors not sorted");
  }
  return g;
}

namespace {

// Unified adjacency over left vertices [0, L) and right vertices [L, L+R).
struct Combined {
  std::size_t n;
  std::vector<std::vector<std::uint32_t>> adj;

  explicit Combined(const BipartiteGraph& g) : n(g.left_size + g.right_size), adj(n) {
    for (std::size_t i = 0; i < g.left_size; ++i)
      for (auto v : g.adj[i]) {
        adj[i].push_back(static_cast<std::uint32_t>(g.left_size + v));
        adj[g.left_size + v].push_back(static_cast<std::uint32_t>(i));
      }
  }
};

// BFS from `start`; returns the length of the shortest closed walk found
// through start-area edges, capped by `best_cap` (exploration is pruned at
// depth best_cap/2). Optionally extracts the cycle's vertex sequence.
std::optional<std::size_t> bfs_cycle(const Combined& g, std::uint32_t start,
                                     std::size_t best_cap,
                                     std::vector<std::uint32_t>* cycle_out) {
  std::vector<std::uint32_t> dist(g.n, UINT32_MAX), parent(g.n, UINT32_MAX);
  std::deque<std::uint32_t> q{start};
  dist[start] = 0;
  const std::size_t depth_cap = best_cap / 2;
  std::optional<std::size_t> best;

  while (!q.empty()) {
    const std::uint32_t a = q.front();
    q.pop_front();
    if (dist[a] >= depth_cap) continue;
    for (const std::uint32_t b : g.adj[a]) {
      if (b == parent[a]) continue;
      if (dist[b] == UINT32_MAX) {
        dist[b] = dist[a] + 1;
        parent[b] = a;
        q.push_back(b);
        continue;
      }
      const std::size_t len = dist[a] + dist[b] + 1;
      if (best && len >= *best) continue;
      best = len;
      if (cycle_out) {
        // Walk both parent chains to the divergence point; the resulting
        // closed walk is a simple cycle of length at most len.
        std::vector<std::uint32_t> pa{a}, pb{b};
        for (std::uint32_t v = a; v != start; v = parent[v]) pa.push_back(parent[v]);
        for (std::uint32_t v = b; v != start; v = parent[v]) pb.push_back(parent[v]);
        // pa, pb end at start; strip the common suffix.
        while (pa.size() >= 2 && pb.size() >= 2 && pa[pa.size() - 2] == pb[pb.size() - 2]) {
          pa.pop_back();
          pb.pop_back();
        }
        cycle_out->assign(pa.begin(), pa.end());
        cycle_out->insert(cycle_out->end(), pb.rbegin() + 1, pb.rend());
      }
    }
  }
  return best;
}

// A simple-bipartite graph's parallel-edge check.
void require_simple(const BipartiteGraph& g) {
  for (const auto& row : g.adj) {
    for (std::size_t i = 1; i < row.size(); ++i)
      if (row[i] == row[i - 1]) throw std::invalid_argument("graph has parallel edges");
    if (!std::is_sorted(row.begin(), row.end()))
      throw std::invalid_argument("adjacency rows must be sorted");
    for (auto v : row)
      if (v >= g.right_size) throw std::invalid_argument("right index out of range");
  }
}

}  // namespace

std::optional<std::size_t> girth(const BipartiteGraph& g) {
  require_simple(g);
  Combined c(g);
  std::size_t best = SIZE_MAX;
  for (std::uint32_t v = 0; v < c.n; ++v) {
    auto res = bfs_cycle(c, v, best == SIZE_MAX ? c.n + 2 : best, nullptr);
    if (res && *res < best) best = *res;
  }
  if (best == SIZE_MAX) return std::nullopt;
  return best;
}

namespace {

// Find any cycle of length <= max_len, returned as a vertex sequence in
// combined indexing; nullopt if none exists.
std::optional<std::vector<std::uint32_t>> find_short_cycle(const BipartiteGraph& g,
                                                           std::size_t max_len) {
  Combined c(g);
  for (std::uint32_t v = 0; v < c.n; ++v) {
    std::vector<std::uint32_t> cycle;
    auto res = bfs_cycle(c, v, max_len + 1, &cycle);
    if (res && *res <= max_len) return cycle;
  }
  return std::nullopt;
}

void erase_edge(BipartiteGraph& g, std::uint32_t left, std::uint32_t right) {
  auto& row = g.adj[left];
  auto it = std::find(row.begin(), row.end(), right);
  assert(it != row.end());
  row.erase(it);
}

BipartiteGraph sample_once(std::uint64_t s, unsigned d, std::uint64_t m, unsigned k, Rng rng) {
  BipartiteGraph g;
  g.left_size = g.right_size = s;
  g.adj.resize(s);
  for (std::size_t v = 0; v < s; ++v) {
    auto nbrs = rng.distinct(d, s);
    g.adj[v].assign(nbrs.begin(), nbrs.end());
  }
  // Delete both edges at one left vertex of every short cycle, repeated
  // until no cycle of length <= k remains.
  while (auto cycle = find_short_cycle(g, k)) {
    // Lowest-index left vertex on the cycle, for determinism.
    std::size_t pick = SIZE_MAX;
    const auto& cyc = *cycle;
    for (std::size_t i = 0; i < cyc.size(); ++i)
      if (cyc[i] < s && (pick == SIZE_MAX || cyc[i] < cyc[pick])) pick = i;
    assert(pick != SIZE_MAX);
    const std::uint32_t v = cyc[pick];
    const std::uint32_t prev = cyc[(pick + cyc.size() - 1) % cyc.size()];
    const std::uint32_t next = cyc[(pick + 1) % cyc.size()];
    erase_edge(g, v, prev - static_cast<std::uint32_t>(s));
    erase_edge(g, v, next - static_cast<std::uint32_t>(s));
  }
  (void)m;
  return g;
}

}  // namespace

BipartiteGraph sample_high_girth(std::uint64_t m, unsigned k, std::uint64_t seed,
                                 const SampleOverrides& ov) {
  if (k < 4 || k % 2 != 0) throw std::invalid_argument("sample_high_girth: k must be even, >= 4");
  const std::uint64_t s = ov.side_size
                              ? *ov.side_size
                              : static_cast<std::uint64_t>(std::ceil(
                                    4.0L * std::pow(static_cast<long double>(m),
                                                    1.0L - 1.0L / (k + 1))));
  unsigned d;
  if (ov.degree) {
    d = *ov.degree;
    if (d % 2 != 0 || d < 2) throw std::invalid_argument("sample_high_girth: degree must be even, >= 2");
  } else {
    const auto root = std::pow(static_cast<long double>(s), 1.0L / k);
    d = static_cast<unsigned>(root);
    d -= d % 2;
  }
  const unsigned d_floor = ov.allow_degree_two ? 2u : 4u;
  if (d < d_floor || d > s)
    throw FormulaRegimeError("sample_high_girth: degree " + std::to_string(d) +
                             " below constructible floor at side size " + std::to_string(s));

  Rng base(seed);
  const int attempts = 64;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    BipartiteGraph g = sample_once(s, d, m, k, base.fork(attempt));
    // Post-hoc invariants: never trusted from construction.
    bool even = true;
    for (const auto& row : g.adj)
      if (row.size() % 2 != 0) even = false;
    const auto gg = girth(g);
    const bool girth_ok = !gg || *gg > k;
    if (even && girth_ok && g.edge_count() >= 2 * m) return g;
  }
  throw RetriesExhaustedError("sample_high_girth: no valid sample in budget (m=" +
                              std::to_string(m) + ", k=" + std::to_string(k) + ")");
}

HallResult hall_b_matching(const std::vector<std::vector<std::uint32_t>>& neighborhoods,
                           std::size_t b) {
  // Deduplicated neighborhoods; b slots per element, Kuhn augmentation.
  const std::size_t n = neighborhoods.size();
  std::vector<std::vector<std::uint32_t>> nbrs(n);
  std::uint32_t right_max = 0;
  for (std::size_t i = 0; i < n; ++i) {
    nbrs[i] = neighborhoods[i];
    std::sort(nbrs[i].begin(), nbrs[i].end());
    nbrs[i].erase(std::unique(nbrs[i].begin(), nbrs[i].end()), nbrs[i].end());
    for (auto v : nbrs[i]) right_max = std::max(right_max, v + 1);
  }

  std::vector<std::int64_t> match_elem(right_max, -1);  // right -> element
  std::vector<std::uint8_t> visited(right_max, 0);

  auto augment = [&](auto&& self, std::size_t elem) -> bool {
    for (auto r : nbrs[elem]) {
      if (visited[r]) continue;
      visited[r] = 1;
      if (match_elem[r] < 0 || self(self, static_cast<std::size_t>(match_elem[r]))) {
        match_elem[r] = static_cast<std::int64_t>(elem);
        return true;
      }
    }
    return false;
  };

  HallResult res;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t slot = 0; slot < b; ++slot) {
      std::fill(visited.begin(), visited.end(), 0);
      if (!augment(augment, i)) {
        // Visited elements form a Hall violator together with i.
        res.ok = false;
        std::vector<std::uint8_t> in_w(n, 0);
        in_w[i] = 1;
        for (std::uint32_t r = 0; r < right_max; ++r)
          if (visited[r] && match_elem[r] >= 0) in_w[match_elem[r]] = 1;
        for (std::size_t e = 0; e < n; ++e)
          if (in_w[e]) res.violator.push_back(e);
        return res;
      }
    }
  }
  res.ok = true;
  res.assignment.assign(n, {});
  for (std::uint32_t r = 0; r < right_max; ++r)
    if (match_elem[r] >= 0) res.assignment[match_elem[r]].push_back(r);
  for (std::size_t i = 0; i < n; ++i) {
    assert(res.assignment[i].size() == b);
    std::sort(res.assignment[i].begin(), res.assignment[i].end());
  }
  return res;
}

std::size_t max_exhaustive_subset_size(std::size_t left, std::size_t r_max,
                                       std::uint64_t budget) {
  std::size_t r = 0;
  long double total = 0, binom = 1;
  while (r < r_max) {
    binom = binom * static_cast<long double>(left - r) / static_cast<long double>(r + 1);
    if (total + binom > static_cast<long double>(budget)) break;
    total += binom;
    ++r;
  }
  return r;
}

namespace {

struct NeighborMask {
  std::size_t words;
  std::vector<std::uint64_t> bits;  // left_size * words

  explicit NeighborMask(const BipartiteGraph& g)
      : words((g.right_size + 63) / 64), bits(g.left_size * words, 0) {
    for (std::size_t i = 0; i < g.left_size; ++i)
      for (auto v : g.adj[i]) bits[i * words + (v >> 6)] |= 1ULL << (v & 63);
  }
};

std::size_t union_popcount(const NeighborMask& nm, const std::vector<std::uint32_t>& set) {
  std::size_t count = 0;
  for (std::size_t w = 0; w < nm.words; ++w) {
    std::uint64_t acc = 0;
    for (auto i : set) acc |= nm.bits[i * nm.words + w];
    count += std::popcount(acc);
  }
  return count;
}

}  // namespace

ExpansionReport check_expansion_exhaustive(const BipartiteGraph& g, std::size_t r_max,
                                           double factor, std::uint64_t budget) {
  r_max = std::min(r_max, g.left_size);
  {
    long double total = 0, binom = 1;
    for (std::size_t r = 1; r <= r_max; ++r) {
      binom = binom * static_cast<long double>(g.left_size - r + 1) / static_cast<long double>(r);
      total += binom;
    }
    if (total > static_cast<long double>(budget))
      throw BudgetExceededError("check_expansion: subset count exceeds budget");
  }

  NeighborMask nm(g);
  ExpansionReport report;
  std::vector<std::uint32_t> set;
  // Per-depth union buffers; level d holds the neighbor union of set[0..d).
  std::vector<std::vector<std::uint64_t>> unions(r_max + 1,
                                                 std::vector<std::uint64_t>(nm.words, 0));

  // Depth-first subset enumeration with an incremental neighbor union.
  auto rec = [&](auto&& self, std::size_t next) -> bool {
    const std::size_t depth = set.size();
    for (std::size_t i = next; i < g.left_size; ++i) {
      std::size_t pc = 0;
      for (std::size_t w = 0; w < nm.words; ++w) {
        unions[depth + 1][w] = unions[depth][w] | nm.bits[i * nm.words + w];
        pc += std::popcount(unions[depth + 1][w]);
      }
      set.push_back(static_cast<std::uint32_t>(i));
      if (static_cast<double>(pc) < factor * static_cast<double>(set.size())) {
        report.ok = false;
        report.witness = set;
        return false;
      }
      if (set.size() < r_max && !self(self, i + 1)) return false;
      set.pop_back();
    }
    return true;
  };
  rec(rec, 0);
  report.exhaustive = true;
  return report;
}

ExpansionReport check_expansion_sampled(const BipartiteGraph& g, std::size_t r_max,
                                        double factor, std::size_t trials, Rng& rng) {
  ExpansionReport report;
  report.exhaustive = false;
  r_max = std::min(r_max, g.left_size);
  if (r_max == 0 || g.left_size == 0) return report;
  NeighborMask nm(g);
  for (std::size_t t = 0; t < trials; ++t) {
    const std::size_t r = 1 + static_cast<std::size_t>(rng.below(r_max));
    auto set32 = rng.distinct(static_cast<std::uint32_t>(r), g.left_size);
    std::vector<std::uint32_t> set(set32.begin(), set32.end());
    if (static_cast<double>(union_popcount(nm, set)) <
        factor * static_cast<double>(set.size())) {
      report.ok = false;
      report.witness = set;
      return report;
    }
  }
  return report;
}

}  // namespace bitprobe::graphs
