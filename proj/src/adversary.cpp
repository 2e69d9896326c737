#include "bitprobe/adversary.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <unordered_map>

#include "bitprobe/rng.hpp"

namespace bitprobe::adversary {

// ---------------------------------------------------------------------------
// Views
// ---------------------------------------------------------------------------

SystematicTwoProbeView view_of(const Scheme& scheme) {
  if (scheme.kind() != SchemeKind::TwoProbe)
    throw std::invalid_argument("view_of: scheme is not two-probe");
  const auto& g = scheme.two_probe();
  SystematicTwoProbeView view;
  view.total_bits = 3 * g.s;
  view.triples.reserve(g.triples.size());
  for (const auto& tr : g.triples)
    view.triples.push_back({tr.first, g.s + tr.on0, 2 * g.s + tr.on1});
  return view;
}

SystematicTwoProbeView view_of_trees(const TreeScheme& scheme) {
  if (scheme.t != 2) throw std::invalid_argument("view_of_trees: need depth-2 trees");
  SystematicTwoProbeView view;
  view.total_bits = scheme.total_bits;
  view.triples.reserve(scheme.trees.size());
  for (const auto& tree : scheme.trees) {
    if (!tree.systematic())
      throw std::invalid_argument("view_of_trees: trees must be systematic");
    view.triples.push_back({tree.addresses[0], tree.addresses[1], tree.addresses[2]});
  }
  return view;
}

SystematicTwoProbeView random_view(std::uint64_t m, std::uint64_t total_bits,
                                   std::uint64_t seed) {
  Rng rng(seed);
  SystematicTwoProbeView view;
  view.total_bits = total_bits;
  view.triples.reserve(m);
  for (std::uint64_t x = 0; x < m; ++x)
    view.triples.push_back({rng.below(total_bits), rng.below(total_bits), rng.below(total_bits)});
  return view;
}

// ---------------------------------------------------------------------------
// Pseudo-graph
// ---------------------------------------------------------------------------

PseudoGraph build_pseudo_graph(const SystematicTwoProbeView& view) {
  PseudoGraph pg;
  pg.cells = view.total_bits;
  std::map<std::uint64_t, std::vector<std::uint64_t>> classes;  // first cell -> elements
  for (std::uint64_t x = 0; x < view.triples.size(); ++x)
    classes[view.triples[x].first].push_back(x);
  for (auto& [cell, elems] : classes) {
    (void)cell;
    for (std::size_t i = 0; i + 1 < elems.size(); i += 2) {
      const std::uint64_t x = elems[i], y = elems[i + 1];
      pg.edges.push_back({static_cast<std::uint32_t>(view.triples[x].on0),
                          static_cast<std::uint32_t>(view.triples[y].on1), x, y});
    }
  }
  return pg;
}

namespace {

struct SearchGraph {
  std::size_t vertices;  // A0 side [0, cells), A1 side [cells, 2*cells)
  std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj;  // (vertex, edge)
  std::vector<std::uint8_t> active;

  explicit SearchGraph(const PseudoGraph& pg)
      : vertices(2 * pg.cells), adj(vertices), active(pg.edges.size(), 1) {
    for (std::uint32_t e = 0; e < pg.edges.size(); ++e) {
      const std::uint32_t u = pg.edges[e].a0_cell;
      const std::uint32_t v = static_cast<std::uint32_t>(pg.cells) + pg.edges[e].a1_cell;
      adj[u].push_back({v, e});
      adj[v].push_back({u, e});
    }
  }
};

std::uint32_t vertex_id(const PseudoGraph& pg, bool on_a1, std::uint32_t cell) {
  return on_a1 ? static_cast<std::uint32_t>(pg.cells) + cell : cell;
}

// Vertices visited by a cycle walk, starting vertex first.
std::vector<std::uint32_t> cycle_vertices(const PseudoGraph& pg, const Cycle& cycle) {
  std::vector<std::uint32_t> verts;
  std::uint32_t at = vertex_id(pg, cycle.start_on_a1, cycle.start_cell);
  verts.push_back(at);
  for (std::size_t i = 0; i < cycle.edge_ids.size(); ++i) {
    const auto& e = pg.edges[cycle.edge_ids[i]];
    const std::uint32_t u = vertex_id(pg, false, e.a0_cell);
    const std::uint32_t v = vertex_id(pg, true, e.a1_cell);
    if (at == u)
      at = v;
    else if (at == v)
      at = u;
    else
      throw CorruptionError("cycle walk: edge does not touch the current vertex");
    if (i + 1 < cycle.edge_ids.size()) verts.push_back(at);
  }
  if (at != verts.front()) throw CorruptionError("cycle walk: does not close");
  return verts;
}

Cycle rotate_cycle(const PseudoGraph& pg, const Cycle& cycle, std::uint32_t to_vertex) {
  const auto verts = cycle_vertices(pg, cycle);
  const auto it = std::find(verts.begin(), verts.end(), to_vertex);
  if (it == verts.end()) throw std::logic_error("rotate_cycle: vertex not on cycle");
  const std::size_t idx = static_cast<std::size_t>(it - verts.begin());
  Cycle out;
  out.start_on_a1 = to_vertex >= pg.cells;
  out.start_cell = out.start_on_a1 ? to_vertex - static_cast<std::uint32_t>(pg.cells) : to_vertex;
  out.edge_ids.reserve(cycle.edge_ids.size());
  for (std::size_t i = 0; i < cycle.edge_ids.size(); ++i)
    out.edge_ids.push_back(cycle.edge_ids[(idx + i) % cycle.edge_ids.size()]);
  return out;
}

// Shortest active cycle of length <= max_len, as edge ids in walk order.
std::optional<Cycle> shortest_cycle(const PseudoGraph& pg, const SearchGraph& sg,
                                    std::size_t max_len) {
  constexpr std::uint32_t kInf = UINT32_MAX;
  std::optional<Cycle> best;
  std::size_t best_len = max_len + 1;

  for (std::uint32_t start = 0; start < sg.vertices; ++start) {
    std::vector<std::uint32_t> dist(sg.vertices, kInf), pv(sg.vertices, kInf),
        pe(sg.vertices, kInf);
    std::deque<std::uint32_t> q{start};
    dist[start] = 0;
    const std::size_t cap = best_len / 2;
    while (!q.empty()) {
      const std::uint32_t a = q.front();
      q.pop_front();
      if (dist[a] >= cap) continue;
      for (const auto& [b, e] : sg.adj[a]) {
        if (!sg.active[e] || e == pe[a]) continue;
        if (dist[b] == kInf) {
          dist[b] = dist[a] + 1;
          pv[b] = a;
          pe[b] = e;
          q.push_back(b);
          continue;
        }
        const std::size_t len = dist[a] + dist[b] + 1;
        if (len >= best_len) continue;

        // Collect both tree paths back to the start and strip the shared
        // suffix; the remainder plus edge e is a simple cycle.
        std::vector<std::uint32_t> va{a}, vb{b}, ea, eb;
        for (std::uint32_t v = a; v != start; v = pv[v]) {
          ea.push_back(pe[v]);
          va.push_back(pv[v]);
        }
        for (std::uint32_t v = b; v != start; v = pv[v]) {
          eb.push_back(pe[v]);
          vb.push_back(pv[v]);
        }
        while (va.size() >= 2 && vb.size() >= 2 && va[va.size() - 2] == vb[vb.size() - 2]) {
          va.pop_back();
          vb.pop_back();
          ea.pop_back();
          eb.pop_back();
        }
        const std::uint32_t w = va.back();
        Cycle c;
        c.start_on_a1 = w >= pg.cells;
        c.start_cell = c.start_on_a1 ? w - static_cast<std::uint32_t>(pg.cells) : w;
        c.edge_ids.assign(ea.rbegin(), ea.rend());
        c.edge_ids.push_back(e);
        c.edge_ids.insert(c.edge_ids.end(), eb.begin(), eb.end());
        best = std::move(c);
        best_len = best->edge_ids.size();
      }
    }
  }
  return best;
}

}  // namespace

std::optional<std::pair<Cycle, Cycle>> find_conflicting_cycles(const PseudoGraph& pg,
                                                               std::uint64_t n) {
  const std::size_t max_len = n / 2;
  if (max_len < 2 || pg.edges.empty()) return std::nullopt;

  SearchGraph sg(pg);
  std::vector<Cycle> found;
  std::vector<std::set<std::uint32_t>> vertex_sets;

  while (auto c = shortest_cycle(pg, sg, max_len)) {
    const auto verts = cycle_vertices(pg, *c);
    for (std::size_t i = 0; i < found.size(); ++i) {
      for (const auto v : verts) {
        if (vertex_sets[i].count(v)) {
          return std::make_pair(rotate_cycle(pg, found[i], v), rotate_cycle(pg, *c, v));
        }
      }
    }
    for (auto e : c->edge_ids) sg.active[e] = 0;
    vertex_sets.emplace_back(verts.begin(), verts.end());
    found.push_back(std::move(*c));
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Forcing
// ---------------------------------------------------------------------------

ForcingWitness forcing_sets(const PseudoGraph& pg, const Cycle& cycle, bool bit) {
  if (cycle.edge_ids.size() < 2) throw std::invalid_argument("forcing_sets: cycle too short");
  ForcingWitness w;
  w.bit = bit;
  w.cycle = cycle;
  w.location = cycle.start_cell;

  // Walk the cycle collecting a_i (element labeled at v_{i-1}) and b_i
  // (element labeled at v_i) for each edge e_i.
  const std::size_t k = cycle.edge_ids.size();
  std::vector<std::uint64_t> a(k), b(k);
  bool on_a1 = cycle.start_on_a1;
  std::uint32_t at = cycle.start_cell;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& e = pg.edges[cycle.edge_ids[i]];
    if (!on_a1 && e.a0_cell == at) {
      a[i] = e.elem_at_a0;
      b[i] = e.elem_at_a1;
      at = e.a1_cell;
      on_a1 = true;
    } else if (on_a1 && e.a1_cell == at) {
      a[i] = e.elem_at_a1;
      b[i] = e.elem_at_a0;
      at = e.a0_cell;
      on_a1 = false;
    } else {
      throw CorruptionError("forcing_sets: cycle walk broken");
    }
  }

  if (bit) {
    w.s1.assign(a.begin(), a.end());
    w.s1.push_back(b[k - 1]);
    w.s0.assign(b.begin(), b.end() - 1);
  } else {
    w.s1.assign(b.begin(), b.end() - 1);
    w.s0.assign(a.begin(), a.end());
    w.s0.push_back(b[k - 1]);
  }
  std::sort(w.s0.begin(), w.s0.end());
  std::sort(w.s1.begin(), w.s1.end());

  // Repeated labels would make the in/out constraints overlap; such cycles
  // are rejected and the caller keeps searching.
  auto has_dup = [](const std::vector<std::uint64_t>& v) {
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  std::vector<std::uint64_t> inter;
  std::set_intersection(w.s0.begin(), w.s0.end(), w.s1.begin(), w.s1.end(),
                        std::back_inserter(inter));
  if (has_dup(w.s0) || has_dup(w.s1) || !inter.empty())
    throw CorruptionError("forcing_sets: degenerate cycle with repeated element labels");
  return w;
}

bool check_forcing(const SystematicTwoProbeView& view, const PseudoGraph& pg,
                   const ForcingWitness& witness) {
  const auto& cycle = witness.cycle;
  const std::size_t k = cycle.edge_ids.size();
  if (k < 2) return false;

  auto in = [](const std::vector<std::uint64_t>& v, std::uint64_t x) {
    return std::binary_search(v.begin(), v.end(), x);
  };

  // Assume the start cell holds the complement of the forced bit and push
  // the implied values around the cycle; the walk must end by deriving the
  // forced bit back at the start cell.
  std::unordered_map<std::uint64_t, bool> value;
  const bool assumed = !witness.bit;
  value[cycle.start_cell] = assumed;

  bool on_a1 = cycle.start_on_a1;
  std::uint32_t at = cycle.start_cell;
  for (std::size_t i = 0; i < k; ++i) {
    const auto& e = pg.edges[cycle.edge_ids[i]];
    std::uint64_t p, q;
    std::uint32_t next;
    bool next_on_a1;
    if (!on_a1 && e.a0_cell == at) {
      p = e.elem_at_a0;
      q = e.elem_at_a1;
      next = e.a1_cell;
      next_on_a1 = true;
    } else if (on_a1 && e.a1_cell == at) {
      p = e.elem_at_a1;
      q = e.elem_at_a0;
      next = e.a0_cell;
      next_on_a1 = false;
    } else {
      return false;
    }

    // The pair must share a first-probe cell and sit at its stated
    // second-probe locations.
    const auto& tp = view.triples[p];
    const auto& tq = view.triples[q];
    if (tp.first != tq.first) return false;
    if ((on_a1 ? tp.on1 : tp.on0) != at) return false;
    if ((next_on_a1 ? tq.on1 : tq.on0) != next) return false;

    const bool last = i + 1 == k;
    bool derived;
    if (!last) {
      // p's membership and the current value force the first cell away
      // from p's location, so q reads `next` and must see the same value.
      if (witness.bit) {
        if (!in(witness.s1, p) || !in(witness.s0, q)) return false;
        if (value[at] != false) return false;
        derived = false;
      } else {
        if (!in(witness.s0, p) || !in(witness.s1, q)) return false;
        if (value[at] != true) return false;
        derived = true;
      }
    } else {
      // Final edge: both labels sit on the same side of the membership
      // divide, flipping the derived value and closing the contradiction.
      if (witness.bit) {
        if (!in(witness.s1, p) || !in(witness.s1, q)) return false;
        if (value[at] != false) return false;
        derived = true;
      } else {
        if (!in(witness.s0, p) || !in(witness.s0, q)) return false;
        if (value[at] != true) return false;
        derived = false;
      }
    }

    if (last) {
      if (next != cycle.start_cell) return false;
      return derived == witness.bit && assumed != derived;
    }
    auto [it, inserted] = value.try_emplace(next, derived);
    if (!inserted && it->second != derived) return false;
    at = next;
    on_a1 = next_on_a1;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Fooling pairs
// ---------------------------------------------------------------------------

namespace {

DecisionTree depth2_tree(const Triple& tr) {
  DecisionTree t;
  t.depth = 2;
  t.addresses = {tr.first, tr.on0, tr.on1};
  return t;
}

// Exhaustive confirmation over the cells the given trees touch: true when
// no memory answers Yes on every member tree and No on every excluded one.
std::optional<bool> confirm_over_cells(const std::vector<DecisionTree>& member_trees,
                                       const std::vector<DecisionTree>& excluded_trees,
                                       std::size_t max_cells) {
  std::set<std::uint64_t> cells;
  for (const auto& t : member_trees) cells.insert(t.addresses.begin(), t.addresses.end());
  for (const auto& t : excluded_trees) cells.insert(t.addresses.begin(), t.addresses.end());
  if (cells.size() > max_cells) return std::nullopt;

  std::vector<std::uint64_t> cell_list(cells.begin(), cells.end());
  std::unordered_map<std::uint64_t, std::size_t> slot;
  for (std::size_t i = 0; i < cell_list.size(); ++i) slot[cell_list[i]] = i;

  auto eval = [&](const DecisionTree& tree, std::uint64_t bits) {
    std::size_t node = 0;
    std::size_t path = 0;
    bool last = false;
    for (unsigned level = 0; level < tree.depth; ++level) {
      last = (bits >> slot.at(tree.addresses[node])) & 1ULL;
      path = (path << 1) | (last ? 1u : 0u);
      node = 2 * node + (last ? 2 : 1);
    }
    return tree.systematic() ? last : tree.leaf_answers[path] != 0;
  };

  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cell_list.size()); ++bits) {
    bool represented = true;
    for (const auto& t : member_trees)
      if (!eval(t, bits)) {
        represented = false;
        break;
      }
    if (represented)
      for (const auto& t : excluded_trees)
        if (eval(t, bits)) {
          represented = false;
          break;
        }
    if (represented) return false;  // a valid representation exists
  }
  return true;
}

std::optional<FoolingPair> fooling_from_view(const SystematicTwoProbeView& view,
                                             std::uint64_t n) {
  const auto pg = build_pseudo_graph(view);
  const auto cycles = find_conflicting_cycles(pg, n);
  if (!cycles) return std::nullopt;

  // Both orders of assigning target bits to the two cycles are tried;
  // degenerate-label rejections fall through to the other order.
  const std::pair<const Cycle*, const Cycle*> orders[2] = {
      {&cycles->first, &cycles->second}, {&cycles->second, &cycles->first}};
  for (const auto& [c0, c1] : orders) {
    ForcingWitness w0, w1;
    try {
      w0 = forcing_sets(pg, *c0, false);
      w1 = forcing_sets(pg, *c1, true);
    } catch (const CorruptionError&) {
      continue;
    }
    FoolingPair pair;
    pair.members = w0.s1;
    pair.members.insert(pair.members.end(), w1.s1.begin(), w1.s1.end());
    pair.excluded = w0.s0;
    pair.excluded.insert(pair.excluded.end(), w1.s0.begin(), w1.s0.end());
    std::sort(pair.members.begin(), pair.members.end());
    std::sort(pair.excluded.begin(), pair.excluded.end());

    std::vector<std::uint64_t> inter;
    std::set_intersection(pair.members.begin(), pair.members.end(), pair.excluded.begin(),
                          pair.excluded.end(), std::back_inserter(inter));
    if (!inter.empty() || pair.members.size() > n) continue;
    if (!check_forcing(view, pg, w0) || !check_forcing(view, pg, w1)) continue;

    pair.forced_location = w0.location;
    pair.witness0 = std::move(w0);
    pair.witness1 = std::move(w1);

    std::vector<DecisionTree> member_trees, excluded_trees;
    for (auto x : pair.members) member_trees.push_back(depth2_tree(view.triples[x]));
    for (auto y : pair.excluded) excluded_trees.push_back(depth2_tree(view.triples[y]));
    const auto confirmed = confirm_over_cells(member_trees, excluded_trees, 20);
    if (confirmed.has_value() && !*confirmed) continue;  // enumeration refuted the pair
    pair.exhaustively_confirmed = confirmed.value_or(false);
    return pair;
  }
  return std::nullopt;
}

}  // namespace

std::optional<FoolingPair> fooling_set_two_probe(const SystematicTwoProbeView& view,
                                                 std::uint64_t n) {
  return fooling_from_view(view, n);
}

namespace {

// Restriction of a scheme to the elements probing one cell first, under a
// fixed first-probe outcome: each tree is replaced by its branch subtree.
struct SubScheme {
  std::uint64_t total_bits = 0;
  std::vector<std::pair<std::uint64_t, DecisionTree>> trees;  // (element, tree)
};

DecisionTree branch_subtree(const DecisionTree& tree, bool branch) {
  DecisionTree out;
  out.depth = tree.depth - 1;
  out.addresses.resize(out.node_count());
  for (unsigned level = 0; level + 1 < tree.depth; ++level) {
    const std::size_t old_first = (std::size_t{2} << level) - 1;
    const std::size_t new_first = (std::size_t{1} << level) - 1;
    const std::size_t width = std::size_t{1} << level;
    for (std::size_t i = 0; i < width; ++i)
      out.addresses[new_first + i] =
          tree.addresses[old_first + (branch ? width : 0) + i];
  }
  if (!tree.systematic()) {
    out.leaf_answers.resize(std::size_t{1} << out.depth);
    const std::size_t shift = out.depth;
    for (std::size_t path = 0; path < out.leaf_answers.size(); ++path)
      out.leaf_answers[path] =
          tree.leaf_answers[(static_cast<std::size_t>(branch) << shift) | path];
  }
  return out;
}

std::optional<std::pair<std::vector<std::uint64_t>, std::vector<std::uint64_t>>>
fooling_rec(const SubScheme& sub, std::uint64_t n, unsigned t) {
  if (n < 2 || sub.trees.empty()) return std::nullopt;
  if (t == 2) {
    SystematicTwoProbeView view;
    view.total_bits = sub.total_bits;
    view.triples.reserve(sub.trees.size());
    for (const auto& [elem, tree] : sub.trees) {
      (void)elem;
      view.triples.push_back({tree.addresses[0], tree.addresses[1], tree.addresses[2]});
    }
    auto pair = fooling_from_view(view, n);
    if (!pair) return std::nullopt;
    // Map restricted indices back to original element ids.
    std::vector<std::uint64_t> s, x;
    for (auto i : pair->members) s.push_back(sub.trees[i].first);
    for (auto i : pair->excluded) x.push_back(sub.trees[i].first);
    return std::make_pair(std::move(s), std::move(x));
  }

  // Most popular first-probe cell, lowest address on ties.
  std::map<std::uint64_t, std::uint64_t> popularity;
  for (const auto& [elem, tree] : sub.trees) {
    (void)elem;
    ++popularity[tree.addresses[0]];
  }
  std::uint64_t cell = 0, best = 0;
  for (const auto& [c, count] : popularity)
    if (count > best) {
      best = count;
      cell = c;
    }

  SubScheme branch0;
  branch0.total_bits = sub.total_bits;
  for (const auto& [elem, tree] : sub.trees)
    if (tree.addresses[0] == cell) branch0.trees.emplace_back(elem, branch_subtree(tree, false));
  const auto res0 = fooling_rec(branch0, n / 2, t - 1);
  if (!res0) return std::nullopt;

  std::set<std::uint64_t> used(res0->first.begin(), res0->first.end());
  used.insert(res0->second.begin(), res0->second.end());
  SubScheme branch1;
  branch1.total_bits = sub.total_bits;
  for (const auto& [elem, tree] : sub.trees)
    if (tree.addresses[0] == cell && !used.count(elem))
      branch1.trees.emplace_back(elem, branch_subtree(tree, true));
  const auto res1 = fooling_rec(branch1, n / 2, t - 1);
  if (!res1) return std::nullopt;

  auto s = res0->first;
  s.insert(s.end(), res1->first.begin(), res1->first.end());
  auto x = res0->second;
  x.insert(x.end(), res1->second.begin(), res1->second.end());
  return std::make_pair(std::move(s), std::move(x));
}

}  // namespace

std::optional<FoolingPair> fooling_set_recursive(const TreeScheme& scheme, std::uint64_t n) {
  if (scheme.t < 2) throw std::invalid_argument("fooling_set_recursive: need t >= 2");

  // The machinery works on systematic trees; fooling pairs for the
  // transformed scheme are fooling pairs for the original, because the
  // transform preserves answers on every memory.
  const bool already = std::all_of(scheme.trees.begin(), scheme.trees.end(),
                                   [](const DecisionTree& t) { return t.systematic(); });
  const TreeScheme systematic = already ? scheme : make_systematic_trees(scheme);

  SubScheme whole;
  whole.total_bits = systematic.total_bits;
  for (std::uint64_t u = 0; u < systematic.trees.size(); ++u)
    whole.trees.emplace_back(u, systematic.trees[u]);

  const auto res = fooling_rec(whole, n, systematic.t);
  if (!res) return std::nullopt;

  FoolingPair pair;
  pair.members = res->first;
  pair.excluded = res->second;
  std::sort(pair.members.begin(), pair.members.end());
  std::sort(pair.excluded.begin(), pair.excluded.end());
  const auto confirmed = confirm_fooling_exhaustive(scheme, pair);
  pair.exhaustively_confirmed = confirmed.value_or(false);
  if (confirmed.has_value() && !*confirmed) return std::nullopt;
  return pair;
}

std::optional<bool> confirm_fooling_exhaustive(const TreeScheme& scheme, const FoolingPair& pair,
                                               std::size_t max_cells) {
  std::vector<DecisionTree> member_trees, excluded_trees;
  for (auto x : pair.members) member_trees.push_back(scheme.trees.at(x));
  for (auto y : pair.excluded) excluded_trees.push_back(scheme.trees.at(y));
  return confirm_over_cells(member_trees, excluded_trees, max_cells);
}

RegimeReport regime_check(std::uint64_t m, std::uint64_t n, std::uint64_t t, std::uint64_t s) {
  RegimeReport rep;
  const double four_t = std::pow(4.0, static_cast<double>(t));
  const double n_cap = std::pow(static_cast<double>(m), 1.0 / (2.0 * (t - 1)));
  const double s_cap =
      std::pow(static_cast<double>(m),
               (1.0 / static_cast<double>(t - 1)) * (1.0 - four_t / static_cast<double>(n))) /
      15.0;
  rep.within = static_cast<double>(n) >= four_t && static_cast<double>(n) <= n_cap &&
               static_cast<double>(s) <= s_cap;
  rep.note = rep.within ? "parameters inside the guaranteed regime"
                        : "parameters outside the guaranteed regime; search is best-effort";
  return rep;
}

double moore_bound(std::uint64_t num_vertices, std::uint64_t n) {
  if (n < 4 || num_vertices < 2)
    throw std::invalid_argument("moore_bound: need n >= 4, num_vertices >= 2");
  const std::uint64_t p = n / 4;
  const double half = static_cast<double>(num_vertices) / 2.0;
  double root = std::pow(half, 1.0 / static_cast<double>(p));
  // Snap to an exact integer root when one exists.
  const double rounded = std::round(root);
  if (rounded >= 1.0 && std::pow(rounded, static_cast<double>(p)) == half) root = rounded;
  return root + 1.0;
}

}  // namespace bitprobe::adversary
