#include "bitprobe/three_probe.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "bitprobe/bipartite.hpp"
#include "bitprobe/formulas.hpp"
#include "bitprobe/multi_probe.hpp"
#include "bitprobe/rng.hpp"

namespace bitprobe::threeprobe {

std::uint64_t peel_threshold(std::uint64_t m, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      std::ceil(static_cast<long double>(n) * lg2(2.0L * m / static_cast<long double>(n))));
}

namespace {

using Writes = std::vector<std::pair<std::uint64_t, bool>>;

// All steering plans that route every consistent probe path of y to a leaf
// outside `shared` (sorted), for all values of the unwritten internal
// nodes; fewest writes first, level-1 steering preferred within a size.
// Plans are encoded as (root value or -1, mid0 value or -1, mid1 value
// or -1).
std::vector<Writes> candidate_plans(const AdaptiveProbeGraph& g, std::uint64_t y,
                                    const std::vector<std::uint64_t>& shared) {
  const std::uint64_t root = g.neighbor(y, 0);
  const std::uint64_t mid[2] = {g.s + g.neighbor(y, 1), 2 * g.s + g.neighbor(y, 2)};
  auto leaf_shared = [&](bool b1, bool b2) {
    const std::size_t block = 3 + 2 * static_cast<std::size_t>(b1) + static_cast<std::size_t>(b2);
    const std::uint64_t addr = block * g.s + g.neighbor(y, block);
    return std::binary_search(shared.begin(), shared.end(), addr);
  };

  static constexpr int kPlans[][3] = {
      {-1, -1, -1},
      {0, -1, -1},  {1, -1, -1},  {-1, 0, -1},  {-1, 1, -1},  {-1, -1, 0},  {-1, -1, 1},
      {0, 0, -1},   {0, 1, -1},   {1, -1, 0},   {1, -1, 1},
      {-1, 0, 0},   {-1, 0, 1},   {-1, 1, 0},   {-1, 1, 1},
  };
  std::vector<Writes> out;
  for (const auto& p : kPlans) {
    bool valid = true;
    for (int b1 = 0; b1 <= 1 && valid; ++b1) {
      if (p[0] != -1 && b1 != p[0]) continue;
      const int forced_mid = p[1 + b1];
      for (int b2 = 0; b2 <= 1 && valid; ++b2) {
        if (forced_mid != -1 && b2 != forced_mid) continue;
        if (leaf_shared(b1 != 0, b2 != 0)) valid = false;
      }
    }
    if (!valid) continue;
    Writes writes;
    if (p[0] != -1) writes.emplace_back(root, p[0] != 0);
    if (p[1] != -1) writes.emplace_back(mid[0], p[1] != 0);
    if (p[2] != -1) writes.emplace_back(mid[1], p[2] != 0);
    out.push_back(std::move(writes));
  }
  return out;
}

// Incremental peeling state. The live set is S plus the current residual;
// internal-node marks carry multiplicities so freeness can be evaluated
// against (R u S) \ {y} with cheap single-element removals.
class Peeler {
 public:
  Peeler(const AdaptiveProbeGraph& graph, const std::vector<std::uint64_t>& set_sorted)
      : g_(graph),
        s_leaf_hot_(graph.blocks() * graph.s, 0),
        internal_count_(graph.blocks() * graph.s, 0),
        in_residual_(graph.universe, 0) {
    for (auto u : set_sorted)
      for (auto a : g_.leaf_addresses(u, 0)) s_leaf_hot_[a] = 1;
    for (std::uint64_t u = 0; u < g_.universe; ++u) {
      for (auto a : g_.internal_addresses(u, 0)) ++internal_count_[a];
      if (!std::binary_search(set_sorted.begin(), set_sorted.end(), u)) {
        in_residual_[u] = 1;
        ++residual_size_;
      }
    }
  }

  std::uint64_t residual_size() const { return residual_size_; }

  std::vector<std::uint64_t> residual() const {
    std::vector<std::uint64_t> out;
    for (std::uint64_t y = 0; y < g_.universe; ++y)
      if (in_residual_[y]) out.push_back(y);
    return out;
  }

  std::vector<std::uint64_t> shared_leaves(std::uint64_t y) const {
    std::vector<std::uint64_t> shared;
    for (auto a : g_.leaf_addresses(y, 0))
      if (s_leaf_hot_[a]) shared.push_back(a);
    return shared;
  }

  /// Peel the lowest-index peelable residual element; false when stuck.
  bool peel_one(std::vector<PeelRecord>& stack) {
    for (std::uint64_t y = 0; y < g_.universe; ++y) {
      if (!in_residual_[y]) continue;
      PeelRecord rec;
      if (!peelable(y, &rec)) continue;
      stack.push_back(std::move(rec));
      in_residual_[y] = 0;
      --residual_size_;
      for (auto a : g_.internal_addresses(y, 0)) --internal_count_[a];
      return true;
    }
    return false;
  }

 private:
  bool peelable(std::uint64_t y, PeelRecord* rec) const {
    auto shared = shared_leaves(y);
    if (shared.empty()) {
      rec->y = y;
      rec->leaf_disjoint = true;
      return true;
    }

    // y's three internal nodes live in distinct blocks, so its own
    // multiplicity at each is exactly one.
    std::vector<std::uint64_t> free_nodes;
    for (auto a : g_.internal_addresses(y, 0))
      if (internal_count_[a] == 1) free_nodes.push_back(a);
    auto usable = [&](const Writes& writes) {
      for (const auto& [addr, bit] : writes) {
        (void)bit;
        if (std::find(free_nodes.begin(), free_nodes.end(), addr) == free_nodes.end())
          return false;
      }
      return true;
    };
    for (const auto& plan : candidate_plans(g_, y, shared)) {
      if (!usable(plan)) continue;
      rec->y = y;
      rec->leaf_disjoint = false;
      rec->shared_leaves = std::move(shared);
      rec->steering = plan;
      rec->free_internal = std::move(free_nodes);
      return true;
    }
    return false;
  }

  const AdaptiveProbeGraph& g_;
  std::vector<std::uint8_t> s_leaf_hot_;
  std::vector<std::uint32_t> internal_count_;
  std::vector<std::uint8_t> in_residual_;
  std::uint64_t residual_size_ = 0;
};

}  // namespace

PeelResult peel(const AdaptiveProbeGraph& graph, const std::vector<std::uint64_t>& set_sorted,
                std::uint64_t n) {
  const std::uint64_t threshold = peel_threshold(graph.universe, n);
  Peeler peeler(graph, set_sorted);
  PeelResult out;
  while (peeler.residual_size() > threshold) {
    if (!peeler.peel_one(out.stack))
      throw NotAdmissibleError("peel: no peelable element in residual set of size " +
                                   std::to_string(peeler.residual_size()),
                               peeler.residual());
  }
  out.core = peeler.residual();
  return out;
}

Scheme build(std::uint64_t m, std::uint64_t n, std::uint64_t seed,
             std::optional<std::uint64_t> s_override) {
  if (m < 2 || n < 1 || n > m) throw std::invalid_argument("three-probe build: bad m/n");

  std::uint64_t s;
  if (s_override) {
    s = *s_override;
  } else {
    s = three_probe_block_size(m, n);
    if (7 * s >= m) return Scheme::char_vector(m, n, seed);
  }

  Rng base(seed);
  const int attempts = 64;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    AdaptiveProbeGraph g;
    g.depth = 3;
    g.s = s;
    g.universe = m;
    g.nbr.resize(m * g.blocks());
    {
      Rng rng = base.fork(attempt);
      for (auto& v : g.nbr) v = rng.below(s);
    }

    // Budgeted validation with the expansion factor 5; per-set correctness
    // is still enforced by checked storing.
    graphs::BipartiteGraph bip;
    bip.left_size = m;
    bip.right_size = g.blocks() * s;
    bip.adj.resize(m);
    for (std::uint64_t u = 0; u < m; ++u) {
      auto addrs = g.all_addresses(u, 0);
      bip.adj[u].assign(addrs.begin(), addrs.end());
      std::sort(bip.adj[u].begin(), bip.adj[u].end());
    }
    const std::size_t reach = n + peel_threshold(m, n);
    const std::size_t r_exh =
        graphs::max_exhaustive_subset_size(m, std::min<std::size_t>(reach, 3), 200'000);
    bool ok = graphs::check_expansion_exhaustive(bip, r_exh, 5.0).ok;
    if (ok) {
      Rng spot = base.fork(attempt).fork(1);
      ok = graphs::check_expansion_sampled(bip, reach, 5.0, 400, spot).ok;
    }
    if (!ok) continue;

    SchemeParams p;
    p.m = m;
    p.n = n;
    p.t = 3;
    p.s = s;
    p.total_bits = 7 * s;
    p.seed = seed;
    p.kind = SchemeKind::ThreeProbe;
    return Scheme(p, std::move(g));
  }
  throw RetriesExhaustedError("three-probe build: no valid graph in budget (m=" +
                              std::to_string(m) + ")");
}

namespace {

// Zero y's unshared leaves and apply its steering writes. The written
// nodes are either free of everything live at y's peel step (conservative
// records) or globally allocated by the core matching; either way nothing
// already written relies on them and nothing written later touches them.
// The plan routes every consistent path to a zeroed leaf whatever the
// unwritten internal nodes hold.
void unwind_record(const AdaptiveProbeGraph& g, const PeelRecord& rec, BitMemory& memory,
                   std::vector<std::uint64_t>* write_log) {
  const auto leaves = g.leaf_addresses(rec.y, 0);
  if (rec.leaf_disjoint) {
    for (auto a : leaves) memory.set(a, false);
    return;
  }
  for (auto a : leaves)
    if (!std::binary_search(rec.shared_leaves.begin(), rec.shared_leaves.end(), a))
      memory.set(a, false);
  for (const auto& [addr, bit] : rec.steering) {
    memory.set(addr, bit);
    if (write_log) write_log->push_back(addr);
  }
}

// Unit-slot matching (Kuhn). Slot i may take any cell of nbhd[i]; cells
// are globally exclusive. Returns slot -> cell, or the owners of an
// infeasible cluster through `violator`.
std::optional<std::vector<std::uint64_t>> match_slots(
    const std::vector<std::vector<std::uint64_t>>& nbhd, const std::vector<std::size_t>& owner,
    std::uint64_t cells, std::vector<std::size_t>* violator) {
  std::vector<std::int64_t> cell_slot(cells, -1);
  std::vector<std::uint8_t> visited(cells, 0);

  auto augment = [&](auto&& self, std::size_t slot) -> bool {
    for (auto c : nbhd[slot]) {
      if (visited[c]) continue;
      visited[c] = 1;
      if (cell_slot[c] < 0 || self(self, static_cast<std::size_t>(cell_slot[c]))) {
        cell_slot[c] = static_cast<std::int64_t>(slot);
        return true;
      }
    }
    return false;
  };

  for (std::size_t slot = 0; slot < nbhd.size(); ++slot) {
    std::fill(visited.begin(), visited.end(), 0);
    if (!augment(augment, slot)) {
      std::vector<std::uint8_t> seen_owner(owner.empty() ? 0 : *std::max_element(owner.begin(), owner.end()) + 1, 0);
      violator->clear();
      auto add_owner = [&](std::size_t o) {
        if (!seen_owner[o]) {
          seen_owner[o] = 1;
          violator->push_back(o);
        }
      };
      add_owner(owner[slot]);
      for (std::uint64_t c = 0; c < cells; ++c)
        if (visited[c] && cell_slot[c] >= 0) add_owner(owner[cell_slot[c]]);
      return std::nullopt;
    }
  }
  std::vector<std::uint64_t> out(nbhd.size(), 0);
  for (std::uint64_t c = 0; c < cells; ++c)
    if (cell_slot[c] >= 0) out[cell_slot[c]] = c;
  return out;
}

}  // namespace

namespace {

struct Steered {
  std::uint64_t y;
  std::vector<std::uint64_t> shared;
  std::vector<Writes> plans;  // single-write options, or one two-write plan
  std::size_t first_slot = 0;
};

struct ResidualSplit {
  std::vector<PeelRecord> plain;       // no dangerous leaf touched
  std::vector<Steered> steered;        // routable around the dangerous set
  std::vector<std::uint64_t> forced;   // need five exclusive nodes
};

// Classify residual elements against a sorted set of leaf cells that must
// not be read as the final probe of a No-answering element.
ResidualSplit classify_residual(const AdaptiveProbeGraph& g,
                                const std::vector<std::uint64_t>& residual,
                                const std::vector<std::uint64_t>& dangerous) {
  ResidualSplit split;
  for (auto y : residual) {
    std::vector<std::uint64_t> shared;
    for (auto a : g.leaf_addresses(y, 0))
      if (std::binary_search(dangerous.begin(), dangerous.end(), a)) shared.push_back(a);
    if (shared.empty()) {
      PeelRecord rec;
      rec.y = y;
      rec.leaf_disjoint = true;
      split.plain.push_back(std::move(rec));
      continue;
    }
    auto plans = candidate_plans(g, y, shared);
    std::vector<Writes> singles;
    std::optional<Writes> pair_plan;
    for (auto& plan : plans) {
      if (plan.size() == 1) singles.push_back(plan);
      if (plan.size() == 2 && !pair_plan) pair_plan = plan;
    }
    Steered st;
    st.y = y;
    st.shared = std::move(shared);
    if (!singles.empty())
      st.plans = std::move(singles);
    else if (pair_plan)
      st.plans = {*pair_plan};
    else {
      split.forced.push_back(y);
      continue;
    }
    split.steered.push_back(std::move(st));
  }
  return split;
}

struct Allocation {
  std::vector<std::vector<std::uint64_t>> member_private;  // per member
  std::vector<std::vector<std::uint64_t>> forced_private;  // per forced elem
  std::vector<Steered> steered;                            // with plans resolved
};

// One matching over all demands: five exclusive cells per member and per
// forced element, plus the steering slots. Steered elements caught in an
// infeasible cluster are promoted to forced; nullopt when even that fails.
std::optional<Allocation> allocate(const AdaptiveProbeGraph& g,
                                   const std::vector<std::uint64_t>& members,
                                   ResidualSplit& split, std::uint64_t total_bits,
                                   std::vector<std::uint64_t>* violator_out) {
  while (true) {
    std::vector<std::uint64_t> owner_elem;
    std::vector<std::vector<std::uint64_t>> slot_nbhd;
    std::vector<std::size_t> slot_owner;
    const std::size_t member_count = members.size();
    auto add_five = [&](std::uint64_t u) {
      const auto addrs = g.all_addresses(u, 0);
      const std::size_t o = owner_elem.size();
      owner_elem.push_back(u);
      for (int k = 0; k < 5; ++k) {
        slot_nbhd.push_back(addrs);
        slot_owner.push_back(o);
      }
    };
    for (auto u : members) add_five(u);
    for (auto y : split.forced) add_five(y);
    for (auto& st : split.steered) {
      const std::size_t o = owner_elem.size();
      owner_elem.push_back(st.y);
      st.first_slot = slot_nbhd.size();
      if (st.plans.size() == 1 && st.plans[0].size() == 2) {
        for (const auto& [addr, bit] : st.plans[0]) {
          (void)bit;
          slot_nbhd.push_back({addr});
          slot_owner.push_back(o);
        }
      } else {
        std::vector<std::uint64_t> cells;
        for (const auto& plan : st.plans) cells.push_back(plan[0].first);
        slot_nbhd.push_back(std::move(cells));
        slot_owner.push_back(o);
      }
    }

    std::vector<std::size_t> violator_idx;
    const auto matched = match_slots(slot_nbhd, slot_owner, total_bits, &violator_idx);
    if (matched) {
      Allocation out;
      std::size_t cursor = 0;
      for (std::size_t i = 0; i < member_count; ++i) {
        out.member_private.emplace_back((*matched).begin() + cursor,
                                        (*matched).begin() + cursor + 5);
        cursor += 5;
      }
      for (std::size_t i = 0; i < split.forced.size(); ++i) {
        out.forced_private.emplace_back((*matched).begin() + cursor,
                                        (*matched).begin() + cursor + 5);
        cursor += 5;
      }
      for (auto& st : split.steered) {
        if (!(st.plans.size() == 1 && st.plans[0].size() == 2)) {
          const std::uint64_t cell = (*matched)[st.first_slot];
          for (const auto& plan : st.plans)
            if (plan[0].first == cell) {
              st.plans = {plan};
              break;
            }
        }
      }
      out.steered = std::move(split.steered);
      return out;
    }

    const std::size_t steered_base = member_count + split.forced.size();
    std::optional<std::size_t> promote;
    for (auto o : violator_idx)
      if (o >= steered_base && (!promote || owner_elem[o] < owner_elem[*promote])) promote = o;
    if (!promote) {
      violator_out->clear();
      for (auto o : violator_idx) violator_out->push_back(owner_elem[o]);
      std::sort(violator_out->begin(), violator_out->end());
      return std::nullopt;
    }
    const std::size_t idx = *promote - steered_base;
    split.forced.push_back(split.steered[idx].y);
    split.steered.erase(split.steered.begin() + static_cast<std::ptrdiff_t>(idx));
  }
}

}  // namespace

BitMemory store(const Scheme& scheme, const std::vector<std::uint64_t>& set, StoreTrace* trace) {
  const auto& p = scheme.params();
  if (set.size() > p.n) throw std::invalid_argument("store: |S| exceeds n");
  std::vector<std::uint64_t> sorted(set);
  std::sort(sorted.begin(), sorted.end());
  for (auto u : sorted)
    if (u >= p.m) throw std::out_of_range("store: element out of range");

  const auto& g = scheme.three_probe();
  BitMemory memory(p.total_bits);
  if (sorted.empty()) return memory;  // all-zero answers No everywhere

  // Step 1: peel non-members down to the threshold, or until stuck; the
  // remaining residual is handled by the allocation below.
  const std::uint64_t threshold = peel_threshold(g.universe, p.n);
  Peeler peeler(g, sorted);
  PeelResult peeled;
  while (peeler.residual_size() > threshold && peeler.peel_one(peeled.stack)) {
  }
  peeled.core = peeler.residual();

  // Step 2: allocate exclusive cells. The members are matched first and
  // the residual classified against the leaf cells member forcing actually
  // writes (member probe paths always end inside their own private cells,
  // so every other leaf cell may be zeroed freely). Which cells the
  // members take matters, so unlucky draws are retried with deterministic
  // reshuffles; a final fallback runs one combined matching classified
  // against all member leaves.
  std::optional<Allocation> alloc;
  ResidualSplit split;
  Rng shuffle_rng(splitmix64(p.seed) ^ splitmix64(sorted.size() + (sorted.empty() ? 0 : sorted[0] * 1315423911ULL + sorted.back())));
  const int member_attempts = 16;

  for (int attempt = 0; attempt < member_attempts && !alloc; ++attempt) {
    memory = BitMemory(p.total_bits);

    // Member matching; cell order varies across attempts, feasibility
    // does not.
    std::vector<std::vector<std::uint64_t>> member_nbhd;
    for (auto u : sorted) member_nbhd.push_back(g.all_addresses(u, 0));
    if (attempt > 0) {
      for (auto& cells : member_nbhd)
        for (std::size_t i = cells.size(); i > 1; --i)
          std::swap(cells[i - 1], cells[shuffle_rng.below(i)]);
    }
    std::vector<std::vector<std::uint64_t>> slots;
    std::vector<std::size_t> owners;
    for (std::size_t i = 0; i < sorted.size(); ++i)
      for (int k = 0; k < 5; ++k) {
        slots.push_back(member_nbhd[i]);
        owners.push_back(i);
      }
    std::vector<std::size_t> violator_idx;
    const auto member_match = match_slots(slots, owners, p.total_bits, &violator_idx);
    if (!member_match) {
      std::vector<std::uint64_t> violator;
      for (auto o : violator_idx) violator.push_back(sorted[o]);
      throw NoMatchingError("three-probe store: members have no disjoint private node sets",
                            violator);
    }
    std::vector<std::vector<std::uint64_t>> member_private;
    std::vector<std::uint8_t> taken(p.total_bits, 0);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      member_private.emplace_back((*member_match).begin() + 5 * i,
                                  (*member_match).begin() + 5 * i + 5);
      for (auto a : member_private.back()) taken[a] = 1;
      multiprobe::TreeView view;
      view.depth = 3;
      view.addresses = g.all_addresses(sorted[i], 0);
      multiprobe::force_answer(view, multiprobe::controlled_mask(view, member_private[i]), true,
                               memory);
    }

    std::vector<std::uint64_t> dangerous;
    for (std::uint64_t a = 3 * p.s; a < 7 * p.s; ++a)
      if (memory.get(a)) dangerous.push_back(a);

    split = classify_residual(g, peeled.core, dangerous);
    // Drop plan options that touch member privates; elements left with no
    // plan join the forced pool.
    for (auto& st : split.steered) {
      std::vector<Writes> kept;
      for (auto& plan : st.plans) {
        bool clear = true;
        for (const auto& [addr, bit] : plan) {
          (void)bit;
          if (taken[addr]) clear = false;
        }
        if (clear) kept.push_back(plan);
      }
      if (kept.empty()) split.forced.push_back(st.y);
      st.plans = std::move(kept);
    }
    std::erase_if(split.steered, [](const Steered& st) { return st.plans.empty(); });

    // Residual matching over unclaimed cells, with promotion of steered
    // elements whose narrow slots sit in an infeasible cluster.
    while (true) {
      std::vector<std::uint64_t> owner_elem;
      std::vector<std::vector<std::uint64_t>> slot_nbhd;
      std::vector<std::size_t> slot_owner;
      for (auto y : split.forced) {
        std::vector<std::uint64_t> cells;
        for (auto a : g.all_addresses(y, 0))
          if (!taken[a]) cells.push_back(a);
        const std::size_t o = owner_elem.size();
        owner_elem.push_back(y);
        for (int k = 0; k < 5; ++k) {
          slot_nbhd.push_back(cells);
          slot_owner.push_back(o);
        }
      }
      for (auto& st : split.steered) {
        const std::size_t o = owner_elem.size();
        owner_elem.push_back(st.y);
        st.first_slot = slot_nbhd.size();
        if (st.plans.size() == 1 && st.plans[0].size() == 2) {
          for (const auto& [addr, bit] : st.plans[0]) {
            (void)bit;
            slot_nbhd.push_back({addr});
            slot_owner.push_back(o);
          }
        } else {
          std::vector<std::uint64_t> cells;
          for (const auto& plan : st.plans) cells.push_back(plan[0].first);
          slot_nbhd.push_back(std::move(cells));
          slot_owner.push_back(o);
        }
      }
      const auto matched = match_slots(slot_nbhd, slot_owner, p.total_bits, &violator_idx);
      if (matched) {
        Allocation out;
        out.member_private = std::move(member_private);
        std::size_t cursor = 0;
        for (std::size_t i = 0; i < split.forced.size(); ++i) {
          out.forced_private.emplace_back((*matched).begin() + cursor,
                                          (*matched).begin() + cursor + 5);
          cursor += 5;
        }
        for (auto& st : split.steered) {
          if (!(st.plans.size() == 1 && st.plans[0].size() == 2)) {
            const std::uint64_t cell = (*matched)[st.first_slot];
            for (const auto& plan : st.plans)
              if (plan[0].first == cell) {
                st.plans = {plan};
                break;
              }
          }
        }
        out.steered = split.steered;
        alloc = std::move(out);
        break;
      }
      std::optional<std::size_t> promote;
      for (auto o : violator_idx)
        if (o >= split.forced.size() && (!promote || owner_elem[o] < owner_elem[*promote]))
          promote = o;
      if (!promote) break;  // starved by the members; reshuffle and retry
      const std::size_t idx = *promote - split.forced.size();
      split.forced.push_back(split.steered[idx].y);
      split.steered.erase(split.steered.begin() + static_cast<std::ptrdiff_t>(idx));
    }
  }

  if (!alloc) {
    // Fallback: one combined matching, residual classified against all
    // member leaves (a superset of anything forcing can write).
    memory = BitMemory(p.total_bits);
    std::vector<std::uint64_t> member_leaves;
    for (auto u : sorted)
      for (auto a : g.leaf_addresses(u, 0)) member_leaves.push_back(a);
    std::sort(member_leaves.begin(), member_leaves.end());
    member_leaves.erase(std::unique(member_leaves.begin(), member_leaves.end()),
                        member_leaves.end());
    split = classify_residual(g, peeled.core, member_leaves);
    std::vector<std::uint64_t> violator;
    alloc = allocate(g, sorted, split, p.total_bits, &violator);
    if (!alloc)
      throw NoMatchingError("three-probe store: no disjoint private node sets", violator);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      multiprobe::TreeView view;
      view.depth = 3;
      view.addresses = g.all_addresses(sorted[i], 0);
      multiprobe::force_answer(view, multiprobe::controlled_mask(view, alloc->member_private[i]),
                               true, memory);
    }
  }

  // Step 3: force the unsteerable residual to No on its allocated cells.
  for (std::size_t i = 0; i < split.forced.size(); ++i) {
    multiprobe::TreeView view;
    view.depth = 3;
    view.addresses = g.all_addresses(split.forced[i], 0);
    multiprobe::force_answer(view, multiprobe::controlled_mask(view, alloc->forced_private[i]),
                             false, memory);
  }

  // Step 4: turn the rest of the residual into records; they are unwound
  // before the peel stack, and their cells are exclusive, so order among
  // them is immaterial.
  for (auto& rec : split.plain) peeled.stack.push_back(std::move(rec));
  for (const auto& st : alloc->steered) {
    PeelRecord rec;
    rec.y = st.y;
    rec.leaf_disjoint = false;
    rec.shared_leaves = st.shared;
    rec.allocated = true;
    rec.steering = st.plans[0];
    peeled.stack.push_back(std::move(rec));
  }

  if (trace) {
    trace->peel = peeled;
    trace->hall_elements = sorted;
    trace->hall_elements.insert(trace->hall_elements.end(), split.forced.begin(),
                                split.forced.end());
    trace->hall_private = alloc->member_private;
    trace->hall_private.insert(trace->hall_private.end(), alloc->forced_private.begin(),
                               alloc->forced_private.end());
    trace->steering_writes.clear();
  }

  // Step 5: unwind last-appended-first.
  for (auto it = peeled.stack.rbegin(); it != peeled.stack.rend(); ++it) {
    std::vector<std::uint64_t> writes;
    unwind_record(g, *it, memory, trace ? &writes : nullptr);
    if (trace) trace->steering_writes.emplace_back(it->y, std::move(writes));
  }

  for (std::uint64_t u = 0; u < p.m; ++u) {
    const bool expect = std::binary_search(sorted.begin(), sorted.end(), u);
    if (query(scheme, memory, u).yes != expect)
      throw VerificationFailedError("three-probe store: verification failed", sorted, u);
  }
  return memory;
}

}  // namespace bitprobe::threeprobe
