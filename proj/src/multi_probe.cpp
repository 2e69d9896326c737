#include "bitprobe/multi_probe.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <string>

#include "bitprobe/bipartite.hpp"
#include "bitprobe/formulas.hpp"
#include "bitprobe/rng.hpp"

namespace bitprobe::multiprobe {

// ---------------------------------------------------------------------------
// force_answer
// ---------------------------------------------------------------------------

namespace {

// Uncontrolled-node count of every subtree, heap order.
std::vector<unsigned> uncontrolled_counts(const TreeView& tree,
                                          const std::vector<std::uint8_t>& controlled) {
  std::vector<unsigned> counts(tree.addresses.size(), 0);
  for (std::size_t i = counts.size(); i-- > 0;) {
    counts[i] = controlled[i] ? 0 : 1;
    const std::size_t l = 2 * i + 1;
    if (l < counts.size()) counts[i] += counts[l] + counts[l + 1];
  }
  return counts;
}

void force_rec(const TreeView& tree, const std::vector<std::uint8_t>& controlled,
               const std::vector<unsigned>& unc, std::size_t node, unsigned depth_left, bool b,
               BitMemory& memory) {
  const bool leaf_level = depth_left == 1;
  if (controlled[node]) {
    if (leaf_level) {
      memory.set(tree.addresses[node], b);
      return;
    }
    const std::size_t l = 2 * node + 1, r = 2 * node + 2;
    const bool go_right = unc[r] < unc[l];
    memory.set(tree.addresses[node], go_right);
    force_rec(tree, controlled, unc, go_right ? r : l, depth_left - 1, b, memory);
    return;
  }
  // Uncontrolled node: its value is read as-is, so both subtrees must be
  // forced. The budget guarantees this never reaches an uncontrolled leaf.
  assert(!leaf_level);
  force_rec(tree, controlled, unc, 2 * node + 1, depth_left - 1, b, memory);
  force_rec(tree, controlled, unc, 2 * node + 2, depth_left - 1, b, memory);
}

}  // namespace

void force_answer(const TreeView& tree, const std::vector<std::uint8_t>& controlled, bool b,
                  BitMemory& memory) {
  if (tree.addresses.size() != (std::size_t{1} << tree.depth) - 1 ||
      controlled.size() != tree.addresses.size())
    throw std::invalid_argument("force_answer: tree shape mismatch");
  const auto unc = uncontrolled_counts(tree, controlled);
  if (unc[0] > tree.depth - 1)
    throw TooFewControlledError("force_answer: " + std::to_string(unc[0]) +
                                " uncontrolled nodes exceed depth - 1 = " +
                                std::to_string(tree.depth - 1));
  force_rec(tree, controlled, unc, 0, tree.depth, b, memory);
}

std::vector<std::uint8_t> controlled_mask(const TreeView& tree,
                                          const std::vector<std::uint64_t>& private_addresses) {
  std::vector<std::uint8_t> mask(tree.addresses.size(), 0);
  for (std::size_t i = 0; i < tree.addresses.size(); ++i)
    mask[i] = std::find(private_addresses.begin(), private_addresses.end(), tree.addresses[i]) !=
                      private_addresses.end()
                  ? 1
                  : 0;
  return mask;
}

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

namespace {

NonAdaptiveProbeGraph sample_nonadaptive_graph(std::uint64_t universe, unsigned t,
                                               std::uint64_t s, Rng rng) {
  NonAdaptiveProbeGraph g;
  g.t = t;
  g.s = s;
  g.universe = universe;
  g.nbr.resize(universe * t);
  for (auto& v : g.nbr) v = rng.below(s);
  return g;
}

AdaptiveProbeGraph sample_adaptive_graph(std::uint64_t universe, unsigned depth, std::uint64_t s,
                                         Rng rng) {
  AdaptiveProbeGraph g;
  g.depth = depth;
  g.s = s;
  g.universe = universe;
  g.nbr.resize(universe * g.blocks());
  for (auto& v : g.nbr) v = rng.below(s);
  return g;
}

std::vector<std::uint64_t> pad_to_exact_n(const std::vector<std::uint64_t>& set, std::uint64_t m,
                                          std::uint64_t n) {
  std::vector<std::uint64_t> padded(set);
  std::sort(padded.begin(), padded.end());
  for (std::uint64_t i = 0; padded.size() < n; ++i) padded.push_back(m + i);
  std::sort(padded.begin(), padded.end());
  return padded;
}

graphs::BipartiteGraph as_bipartite(const NonAdaptiveProbeGraph& g) {
  graphs::BipartiteGraph b;
  b.left_size = g.universe;
  b.right_size = g.t * g.s;
  b.adj.resize(g.universe);
  for (std::uint64_t u = 0; u < g.universe; ++u) {
    auto addrs = g.addresses(u, 0);
    b.adj[u].assign(addrs.begin(), addrs.end());
    std::sort(b.adj[u].begin(), b.adj[u].end());
  }
  return b;
}

graphs::BipartiteGraph as_bipartite(const AdaptiveProbeGraph& g) {
  graphs::BipartiteGraph b;
  b.left_size = g.universe;
  b.right_size = g.blocks() * g.s;
  b.adj.resize(g.universe);
  for (std::uint64_t u = 0; u < g.universe; ++u) {
    auto addrs = g.all_addresses(u, 0);
    b.adj[u].assign(addrs.begin(), addrs.end());
    std::sort(b.adj[u].begin(), b.adj[u].end());
  }
  return b;
}

std::uint64_t t_threshold(std::uint64_t m, std::uint64_t n) {
  return static_cast<std::uint64_t>(
      std::ceil(2.0L * n * lg2(2.0L * m / static_cast<long double>(n))));
}

}  // namespace

// ---------------------------------------------------------------------------
// Non-adaptive majority scheme
// ---------------------------------------------------------------------------

namespace {

// T_S = non-members of the padded universe whose neighborhood meets the
// neighborhood of S' in at least (t+1)/2 locations.
std::vector<std::uint64_t> heavy_overlap_set(const NonAdaptiveProbeGraph& g,
                                             const std::vector<std::uint64_t>& s_prime) {
  std::vector<std::uint8_t> hot(g.t * g.s, 0);
  for (auto u : s_prime)
    for (auto a : g.addresses(u, 0)) hot[a] = 1;
  std::vector<std::uint64_t> out;
  for (std::uint64_t y = 0; y < g.universe; ++y) {
    if (std::binary_search(s_prime.begin(), s_prime.end(), y)) continue;
    unsigned overlap = 0;
    for (auto a : g.addresses(y, 0))
      if (hot[a]) ++overlap;
    if (overlap >= (g.t + 1) / 2) out.push_back(y);
  }
  return out;
}

}  // namespace

Scheme build_nonadaptive(std::uint64_t m, std::uint64_t n, std::uint64_t t, std::uint64_t seed,
                         std::optional<std::uint64_t> s_override) {
  if (t < 5 || t % 2 == 0)
    throw UnsupportedParameterError("non-adaptive scheme: need odd t >= 5");
  if (m < 2 || n < 1 || n > m) throw std::invalid_argument("non-adaptive build: bad m/n");

  std::uint64_t s;
  if (s_override) {
    s = *s_override;
  } else {
    s = nonadaptive_block_size(m, n, t);
    if (t * s >= m) return Scheme::char_vector(m, n, seed);
  }

  const std::uint64_t universe = m + n;
  Rng base(seed);
  const int attempts = 64;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    auto g = sample_nonadaptive_graph(universe, static_cast<unsigned>(t), s, base.fork(attempt));

    // Budgeted validation; per-set correctness is still enforced by the
    // always-on post-store verification.
    const auto bip = as_bipartite(g);
    const double factor = (static_cast<double>(t) + 1.0) / 2.0;
    const std::size_t reach = n + t_threshold(m, n);
    const std::size_t r_exh =
        graphs::max_exhaustive_subset_size(universe, std::min<std::size_t>(reach, 4), 500'000);
    bool ok = graphs::check_expansion_exhaustive(bip, r_exh, factor).ok;
    if (ok) {
      Rng spot = base.fork(attempt).fork(1);
      ok = graphs::check_expansion_sampled(bip, std::min<std::size_t>(reach, 8), factor, 200, spot)
               .ok;
    }
    if (ok) {
      // Spot-check the overlap-set size bound on sampled exact-n sets.
      Rng spot = base.fork(attempt).fork(2);
      for (int i = 0; ok && i < 16; ++i) {
        auto s32 = spot.distinct(static_cast<std::uint32_t>(n), m);
        std::vector<std::uint64_t> sample(s32.begin(), s32.end());
        ok = heavy_overlap_set(g, sample).size() <= t_threshold(m, n);
      }
    }
    if (!ok) continue;

    SchemeParams p;
    p.m = m;
    p.n = n;
    p.t = t;
    p.s = s;
    p.total_bits = t * s;
    p.seed = seed;
    p.kind = SchemeKind::NonAdaptive;
    return Scheme(p, std::move(g));
  }
  throw RetriesExhaustedError("non-adaptive build: no valid graph in budget");
}

BitMemory store_nonadaptive(const Scheme& scheme, const std::vector<std::uint64_t>& set) {
  const auto& p = scheme.params();
  if (set.size() > p.n) throw std::invalid_argument("store: |S| exceeds n");
  std::vector<std::uint64_t> sorted(set);
  std::sort(sorted.begin(), sorted.end());
  for (auto u : sorted)
    if (u >= p.m) throw std::out_of_range("store: element out of range");

  const auto& g = scheme.nonadaptive();
  const auto s_prime = pad_to_exact_n(sorted, p.m, p.n);
  const auto t_set = heavy_overlap_set(g, s_prime);
  std::vector<std::uint64_t> hall_elems(s_prime);
  hall_elems.insert(hall_elems.end(), t_set.begin(), t_set.end());

  std::vector<std::vector<std::uint32_t>> nbhd;
  nbhd.reserve(hall_elems.size());
  for (auto u : hall_elems) {
    auto addrs = g.addresses(u, 0);
    nbhd.emplace_back(addrs.begin(), addrs.end());
  }
  const auto hall = graphs::hall_b_matching(nbhd, (g.t + 1) / 2);
  if (!hall.ok) {
    std::vector<std::uint64_t> violator;
    for (auto i : hall.violator) violator.push_back(hall_elems[i]);
    throw NoMatchingError("non-adaptive store: no disjoint private locations", violator);
  }

  // Ones appear only at private locations of real members.
  BitMemory memory(p.total_bits);
  for (std::size_t i = 0; i < hall_elems.size(); ++i) {
    if (!std::binary_search(sorted.begin(), sorted.end(), hall_elems[i])) continue;
    for (auto a : hall.assignment[i]) memory.set(a, true);
  }

  for (std::uint64_t u = 0; u < p.m; ++u) {
    const bool expect = std::binary_search(sorted.begin(), sorted.end(), u);
    if (query(scheme, memory, u).yes != expect)
      throw VerificationFailedError("non-adaptive store: verification failed", sorted, u);
  }
  return memory;
}

// ---------------------------------------------------------------------------
// AND-composed adaptive scheme
// ---------------------------------------------------------------------------

SurvivorSets compute_survivors(const AdaptivePairGraph& pair,
                               const std::vector<std::uint64_t>& set_exact_n) {
  SurvivorSets out;
  const auto& g1 = pair.g1;
  const auto& g2 = pair.g2;

  std::vector<std::uint8_t> g1_hot(g1.t * g1.s, 0);
  for (auto u : set_exact_n)
    for (auto a : g1.addresses(u, 0)) g1_hot[a] = 1;

  std::vector<std::uint8_t> leaf_hot(g2.blocks() * g2.s, 0);
  for (auto u : set_exact_n)
    for (auto a : g2.leaf_addresses(u, 0)) leaf_hot[a] = 1;

  for (std::uint64_t y = 0; y < g1.universe; ++y) {
    if (std::binary_search(set_exact_n.begin(), set_exact_n.end(), y)) continue;
    bool covered = true;
    for (auto a : g1.addresses(y, 0))
      if (!g1_hot[a]) {
        covered = false;
        break;
      }
    if (!covered) continue;
    out.survivors.push_back(y);
    for (auto a : g2.leaf_addresses(y, 0))
      if (leaf_hot[a]) {
        out.survivors_plus.push_back(y);
        break;
      }
  }
  return out;
}

Scheme build_adaptive(std::uint64_t m, std::uint64_t n, std::uint64_t t, std::uint64_t seed,
                      std::optional<std::uint64_t> s_override) {
  if (t == 3)
    throw UnsupportedParameterError(
        "adaptive scheme: t = 3 collapses the non-adaptive part (t1 = 0); use the dedicated "
        "three-probe scheme");
  const auto sp = AdaptiveSplit::for_t(t);
  if (m < 2 || n < 1 || n > m) throw std::invalid_argument("adaptive build: bad m/n");

  std::uint64_t s;
  if (s_override) {
    s = *s_override;
  } else {
    const auto formula = adaptive_block_size(m, n, t);
    if (!formula || (sp.t1 + sp.alpha) * *formula >= m) return Scheme::char_vector(m, n, seed);
    s = *formula;
  }

  const std::uint64_t universe = m + n;
  Rng base(seed);
  const int attempts = 64;
  for (int attempt = 0; attempt < attempts; ++attempt) {
    AdaptivePairGraph pair;
    pair.g1 = sample_nonadaptive_graph(universe, sp.t1, s, base.fork(attempt).fork(0));
    pair.g2 = sample_adaptive_graph(universe, sp.t2, s, base.fork(attempt).fork(1));

    // Survivor-count spot checks against the 10 m (n/s)^t1 bound, plus
    // budgeted expansion of G2 at factor beta.
    bool ok = true;
    const double surv_bound = 10.0 * static_cast<double>(m) *
                              std::pow(static_cast<double>(n) / static_cast<double>(s), sp.t1);
    Rng spot = base.fork(attempt).fork(2);
    for (int i = 0; ok && i < 16; ++i) {
      auto s32 = spot.distinct(static_cast<std::uint32_t>(n), m);
      std::vector<std::uint64_t> sample(s32.begin(), s32.end());
      ok = compute_survivors(pair, sample).survivors.size() <=
           static_cast<std::size_t>(surv_bound);
    }
    if (ok) {
      const auto bip = as_bipartite(pair.g2);
      const std::size_t r_exh = graphs::max_exhaustive_subset_size(universe, 3, 500'000);
      ok = graphs::check_expansion_exhaustive(bip, r_exh, static_cast<double>(sp.beta)).ok;
    }
    if (!ok) continue;

    SchemeParams p;
    p.m = m;
    p.n = n;
    p.t = t;
    p.s = s;
    p.total_bits = sp.t1 * s + sp.alpha * s;
    p.seed = seed;
    p.kind = SchemeKind::Adaptive;
    return Scheme(p, std::move(pair));
  }
  throw RetriesExhaustedError("adaptive build: no valid graph pair in budget");
}

BitMemory store_adaptive(const Scheme& scheme, const std::vector<std::uint64_t>& set) {
  const auto& p = scheme.params();
  if (set.size() > p.n) throw std::invalid_argument("store: |S| exceeds n");
  std::vector<std::uint64_t> sorted(set);
  std::sort(sorted.begin(), sorted.end());
  for (auto u : sorted)
    if (u >= p.m) throw std::out_of_range("store: element out of range");

  const auto sp = AdaptiveSplit::for_t(p.t);
  const auto& pair = scheme.adaptive();
  const auto s_prime = pad_to_exact_n(sorted, p.m, p.n);

  BitMemory memory(p.total_bits);
  for (auto u : s_prime)
    for (auto a : pair.g1.addresses(u, 0)) memory.set(a, true);

  const auto surv = compute_survivors(pair, s_prime);

  std::vector<std::uint64_t> forced(s_prime);
  forced.insert(forced.end(), surv.survivors_plus.begin(), surv.survivors_plus.end());
  const std::uint64_t g2_base = sp.t1 * p.s;

  std::vector<std::vector<std::uint32_t>> nbhd;
  nbhd.reserve(forced.size());
  for (auto u : forced) {
    auto addrs = pair.g2.all_addresses(u, g2_base);
    nbhd.emplace_back(addrs.begin(), addrs.end());
  }
  const auto hall = graphs::hall_b_matching(nbhd, sp.beta);
  if (!hall.ok) {
    std::vector<std::uint64_t> violator;
    for (auto i : hall.violator) violator.push_back(forced[i]);
    throw NoMatchingError("adaptive store: no disjoint private G2 nodes", violator);
  }

  for (std::size_t i = 0; i < forced.size(); ++i) {
    const std::uint64_t u = forced[i];
    const bool b = std::binary_search(s_prime.begin(), s_prime.end(), u);
    TreeView view;
    view.depth = sp.t2;
    view.addresses = pair.g2.all_addresses(u, g2_base);
    std::vector<std::uint64_t> priv(hall.assignment[i].begin(), hall.assignment[i].end());
    force_answer(view, controlled_mask(view, priv), b, memory);
  }

  for (std::uint64_t u = 0; u < p.m; ++u) {
    const bool expect = std::binary_search(sorted.begin(), sorted.end(), u);
    if (query(scheme, memory, u).yes != expect)
      throw VerificationFailedError("adaptive store: verification failed", sorted, u);
  }
  return memory;
}

}  // namespace bitprobe::multiprobe
