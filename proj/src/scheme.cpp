#include "bitprobe/scheme.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <stdexcept>

#include "bitprobe/rng.hpp"

namespace bitprobe {

const char* kind_name(SchemeKind kind) {
  switch (kind) {
    case SchemeKind::CharVector: return "charvec";
    case SchemeKind::TwoProbe: return "two";
    case SchemeKind::ThreeProbe: return "three";
    case SchemeKind::NonAdaptive: return "nonadaptive";
    case SchemeKind::Adaptive: return "adaptive";
  }
  return "?";
}

AdaptiveSplit AdaptiveSplit::for_t(std::uint64_t t) {
  if (t < 5 || t % 2 == 0)
    throw UnsupportedParameterError("adaptive split needs odd t >= 5 (t = 3 is covered by the "
                                    "dedicated three-probe scheme)");
  AdaptiveSplit sp;
  sp.t1 = static_cast<unsigned>((t - 3) / 2);
  sp.t2 = static_cast<unsigned>((t + 3) / 2);
  sp.alpha = (std::uint64_t{1} << sp.t2) - 1;
  sp.beta = (std::uint64_t{1} << sp.t2) - sp.t2;
  return sp;
}

void SchemeParams::validate() const {
  if (m < 1 || n < 1 || n > m || t < 1 || s < 1)
    throw std::invalid_argument("scheme params: need m >= 1, 1 <= n <= m, t >= 1, s >= 1");
  std::uint64_t expect = 0;
  switch (kind) {
    case SchemeKind::CharVector: expect = m; break;
    case SchemeKind::TwoProbe: expect = 3 * s; break;
    case SchemeKind::ThreeProbe: expect = 7 * s; break;
    case SchemeKind::NonAdaptive: expect = t * s; break;
    case SchemeKind::Adaptive: {
      const auto sp = AdaptiveSplit::for_t(t);
      expect = sp.t1 * s + sp.alpha * s;
      break;
    }
  }
  if (total_bits != expect)
    throw std::invalid_argument("scheme params: total_bits inconsistent with kind");
}

std::vector<std::uint64_t> AdaptiveProbeGraph::leaf_addresses(std::uint64_t u,
                                                              std::uint64_t base) const {
  std::vector<std::uint64_t> out;
  const std::size_t first = (std::size_t{1} << (depth - 1)) - 1;
  for (std::size_t h = first; h < blocks(); ++h) out.push_back(base + h * s + neighbor(u, h));
  return out;
}

std::vector<std::uint64_t> AdaptiveProbeGraph::internal_addresses(std::uint64_t u,
                                                                  std::uint64_t base) const {
  std::vector<std::uint64_t> out;
  const std::size_t first = (std::size_t{1} << (depth - 1)) - 1;
  for (std::size_t h = 0; h < first; ++h) out.push_back(base + h * s + neighbor(u, h));
  return out;
}

std::vector<std::uint64_t> AdaptiveProbeGraph::all_addresses(std::uint64_t u,
                                                             std::uint64_t base) const {
  std::vector<std::uint64_t> out;
  for (std::size_t h = 0; h < blocks(); ++h) out.push_back(base + h * s + neighbor(u, h));
  return out;
}

std::vector<std::uint64_t> NonAdaptiveProbeGraph::addresses(std::uint64_t u,
                                                            std::uint64_t base) const {
  std::vector<std::uint64_t> out;
  for (std::size_t i = 0; i < t; ++i) out.push_back(base + i * s + neighbor(u, i));
  return out;
}

namespace {

void check_two_probe(const SchemeParams& p, const TwoProbeQueryGraph& g) {
  if (g.s != p.s || g.triples.size() != p.m)
    throw std::invalid_argument("two-probe graph shape mismatch");
  for (const auto& tr : g.triples)
    if (tr.first >= g.s || tr.on0 >= g.s || tr.on1 >= g.s)
      throw CorruptionError("two-probe triple address out of range");
}

void check_probe_graph(const AdaptiveProbeGraph& g, std::uint64_t universe, std::uint64_t s) {
  if (g.s != s || g.universe != universe || g.nbr.size() != universe * g.blocks())
    throw std::invalid_argument("adaptive probe graph shape mismatch");
  for (auto v : g.nbr)
    if (v >= s) throw CorruptionError("probe graph address out of range");
}

void check_probe_graph(const NonAdaptiveProbeGraph& g, std::uint64_t universe, std::uint64_t s) {
  if (g.s != s || g.universe != universe || g.nbr.size() != universe * g.t)
    throw std::invalid_argument("non-adaptive probe graph shape mismatch");
  for (auto v : g.nbr)
    if (v >= s) throw CorruptionError("probe graph address out of range");
}

}  // namespace

Scheme::Scheme(SchemeParams params, TwoProbeQueryGraph graph)
    : params_(params), graph_(std::move(graph)) {
  params_.validate();
  if (params_.kind != SchemeKind::TwoProbe || params_.t != 2)
    throw std::invalid_argument("two-probe graph requires kind TwoProbe, t = 2");
  check_two_probe(params_, std::get<TwoProbeQueryGraph>(graph_));
}

Scheme::Scheme(SchemeParams params, AdaptiveProbeGraph graph)
    : params_(params), graph_(std::move(graph)) {
  params_.validate();
  if (params_.kind != SchemeKind::ThreeProbe || params_.t != 3)
    throw std::invalid_argument("adaptive probe graph requires kind ThreeProbe, t = 3");
  const auto& g = std::get<AdaptiveProbeGraph>(graph_);
  if (g.depth != 3) throw std::invalid_argument("three-probe graph must have depth 3");
  check_probe_graph(g, params_.m, params_.s);
}

Scheme::Scheme(SchemeParams params, NonAdaptiveProbeGraph graph)
    : params_(params), graph_(std::move(graph)) {
  params_.validate();
  if (params_.kind != SchemeKind::NonAdaptive)
    throw std::invalid_argument("non-adaptive graph requires kind NonAdaptive");
  const auto& g = std::get<NonAdaptiveProbeGraph>(graph_);
  if (g.t != params_.t) throw std::invalid_argument("non-adaptive block count mismatch");
  check_probe_graph(g, params_.m + params_.n, params_.s);  // padded universe
}

Scheme::Scheme(SchemeParams params, AdaptivePairGraph graph)
    : params_(params), graph_(std::move(graph)) {
  params_.validate();
  if (params_.kind != SchemeKind::Adaptive)
    throw std::invalid_argument("adaptive pair requires kind Adaptive");
  const auto sp = AdaptiveSplit::for_t(params_.t);
  const auto& g = std::get<AdaptivePairGraph>(graph_);
  if (g.g1.t != sp.t1 || g.g2.depth != sp.t2)
    throw std::invalid_argument("adaptive pair split mismatch");
  check_probe_graph(g.g1, params_.m + params_.n, params_.s);
  check_probe_graph(g.g2, params_.m + params_.n, params_.s);
}

Scheme Scheme::char_vector(std::uint64_t m, std::uint64_t n, std::uint64_t seed) {
  SchemeParams p;
  p.m = m;
  p.n = n;
  p.t = 1;
  p.s = m;
  p.total_bits = m;
  p.seed = seed;
  p.kind = SchemeKind::CharVector;
  p.validate();
  Scheme sch(p);
  return sch;
}

Scheme::Scheme(SchemeParams params) : params_(params), graph_(std::monostate{}) {}

const TwoProbeQueryGraph& Scheme::two_probe() const {
  if (kind() != SchemeKind::TwoProbe) throw std::logic_error("scheme is not two-probe");
  return std::get<TwoProbeQueryGraph>(graph_);
}

const AdaptiveProbeGraph& Scheme::three_probe() const {
  if (kind() != SchemeKind::ThreeProbe) throw std::logic_error("scheme is not three-probe");
  return std::get<AdaptiveProbeGraph>(graph_);
}

const NonAdaptiveProbeGraph& Scheme::nonadaptive() const {
  if (kind() != SchemeKind::NonAdaptive) throw std::logic_error("scheme is not non-adaptive");
  return std::get<NonAdaptiveProbeGraph>(graph_);
}

const AdaptivePairGraph& Scheme::adaptive() const {
  if (kind() != SchemeKind::Adaptive) throw std::logic_error("scheme is not adaptive");
  return std::get<AdaptivePairGraph>(graph_);
}

DecisionTree Scheme::decision_tree(std::uint64_t u) const {
  if (u >= params_.m) throw std::out_of_range("element out of range");
  DecisionTree tree;
  switch (kind()) {
    case SchemeKind::CharVector: {
      tree.depth = 1;
      tree.addresses = {u};
      return tree;  // systematic: the bit is the answer
    }
    case SchemeKind::TwoProbe: {
      const auto& g = two_probe();
      const auto& tr = g.triples[u];
      tree.depth = 2;
      tree.addresses = {tr.first, g.s + tr.on0, 2 * g.s + tr.on1};
      return tree;
    }
    case SchemeKind::ThreeProbe: {
      const auto& g = three_probe();
      tree.depth = 3;
      tree.addresses.resize(g.blocks());
      for (std::size_t h = 0; h < g.blocks(); ++h)
        tree.addresses[h] = h * g.s + g.neighbor(u, h);
      return tree;
    }
    case SchemeKind::NonAdaptive: {
      const auto& g = nonadaptive();
      tree.depth = g.t;
      tree.addresses.resize(tree.node_count());
      std::size_t node = 0;
      for (unsigned level = 0; level < g.t; ++level) {
        const std::uint64_t addr = level * g.s + g.neighbor(u, level);
        const std::size_t width = std::size_t{1} << level;
        for (std::size_t i = 0; i < width; ++i) tree.addresses[node++] = addr;
      }
      tree.leaf_answers.resize(std::size_t{1} << g.t);
      for (std::size_t path = 0; path < tree.leaf_answers.size(); ++path) {
        const auto ones = static_cast<unsigned>(std::popcount(path));
        tree.leaf_answers[path] = ones > g.t / 2 ? 1 : 0;
      }
      return tree;
    }
    case SchemeKind::Adaptive: {
      const auto& pair = adaptive();
      const auto sp = AdaptiveSplit::for_t(params_.t);
      tree.depth = static_cast<unsigned>(params_.t);
      tree.addresses.resize(tree.node_count());
      const std::uint64_t g2_base = sp.t1 * params_.s;
      std::size_t node = 0;
      for (unsigned level = 0; level < tree.depth; ++level) {
        const std::size_t width = std::size_t{1} << level;
        for (std::size_t i = 0; i < width; ++i, ++node) {
          if (level < sp.t1) {
            tree.addresses[node] = level * params_.s + pair.g1.neighbor(u, level);
          } else {
            // Heap position within the G2 subtree at depth level - t1,
            // offset i mod 2^(level-t1).
            const unsigned g2_level = level - sp.t1;
            const std::size_t within = i & ((std::size_t{1} << g2_level) - 1);
            const std::size_t h = ((std::size_t{1} << g2_level) - 1) + within;
            tree.addresses[node] = g2_base + h * params_.s + pair.g2.neighbor(u, h);
          }
        }
      }
      tree.leaf_answers.resize(std::size_t{1} << tree.depth);
      for (std::size_t path = 0; path < tree.leaf_answers.size(); ++path) {
        const std::size_t g1_bits = path >> sp.t2;
        const bool g1_all = g1_bits == (std::size_t{1} << sp.t1) - 1;
        const bool g2_last = (path & 1) != 0;
        tree.leaf_answers[path] = (g1_all && g2_last) ? 1 : 0;
      }
      return tree;
    }
  }
  throw std::logic_error("unreachable");
}

QueryResult query(const Scheme& scheme, const BitMemory& memory, std::uint64_t u) {
  const auto& p = scheme.params();
  if (u >= p.m) throw std::out_of_range("query element out of range");
  if (memory.size() != p.total_bits)
    throw CorruptionError("memory length does not match scheme total_bits");

  QueryResult res;
  switch (scheme.kind()) {
    case SchemeKind::CharVector: {
      const bool bit = memory.get(u);
      res.trace.push_back({u, bit});
      res.yes = bit;
      return res;
    }
    case SchemeKind::TwoProbe: {
      const auto& g = scheme.two_probe();
      const auto& tr = g.triples[u];
      const bool first = memory.get(tr.first);
      res.trace.push_back({tr.first, first});
      const std::uint64_t second = first ? 2 * g.s + tr.on1 : g.s + tr.on0;
      const bool bit = memory.get(second);
      res.trace.push_back({second, bit});
      res.yes = bit;
      return res;
    }
    case SchemeKind::ThreeProbe: {
      const auto& g = scheme.three_probe();
      std::size_t h = 0;
      bool bit = false;
      for (unsigned level = 0; level < 3; ++level) {
        const std::uint64_t addr = h * g.s + g.neighbor(u, h);
        bit = memory.get(addr);
        res.trace.push_back({addr, bit});
        h = 2 * h + (bit ? 2 : 1);
      }
      res.yes = bit;
      return res;
    }
    case SchemeKind::NonAdaptive: {
      const auto& g = scheme.nonadaptive();
      unsigned ones = 0;
      for (unsigned i = 0; i < g.t; ++i) {
        const std::uint64_t addr = i * g.s + g.neighbor(u, i);
        const bool bit = memory.get(addr);
        res.trace.push_back({addr, bit});
        if (bit) ++ones;
      }
      res.yes = ones > g.t / 2;
      return res;
    }
    case SchemeKind::Adaptive: {
      const auto& pair = scheme.adaptive();
      const auto sp = AdaptiveSplit::for_t(p.t);
      bool g1_all = true;
      for (unsigned i = 0; i < sp.t1; ++i) {
        const std::uint64_t addr = i * p.s + pair.g1.neighbor(u, i);
        const bool bit = memory.get(addr);
        res.trace.push_back({addr, bit});
        g1_all = g1_all && bit;
      }
      const std::uint64_t base = sp.t1 * p.s;
      std::size_t h = 0;
      bool bit = false;
      for (unsigned level = 0; level < sp.t2; ++level) {
        const std::uint64_t addr = base + h * p.s + pair.g2.neighbor(u, h);
        bit = memory.get(addr);
        res.trace.push_back({addr, bit});
        h = 2 * h + (bit ? 2 : 1);
      }
      res.yes = g1_all && bit;
      return res;
    }
  }
  throw std::logic_error("unreachable");
}

TreeScheme to_tree_scheme(const Scheme& scheme) {
  TreeScheme ts;
  ts.m = scheme.params().m;
  ts.n = scheme.params().n;
  ts.t = static_cast<unsigned>(scheme.params().t);
  ts.total_bits = scheme.params().total_bits;
  ts.trees.reserve(ts.m);
  for (std::uint64_t u = 0; u < ts.m; ++u) ts.trees.push_back(scheme.decision_tree(u));
  return ts;
}

// ---------------------------------------------------------------------------
// make_systematic
// ---------------------------------------------------------------------------

BitMemory systematic_extend(const BitMemory& original) {
  const std::size_t s = original.size();
  BitMemory out(2 * s + 2);
  for (std::size_t j = 0; j < s; ++j) {
    const bool b = original.get(j);
    out.set(j, b);
    out.set(s + j, !b);
  }
  out.set(2 * s, false);
  out.set(2 * s + 1, true);
  return out;
}

SystematicScheme make_systematic(const TreeScheme& scheme, Storer storer) {
  SystematicScheme out;
  out.scheme = make_systematic_trees(scheme);
  out.storer = [inner = std::move(storer)](const std::vector<std::uint64_t>& set) {
    return systematic_extend(inner(set));
  };
  return out;
}

TreeScheme make_systematic_trees(const TreeScheme& scheme) {
  const std::uint64_t s = scheme.total_bits;
  TreeScheme out;
  out.m = scheme.m;
  out.n = scheme.n;
  out.t = scheme.t;
  out.total_bits = 2 * s + 2;
  out.trees.reserve(scheme.trees.size());

  for (const auto& tree : scheme.trees) {
    DecisionTree nt;
    nt.depth = tree.depth;
    nt.addresses = tree.addresses;
    const std::size_t leaves = std::size_t{1} << tree.depth;
    const std::size_t first_final = (std::size_t{1} << (tree.depth - 1)) - 1;

    auto leaf_answer = [&](std::size_t path) -> bool {
      if (tree.systematic()) return (path & 1) != 0;
      return tree.leaf_answers[path] != 0;
    };

    // Redirect every final probe so the last bit read equals the leaf answer.
    for (std::size_t i = 0; i < leaves / 2; ++i) {
      const std::size_t node = first_final + i;
      const std::size_t path_prefix = i << 1;
      const bool a0 = leaf_answer(path_prefix);
      const bool a1 = leaf_answer(path_prefix | 1);
      const std::uint64_t j = tree.addresses[node];
      if (!a0 && !a1)
        nt.addresses[node] = 2 * s;  // constant 0
      else if (a0 && a1)
        nt.addresses[node] = 2 * s + 1;  // constant 1
      else if (!a0 && a1)
        nt.addresses[node] = j;  // identity: answer equals the probed bit
      else
        nt.addresses[node] = s + j;  // negation: probe the complement block
    }
    out.trees.push_back(std::move(nt));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Subset enumeration and the exhaustive oracle
// ---------------------------------------------------------------------------

std::uint64_t count_subsets_upto(std::uint64_t m, std::uint64_t n) {
  long double total = 1;  // empty set
  long double binom = 1;
  for (std::uint64_t k = 1; k <= std::min(n, m); ++k) {
    binom = binom * static_cast<long double>(m - k + 1) / static_cast<long double>(k);
    total += binom;
    if (total > static_cast<long double>(UINT64_MAX)) return UINT64_MAX;
  }
  return static_cast<std::uint64_t>(total);
}

std::uint64_t for_each_subset(std::uint64_t m, std::uint64_t min_k, std::uint64_t max_k,
                              const std::function<bool(const std::vector<std::uint64_t>&)>& fn) {
  std::uint64_t visited = 0;
  std::vector<std::uint64_t> set;
  for (std::uint64_t k = min_k; k <= std::min(max_k, m); ++k) {
    set.resize(k);
    for (std::uint64_t i = 0; i < k; ++i) set[i] = i;
    while (true) {
      ++visited;
      if (!fn(set)) return visited;
      if (k == 0) break;
      // next lexicographic k-combination of [m]
      std::int64_t i = static_cast<std::int64_t>(k) - 1;
      while (i >= 0 && set[i] == m - k + i) --i;
      if (i < 0) break;
      ++set[i];
      for (auto j = static_cast<std::uint64_t>(i) + 1; j < k; ++j) set[j] = set[j - 1] + 1;
    }
  }
  return visited;
}

namespace {

VerifyFailure check_one_set(const Scheme& scheme, const Storer& storer,
                            const std::vector<std::uint64_t>& set, bool* failed) {
  *failed = false;
  VerifyFailure failure;
  BitMemory memory;
  try {
    memory = storer(set);
  } catch (const SchemeError& e) {
    *failed = true;
    failure.set = set;
    failure.diagnostic = e.what();
    return failure;
  }
  for (std::uint64_t u = 0; u < scheme.params().m; ++u) {
    const bool expect = std::binary_search(set.begin(), set.end(), u);
    const auto res = query(scheme, memory, u);
    if (res.yes != expect) {
      *failed = true;
      failure.set = set;
      failure.element = u;
      failure.diagnostic = res.yes ? "false positive" : "false negative";
      return failure;
    }
  }
  return failure;
}

}  // namespace

VerifyReport verify_exhaustive(const Scheme& scheme, const Storer& storer, std::uint64_t n,
                               std::uint64_t budget) {
  const auto count = count_subsets_upto(scheme.params().m, n);
  if (count > budget)
    throw BudgetExceededError("verify_exhaustive: C(m, <=n) = " + std::to_string(count) +
                              " exceeds budget " + std::to_string(budget));
  VerifyReport report;
  for_each_subset(scheme.params().m, 0, n, [&](const std::vector<std::uint64_t>& set) {
    ++report.sets_tested;
    bool failed = false;
    auto failure = check_one_set(scheme, storer, set, &failed);
    if (failed) {
      report.failures.push_back(std::move(failure));
      return false;  // report the first failure
    }
    return true;
  });
  return report;
}

VerifyReport verify_sampled(const Scheme& scheme, const Storer& storer, std::uint64_t n,
                            std::uint64_t samples, std::uint64_t seed) {
  Rng rng(seed);
  VerifyReport report;
  const std::uint64_t m = scheme.params().m;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const std::uint64_t k = rng.below(n + 1);
    std::vector<std::uint64_t> set;
    if (k > 0) {
      auto s32 = rng.distinct(static_cast<std::uint32_t>(k), m);
      set.assign(s32.begin(), s32.end());
    }
    ++report.sets_tested;
    bool failed = false;
    auto failure = check_one_set(scheme, storer, set, &failed);
    if (failed) {
      report.failures.push_back(std::move(failure));
      return report;
    }
  }
  return report;
}

}  // namespace bitprobe
