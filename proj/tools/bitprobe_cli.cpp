// Command-line front end: construct, store, query, verify, attack, dump and
// benchmark bit-probe membership schemes. Exit codes: 0 success, 1
// verification failure / attack found / corruption, 2 usage error, 3
// construction failure.

#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bitprobe/adversary.hpp"
#include "bitprobe/bipartite.hpp"
#include "bitprobe/formulas.hpp"
#include "bitprobe/io.hpp"
#include "bitprobe/store_dispatch.hpp"

using json = nlohmann::json;
using namespace bitprobe;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFinding = 1;   // verification failure or attack found
constexpr int kExitUsage = 2;
constexpr int kExitBuild = 3;

std::vector<std::uint64_t> parse_set(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    out.push_back(std::stoull(item));
  }
  std::vector<std::uint64_t> sorted(out);
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw CLI::ValidationError("--set", "duplicate elements are not allowed");
  return out;
}

int run_gen(const std::string& kind, std::uint64_t m, std::uint64_t n, std::uint64_t t,
            std::uint64_t seed, std::optional<std::uint64_t> s_override,
            const std::string& out_path) {
  Scheme scheme = [&] {
    if (kind == "charvec") return Scheme::char_vector(m, n, seed);
    if (kind == "two") return twoprobe::build(m, n, seed, s_override);
    if (kind == "three") return threeprobe::build(m, n, seed, s_override);
    if (kind == "nonadaptive") return multiprobe::build_nonadaptive(m, n, t, seed, s_override);
    if (kind == "adaptive") return multiprobe::build_adaptive(m, n, t, seed, s_override);
    throw CLI::ValidationError("--kind", "unknown kind " + kind);
  }();
  io::save_scheme(scheme, out_path);
  const auto& p = scheme.params();
  if (scheme.kind() == SchemeKind::CharVector && kind != "charvec")
    std::cerr << "note: formula size reached the trivial regime; wrote a characteristic-vector "
                 "scheme\n";
  std::cout << "kind=" << kind_name(p.kind) << " m=" << p.m << " n=" << p.n << " t=" << p.t
            << " s=" << p.s << " total_bits=" << p.total_bits << " seed=" << p.seed << " -> "
            << out_path << "\n";
  return kExitOk;
}

int run_store(const std::string& scheme_path, const std::string& set_text,
              const std::string& out_path) {
  const Scheme scheme = io::load_scheme(scheme_path);
  const auto set = parse_set(set_text);
  const BitMemory memory = store_set(scheme, set);
  io::save_memory(memory, scheme.params(), out_path);
  std::cout << "stored " << set.size() << " element(s) in " << memory.size() << " bits -> "
            << out_path << "\n";
  return kExitOk;
}

int run_query(const std::string& scheme_path, const std::string& memory_path, std::uint64_t u) {
  const Scheme scheme = io::load_scheme(scheme_path);
  const auto mf = io::load_memory(memory_path);
  const auto res = query(scheme, mf.memory, u);
  std::cout << (res.yes ? "Yes" : "No") << "\n";
  std::cout << "trace:";
  for (const auto& step : res.trace) std::cout << " " << step.address << "=" << (step.bit ? 1 : 0);
  std::cout << "\n";
  return kExitOk;
}

int run_verify(const std::string& scheme_path, bool exhaustive, std::uint64_t samples,
               std::uint64_t seed) {
  const Scheme scheme = io::load_scheme(scheme_path);
  const auto storer = storer_for(scheme);
  const VerifyReport report =
      exhaustive ? verify_exhaustive(scheme, storer, scheme.params().n)
                 : verify_sampled(scheme, storer, scheme.params().n, samples, seed);
  std::cout << "sets tested: " << report.sets_tested << "\n";
  if (report.ok()) {
    std::cout << "all queries correct\n";
    return kExitOk;
  }
  const auto& f = report.failures.front();
  std::cout << "FAILURE on set {";
  for (std::size_t i = 0; i < f.set.size(); ++i) std::cout << (i ? "," : "") << f.set[i];
  std::cout << "}";
  if (f.element) std::cout << " element " << *f.element;
  std::cout << ": " << f.diagnostic << "\n";
  return kExitFinding;
}

json witness_json(const adversary::ForcingWitness& w) {
  json j;
  j["location"] = w.location;
  j["bit"] = w.bit ? 1 : 0;
  j["included"] = w.s1;
  j["excluded"] = w.s0;
  j["cycle_edges"] = w.cycle.edge_ids;
  j["cycle_start_cell"] = w.cycle.start_cell;
  j["cycle_start_side"] = w.cycle.start_on_a1 ? "A1" : "A0";
  return j;
}

int run_attack(const std::string& scheme_path, std::optional<std::uint64_t> n_opt) {
  const Scheme scheme = io::load_scheme(scheme_path);
  const auto& p = scheme.params();
  const std::uint64_t n = n_opt.value_or(p.n);

  std::optional<adversary::FoolingPair> pair;
  if (scheme.kind() == SchemeKind::CharVector) {
    std::cout << "characteristic vector: every element probes its own cell; no pseudo-edges, "
                 "nothing to attack\n";
    return kExitOk;
  } else if (p.t == 2) {
    pair = adversary::fooling_set_two_probe(adversary::view_of(scheme), n);
  } else {
    const auto report = adversary::regime_check(p.m, n, p.t, p.total_bits);
    std::cerr << "note: " << report.note << "\n";
    pair = adversary::fooling_set_recursive(to_tree_scheme(scheme), n);
  }

  if (!pair) {
    std::cout << "no fooling pair found (this does not certify the scheme beyond the search)\n";
    return kExitOk;
  }

  std::cout << "FOOLING PAIR: no memory can represent the members while excluding the others\n";
  std::cout << "  members (store these):";
  for (auto x : pair->members) std::cout << " " << x;
  std::cout << "\n  excluded (must answer No):";
  for (auto y : pair->excluded) std::cout << " " << y;
  std::cout << "\n  exhaustively confirmed: " << (pair->exhaustively_confirmed ? "yes" : "no")
            << "\n";

  json j;
  j["members"] = pair->members;
  j["excluded"] = pair->excluded;
  j["exhaustively_confirmed"] = pair->exhaustively_confirmed;
  if (pair->forced_location) j["forced_location"] = *pair->forced_location;
  if (pair->witness0) j["witness_bit0"] = witness_json(*pair->witness0);
  if (pair->witness1) j["witness_bit1"] = witness_json(*pair->witness1);
  std::cout << "--- witness (json) ---\n" << j.dump(2) << "\n";
  return kExitFinding;
}

int run_dump(const std::string& scheme_path) {
  const Scheme scheme = io::load_scheme(scheme_path);
  switch (scheme.kind()) {
    case SchemeKind::CharVector: {
      graphs::BipartiteGraph g;
      g.left_size = scheme.params().m;
      g.right_size = scheme.params().m;
      g.adj.resize(g.left_size);
      for (std::uint32_t u = 0; u < g.left_size; ++u) g.adj[u] = {u};
      g.dump(std::cout);
      break;
    }
    case SchemeKind::TwoProbe:
      twoprobe::underlying_graph(scheme.two_probe()).dump(std::cout);
      break;
    case SchemeKind::ThreeProbe: {
      const auto& pg = scheme.three_probe();
      graphs::BipartiteGraph g;
      g.left_size = pg.universe;
      g.right_size = pg.blocks() * pg.s;
      g.adj.resize(g.left_size);
      for (std::uint64_t u = 0; u < pg.universe; ++u) {
        auto addrs = pg.all_addresses(u, 0);
        g.adj[u].assign(addrs.begin(), addrs.end());
        std::sort(g.adj[u].begin(), g.adj[u].end());
      }
      g.dump(std::cout);
      break;
    }
    case SchemeKind::NonAdaptive: {
      const auto& pg = scheme.nonadaptive();
      graphs::BipartiteGraph g;
      g.left_size = pg.universe;
      g.right_size = pg.t * pg.s;
      g.adj.resize(g.left_size);
      for (std::uint64_t u = 0; u < pg.universe; ++u) {
        auto addrs = pg.addresses(u, 0);
        g.adj[u].assign(addrs.begin(), addrs.end());
        std::sort(g.adj[u].begin(), g.adj[u].end());
      }
      g.dump(std::cout);
      break;
    }
    case SchemeKind::Adaptive: {
      const auto& pair = scheme.adaptive();
      const auto sp = AdaptiveSplit::for_t(scheme.params().t);
      graphs::BipartiteGraph g;
      g.left_size = pair.g1.universe;
      g.right_size = (sp.t1 + sp.alpha) * scheme.params().s;
      g.adj.resize(g.left_size);
      const std::uint64_t base = sp.t1 * scheme.params().s;
      for (std::uint64_t u = 0; u < g.left_size; ++u) {
        auto a1 = pair.g1.addresses(u, 0);
        auto a2 = pair.g2.all_addresses(u, base);
        g.adj[u].assign(a1.begin(), a1.end());
        g.adj[u].insert(g.adj[u].end(), a2.begin(), a2.end());
        std::sort(g.adj[u].begin(), g.adj[u].end());
      }
      g.dump(std::cout);
      break;
    }
  }
  return kExitOk;
}

// Benchmark grid: a JSON array of cells {kind, m, n, t?, seed, s_override?,
// verify?: "exhaustive" | sample count}.
int run_bench(const std::string& grid_path, const std::string& out_path) {
  std::ifstream is(grid_path);
  if (!is) throw SchemeError("cannot open grid file " + grid_path);
  json grid = json::parse(is);
  if (!grid.is_array()) throw SchemeError("grid must be a JSON array of cells");

  std::ostream* os = &std::cout;
  std::ofstream file;
  if (!out_path.empty()) {
    file.open(out_path);
    if (!file) throw SchemeError("cannot open " + out_path + " for writing");
    os = &file;
  }

  *os << "kind,m,n,t,s,total_bits,bits_per_universe,lower_bound,lower_bound_formula,seed,"
         "build_ms,store_ms,verify_ms\n";
  using clock = std::chrono::steady_clock;
  auto ms = [](clock::duration d) {
    return std::chrono::duration<double, std::milli>(d).count();
  };

  for (const auto& cell : grid) {
    const std::string kind = cell.at("kind").get<std::string>();
    const auto m = cell.at("m").get<std::uint64_t>();
    const auto n = cell.at("n").get<std::uint64_t>();
    const auto seed = cell.value("seed", std::uint64_t{0});
    const auto t_in = cell.value("t", std::uint64_t{0});
    std::optional<std::uint64_t> s_override;
    if (cell.contains("s_override")) s_override = cell.at("s_override").get<std::uint64_t>();

    const auto t0 = clock::now();
    Scheme scheme = [&] {
      if (kind == "charvec") return Scheme::char_vector(m, n, seed);
      if (kind == "two") return twoprobe::build(m, n, seed, s_override);
      if (kind == "three") return threeprobe::build(m, n, seed, s_override);
      if (kind == "nonadaptive") return multiprobe::build_nonadaptive(m, n, t_in, seed, s_override);
      if (kind == "adaptive") return multiprobe::build_adaptive(m, n, t_in, seed, s_override);
      throw SchemeError("unknown kind in grid: " + kind);
    }();
    const auto build_ms = ms(clock::now() - t0);

    const auto storer = storer_for(scheme);
    const auto t1 = clock::now();
    std::vector<std::uint64_t> sample_set;
    for (std::uint64_t i = 0; i < scheme.params().n && i < scheme.params().m; ++i)
      sample_set.push_back(i);
    (void)storer(sample_set);
    const auto store_ms = ms(clock::now() - t1);

    double verify_ms = 0;
    if (cell.contains("verify")) {
      const auto t2 = clock::now();
      VerifyReport report;
      if (cell.at("verify").is_string())
        report = verify_exhaustive(scheme, storer, scheme.params().n);
      else
        report = verify_sampled(scheme, storer, scheme.params().n,
                                cell.at("verify").get<std::uint64_t>(), seed);
      verify_ms = ms(clock::now() - t2);
      if (!report.ok()) {
        std::cerr << "bench cell failed verification (kind=" << kind << " m=" << m << ")\n";
        return kExitFinding;
      }
    }

    const auto& p = scheme.params();
    double lower = 0;
    std::string formula = "-";
    if (p.t <= 2 && n >= 4) {
      lower = two_probe_lower_bound(m, n);
      formula = "two-probe";
    } else if (p.t >= 3) {
      lower = multi_probe_lower_bound(m, n, p.t);
      formula = "general";
    }
    *os << kind_name(p.kind) << ',' << p.m << ',' << p.n << ',' << p.t << ',' << p.s << ','
        << p.total_bits << ',' << static_cast<double>(p.total_bits) / static_cast<double>(p.m)
        << ',' << lower << ',' << formula << ',' << p.seed << ',' << build_ms << ',' << store_ms
        << ',' << verify_ms << "\n";
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deterministic bit-probe set-membership schemes"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "construct a scheme and write it to a file");
  std::string kind, out_path = "scheme.bps";
  std::uint64_t m = 0, n = 0, t = 0, seed = 0, samples = 1000, u = 0;
  std::optional<std::uint64_t> s_override;
  gen->add_option("--kind", kind, "charvec|two|three|nonadaptive|adaptive")->required();
  gen->add_option("--m", m, "universe size")->required();
  gen->add_option("--n", n, "maximum set size")->required();
  gen->add_option("--t", t, "probe count (nonadaptive/adaptive)");
  gen->add_option("--seed", seed, "construction seed");
  gen->add_option("--s-override", s_override, "per-array block size override");
  gen->add_option("-o,--out", out_path, "output scheme file");

  // store
  auto* store_cmd = app.add_subcommand("store", "store a set into a bit memory");
  std::string scheme_path, memory_path = "mem.bpm", set_text;
  store_cmd->add_option("-s,--scheme", scheme_path, "scheme file")->required();
  store_cmd->add_option("--set", set_text, "comma-separated 0-indexed elements")->required();
  store_cmd->add_option("-o,--out", memory_path, "output memory file");

  // query
  auto* query_cmd = app.add_subcommand("query", "evaluate a membership query");
  std::string query_mem;
  query_cmd->add_option("-s,--scheme", scheme_path, "scheme file")->required();
  query_cmd->add_option("-d,--memory", query_mem, "memory file")->required();
  query_cmd->add_option("-u,--element", u, "element to query")->required();

  // verify
  auto* verify_cmd = app.add_subcommand("verify", "check stored sets against all queries");
  bool exhaustive = false;
  verify_cmd->add_option("-s,--scheme", scheme_path, "scheme file")->required();
  verify_cmd->add_flag("--exhaustive", exhaustive, "every set of size <= n");
  verify_cmd->add_option("--samples", samples, "random sets when not exhaustive");
  verify_cmd->add_option("--seed", seed, "sampling seed");

  // attack
  auto* attack_cmd = app.add_subcommand("attack", "search for a fooling pair");
  std::optional<std::uint64_t> attack_n;
  attack_cmd->add_option("-s,--scheme", scheme_path, "scheme file")->required();
  attack_cmd->add_option("--n", attack_n, "set-size budget (defaults to the scheme's n)");

  // dump
  auto* dump_cmd = app.add_subcommand("dump", "print the underlying probe graph");
  dump_cmd->add_option("-s,--scheme", scheme_path, "scheme file")->required();

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "run a grid of constructions, emit CSV");
  std::string grid_path, bench_out;
  bench_cmd->add_option("--grid", grid_path, "JSON grid file")->required();
  bench_cmd->add_option("-o,--out", bench_out, "CSV output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (gen->parsed()) return run_gen(kind, m, n, t, seed, s_override, out_path);
    if (store_cmd->parsed()) return run_store(scheme_path, set_text, memory_path);
    if (query_cmd->parsed()) return run_query(scheme_path, query_mem, u);
    if (verify_cmd->parsed()) return run_verify(scheme_path, exhaustive, samples, seed);
    if (attack_cmd->parsed()) return run_attack(scheme_path, attack_n);
    if (dump_cmd->parsed()) return run_dump(scheme_path);
    if (bench_cmd->parsed()) return run_bench(grid_path, bench_out);
  } catch (const FormulaRegimeError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kExitBuild;
  } catch (const RetriesExhaustedError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kExitBuild;
  } catch (const UnsupportedParameterError& e) {
    std::cerr << "construction failed: " << e.what() << "\n";
    return kExitBuild;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const SchemeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFinding;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFinding;
  }
  return kExitUsage;
}
