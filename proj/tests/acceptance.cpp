// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// iff a hard criterion fails; the counter-trend gate is soft.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dynmatch/harness.hpp"
#include "dynmatch/levels.hpp"
#include "dynmatch/oracle.hpp"
#include "dynmatch/pipeline.hpp"
#include "dynmatch/split.hpp"
#include "support.hpp"

using namespace dynmatch;

namespace {

int hard_failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail, bool soft = false) {
  std::printf("criterion %2d: %s  %s%s -- %s\n", id, pass ? "PASS" : "FAIL", what.c_str(), soft ? " [soft]" : "",
              detail.c_str());
  std::fflush(stdout);
  if (!pass && !soft) ++hard_failures;
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ---------------------------------------------------------------- 1

void partition_invariants() {
  const auto t0 = std::chrono::steady_clock::now();
  const char* kinds[] = {"random", "delete-heavy", "sliding-window", "random"};
  std::size_t audits = 0, failed = 0;
  std::string first;
  for (int i = 0; i < 20; ++i) {
    const std::size_t n = i % 2 ? 200 : 50;
    const auto s = generate_stream({kinds[i % 4], n, 10'000, std::uint64_t(100 + i), n == 50 ? 6.0 : 10.0});
    const auto params = derive_params(n, Rational(1, 4));
    DynamicGraph g(n);
    LevelPartition p(params);
    for (std::size_t t = 0; t < s.events.size(); ++t) {
      g.apply(s.events[t]);
      p.update(g, s.events[t]);
      if ((t + 1) % 100 != 0) continue;
      const auto r = check_partition_invariants(p, g);
      ++audits;
      if (!r.passed()) {
        ++failed;
        if (first.empty()) first = r.summary(1);
      }
    }
  }
  const double secs = seconds_since(t0);
  report(1, failed == 0 && secs < 60, "partition invariants",
         fmt("%zu audits on 20 streams, %zu failing, %.1fs (target < 60s)%s", audits, failed, secs,
             first.empty() ? "" : ("; first: " + first).c_str()));
}

// ---------------------------------------------------------------- 2

bool halving_holds(const std::vector<Edge>& in, const std::vector<Edge>& out) {
  const std::set<Edge> pool(in.begin(), in.end());
  std::map<NodeId, long> din, dout;
  for (const Edge& e : in) ++din[e.u], ++din[e.v];
  for (const Edge& e : out) {
    if (!pool.count(e)) return false;
    ++dout[e.u], ++dout[e.v];
  }
  if (std::set<Edge>(out.begin(), out.end()).size() != out.size()) return false;
  for (const auto& [v, d] : din)
    if (std::abs(2 * dout[v] - d) > 2) return false;
  return true;
}

void split_contract() {
  std::mt19937_64 rng(2);
  std::size_t sets = 0, bad = 0;
  auto check = [&](const std::vector<Edge>& in) {
    ++sets;
    if (!halving_holds(in, split(in))) ++bad;
  };
  for (int i = 0; i < 1000; ++i) {
    const std::size_t n = 2 + rng() % 80;
    const std::size_t cap = std::min<std::size_t>(500, n * (n - 1) / 2);
    const std::size_t m = rng() % (cap + 1);
    std::set<Edge> es;
    while (es.size() < m) {
      const auto a = NodeId(rng() % n), b = NodeId(rng() % n);
      if (a != b) es.emplace(a, b);
    }
    check(std::vector<Edge>(es.begin(), es.end()));
  }
  // Even degrees everywhere, and odd degrees everywhere.
  check(testutil::cycle(8));
  check(testutil::complete_bipartite(4, 4));
  check(testutil::complete_bipartite(3, 3));
  std::vector<Edge> k6;
  for (NodeId a = 0; a < 6; ++a)
    for (NodeId b = a + 1; b < 6; ++b) k6.emplace_back(a, b);
  check(k6);
  check({Edge(0, 1), Edge(2, 3), Edge(4, 5)});
  report(2, bad == 0, "SPLIT contract", fmt("%zu edge sets, %zu violating", sets, bad));
}

// ---------------------------------------------------------------- 3, 4, 5

struct GeneralRunStats {
  std::size_t checkpoints = 0;
  std::size_t failed_checkpoints = 0;
  std::map<std::string, std::size_t> failed_clauses;  // family -> violation count
  std::size_t other_failures = 0;
  std::set<int> exercised;  // skeleton levels that ever had an active node
  int min_layers = 1 << 20;
  std::uint64_t halving_checks = 0, halving_violations = 0;
  std::size_t invalid = 0, oracle_checks = 0, greedy_bad = 0, over_fallback = 0;
  double worst_ratio = 0;
  bool preconditions_ok = false;
  double bound = 0, fallback = 0;
};

std::string clause_family(const std::string& clause) {
  const auto slash = clause.find('/');
  return slash == std::string::npos ? clause : clause.substr(slash + 1);
}

bool skeleton_clause(const std::string& family) {
  return family.rfind("lam-", 0) == 0 || family.rfind("crit-", 0) == 0 || family.rfind("skel-", 0) == 0;
}

GeneralRunStats run_general(const Params& params, const Rational& eps_dm, double density) {
  GeneralRunStats st;
  st.preconditions_ok = params.preconditions_ok;
  st.bound = params.general_ratio_bound(eps_dm);
  st.fallback = 2 * (1 + eps_dm.value()) / (1 - eps_dm.value());
  for (int i = params.Lprime; i <= params.L; ++i) st.min_layers = std::min(st.min_layers, params.levels[i].layers);
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = generate_stream({"random", 200, 5000, seed, density});
    GeneralPipeline pipe(params, eps_dm);
    for (std::size_t t = 0; t < s.events.size(); ++t) {
      pipe.apply(s.events[t]);
      const std::size_t k = t + 1;
      if (!is_valid_matching(pipe.matching(), pipe.graph())) ++st.invalid;
      for (int i = params.Lprime; i <= params.L; ++i)
        if (const auto* sk = pipe.skeleton(i); sk && sk->active_count() > 0) st.exercised.insert(i);
      if (k % 50 == 0) {
        const auto r = pipe.audit();
        ++st.checkpoints;
        if (!r.passed()) ++st.failed_checkpoints;
        for (const auto& v : r.violations()) {
          const auto fam = clause_family(v.clause);
          if (skeleton_clause(fam)) {
            ++st.failed_clauses[fam];
          } else {
            ++st.other_failures;
          }
        }
      }
      if (k % 25 == 0) {
        ++st.oracle_checks;
        const auto opt = max_matching(pipe.graph()).size();
        const auto greedy = greedy_maximal(pipe.graph().node_count(), pipe.candidates().edges()).size();
        if (opt > 2 * greedy) ++st.greedy_bad;
        const double ratio = opt == 0 ? 1.0 : double(opt) / double(std::max<std::size_t>(1, pipe.matching().size()));
        st.worst_ratio = std::max(st.worst_ratio, ratio);
        if (ratio > st.fallback) ++st.over_fallback;
      }
    }
    st.halving_checks += pipe.halving_checks();
    st.halving_violations += pipe.halving_violations();
  }
  return st;
}

std::string clause_list(const std::map<std::string, std::size_t>& m) {
  std::string out;
  for (const auto& [k, v] : m) out += (out.empty() ? "" : ", ") + k + " x" + std::to_string(v);
  return out.empty() ? "none" : out;
}

void general_criteria() {
  // Only the skeleton target is lowered; everything else stays at its default.
  ParamOverrides o;
  o.skel_target = Rational(8);
  const auto params = derive_params(200, Rational(1, 4), o);
  const Rational eps_dm(1, 4);
  const auto st = run_general(params, eps_dm, 20);

  const bool shape_ok = st.exercised.size() >= 2 && st.min_layers >= 2;
  const bool clean = st.failed_clauses.empty() && st.other_failures == 0;
  report(3, shape_ok && clean, "laminar/critical/skeleton audit",
         fmt("skel_target=8, %zu skeleton levels with active nodes, min %d layers; %zu/%zu checkpoints failing; "
             "violations: %s; other clauses: %zu",
             st.exercised.size(), st.min_layers, st.failed_checkpoints, st.checkpoints,
             clause_list(st.failed_clauses).c_str(), st.other_failures));

  report(4, st.halving_checks > 0 && st.halving_violations == 0, "rebuild halving",
         fmt("%llu rebuilt layers checked inline, %llu violating", (unsigned long long)st.halving_checks,
             (unsigned long long)st.halving_violations));

  // With failed preconditions the ratio is reported against the fallback bound only.
  const bool ratio_ok = st.preconditions_ok ? st.worst_ratio <= st.bound : true;
  report(5, st.invalid == 0 && st.greedy_bad == 0 && ratio_ok, "end-to-end general ratio",
         fmt("preconditions_ok=%s; %zu invalid matchings; %zu oracle checks, worst |M*|/|M'| = %.4f; "
             "guaranteed bound %s; fallback 2(1+e)/(1-e) = %.3f exceeded %zu times (reported); "
             "|M*| > 2|greedy(X u Y)| %zu times",
             st.preconditions_ok ? "true" : "false", st.invalid, st.oracle_checks, st.worst_ratio,
             st.preconditions_ok ? fmt("%.4f asserted", st.bound).c_str() : "not asserted", st.fallback,
             st.over_fallback, st.greedy_bad));

  // Not a criterion: the same audit with the band and budget widened so that
  // small layer degrees cannot trip them.
  ParamOverrides wide;
  wide.skel_target = Rational(16);
  wide.gamma = Rational(8);
  wide.delta = Rational(1, 2);
  const auto w = run_general(derive_params(200, Rational(3, 4), wide), eps_dm, 20);
  std::printf("  info: eps=3/4 skel_target=16 gamma=8 delta=1/2 -> %zu/%zu checkpoints failing (%s), "
              "%zu skeleton levels with active nodes\n",
              w.failed_checkpoints, w.checkpoints, clause_list(w.failed_clauses).c_str(), w.exercised.size());
}

// ---------------------------------------------------------------- 6

void bounded_degree_matcher() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(6);
  std::size_t checks = 0, bad = 0;
  double worst = 0;
  for (int stream = 0; stream < 50; ++stream) {
    const std::size_t n = 100, d_max = 8;
    BoundedDegreeMatcher m(n, d_max, Rational(1, 3));
    DynamicGraph g(n);
    std::size_t events = 0;
    while (events < 1000) {
      const auto a = NodeId(rng() % n), b = NodeId(rng() % n);
      if (a == b) continue;
      const Edge e(a, b);
      const bool insert = !g.contains(e);
      if (insert && (g.degree(a) >= d_max || g.degree(b) >= d_max)) continue;
      insert ? g.insert(e) : g.erase(e);
      m.apply(e, insert);
      ++events;
      const auto opt = max_matching(g).size();
      ++checks;
      if (!is_valid_matching(m.matching(), g) || 3 * opt > 4 * m.matching().size()) ++bad;
      if (opt) worst = std::max(worst, double(opt) / double(std::max<std::size_t>(1, m.matching().size())));
    }
  }
  const double secs = seconds_since(t0);
  report(6, bad == 0 && secs < 120, "bounded-degree matcher",
         fmt("%zu per-event oracle checks, %zu violating, worst ratio %.4f (bound 4/3), %.1fs", checks, bad, worst,
             secs));
}

// ---------------------------------------------------------------- 7

void kernel_criteria() {
  std::size_t audits = 0, audit_bad = 0, oracle = 0, ratio_bad = 0, kernel_bad = 0;
  double worst = 0;
  const Rational eps_dm(1, 4);
  const double bound = kernel_ratio_bound(Rational(1, 20), eps_dm);
  auto tally = [&](const nlohmann::json& report, bool check_ratio) {
    for (const auto& c : report["checkpoints"]) {
      if (!c["audit"].is_null()) {
        ++audits;
        if (!c["audit"]["passed"].get<bool>()) ++audit_bad;
      }
      if (c["ratio"].is_null()) continue;
      if (!c.value("kernel_opt_ok", true)) ++kernel_bad;
      if (!check_ratio) continue;
      ++oracle;
      const double r = c["ratio"];
      worst = std::max(worst, r);
      if (r > bound) ++ratio_bad;
    }
  };
  RunConfig cfg;
  cfg.algo = Algo::Kernel;
  cfg.eps_dm = eps_dm;
  cfg.d = 10;
  cfg.eps_k = Rational(1, 10);
  cfg.audit_every = 25;
  cfg.oracle_every = 25;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto s = generate_stream({"bipartite-random", 100, 3000, seed, 12});
    tally(run_stream(cfg, s).report, true);
  }
  RunConfig defaults = cfg;
  defaults.eps_k.reset();
  defaults.d.reset();
  tally(run_stream(defaults, generate_stream({"bipartite-random", 100, 3000, 77, 12})).report, false);
  report(7, audit_bad == 0 && ratio_bad == 0 && kernel_bad == 0, "kernel invariants + ratio",
         fmt("%zu audits (incl. one run at default parameters), %zu failing; %zu oracle checks, worst ratio %.4f vs "
             "2(1+eps_dm)/(1+delta/4) = %.4f, %zu above; Opt(H) >= (1-eps)/2 Opt(E) failed %zu times",
             audits, audit_bad, oracle, worst, bound, ratio_bad, kernel_bad));
}

// ---------------------------------------------------------------- 8

void oracle_self_check() {
  std::vector<std::pair<std::size_t, std::vector<Edge>>> corpus;
  for (NodeId k = 3; k <= 12; ++k) corpus.emplace_back(k, testutil::cycle(k));
  // Blossom shapes: odd cycles with pendant paths and pairs of triangles.
  for (NodeId k = 3; k <= 9; k += 2) {
    auto es = testutil::cycle(k);
    es.emplace_back(0, k);
    es.emplace_back(k, k + 1);
    corpus.emplace_back(k + 2, es);
    auto two = testutil::cycle(k);
    for (const Edge& e : testutil::cycle(3, k)) two.push_back(e);
    two.emplace_back(1, k);
    if (two.size() <= 12) corpus.emplace_back(k + 3, two);
  }
  corpus.emplace_back(6, testutil::complete_bipartite(3, 3));
  corpus.emplace_back(4, std::vector<Edge>{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}});
  std::mt19937_64 rng(8);
  while (corpus.size() < 260) {
    const std::size_t n = 2 + rng() % 11;
    auto es = testutil::random_edges(rng, n, (1 + rng() % 9) / 10.0);
    std::shuffle(es.begin(), es.end(), rng);
    if (es.size() > 12) es.resize(12);
    corpus.emplace_back(n, es);
  }
  std::size_t bad = 0;
  for (const auto& [n, es] : corpus) {
    // Exhaustive enumeration of every edge subset.
    std::size_t best = 0;
    for (std::uint32_t mask = 0; mask < (1u << es.size()); ++mask) {
      std::vector<char> used(n, 0);
      bool ok = true;
      std::size_t size = 0;
      for (std::size_t i = 0; i < es.size() && ok; ++i) {
        if (!(mask >> i & 1)) continue;
        ok = !used[es[i].u] && !used[es[i].v];
        used[es[i].u] = used[es[i].v] = 1;
        ++size;
      }
      if (ok) best = std::max(best, size);
    }
    const auto g = testutil::make_graph(n, es);
    const auto m = max_matching(g);
    if (m.size() != best || !is_valid_matching(m, g)) ++bad;
  }
  report(8, bad == 0 && corpus.size() >= 200, "oracle self-check",
         fmt("%zu graphs with <= 12 edges, %zu disagreeing with enumeration", corpus.size(), bad));
}

// ---------------------------------------------------------------- 9

void determinism() {
  bool same = true;
  for (Algo algo : {Algo::General, Algo::Kernel}) {
    RunConfig cfg;
    cfg.algo = algo;
    const auto s = generate_stream({algo == Algo::Kernel ? "bipartite-random" : "random", 150, 3000, 9, 8});
    const auto a = run_stream(cfg, s);
    const auto b = run_stream(cfg, s);
    same = same && a.exit_code == b.exit_code && without_timing(a.report).dump() == without_timing(b.report).dump();
  }
  report(9, same, "determinism", same ? "identical reports for general and kernel runs" : "reports differ");
}

// ---------------------------------------------------------------- 10

void counter_trend() {
  RunConfig cfg;
  cfg.audits = false;
  std::vector<double> per_event;
  std::string detail;
  for (std::size_t n : {100u, 400u, 1600u}) {
    const auto s = generate_stream({"random", n, 10 * n, 10, 8});
    const auto out = run_stream(cfg, s);
    per_event.push_back(out.report["footer"]["amortized_edge_touches"].get<double>());
    detail += fmt("%sn=%zu: %.2f", detail.empty() ? "" : ", ", n, per_event.back());
  }
  double worst = 0;
  for (std::size_t i = 1; i < per_event.size(); ++i) worst = std::max(worst, per_event[i] / per_event[i - 1]);
  report(10, worst < 8, "counter trend",
         fmt("edge touches per event %s; worst growth per 4x n step %.2f (gate < 8)", detail.c_str(), worst), true);
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  partition_invariants();
  split_contract();
  general_criteria();
  bounded_degree_matcher();
  kernel_criteria();
  oracle_self_check();
  determinism();
  counter_trend();
  std::printf("%d hard criteria failing, %.1fs total\n", hard_failures, seconds_since(t0));
  return hard_failures == 0 ? 0 : 1;
}
