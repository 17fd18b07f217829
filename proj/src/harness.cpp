#include "dynmatch/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <deque>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include "dynmatch/candidate.hpp"
#include "dynmatch/oracle.hpp"
#include "dynmatch/pipeline.hpp"

namespace dynmatch {

using nlohmann::json;

// ---------------------------------------------------------------- generators

namespace {

class LiveEdges {
 public:
  bool contains(Edge e) const { return pos_.count(e.key()) != 0; }
  std::size_t size() const { return list_.size(); }
  void add(Edge e) {
    pos_[e.key()] = list_.size();
    list_.push_back(e);
  }
  Edge remove_at(std::size_t i) {
    const Edge e = list_[i];
    pos_.erase(e.key());
    if (i + 1 != list_.size()) {
      list_[i] = list_.back();
      pos_[list_[i].key()] = i;
    }
    list_.pop_back();
    return e;
  }
  void remove(Edge e) { remove_at(pos_.at(e.key())); }
  Edge at(std::size_t i) const { return list_[i]; }

 private:
  std::vector<Edge> list_;
  std::unordered_map<EdgeKey, std::size_t> pos_;
};

struct Sampler {
  std::mt19937_64 rng;
  std::size_t n;
  bool bipartite;
  std::size_t half;  // nodes [0, half) are side 0

  std::uint64_t below(std::uint64_t k) { return rng() % k; }

  Edge pair() {
    if (bipartite) {
      const auto a = static_cast<NodeId>(below(half));
      const auto b = static_cast<NodeId>(half + below(n - half));
      return Edge(a, b);
    }
    const auto a = static_cast<NodeId>(below(n));
    auto b = static_cast<NodeId>(below(n - 1));
    if (b >= a) ++b;
    return Edge(a, b);
  }

  std::optional<Edge> absent(const LiveEdges& live) {
    for (int tries = 0; tries < 64; ++tries) {
      const Edge e = pair();
      if (!live.contains(e)) return e;
    }
    std::vector<Edge> free;
    for (NodeId a = 0; a < n; ++a) {
      for (NodeId b = a + 1; b < n; ++b) {
        if (bipartite && (a < half) == (b < half)) continue;
        if (!live.contains(Edge(a, b))) free.emplace_back(a, b);
      }
    }
    if (free.empty()) return std::nullopt;
    return free[below(free.size())];
  }
};

}  // namespace

UpdateStream generate_stream(const GenSpec& spec) {
  const bool bip = spec.kind == "bipartite-random";
  if (spec.kind != "random" && spec.kind != "sliding-window" && spec.kind != "delete-heavy" && !bip) {
    throw std::invalid_argument("unknown stream kind '" + spec.kind + "'");
  }
  if (spec.n < 2) throw std::invalid_argument("n must be at least 2");
  const std::size_t half = spec.n / 2;
  const double max_edges = bip ? double(half) * double(spec.n - half) : double(spec.n) * double(spec.n - 1) / 2;
  if (!(spec.density > 0)) throw std::invalid_argument("density must be positive");
  const auto target = static_cast<std::size_t>(std::llround(spec.density * double(spec.n) / 2));
  if (target < 1 || double(target) > max_edges) {
    throw std::invalid_argument("density " + std::to_string(spec.density) + " is not achievable with n=" +
                                std::to_string(spec.n));
  }

  UpdateStream s;
  s.n = spec.n;
  s.bipartite = bip;
  if (bip) {
    s.side.assign(spec.n, 0);
    for (std::size_t v = half; v < spec.n; ++v) s.side[v] = 1;
  }
  Sampler smp{std::mt19937_64(spec.seed), spec.n, bip, half};
  LiveEdges live;
  std::deque<Edge> fifo;

  auto emit = [&](EventKind k, Edge e) {
    s.events.push_back(UpdateEvent{k, e, s.events.size()});
    if (k == EventKind::Insert) {
      live.add(e);
      fifo.push_back(e);
    } else {
      live.remove(e);
    }
  };
  auto insert_one = [&] {
    if (auto e = smp.absent(live)) {
      emit(EventKind::Insert, *e);
      return true;
    }
    return false;
  };
  auto delete_random = [&] { emit(EventKind::Delete, live.at(smp.below(live.size()))); };

  for (std::size_t t = 0; t < spec.events; ++t) {
    if (spec.kind == "sliding-window") {
      if (live.size() < target) {
        if (insert_one()) continue;
      }
      // Oldest live edge first; entries for edges deleted earlier are stale.
      while (!live.contains(fifo.front())) fifo.pop_front();
      const Edge old = fifo.front();
      fifo.pop_front();
      emit(EventKind::Delete, old);
      continue;
    }
    unsigned insert_pct;
    if (spec.kind == "delete-heavy") {
      insert_pct = t < spec.events / 3 ? 100 : 20;
    } else {
      insert_pct = live.size() < target ? 70 : 30;
    }
    const bool want_insert = live.size() == 0 || smp.below(100) < insert_pct;
    if (want_insert && insert_one()) continue;
    delete_random();
  }
  return s;
}

// ---------------------------------------------------------------- run

namespace {

json counters_json(const WorkCounters& w) {
  return {{"edge_touches", w.edge_touches},
          {"level_moves", w.level_moves},
          {"split_calls", w.split_calls},
          {"rebuild_calls", w.rebuild_calls},
          {"revamp_calls", w.revamp_calls},
          {"post_rebuild_cleanups", w.post_rebuild_cleanups},
          {"matcher_rebuilds", w.matcher_rebuilds},
          {"kernel_rescans", w.kernel_rescans},
          {"residual_repairs", w.residual_repairs}};
}

json audit_json(const AuditReport& r) {
  json v = json::array();
  for (std::size_t i = 0; i < r.violations().size() && i < 10; ++i) {
    v.push_back(r.violations()[i].clause + ": " + r.violations()[i].witness);
  }
  return {{"passed", r.passed()}, {"clauses", r.clauses()}, {"violations", std::move(v)},
          {"violation_count", r.violations().size()}};
}

json num_or_null(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

double percentile(std::vector<double> xs, double q) {
  if (xs.empty()) return 0;
  std::sort(xs.begin(), xs.end());
  const auto idx = static_cast<std::size_t>(std::ceil(q * double(xs.size()))) - (q > 0 ? 1 : 0);
  return xs[std::min(idx, xs.size() - 1)];
}

// Algorithm-specific parts of a replay.
struct Driver {
  virtual ~Driver() = default;
  virtual void apply(const UpdateEvent& ev) = 0;
  virtual const DynamicGraph& graph() const = 0;
  virtual const Matching& matching() const = 0;
  virtual AuditReport audit() const = 0;
  virtual WorkCounters counters() const = 0;
  virtual double bound() const = 0;
  virtual std::size_t oracle() const = 0;
  /// Extra per-checkpoint oracle properties; returns false on failure.
  virtual bool extras(std::size_t opt, json& out) const = 0;
  virtual void footer(json& out) const = 0;
};

struct GeneralDriver final : Driver {
  GeneralPipeline p;
  Rational eps_dm;
  GeneralDriver(const Params& params, const Rational& e) : p(params, e), eps_dm(e) {}
  void apply(const UpdateEvent& ev) override { p.apply(ev); }
  const DynamicGraph& graph() const override { return p.graph(); }
  const Matching& matching() const override { return p.matching(); }
  AuditReport audit() const override { return p.audit(); }
  WorkCounters counters() const override { return p.counters(); }
  double bound() const override { return p.params().general_ratio_bound(eps_dm); }
  std::size_t oracle() const override { return max_matching(p.graph()).size(); }
  bool extras(std::size_t opt, json& out) const override {
    const auto cand = p.candidates().edges();
    const std::size_t greedy = greedy_maximal(p.graph().node_count(), cand).size();
    const bool ok = opt <= 2 * greedy;
    out["greedy_candidate_size"] = greedy;
    out["greedy_sanity_ok"] = ok;
    const double e = eps_dm.value();
    out["fallback_ratio_bound"] = e < 1 ? json(2 * (1 + e) / (1 - e)) : json(nullptr);
    return ok;
  }
  void footer(json& out) const override {
    out["halving_checks"] = p.halving_checks();
    out["halving_violations"] = p.halving_violations();
    out["monotonicity_violations"] = p.monotonicity_violations();
    std::uint64_t phases = 0;
    for (int i = 0; i <= p.params().L; ++i) {
      if (const auto* s = p.skeleton(i)) phases += s->phases();
    }
    out["skeleton_phases"] = phases;
  }
};

struct KernelDriver final : Driver {
  KernelPipeline p;
  Rational eps_dm;
  KernelDriver(std::size_t n, const std::vector<std::uint8_t>& side, const KernelConfig& cfg, const Rational& e)
      : p(n, side, cfg, e), eps_dm(e) {}
  void apply(const UpdateEvent& ev) override { p.apply(ev); }
  const DynamicGraph& graph() const override { return p.graph(); }
  const Matching& matching() const override { return p.matching(); }
  AuditReport audit() const override { return p.audit(); }
  WorkCounters counters() const override { return p.counters(); }
  double bound() const override { return kernel_ratio_bound(p.kernel().config().delta_k, eps_dm); }
  std::size_t oracle() const override { return max_matching(p.graph(), p.side()).size(); }
  bool extras(std::size_t opt, json& out) const override {
    DynamicGraph h(p.graph().node_count());
    for (const Edge& e : p.kernel().kernel_only()) h.insert(e);
    const std::size_t opt_h = hopcroft_karp(h, p.side()).size();
    const auto& ek = p.kernel().config().eps_k;
    // Opt(H) >= (1 - eps_k) / 2 * Opt(E)
    const bool ok = 2 * std::int64_t(opt_h) * ek.den >= (ek.den - ek.num) * std::int64_t(opt);
    out["kernel_opt"] = opt_h;
    out["kernel_opt_ok"] = ok;
    out["kernel_size"] = p.kernel().kernel_size();
    out["residual_size"] = p.kernel().residual_size();
    return ok;
  }
  void footer(json&) const override {}
};

}  // namespace

json without_timing(json report) {
  report.erase("timing");
  return report;
}

RunOutcome run_stream(const RunConfig& cfg, const UpdateStream& stream) {
  if (cfg.audit_every < 1 || cfg.oracle_every < 1) throw std::invalid_argument("cadences must be at least 1");
  const Rational eps_dm = cfg.eps_dm.value_or(cfg.eps);

  json footer;
  footer["algo"] = cfg.algo == Algo::General ? "general" : "kernel";
  footer["seed"] = cfg.seed;
  footer["stream"] = {{"n", stream.n}, {"events", stream.events.size()}, {"bipartite", stream.bipartite}};
  json params;
  params["eps_dm"] = eps_dm.str();
  bool preconditions_ok = true;
  std::vector<std::string> failed, flags;
  std::unique_ptr<Driver> drv;

  if (cfg.algo == Algo::General) {
    const Params p = derive_params(stream.n, cfg.eps, cfg.overrides);
    params["eps"] = p.eps.str();
    params["alpha"] = p.alpha.str();
    params["beta"] = p.beta.str();
    params["L"] = p.L;
    params["Lprime"] = p.Lprime;
    params["gamma"] = p.gamma;
    params["delta"] = p.delta;
    params["skel_target"] = p.skel_target.str();
    params["K_h"] = p.k_h;
    params["h0"] = p.h0;
    params["h1"] = p.h1;
    params["h2"] = p.h2;
    params["h2_defined"] = p.h2_defined;
    params["candidate_degree_bound"] = candidate_degree_bound(p);
    json levels = json::array();
    for (const auto& lc : p.levels) {
      if (lc.skeleton) levels.push_back({{"level", lc.index}, {"d", lc.d}, {"layers", lc.layers}, {"lambda", lc.lambda}});
    }
    params["skeleton_levels"] = levels;
    preconditions_ok = p.preconditions_ok;
    failed = p.failed_preconditions;
    flags = p.deviation_flags;
    drv = std::make_unique<GeneralDriver>(p, eps_dm);
  } else {
    if (!stream.bipartite) throw std::invalid_argument("algo=kernel requires a bipartite stream");
    KernelConfig kc;
    const auto sqrt_n = std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::sqrt(double(stream.n))));
    kc.d = cfg.d.value_or(sqrt_n);
    if (cfg.eps_k) kc.eps_k = *cfg.eps_k;
    if (cfg.delta_k) kc.delta_k = *cfg.delta_k;
    if (!(kc.eps_k.num > 0 && kc.eps_k.num < kc.eps_k.den)) throw std::invalid_argument("eps_k must lie in (0,1)");
    if (!(kc.delta_k.num > 0 && 2 * kc.delta_k.num < kc.delta_k.den)) {
      throw std::invalid_argument("delta_k must lie in (0,1/2)");
    }
    if (kc.d == 0) throw std::invalid_argument("d must be positive");
    if (!(kc.eps_k == KernelConfig{}.eps_k)) flags.push_back("eps_k=" + kc.eps_k.str());
    if (!(kc.delta_k == KernelConfig{}.delta_k)) flags.push_back("delta_k=" + kc.delta_k.str());
    if (kc.d != sqrt_n) flags.push_back("d=" + std::to_string(kc.d) + " (default " + std::to_string(sqrt_n) + ")");
    if (std::int64_t(kc.d) * kc.eps_k.num < kc.eps_k.den) flags.push_back("eps_k*d<1 (tight band empty)");
    params["d"] = kc.d;
    params["eps_k"] = kc.eps_k.str();
    params["delta_k"] = kc.delta_k.str();
    drv = std::make_unique<KernelDriver>(stream.n, stream.side, kc, eps_dm);
  }
  const double bound = drv->bound();
  const bool asserted = cfg.audits && preconditions_ok && flags.empty() && std::isfinite(bound);
  params["ratio_bound"] = num_or_null(bound);
  footer["parameters"] = params;
  footer["preconditions_ok"] = preconditions_ok;
  footer["failed_preconditions"] = failed;
  footer["deviation_flags"] = flags;
  footer["ratio_asserted"] = asserted;

  json checkpoints = json::array();
  bool ok = true;
  std::vector<double> per_event_us;
  per_event_us.reserve(stream.events.size());
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t total = stream.events.size();

  auto checkpoint = [&](std::size_t k) {
    json c;
    c["event_index"] = k;
    c["matching_size"] = drv->matching().size();
    c["theoretical_ratio_bound"] = num_or_null(bound);
    c["work_counters"] = counters_json(drv->counters());
    c["audit"] = nullptr;
    c["oracle_size"] = nullptr;
    c["ratio"] = nullptr;
    if (cfg.audits && (k % cfg.audit_every == 0 || k == total)) {
      const AuditReport r = drv->audit();
      c["audit"] = audit_json(r);
      ok = ok && r.passed();
    }
    if (cfg.audits && (k % cfg.oracle_every == 0 || k == total)) {
      const std::size_t opt = drv->oracle();
      const double ratio = opt == 0 ? 1.0 : double(opt) / double(std::max<std::size_t>(1, drv->matching().size()));
      c["oracle_size"] = opt;
      c["ratio"] = ratio;
      c["ratio_asserted"] = asserted;
      if (asserted) {
        const bool within = ratio <= bound;
        c["ratio_ok"] = within;
        ok = ok && within;
      }
      ok = drv->extras(opt, c) && ok;
    }
    checkpoints.push_back(std::move(c));
  };

  try {
    if (total == 0) checkpoint(0);
    for (std::size_t i = 0; i < total; ++i) {
      const auto a = std::chrono::steady_clock::now();
      drv->apply(stream.events[i]);
      per_event_us.push_back(std::chrono::duration<double, std::micro>(std::chrono::steady_clock::now() - a).count());
      const std::size_t k = i + 1;
      if (k == total || (cfg.audits && (k % cfg.audit_every == 0 || k % cfg.oracle_every == 0))) checkpoint(k);
    }
  } catch (const std::logic_error& e) {
    footer["fatal"] = e.what();
    ok = false;
  }
  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  const WorkCounters w = drv->counters();
  footer["final_counters"] = counters_json(w);
  footer["amortized_edge_touches"] = total ? double(w.edge_touches) / double(total) : 0.0;
  footer["final_matching_size"] = drv->matching().size();
  drv->footer(footer);
  footer["exit_code"] = ok ? 0 : 2;

  RunOutcome out;
  out.exit_code = ok ? 0 : 2;
  out.report["checkpoints"] = std::move(checkpoints);
  out.report["footer"] = std::move(footer);
  out.report["timing"] = {{"wall_seconds", wall},
                          {"per_event_us",
                           {{"p50", percentile(per_event_us, 0.5)},
                            {"p90", percentile(per_event_us, 0.9)},
                            {"p99", percentile(per_event_us, 0.99)},
                            {"max", percentile(per_event_us, 1.0)}}}};
  return out;
}

// ---------------------------------------------------------------- commands

namespace {

std::optional<std::string> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::optional<UpdateStream> load(const std::string& path) {
  const auto text = slurp(path);
  if (!text) {
    std::cerr << "error: cannot read '" << path << "'\n";
    return std::nullopt;
  }
  try {
    return parse_stream(*text);
  } catch (const StreamError& e) {
    std::cerr << "error: " << path << ": " << e.what() << '\n';
    return std::nullopt;
  }
}

bool write_report(const json& report, const std::string& path) {
  const std::string text = report.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return true;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::cerr << "error: cannot write '" << path << "'\n";
    return false;
  }
  out << text;
  return static_cast<bool>(out);
}

}  // namespace

int cmd_gen(const GenSpec& spec, const std::string& out_path) {
  UpdateStream s;
  try {
    s = generate_stream(spec);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  const std::string text = format_stream(s);
  if (out_path.empty() || out_path == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out || !(out << text)) {
    std::cerr << "error: cannot write '" << out_path << "'\n";
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& stream_path) {
  const auto s = load(stream_path);
  if (!s) return 1;
  std::cout << "ok: n=" << s->n << " " << (s->bipartite ? "bipartite" : "general") << " events=" << s->events.size()
            << '\n';
  return 0;
}

int cmd_run(const RunConfig& cfg, const std::string& stream_path, const std::string& stats_out) {
  const auto s = load(stream_path);
  if (!s) return 1;
  RunOutcome out;
  try {
    out = run_stream(cfg, *s);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  if (!write_report(out.report, stats_out)) return 1;
  const auto& f = out.report["footer"];
  std::cerr << "events=" << s->events.size() << " matching=" << f["final_matching_size"]
            << " exit=" << out.exit_code << '\n';
  return out.exit_code;
}

int cmd_bench(RunConfig cfg, const std::string& stream_path, std::size_t repeats, const std::string& stats_out) {
  const auto s = load(stream_path);
  if (!s) return 1;
  if (repeats < 1) {
    std::cerr << "error: repeats must be at least 1\n";
    return 1;
  }
  cfg.audits = false;
  json runs = json::array();
  json first;
  try {
    for (std::size_t r = 0; r < repeats; ++r) {
      RunOutcome out = run_stream(cfg, *s);
      runs.push_back(out.report["timing"]);
      if (r == 0) first = std::move(out.report);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  first["timing"] = {{"repeats", runs}};
  if (!write_report(first, stats_out)) return 1;
  return first["footer"]["exit_code"].get<int>();
}

}  // namespace dynmatch
