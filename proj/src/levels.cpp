#include "dynmatch/levels.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace dynmatch {

namespace {

LevelPartition::BigInt ipow(std::int64_t b, int e) {
  LevelPartition::BigInt r = 1;
  for (int i = 0; i < e; ++i) r *= b;
  return r;
}

}  // namespace

// With eps = e/q: 1/d_i = q^(i+2) / ((q+e)^(i+1) (q+3e)). Scaling every weight
// by full_ = (q+e)^(L+1) (q+3e) makes all of them integers.
LevelPartition::LevelPartition(const Params& params)
    : params_(params),
      top_(params.L),
      level_(params.n, -1),
      deg_(params.n, std::vector<std::uint32_t>(static_cast<std::size_t>(params.L) + 2, 0)),
      num_(params.n),
      buckets_(static_cast<std::size_t>(params.L) + 2) {
  const std::int64_t q = params.eps.den;
  const std::int64_t b1 = q + params.eps.num;
  const std::int64_t a1 = q + 3 * params.eps.num;
  full_ = ipow(b1, top_ + 1) * a1;
  coeff_.resize(static_cast<std::size_t>(top_) + 1);
  for (int i = 0; i <= top_; ++i) coeff_[static_cast<std::size_t>(i)] = ipow(q, i + 2) * ipow(b1, top_ - i);
  // W >= 1/(alpha beta) = q^2 / (a1 b1)  <=>  num * a1 * b1 >= full * q^2
  floor_mul_ = BigInt(a1) * b1;
  floor_rhs_ = full_ * q * q;
}

LevelPartition LevelPartition::from_levels(const Params& params, const DynamicGraph& g,
                                           const std::vector<int>& levels) {
  LevelPartition p(params);
  if (levels.size() != p.level_.size()) throw std::invalid_argument("level vector has wrong size");
  p.level_ = levels;
  for (const Edge& e : g.edges()) p.add_edge(e, p.edge_level(e));
  return p;
}

void LevelPartition::add_edge(Edge e, int lvl) {
  const auto slot = static_cast<std::size_t>(lvl + 1);
  buckets_[slot].insert(e.key());
  ++deg_[e.u][slot];
  ++deg_[e.v][slot];
  if (lvl >= 0) {
    num_[e.u] += coeff_[static_cast<std::size_t>(lvl)];
    num_[e.v] += coeff_[static_cast<std::size_t>(lvl)];
  }
}

void LevelPartition::remove_edge(Edge e, int lvl) {
  const auto slot = static_cast<std::size_t>(lvl + 1);
  buckets_[slot].erase(e.key());
  --deg_[e.u][slot];
  --deg_[e.v][slot];
  if (lvl >= 0) {
    num_[e.u] -= coeff_[static_cast<std::size_t>(lvl)];
    num_[e.v] -= coeff_[static_cast<std::size_t>(lvl)];
  }
}

void LevelPartition::move_edge(Edge e, int from, int to, ChangeLog& log) {
  remove_edge(e, from);
  add_edge(e, to);
  log.bucket_moves.push_back({e, from, to});
}

void LevelPartition::shift(const DynamicGraph& g, NodeId v, int delta, ChangeLog& log,
                           std::vector<NodeId>& dirty) {
  const int k = level_[v];
  const int nk = k + delta;
  level_[v] = nk;
  log.level_moves.push_back({v, k, nk});
  ++work_.level_moves;
  for (NodeId w : g.neighbors(v)) {
    ++work_.edge_touches;
    const int before = std::max(k, level_[w]);
    const int after = std::max(nk, level_[w]);
    if (before != after) {
      move_edge(Edge(v, w), before, after, log);
      dirty.push_back(w);
    }
  }
}

ChangeLog LevelPartition::update(const DynamicGraph& g, const UpdateEvent& ev) {
  ChangeLog log;
  const Edge e = ev.edge;
  const int lvl = edge_level(e);
  std::vector<NodeId> dirty{e.u, e.v};

  if (ev.is_insert()) {
    add_edge(e, lvl);
    log.bucket_moves.push_back({e, kAbsent, lvl});
    // Both endpoints at -1: lift the lower id so the edge leaves E_{-1}.
    if (lvl == -1) shift(g, e.u, +1, log, dirty);
  } else {
    remove_edge(e, lvl);
    log.bucket_moves.push_back({e, lvl, kAbsent});
  }

  // Highest level first, then lowest id.
  std::set<std::pair<int, NodeId>> queue;
  auto enqueue = [&](NodeId x) { queue.insert({-level_[x], x}); };
  for (NodeId x : dirty) enqueue(x);
  std::vector<NodeId> touched = dirty;
  dirty.clear();

  std::uint64_t guard = 0;
  while (!queue.empty()) {
    const NodeId v = queue.begin()->second;
    queue.erase(queue.begin());
    int delta = 0;
    if (over_capacity(v)) {
      if (level_[v] == top_) throw std::logic_error("weight above 1 at the top level");
      delta = +1;
    } else if (under_floor(v)) {
      delta = -1;
    } else {
      continue;
    }
    if (++guard > 100'000'000) throw std::logic_error("level repair did not converge");
    shift(g, v, delta, log, dirty);
    enqueue(v);
    for (NodeId w : dirty) {
      queue.erase({-level_[w], w});
      enqueue(w);
      touched.push_back(w);
    }
    dirty.clear();
  }

  std::sort(touched.begin(), touched.end());
  touched.erase(std::unique(touched.begin(), touched.end()), touched.end());
  log.touched = std::move(touched);
  return log;
}

double LevelPartition::weight(NodeId v) const {
  double w = 0;
  for (int i = 0; i <= top_; ++i) w += degree_at(v, i) / params_.d(i);
  return w;
}

double LevelPartition::fractional_value() const {
  double w = 0;
  for (int i = 0; i <= top_; ++i) w += static_cast<double>(bucket(i).size()) / params_.d(i);
  return w;
}

AuditReport check_partition_invariants(const LevelPartition& p, const DynamicGraph& g) {
  using BigInt = LevelPartition::BigInt;
  AuditReport r;
  const int L = p.top_;
  const std::size_t n = p.node_count();
  for (const char* c : {"level-range", "bucket-membership", "degree-counters", "weight-counters",
                        "empty-bottom-bucket", "weight-at-most-one", "weight-floor", "degree-threshold",
                        "double-counting"}) {
    r.check(c);
  }

  for (NodeId v = 0; v < n; ++v) {
    if (p.level_[v] < -1 || p.level_[v] > L) {
      r.fail("level-range", "node " + std::to_string(v) + " at level " + std::to_string(p.level_[v]));
    }
  }

  std::vector<std::vector<std::uint32_t>> deg(n, std::vector<std::uint32_t>(static_cast<std::size_t>(L) + 2, 0));
  std::vector<BigInt> num(n);
  std::size_t in_buckets = 0;
  for (int i = -1; i <= L; ++i) in_buckets += p.bucket(i).size();
  const auto edges = g.edges();
  if (in_buckets != edges.size()) {
    r.fail("bucket-membership", std::to_string(in_buckets) + " bucketed edges vs " +
                                    std::to_string(edges.size()) + " live");
  }
  BigInt twice_total = 0;
  for (const Edge& e : edges) {
    const int lvl = std::clamp(p.edge_level(e), -1, L);
    if (!p.bucket(lvl).count(e.key())) {
      r.fail("bucket-membership", to_string(e) + " missing from E_" + std::to_string(lvl));
    }
    const auto slot = static_cast<std::size_t>(lvl + 1);
    ++deg[e.u][slot];
    ++deg[e.v][slot];
    if (lvl >= 0) {
      const BigInt& c = p.coeff_[static_cast<std::size_t>(lvl)];
      num[e.u] += c;
      num[e.v] += c;
      twice_total += 2 * c;
    } else {
      r.fail("empty-bottom-bucket", to_string(e));
    }
  }

  BigInt sum_num = 0;
  for (NodeId v = 0; v < n; ++v) {
    const std::string tag = "node " + std::to_string(v);
    if (deg[v] != p.deg_[v]) r.fail("degree-counters", tag);
    if (num[v] != p.num_[v]) r.fail("weight-counters", tag);
    sum_num += num[v];
    if (num[v] > p.full_) r.fail("weight-at-most-one", tag + " W=" + std::to_string(p.weight(v)));
    if (p.level_[v] >= 0 && num[v] * p.floor_mul_ < p.floor_rhs_) {
      r.fail("weight-floor", tag + " level " + std::to_string(p.level_[v]) + " W=" + std::to_string(p.weight(v)));
    }
    for (int i = 0; i <= L; ++i) {
      const auto dv = deg[v][static_cast<std::size_t>(i + 1)];
      if (BigInt(dv) * p.coeff_[static_cast<std::size_t>(i)] > p.full_) {
        r.fail("degree-threshold", tag + " deg(E_" + std::to_string(i) + ")=" + std::to_string(dv));
      }
    }
  }
  if (sum_num != twice_total) r.fail("double-counting", "sum of node weights != 2 w(E)");
  return r;
}

}  // namespace dynmatch
