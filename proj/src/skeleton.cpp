#include "dynmatch/skeleton.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include "dynmatch/split.hpp"

namespace dynmatch {

LevelSkeleton::LevelSkeleton(const Params& params, int level)
    : level_(level),
      L_(params.L),
      ld_(params.levels.at(static_cast<std::size_t>(level)).layers),
      d_(params.d(level)),
      lambda_(params.levels[static_cast<std::size_t>(level)].lambda),
      s_(params.skel_target.value()),
      eps_(params.eps_value()),
      gamma_(params.gamma),
      delta_(params.delta),
      adj_(params.n),
      active_(params.n, 0),
      cdirty_(params.n, 0),
      layers_(static_cast<std::size_t>(ld_) + 1),
      deg_h_(static_cast<std::size_t>(ld_) + 1, std::vector<std::uint32_t>(params.n, 0)) {
  lo_ = eps_ * d_ / params.L2();
  hi_ = 3 * lo_;
  fd_.assign(params.n, ld_ + 1);
  fd_count_.assign(static_cast<std::size_t>(ld_) + 2, 0);
}

std::size_t LevelSkeleton::l_dirty_count(int j) const {
  std::size_t c = 0;
  for (int f = 0; f <= j && f <= ld_ + 1; ++f) c += fd_count_[static_cast<std::size_t>(f)];
  return c;
}

double LevelSkeleton::l4_bound(int j) const {
  return delta_ * (j + 1) / (ld_ + 1) * static_cast<double>(n_active_);
}

bool LevelSkeleton::within_band(NodeId v, int j) const {
  const double prev = layer_degree(v, j - 1);
  const double cur = layer_degree(v, j);
  const double g = 1.0 + gamma_ / ld_;
  return 2 * cur * g >= prev && 2 * cur <= g * prev;
}

void LevelSkeleton::layer_insert(int j, Edge e) {
  auto& layer = layers_[static_cast<std::size_t>(j)];
  if (!layer.insert(e.key()).second) return;
  auto& deg = deg_h_[static_cast<std::size_t>(j)];
  ++deg[e.u];
  ++deg[e.v];
  if (j == ld_) x_log_.push_back({e.key(), +1});
  if (j >= 1 && !in_rebuild_) ++monotone_violations_;
}

void LevelSkeleton::layer_erase(int j, Edge e) {
  auto& layer = layers_[static_cast<std::size_t>(j)];
  if (!layer.erase(e.key())) return;
  auto& deg = deg_h_[static_cast<std::size_t>(j)];
  --deg[e.u];
  --deg[e.v];
  if (j == ld_) x_log_.push_back({e.key(), -1});
}

void LevelSkeleton::set_fd(NodeId v, int f) {
  if (active_[v]) {
    --fd_count_[static_cast<std::size_t>(fd_[v])];
    ++fd_count_[static_cast<std::size_t>(f)];
    // Outside REBUILD a node may only become dirty at more layers.
    if (f > fd_[v] && !in_rebuild_) ++monotone_violations_;
  }
  fd_[v] = f;
}

void LevelSkeleton::set_active(NodeId v, bool on) {
  if (on == static_cast<bool>(active_[v])) return;
  if (on) {
    active_[v] = 1;
    ++n_active_;
    ++fd_count_[static_cast<std::size_t>(fd_[v])];
  } else {
    --fd_count_[static_cast<std::size_t>(fd_[v])];
    active_[v] = 0;
    --n_active_;
  }
}

SkeletonDelta LevelSkeleton::handle(Edge e, bool insert) {
  SkeletonDelta out;
  ++work_.edge_touches;

  // Step I: critical structure.
  if (insert) {
    adj_[e.u].insert(e.v);
    adj_[e.v].insert(e.u);
    edges_.insert(e.key());
    if (active_[e.u] || active_[e.v]) layer_insert(0, e);
  } else {
    adj_[e.u].erase(e.v);
    adj_[e.v].erase(e.u);
    edges_.erase(e.key());
    for (int j = 0; j <= ld_; ++j) layer_erase(j, e);
  }
  NodeId flipped[2];
  int n_flipped = 0;
  for (NodeId x : {e.u, e.v}) {
    if (cdirty_[x]) continue;
    const double deg = degree(x);
    if ((active_[x] && deg <= lo_) || (!active_[x] && deg >= hi_)) {
      cdirty_[x] = 1;
      ++n_cdirty_;
      flipped[n_flipped++] = x;
    }
  }

  // Step II: end the phase once D_c outgrows its budget.
  if (static_cast<double>(n_cdirty_) > delta_ / (ld_ + 1) * static_cast<double>(n_active_)) {
    revamp();
    out.revamped = true;
    return finish(std::move(out));
  }

  // Step III: laminar structure.
  for (int i = 0; i < n_flipped; ++i) {
    if (active_[flipped[i]]) set_fd(flipped[i], 0);
  }
  cleanup(e.u, 1);
  cleanup(e.v, 1);
  verify(out);
  return finish(std::move(out));
}

void LevelSkeleton::cleanup(NodeId x, int from_layer) {
  if (!active_[x]) return;
  for (int j = from_layer; j <= ld_; ++j) {
    if (fd_[x] <= j) return;
    if (!within_band(x, j)) {
      set_fd(x, j);
      return;
    }
  }
}

void LevelSkeleton::verify(SkeletonDelta& out) {
  for (int j = 1; j <= ld_; ++j) {
    if (static_cast<double>(l_dirty_count(j)) > l4_bound(j)) {
      rebuild(j);
      settle_after_rebuild(j);
      out.rebuilt_from = j;
      return;
    }
  }
}

void LevelSkeleton::rebuild(int j) {
  in_rebuild_ = true;
  ++work_.rebuild_calls;
  std::vector<Edge> prev;
  for (int k = j; k <= ld_; ++k) {
    prev.clear();
    for (EdgeKey key : layers_[static_cast<std::size_t>(k - 1)]) prev.push_back(Edge::from_key(key));
    std::sort(prev.begin(), prev.end());
    const std::vector<Edge> next = split(prev);
    ++work_.split_calls;
    work_.edge_touches += prev.size();

    auto& cur = layers_[static_cast<std::size_t>(k)];
    std::vector<Edge> drop;
    EdgeSet keep;
    for (const Edge& x : next) keep.insert(x.key());
    for (EdgeKey key : cur) {
      if (!keep.count(key)) drop.push_back(Edge::from_key(key));
    }
    for (const Edge& x : drop) layer_erase(k, x);
    for (const Edge& x : next) layer_insert(k, x);

    // Halving must hold for every node at every rebuilt layer.
    ++halving_checks_;
    std::vector<Edge> stray;
    halving_violations_ += split_violations(prev, next, &stray).size() + stray.size();
  }
  const auto n = static_cast<NodeId>(active_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (active_[v] && fd_[v] >= j) set_fd(v, ld_ + 1);
  }
  in_rebuild_ = false;
}

// Small layer degrees cannot always halve within the band, so clean nodes
// are re-checked on the rebuilt layers and dirtied where they fall outside.
void LevelSkeleton::settle_after_rebuild(int j) {
  const auto n = static_cast<NodeId>(active_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (!active_[v] || fd_[v] != ld_ + 1) continue;
    cleanup(v, j);
    if (fd_[v] != ld_ + 1) ++work_.post_rebuild_cleanups;
  }
}

void LevelSkeleton::revamp() {
  ++phases_;
  ++work_.revamp_calls;
  in_rebuild_ = true;
  const auto n = static_cast<NodeId>(active_.size());
  for (NodeId v = 0; v < n; ++v) {
    if (!cdirty_[v]) continue;
    cdirty_[v] = 0;
    --n_cdirty_;
    const double deg = degree(v);
    if (active_[v] && deg < hi_) {
      set_active(v, false);
      for (NodeId u : adj_[v]) {
        if (active_[u]) continue;
        for (int j = 0; j <= ld_; ++j) layer_erase(j, Edge(u, v));
      }
    } else if (!active_[v] && deg > lo_) {
      set_active(v, true);
      for (NodeId u : adj_[v]) layer_insert(0, Edge(u, v));
    }
  }
  for (int j = 1; j <= ld_; ++j) {
    std::vector<Edge> all;
    for (EdgeKey key : layers_[static_cast<std::size_t>(j)]) all.push_back(Edge::from_key(key));
    for (const Edge& x : all) layer_erase(j, x);
  }
  for (NodeId v = 0; v < n; ++v) {
    if (active_[v]) set_fd(v, 1);
  }
  in_rebuild_ = false;
  rebuild(1);
  settle_after_rebuild(1);
}

SkeletonDelta LevelSkeleton::finish(SkeletonDelta out) {
  std::unordered_map<EdgeKey, int> net;
  for (const auto& [key, sign] : x_log_) net[key] += sign;
  x_log_.clear();
  for (const auto& [key, c] : net) {
    if (c > 0) out.x_added.push_back(Edge::from_key(key));
    if (c < 0) out.x_removed.push_back(Edge::from_key(key));
  }
  std::sort(out.x_added.begin(), out.x_added.end());
  std::sort(out.x_removed.begin(), out.x_removed.end());
  return out;
}

SkeletonView LevelSkeleton::view() const {
  SkeletonView sv;
  const auto n = static_cast<NodeId>(active_.size());
  for (NodeId v = 0; v < n; ++v) {
    const bool spurious = cdirty_[v] || (active_[v] && fd_[v] <= ld_);
    if (spurious) sv.S.push_back(v);
    const bool big = spurious ? degree(v) > lo_ : static_cast<bool>(active_[v]);
    (big ? sv.B : sv.T).push_back(v);
  }
  for (EdgeKey key : layer(ld_)) sv.X.push_back(Edge::from_key(key));
  std::sort(sv.X.begin(), sv.X.end());
  return sv;
}

AuditReport check_skeleton_invariants(const LevelSkeleton& s, const LevelSkeleton::EdgeSet* truth) {
  AuditReport r;
  for (const char* c :
       {"edge-set", "degree-counters", "layer-degree-counters", "crit-1-active-degree",
        "crit-2-passive-degree", "crit-3-dirty-budget", "crit-4-H-is-active-edges", "crit-5-partition",
        "lam-1-nested", "lam-2-dirty-layers", "lam-3-clean-halving", "lam-4-dirty-budget",
        "layer-degree-bound", "skel-1-cover", "skel-2-big-degree", "skel-3-tiny-degree",
        "skel-4-spurious-budget", "skel-5-scaled-degree", "skel-6-max-degree", "skel-7-tiny-in-X"}) {
    r.check(c);
  }
  const auto n = static_cast<NodeId>(s.node_count());
  const int ld = s.layers();
  auto node = [](NodeId v) { return "node " + std::to_string(v); };

  if (truth && *truth != s.edges_) r.fail("edge-set", "maintained E_i differs from the partition bucket");

  // Counters.
  std::vector<std::uint32_t> deg(n, 0);
  for (EdgeKey key : s.edges_) {
    const Edge e = Edge::from_key(key);
    ++deg[e.u];
    ++deg[e.v];
  }
  std::size_t n_active = 0, n_cdirty = 0;
  std::vector<std::size_t> fd_count(static_cast<std::size_t>(ld) + 2, 0);
  for (NodeId v = 0; v < n; ++v) {
    if (deg[v] != s.degree(v)) r.fail("degree-counters", node(v));
    if (s.active_[v]) {
      ++n_active;
      if (s.fd_[v] < 0 || s.fd_[v] > ld + 1) {
        r.fail("lam-2-dirty-layers", node(v) + " fd out of range");
      } else {
        ++fd_count[static_cast<std::size_t>(s.fd_[v])];
      }
    }
    if (s.cdirty_[v]) ++n_cdirty;
  }
  if (n_active != s.n_active_ || n_cdirty != s.n_cdirty_) {
    r.fail("crit-5-partition", "active/c-dirty counts out of sync");
  }
  if (fd_count != s.fd_count_) r.fail("lam-2-dirty-layers", "per-layer dirty counts out of sync");
  for (int j = 0; j <= ld; ++j) {
    std::vector<std::uint32_t> dh(n, 0);
    for (EdgeKey key : s.layer(j)) {
      const Edge e = Edge::from_key(key);
      ++dh[e.u];
      ++dh[e.v];
    }
    if (dh != s.deg_h_[static_cast<std::size_t>(j)]) {
      r.fail("layer-degree-counters", "layer " + std::to_string(j));
    }
  }

  // Critical structure.
  for (NodeId v = 0; v < n; ++v) {
    if (s.cdirty_[v]) continue;
    if (s.active_[v] && !(s.degree(v) > s.lo_)) {
      r.fail("crit-1-active-degree", node(v) + " deg " + std::to_string(s.degree(v)));
    }
    if (!s.active_[v] && !(s.degree(v) < s.hi_)) {
      r.fail("crit-2-passive-degree", node(v) + " deg " + std::to_string(s.degree(v)));
    }
  }
  if (static_cast<double>(s.n_cdirty_) > s.delta_ / (ld + 1) * static_cast<double>(s.n_active_)) {
    r.fail("crit-3-dirty-budget", std::to_string(s.n_cdirty_) + " c-dirty of " +
                                      std::to_string(s.n_active_) + " active");
  }
  for (EdgeKey key : s.edges_) {
    const Edge e = Edge::from_key(key);
    const bool want = s.active_[e.u] || s.active_[e.v];
    if (want != static_cast<bool>(s.layer(0).count(key))) r.fail("crit-4-H-is-active-edges", to_string(e));
  }
  for (EdgeKey key : s.layer(0)) {
    if (!s.edges_.count(key)) r.fail("crit-4-H-is-active-edges", to_string(Edge::from_key(key)) + " not in E_i");
  }

  // Laminar structure.
  for (int j = 1; j <= ld; ++j) {
    for (EdgeKey key : s.layer(j)) {
      if (!s.layer(j - 1).count(key)) {
        r.fail("lam-1-nested", "layer " + std::to_string(j) + " edge " + to_string(Edge::from_key(key)));
      }
    }
  }
  for (NodeId v = 0; v < n; ++v) {
    if (!s.active_[v]) continue;
    if ((s.fd_[v] == 0) != static_cast<bool>(s.cdirty_[v])) {
      r.fail("lam-2-dirty-layers", node(v) + " D_l0 differs from A ∩ D_c");
    }
    for (int j = 1; j <= ld && j < s.fd_[v]; ++j) {
      if (!s.within_band(v, j)) {
        r.fail("lam-3-clean-halving", node(v) + " layer " + std::to_string(j) + ": " +
                                          std::to_string(s.layer_degree(v, j)) + " vs " +
                                          std::to_string(s.layer_degree(v, j - 1)));
      }
    }
  }
  for (int j = 0; j <= ld; ++j) {
    if (static_cast<double>(s.l_dirty_count(j)) > s.l4_bound(j)) {
      r.fail("lam-4-dirty-budget", "layer " + std::to_string(j) + ": " + std::to_string(s.l_dirty_count(j)) +
                                       " dirty of " + std::to_string(s.n_active_));
    }
  }
  for (int j = 0; j <= ld; ++j) {
    const double bound = std::ldexp(s.d_, -j) + 2.0 - std::ldexp(2.0, -j);
    for (NodeId v = 0; v < n; ++v) {
      if (s.layer_degree(v, j) > bound + 1e-9) {
        r.fail("layer-degree-bound", node(v) + " layer " + std::to_string(j));
      }
    }
  }

  // Skeleton view.
  const SkeletonView sv = s.view();
  if (sv.B.size() + sv.T.size() != n) r.fail("skel-1-cover", "B and T do not partition V");
  std::vector<char> in_s(n, 0), in_b(n, 0);
  for (NodeId v : sv.S) in_s[v] = 1;
  for (NodeId v : sv.B) in_b[v] = 1;
  for (NodeId v : sv.B) {
    if (!(s.degree(v) > s.lo_)) r.fail("skel-2-big-degree", node(v));
  }
  for (NodeId v : sv.T) {
    if (!(s.degree(v) < s.hi_)) r.fail("skel-3-tiny-degree", node(v));
  }
  if (static_cast<double>(sv.S.size()) > 4 * s.delta_ * static_cast<double>(sv.B.size())) {
    r.fail("skel-4-spurious-budget", std::to_string(sv.S.size()) + " spurious vs " +
                                         std::to_string(sv.B.size()) + " big");
  }
  const double scale = std::ldexp(1.0, -ld);  // lambda * s / d
  const double slack = 1e-12;
  const double cap6 = s.lambda_ * s.s_ + 2;
  const double cap7 = 3 * s.eps_ * s.lambda_ * s.s_ / (double(s.L_) * s.L_) + 2;
  for (NodeId v = 0; v < n; ++v) {
    const double dx = s.layer_degree(v, ld);
    if (in_b[v] && !in_s[v]) {
      const double base = scale * s.degree(v);
      if (dx < std::exp(-s.gamma_) * base * (1 - slack) || dx > std::exp(s.gamma_) * base * (1 + slack)) {
        r.fail("skel-5-scaled-degree", node(v) + " deg(X)=" + std::to_string(dx) + " deg(E)=" +
                                           std::to_string(s.degree(v)));
      }
    }
    if (dx > cap6 * (1 + slack)) r.fail("skel-6-max-degree", node(v) + " deg(X)=" + std::to_string(dx));
    if (!in_b[v] && !in_s[v] && dx > cap7 * (1 + slack)) {
      r.fail("skel-7-tiny-in-X", node(v) + " deg(X)=" + std::to_string(dx));
    }
  }
  return r;
}

}  // namespace dynmatch
