#include "dynmatch/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dynmatch {

KernelState::KernelState(std::size_t n, std::vector<std::uint8_t> side, const KernelConfig& cfg)
    : cfg_(cfg),
      d_(cfg.d ? cfg.d : std::max<std::uint32_t>(1, static_cast<std::uint32_t>(std::sqrt(double(n))))),
      side_(std::move(side)),
      adj_(n),
      cls_(n, Class::Small),
      deg_h_(n, 0),
      deg_r_(n, 0),
      r_adj_(n) {
  if (side_.size() != n) throw std::invalid_argument("kernel needs a side bit for every node");
  cfg_.d = d_;
}

bool KernelState::above_tight_floor(std::uint32_t deg) const {
  const auto& e = cfg_.eps_k;
  return std::int64_t(deg) * e.den >= (e.den - e.num) * std::int64_t(d_);
}

bool KernelState::above_small_cap(std::uint32_t deg) const {
  const auto& dl = cfg_.delta_k;
  return std::int64_t(deg) * (dl.den - dl.num) > 2 * dl.num * std::int64_t(d_);
}

bool KernelState::below_big_floor(std::uint32_t deg) const {
  const auto& dl = cfg_.delta_k;
  const auto& e = cfg_.eps_k;
  return std::int64_t(deg) * e.den * (dl.den - dl.num) < (2 * dl.num * e.den - e.num * dl.den) * std::int64_t(d_);
}

std::uint32_t KernelState::capacity(NodeId v) const {
  switch (cls_[v]) {
    case Class::Tight: return 1;
    case Class::Small: return 2;
    default: return 0;
  }
}

bool KernelState::residual_eligible(Edge e) const {
  return (tight(e.u) && cls_[e.v] == Class::Small) || (tight(e.v) && cls_[e.u] == Class::Small);
}

void KernelState::h_insert(Edge e) {
  h_.insert(e.key());
  ++deg_h_[e.u];
  ++deg_h_[e.v];
  touched_.push_back(e);
}

void KernelState::h_erase(Edge e) {
  h_.erase(e.key());
  --deg_h_[e.u];
  --deg_h_[e.v];
  touched_.push_back(e);
}

void KernelState::r_insert(Edge e) {
  r_.insert(e.key());
  ++deg_r_[e.u];
  ++deg_r_[e.v];
  r_adj_[e.u].push_back(e.v);
  r_adj_[e.v].push_back(e.u);
  touched_.push_back(e);
}

void KernelState::r_erase(Edge e) {
  r_.erase(e.key());
  --deg_r_[e.u];
  --deg_r_[e.v];
  auto drop = [](std::vector<NodeId>& a, NodeId x) { a.erase(std::find(a.begin(), a.end(), x)); };
  drop(r_adj_[e.u], e.v);
  drop(r_adj_[e.v], e.u);
  touched_.push_back(e);
}

void KernelState::set_class(NodeId v, Class c) {
  if (cls_[v] == c) return;
  cls_[v] = c;
  affected_.insert(v);
}

// Sticky between the two thresholds.
void KernelState::refresh_split(NodeId v) {
  if (cls_[v] == Class::Small && above_small_cap(deg_h_[v])) set_class(v, Class::Big);
  else if (cls_[v] == Class::Big && below_big_floor(deg_h_[v])) set_class(v, Class::Small);
}

void KernelState::rescan(NodeId x) {
  ++work_.kernel_rescans;
  for (NodeId y : adj_[x]) {
    ++work_.edge_touches;
    const Edge e(x, y);
    if (h_.count(e.key())) continue;
    if (deg_h_[x] < d_ && deg_h_[y] < d_) {
      h_insert(e);
      if (deg_h_[y] >= d_) set_class(y, Class::Tight);
      else if (!tight(y)) refresh_split(y);
    }
  }
  if (deg_h_[x] < d_) set_class(x, above_small_cap(deg_h_[x]) ? Class::Big : Class::Small);
}

void KernelState::repair_residual() {
  std::set<NodeId> work = affected_;
  for (NodeId a : affected_) {
    const std::vector<NodeId> partners = r_adj_[a];
    for (NodeId y : partners) {
      if (!residual_eligible(Edge(a, y))) {
        r_erase(Edge(a, y));
        work.insert(a);
        work.insert(y);
      }
    }
  }
  for (NodeId a : work) {
    for (NodeId y : adj_[a]) {
      if (deg_r_[a] >= capacity(a)) break;
      const Edge e(a, y);
      if (r_.count(e.key()) || !residual_eligible(e) || deg_r_[y] >= capacity(y)) continue;
      r_insert(e);
      ++work_.residual_repairs;
    }
  }
}

KernelChangeLog KernelState::apply(const UpdateEvent& ev) {
  const Edge e = ev.edge;
  if (side_[e.u] == side_[e.v]) throw std::invalid_argument("kernel: edge inside one side " + to_string(e));
  affected_.clear();
  touched_.clear();
  affected_.insert(e.u);
  affected_.insert(e.v);
  ++work_.edge_touches;

  if (ev.is_insert()) {
    adj_[e.u].insert(e.v);
    adj_[e.v].insert(e.u);
    if (!tight(e.u) && !tight(e.v)) {
      h_insert(e);
      for (NodeId x : {e.u, e.v}) {
        if (deg_h_[x] >= d_) set_class(x, Class::Tight);
        else refresh_split(x);
      }
    }
  } else {
    adj_[e.u].erase(e.v);
    adj_[e.v].erase(e.u);
    if (r_.count(e.key())) r_erase(e);
    if (h_.count(e.key())) {
      h_erase(e);
      for (NodeId x : {e.u, e.v}) {
        if (tight(x) && !above_tight_floor(deg_h_[x])) rescan(x);
        else if (!tight(x)) refresh_split(x);
      }
    }
  }
  repair_residual();

  KernelChangeLog log;
  log.touched = std::move(touched_);
  std::sort(log.touched.begin(), log.touched.end());
  log.touched.erase(std::unique(log.touched.begin(), log.touched.end()), log.touched.end());
  touched_.clear();
  return log;
}

std::vector<Edge> KernelState::kernel_edges() const {
  std::vector<Edge> out;
  for (EdgeKey k : h_) out.push_back(Edge::from_key(k));
  for (EdgeKey k : r_) {
    if (!h_.count(k)) out.push_back(Edge::from_key(k));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Edge> KernelState::kernel_only() const {
  std::vector<Edge> out;
  for (EdgeKey k : h_) out.push_back(Edge::from_key(k));
  std::sort(out.begin(), out.end());
  return out;
}

void KernelState::corrupt_drop_kernel_edge(Edge e) {
  if (h_.count(e.key())) h_erase(e);
  touched_.clear();
}

AuditReport check_kernel_invariants(const KernelState& s, const DynamicGraph& g) {
  AuditReport r;
  for (const char* c : {"edge-set", "counters", "kernel-subset", "degree-cap", "tight-floor", "non-tight-covered",
                        "small-cap", "big-floor", "residual-subset", "residual-caps", "residual-maximal",
                        "union-degree"}) {
    r.check(c);
  }
  const auto n = static_cast<NodeId>(s.node_count());
  auto node = [](NodeId v) { return "node " + std::to_string(v); };
  std::size_t live = 0;
  for (NodeId v = 0; v < n; ++v) live += s.adj_[v].size();
  if (live != 2 * g.edge_count()) r.fail("edge-set", "adjacency size differs from the graph");

  std::vector<std::uint32_t> dh(n, 0), dr(n, 0), du(n, 0);
  for (EdgeKey k : s.h_) {
    const Edge e = Edge::from_key(k);
    if (!g.contains(e)) r.fail("kernel-subset", to_string(e));
    ++dh[e.u];
    ++dh[e.v];
  }
  for (EdgeKey k : s.r_) {
    const Edge e = Edge::from_key(k);
    if (!g.contains(e) || !s.residual_eligible(e)) r.fail("residual-subset", to_string(e));
    ++dr[e.u];
    ++dr[e.v];
  }
  for (const Edge& e : s.kernel_edges()) {
    ++du[e.u];
    ++du[e.v];
  }
  for (NodeId v = 0; v < n; ++v) {
    if (dh[v] != s.deg_h_[v] || dr[v] != s.deg_r_[v] || dr[v] != s.r_adj_[v].size()) r.fail("counters", node(v));
    if (dh[v] > s.d_) r.fail("degree-cap", node(v) + " deg(H)=" + std::to_string(dh[v]));
    if (du[v] > s.d_ + 2) r.fail("union-degree", node(v) + " deg=" + std::to_string(du[v]));
    switch (s.cls_[v]) {
      case KernelState::Class::Tight:
        if (!s.above_tight_floor(dh[v])) r.fail("tight-floor", node(v) + " deg(H)=" + std::to_string(dh[v]));
        if (dr[v] > 1) r.fail("residual-caps", node(v));
        break;
      case KernelState::Class::Small:
        if (s.above_small_cap(dh[v])) r.fail("small-cap", node(v) + " deg(H)=" + std::to_string(dh[v]));
        if (dr[v] > 2) r.fail("residual-caps", node(v));
        break;
      case KernelState::Class::Big:
        if (s.below_big_floor(dh[v])) r.fail("big-floor", node(v) + " deg(H)=" + std::to_string(dh[v]));
        if (dr[v] > 0) r.fail("residual-caps", node(v));
        break;
    }
  }
  for (const Edge& e : g.edges()) {
    if (!s.tight(e.u) && !s.tight(e.v) && !s.h_.count(e.key())) r.fail("non-tight-covered", to_string(e));
    if (s.residual_eligible(e) && !s.r_.count(e.key())) {
      // Maximality: some endpoint must be saturated.
      if (dr[e.u] < s.capacity(e.u) && dr[e.v] < s.capacity(e.v)) r.fail("residual-maximal", to_string(e));
    }
  }
  return r;
}

double kernel_ratio_bound(const Rational& delta_k, const Rational& eps_dm) {
  return 2.0 * (1.0 + eps_dm.value()) / (1.0 + delta_k.value() / 4.0);
}

}  // namespace dynmatch
