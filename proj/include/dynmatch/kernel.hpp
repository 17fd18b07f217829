#pragma once

#include <set>
#include <unordered_set>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"

namespace dynmatch {

struct KernelConfig {
  std::uint32_t d = 0;            // degree cap; 0 = floor(sqrt(n))
  Rational eps_k{1, 2000};
  Rational delta_k{1, 20};
};

/// Edges whose membership in H or M^r may have changed during one call.
struct KernelChangeLog {
  std::vector<Edge> touched;
};

/// Bipartite (eps,d)-kernel (T, H) with the big/small split of non-tight
/// nodes and a maximal residual b-matching M^r over E^r = T x S
/// (capacity 1 at tight nodes, 2 at small nodes).
class KernelState {
 public:
  enum class Class : std::uint8_t { Tight, Big, Small };

  KernelState(std::size_t n, std::vector<std::uint8_t> side, const KernelConfig& cfg);

  /// Throws std::invalid_argument for an edge inside one side.
  KernelChangeLog apply(const UpdateEvent& ev);

  std::uint32_t d() const { return d_; }
  const KernelConfig& config() const { return cfg_; }
  std::size_t node_count() const { return cls_.size(); }
  Class node_class(NodeId v) const { return cls_[v]; }
  bool tight(NodeId v) const { return cls_[v] == Class::Tight; }
  std::uint32_t kernel_degree(NodeId v) const { return deg_h_[v]; }
  std::uint32_t residual_degree(NodeId v) const { return deg_r_[v]; }
  bool in_kernel(Edge e) const { return h_.count(e.key()) != 0; }
  bool in_residual(Edge e) const { return r_.count(e.key()) != 0; }
  bool residual_eligible(Edge e) const;
  std::size_t kernel_size() const { return h_.size(); }
  std::size_t residual_size() const { return r_.size(); }

  /// H ∪ M^r, ascending.
  std::vector<Edge> kernel_edges() const;
  std::vector<Edge> kernel_only() const;
  const WorkCounters& counters() const { return work_; }

  // Threshold tests, exact in rationals.
  bool above_tight_floor(std::uint32_t deg) const;  // deg >= (1-eps) d
  bool above_small_cap(std::uint32_t deg) const;    // deg >  2 delta d / (1-delta)
  bool below_big_floor(std::uint32_t deg) const;    // deg <  (2 delta - eps) d / (1-delta)

  /// Test hook for audit fixtures.
  void corrupt_drop_kernel_edge(Edge e);

 private:
  KernelConfig cfg_;
  std::uint32_t d_;
  std::vector<std::uint8_t> side_;
  std::vector<std::set<NodeId>> adj_;
  std::vector<Class> cls_;
  std::unordered_set<EdgeKey> h_;
  std::unordered_set<EdgeKey> r_;
  std::vector<std::uint32_t> deg_h_;
  std::vector<std::uint32_t> deg_r_;
  std::vector<std::vector<NodeId>> r_adj_;  // M^r partners, at most two
  WorkCounters work_;

  // Per-call bookkeeping.
  std::set<NodeId> affected_;
  std::vector<Edge> touched_;

  std::uint32_t capacity(NodeId v) const;
  void h_insert(Edge e);
  void h_erase(Edge e);
  void r_insert(Edge e);
  void r_erase(Edge e);
  void set_class(NodeId v, Class c);
  void refresh_split(NodeId v);
  void rescan(NodeId x);
  void repair_residual();

  friend AuditReport check_kernel_invariants(const KernelState&, const DynamicGraph&);
};

AuditReport check_kernel_invariants(const KernelState& s, const DynamicGraph& g);

/// 2 (1 + eps_dm) / (1 + delta_k / 4).
double kernel_ratio_bound(const Rational& delta_k, const Rational& eps_dm);

}  // namespace dynmatch
