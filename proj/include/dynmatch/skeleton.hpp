#pragma once

#include <unordered_set>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"
#include "dynmatch/params.hpp"

namespace dynmatch {

/// Net change of the exported edge set X = H_{L_d} caused by one call.
struct SkeletonDelta {
  std::vector<Edge> x_added;
  std::vector<Edge> x_removed;
  bool revamped = false;
  int rebuilt_from = 0;  // smallest layer rebuilt by VERIFY, 0 if none
};

struct SkeletonView {
  std::vector<NodeId> B, T, S;  // ascending
  std::vector<Edge> X;          // ascending
};

/// Per-level state over G_i = (V, E_i): the critical structure (A, P, D_c, H)
/// and the laminar layers H = H_0 ⊇ H_1 ⊇ ... ⊇ H_{L_d}.
///
/// Each active node keeps one "first dirty layer" index fd: it is l-dirty at
/// every layer j >= fd and l-clean below. fd = 0 iff the node is c-dirty, and
/// fd = L_d + 1 means clean everywhere. This encodes D_{l0} ⊆ ... ⊆ D_{l,L_d}
/// and D_{lj} ⊎ C_{lj} = A by construction.
class LevelSkeleton {
 public:
  using EdgeSet = std::unordered_set<EdgeKey>;

  LevelSkeleton(const Params& params, int level);

  /// Steps I-III for one insertion/deletion of an edge of E_i.
  SkeletonDelta handle(Edge e, bool insert);

  /// REBUILD(j): H_k <- SPLIT(H_{k-1}) for k = j..L_d; nodes clean at layer
  /// j-1 become clean at every layer >= j.
  void rebuild(int j);
  /// Ends the phase: reassigns every c-dirty node, resets the laminar
  /// structure and calls REBUILD(1).
  void revamp();

  SkeletonView view() const;

  // Accessors.
  int level() const { return level_; }
  int layers() const { return ld_; }
  double d() const { return d_; }
  double lambda() const { return lambda_; }
  double low_threshold() const { return lo_; }    // eps d / L^2
  double high_threshold() const { return hi_; }   // 3 eps d / L^2
  std::size_t node_count() const { return active_.size(); }
  bool active(NodeId v) const { return active_[v]; }
  bool c_dirty(NodeId v) const { return cdirty_[v]; }
  /// True iff v ∈ D_{lj}.
  bool l_dirty(NodeId v, int j) const { return active_[v] && fd_[v] <= j; }
  std::size_t active_count() const { return n_active_; }
  std::size_t c_dirty_count() const { return n_cdirty_; }
  std::size_t l_dirty_count(int j) const;
  std::uint32_t degree(NodeId v) const { return static_cast<std::uint32_t>(adj_[v].size()); }
  std::uint32_t layer_degree(NodeId v, int j) const { return deg_h_[static_cast<std::size_t>(j)][v]; }
  const EdgeSet& edges() const { return edges_; }
  const EdgeSet& layer(int j) const { return layers_[static_cast<std::size_t>(j)]; }

  /// Inv L3 band test at layer j >= 1.
  bool within_band(NodeId v, int j) const;

  std::uint64_t halving_checks() const { return halving_checks_; }
  std::uint64_t halving_violations() const { return halving_violations_; }
  std::uint64_t monotonicity_violations() const { return monotone_violations_; }
  std::uint64_t phases() const { return phases_; }
  const WorkCounters& counters() const { return work_; }

  /// Test hook: raw access for corrupting state in audit tests.
  EdgeSet& mutable_layer(int j) { return layers_[static_cast<std::size_t>(j)]; }

 private:
  int level_;
  int L_;
  int ld_;
  double d_;
  double lambda_;
  double s_;
  double eps_;
  double gamma_;
  double delta_;
  double lo_;
  double hi_;

  std::vector<std::unordered_set<NodeId>> adj_;  // E_i
  EdgeSet edges_;
  std::vector<char> active_;
  std::vector<char> cdirty_;
  std::vector<int> fd_;
  std::vector<std::size_t> fd_count_;  // active nodes per fd value 0..L_d+1
  std::size_t n_active_ = 0;
  std::size_t n_cdirty_ = 0;
  std::vector<EdgeSet> layers_;
  std::vector<std::vector<std::uint32_t>> deg_h_;

  // Pending X changes (+1 added, -1 removed) for the current call.
  std::vector<std::pair<EdgeKey, int>> x_log_;

  std::uint64_t halving_checks_ = 0;
  std::uint64_t halving_violations_ = 0;
  std::uint64_t monotone_violations_ = 0;
  std::uint64_t phases_ = 0;
  bool in_rebuild_ = false;
  WorkCounters work_;

  void layer_insert(int j, Edge e);
  void layer_erase(int j, Edge e);
  void set_fd(NodeId v, int f);
  void set_active(NodeId v, bool on);
  void cleanup(NodeId x, int from_layer);
  void verify(SkeletonDelta& out);
  void settle_after_rebuild(int j);
  double l4_bound(int j) const;
  SkeletonDelta finish(SkeletonDelta out);

  friend AuditReport check_skeleton_invariants(const LevelSkeleton&, const EdgeSet*);
};

/// Critical-structure conditions 1-5, laminar invariants L1-L4, the layer
/// degree bound, counter consistency and skeleton conditions 1-7 of the
/// derived view. `truth`, when given, is the edge set E_i the state must hold.
AuditReport check_skeleton_invariants(const LevelSkeleton& s,
                                      const LevelSkeleton::EdgeSet* truth = nullptr);

}  // namespace dynmatch
