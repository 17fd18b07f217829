#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <limits>
#include <unordered_set>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"
#include "dynmatch/params.hpp"

namespace dynmatch {

/// Marks "edge not present" in a BucketMove.
inline constexpr int kAbsent = std::numeric_limits<int>::min();

struct LevelMove {
  NodeId v;
  int from;
  int to;
};

struct BucketMove {
  Edge e;
  int from;  // kAbsent for an insertion
  int to;    // kAbsent for a deletion
};

/// Exact record of what one update did to the partition, in execution order.
struct ChangeLog {
  std::vector<LevelMove> level_moves;
  std::vector<BucketMove> bucket_moves;
  std::vector<NodeId> touched;
};

/// Maintains an (alpha, beta)-partition of a dynamic graph: node levels in
/// {-1..L}, edge buckets E_i (edge level = max endpoint level) and the implied
/// fractional matching w(e) = 1/d_i.
///
/// Node weights W(v) = sum_i deg(v, E_i) / d_i are kept as exact integers
/// scaled by a common denominator, so the invariant checks
///   W(v) <= 1                           for every node,
///   W(v) >= 1/(alpha beta)              for every node at level >= 0,
///   E_{-1} is empty
/// never suffer rounding. Repair after each update follows the rise/settle
/// scheme: a node with W > 1 moves up one level, a node at level >= 0 with
/// W < 1/(alpha beta) moves down one level, highest level first, then lowest id.
class LevelPartition {
 public:
  using BigInt = boost::multiprecision::cpp_int;
  using EdgeSet = std::unordered_set<EdgeKey>;

  explicit LevelPartition(const Params& params);

  /// Hand-built state with the given node levels and no repair; used to set up
  /// audit fixtures.
  static LevelPartition from_levels(const Params& params, const DynamicGraph& g,
                                    const std::vector<int>& levels);

  /// `g` must already reflect `ev`. Restores both invariants and returns the
  /// exact change log.
  ChangeLog update(const DynamicGraph& g, const UpdateEvent& ev);

  int top_level() const { return top_; }
  int level(NodeId v) const { return level_[v]; }
  int edge_level(Edge e) const { return std::max(level_[e.u], level_[e.v]); }
  const EdgeSet& bucket(int i) const { return buckets_[static_cast<std::size_t>(i + 1)]; }
  std::uint32_t degree_at(NodeId v, int i) const { return deg_[v][static_cast<std::size_t>(i + 1)]; }
  std::size_t node_count() const { return level_.size(); }

  /// W(v) as a double, for reporting only.
  double weight(NodeId v) const;
  /// w(E) = sum_i |E_i| / d_i as a double, for reporting only.
  double fractional_value() const;

  bool over_capacity(NodeId v) const { return num_[v] > full_; }
  bool under_floor(NodeId v) const { return level_[v] >= 0 && num_[v] * floor_mul_ < floor_rhs_; }

  const WorkCounters& counters() const { return work_; }
  const Params& params() const { return params_; }

 private:
  friend AuditReport check_partition_invariants(const LevelPartition&, const DynamicGraph&);

  Params params_;
  int top_;
  std::vector<int> level_;
  std::vector<std::vector<std::uint32_t>> deg_;  // deg_[v][i+1] = deg(v, E_i)
  std::vector<BigInt> num_;                      // W(v) * full_
  std::vector<BigInt> coeff_;                    // (1/d_i) * full_
  BigInt full_;
  BigInt floor_mul_;
  BigInt floor_rhs_;
  std::vector<EdgeSet> buckets_;  // index i+1 for level i in {-1..L}
  WorkCounters work_;

  void move_edge(Edge e, int from, int to, ChangeLog& log);
  void add_edge(Edge e, int lvl);
  void remove_edge(Edge e, int lvl);
  void shift(const DynamicGraph& g, NodeId v, int delta, ChangeLog& log, std::vector<NodeId>& dirty);
};

/// Recomputes everything from scratch and checks it against the maintained
/// state and the partition invariants. Passes iff no violations.
AuditReport check_partition_invariants(const LevelPartition& p, const DynamicGraph& g);

}  // namespace dynmatch
