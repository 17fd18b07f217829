#pragma once

#include <unordered_set>
#include <vector>

#include "dynmatch/common.hpp"
#include "dynmatch/graph.hpp"
#include "dynmatch/matching.hpp"

namespace dynmatch {

struct MatchingDelta {
  std::vector<Edge> added;
  std::vector<Edge> removed;
  bool rebuilt = false;
};

/// (1+eps)-approximate matching on a dynamic edge set of maximum degree
/// d_max. Between rebuilds an insertion joining two free nodes is matched
/// greedily and a deleted matched edge is dropped. Once more than
/// (eps/3) * size_at_rebuild updates have accumulated, the matching is grown
/// to a maximum one by blossom augmentation from the current matching; the
/// ratio then stays within (1 + eps/3) / (1 - eps/3) <= 1 + eps.
class BoundedDegreeMatcher {
 public:
  BoundedDegreeMatcher(std::size_t n, std::size_t d_max, const Rational& eps);

  /// Throws std::logic_error on a presence or degree-bound violation.
  MatchingDelta apply(const UpdateEvent& ev);
  MatchingDelta apply(Edge e, bool insert);
  void rebuild();

  const Matching& matching() const { return m_; }
  Matching snapshot() const { return m_; }
  std::size_t edge_count() const { return keys_.size(); }
  std::vector<Edge> edges() const;
  std::size_t d_max() const { return d_max_; }
  const Rational& eps() const { return eps_; }
  std::size_t updates_since_rebuild() const { return updates_; }
  std::size_t size_at_rebuild() const { return size_at_rebuild_; }
  const WorkCounters& counters() const { return work_; }

 private:
  std::size_t d_max_;
  Rational eps_;
  std::unordered_set<EdgeKey> keys_;
  std::vector<std::uint32_t> deg_;
  Matching m_;
  std::size_t updates_ = 0;
  std::size_t size_at_rebuild_ = 0;
  WorkCounters work_;

  bool due() const;
};

}  // namespace dynmatch
