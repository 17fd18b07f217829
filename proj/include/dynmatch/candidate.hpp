#pragma once

#include <unordered_set>
#include <vector>

#include "dynmatch/graph.hpp"
#include "dynmatch/params.hpp"

namespace dynmatch {

/// The edge set X ∪ Y handed to the bounded-degree matcher, with per-node
/// degrees. X_i ⊆ E_i and the E_i are disjoint, so the union is disjoint and
/// membership changes arrive as plain insert/erase calls.
class CandidateEdgeSet {
 public:
  explicit CandidateEdgeSet(std::size_t n) : deg_(n, 0) {}

  bool insert(Edge e);
  bool erase(Edge e);
  bool contains(Edge e) const { return keys_.count(e.key()) != 0; }
  std::size_t size() const { return keys_.size(); }
  std::uint32_t degree(NodeId v) const { return deg_[v]; }
  std::uint32_t max_degree() const;
  std::vector<Edge> edges() const;
  const std::unordered_set<EdgeKey>& keys() const { return keys_; }

 private:
  std::unordered_set<EdgeKey> keys_;
  std::vector<std::uint32_t> deg_;
};

/// (L-L'+1)(lambda_max s + 2) + (L'+1) d_{L'}, with s the skeleton target.
double candidate_degree_bound(const Params& p);

}  // namespace dynmatch
