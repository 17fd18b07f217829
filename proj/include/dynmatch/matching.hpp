#pragma once

#include <limits>
#include <vector>

#include "dynmatch/graph.hpp"

namespace dynmatch {

inline constexpr NodeId kUnmatched = std::numeric_limits<NodeId>::max();

/// Integral matching stored as a partner array.
class Matching {
 public:
  Matching() = default;
  explicit Matching(std::size_t n) : mate_(n, kUnmatched) {}

  std::size_t node_count() const { return mate_.size(); }
  std::size_t size() const { return size_; }
  bool matched(NodeId v) const { return mate_[v] != kUnmatched; }
  NodeId partner(NodeId v) const { return mate_[v]; }
  bool contains(Edge e) const { return mate_[e.u] == e.v; }

  /// Both endpoints must be free.
  void add(Edge e) {
    mate_[e.u] = e.v;
    mate_[e.v] = e.u;
    ++size_;
  }
  void remove(Edge e) {
    mate_[e.u] = kUnmatched;
    mate_[e.v] = kUnmatched;
    --size_;
  }

  /// Ascending canonical order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (NodeId v = 0; v < mate_.size(); ++v) {
      if (mate_[v] != kUnmatched && v < mate_[v]) out.emplace_back(v, mate_[v]);
    }
    return out;
  }

  friend bool operator==(const Matching& a, const Matching& b) { return a.mate_ == b.mate_; }

 private:
  std::vector<NodeId> mate_;
  std::size_t size_ = 0;
};

}  // namespace dynmatch
