#pragma once

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "dynmatch/graph.hpp"
#include "dynmatch/matching.hpp"
#include "dynmatch/params.hpp"

namespace testutil {

using dynmatch::Edge;
using dynmatch::NodeId;

inline dynmatch::DynamicGraph make_graph(std::size_t n, const std::vector<Edge>& edges) {
  dynmatch::DynamicGraph g(n);
  for (const Edge& e : edges) g.insert(e);
  return g;
}

inline std::vector<Edge> cycle(NodeId n, NodeId first = 0) {
  std::vector<Edge> out;
  for (NodeId i = 0; i < n; ++i) out.emplace_back(first + i, first + (i + 1) % n);
  return out;
}

inline std::vector<Edge> complete_bipartite(NodeId a, NodeId b) {
  std::vector<Edge> out;
  for (NodeId x = 0; x < a; ++x)
    for (NodeId y = 0; y < b; ++y) out.emplace_back(x, a + y);
  return out;
}

/// Each pair present independently with probability p.
inline std::vector<Edge> random_edges(std::mt19937_64& rng, std::size_t n, double p) {
  std::bernoulli_distribution coin(p);
  std::vector<Edge> out;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = a + 1; b < n; ++b)
      if (coin(rng)) out.emplace_back(a, b);
  return out;
}

/// Maximum matching size by branching on edges; exponential, for tiny inputs.
inline std::size_t brute_force_matching(std::size_t n, const std::vector<Edge>& edges) {
  std::vector<char> used(n, 0);
  std::size_t best = 0;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t size) {
    if (size + (edges.size() - i) <= best) return;
    if (i == edges.size()) {
      best = std::max(best, size);
      return;
    }
    const Edge& e = edges[i];
    if (!used[e.u] && !used[e.v]) {
      used[e.u] = used[e.v] = 1;
      go(i + 1, size + 1);
      used[e.u] = used[e.v] = 0;
    }
    go(i + 1, size);
  };
  go(0, 0);
  return best;
}

/// True iff some simple alternating path joins two free nodes (exhaustive DFS).
inline bool has_augmenting_path(const dynmatch::DynamicGraph& g, const dynmatch::Matching& m) {
  const std::size_t n = g.node_count();
  std::vector<char> on_path(n, 0);
  std::function<bool(NodeId, bool)> dfs = [&](NodeId x, bool want_matched) {
    for (NodeId y : g.neighbors(x)) {
      if (on_path[y]) continue;
      if (m.contains(Edge(x, y)) != want_matched) continue;
      if (!want_matched && !m.matched(y)) return true;
      on_path[y] = 1;
      const bool found = dfs(y, !want_matched);
      on_path[y] = 0;
      if (found) return true;
    }
    return false;
  };
  for (NodeId s = 0; s < n; ++s) {
    if (m.matched(s)) continue;
    on_path[s] = 1;
    const bool found = dfs(s, false);
    on_path[s] = 0;
    if (found) return true;
  }
  return false;
}

/// Single-level parameter set for skeleton fixtures: level 0 with degree
/// threshold d, `layers` laminar layers and L = 1, so the activity thresholds
/// are eps*d and 3*eps*d.
inline dynmatch::Params skeleton_params(std::size_t n, double d, int layers, double delta, double gamma = 0.25) {
  dynmatch::Params p;
  p.n = n;
  p.eps = dynmatch::Rational(1, 4);
  p.alpha = dynmatch::Rational(7, 4);
  p.beta = dynmatch::Rational(5, 4);
  p.L = 1;
  p.gamma = gamma;
  p.delta = delta;
  p.skel_target = dynmatch::Rational(1);
  p.Lprime = 0;
  dynmatch::LevelConfig lc;
  lc.index = 0;
  lc.d = d;
  lc.layers = layers;
  lc.lambda = d / double(1 << layers);
  lc.skeleton = true;
  p.levels = {lc, lc};
  p.levels[1].index = 1;
  return p;
}

}  // namespace testutil
