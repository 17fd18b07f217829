#include "dynmatch/oracle.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

namespace dynmatch {

Matching hopcroft_karp(const DynamicGraph& g, const std::vector<std::uint8_t>& side) {
  const std::size_t n = g.node_count();
  constexpr std::uint32_t kInf = std::numeric_limits<std::uint32_t>::max();
  std::vector<std::vector<NodeId>> adj(n);
  std::vector<NodeId> left;
  for (NodeId v = 0; v < n; ++v) {
    if (side[v] == 0) {
      left.push_back(v);
      adj[v] = g.sorted_neighbors(v);
    }
  }
  std::vector<NodeId> mate(n, kUnmatched);
  std::vector<std::uint32_t> dist(n);
  std::vector<std::size_t> it(n);

  auto bfs = [&] {
    std::queue<NodeId> q;
    bool found = false;
    for (NodeId u : left) {
      if (mate[u] == kUnmatched) {
        dist[u] = 0;
        q.push(u);
      } else {
        dist[u] = kInf;
      }
    }
    while (!q.empty()) {
      const NodeId u = q.front();
      q.pop();
      for (NodeId v : adj[u]) {
        const NodeId w = mate[v];
        if (w == kUnmatched) {
          found = true;
        } else if (dist[w] == kInf) {
          dist[w] = dist[u] + 1;
          q.push(w);
        }
      }
    }
    return found;
  };

  // Iterative layered DFS.
  auto dfs = [&](NodeId root) {
    std::vector<NodeId> stack{root};
    while (!stack.empty()) {
      const NodeId u = stack.back();
      if (it[u] == adj[u].size()) {
        dist[u] = kInf;
        stack.pop_back();
        continue;
      }
      const NodeId v = adj[u][it[u]];
      const NodeId w = mate[v];
      if (w == kUnmatched) {
        // Augment along the stack.
        for (NodeId x : stack) {
          const NodeId y = adj[x][it[x]];
          mate[x] = y;
          mate[y] = x;
        }
        return true;
      }
      if (dist[w] == dist[u] + 1) {
        stack.push_back(w);
      } else {
        ++it[u];
      }
    }
    return false;
  };

  while (bfs()) {
    std::fill(it.begin(), it.end(), 0);
    for (NodeId u : left) {
      if (mate[u] == kUnmatched) dfs(u);
    }
  }

  Matching m(n);
  for (NodeId u : left) {
    if (mate[u] != kUnmatched) m.add(Edge(u, mate[u]));
  }
  return m;
}

namespace {

class Blossom {
 public:
  Blossom(std::size_t n, std::span<const Edge> edges, const Matching* init)
      : n_(n), adj_(n), mate_(n, kUnmatched), parent_(n, kUnmatched), base_(n), used_(n, 0),
        in_tree_(n, 0), dead_(n, 0), mark_(n, 0), flower_(n, 0) {
    for (const Edge& e : edges) {
      adj_[e.u].push_back(e.v);
      adj_[e.v].push_back(e.u);
    }
    for (auto& a : adj_) std::sort(a.begin(), a.end());
    for (NodeId v = 0; v < n; ++v) base_[v] = v;
    if (init) {
      for (NodeId v = 0; v < n; ++v) mate_[v] = init->partner(v);
    }
  }

  Matching run() {
    for (NodeId root = 0; root < n_; ++root) {
      if (mate_[root] != kUnmatched || dead_[root] || adj_[root].empty()) continue;
      const NodeId end = search(root);
      if (end == kUnmatched) {
        for (NodeId v : tree_) dead_[v] = 1;
      } else {
        augment(end);
      }
      reset();
    }
    Matching m(n_);
    for (NodeId v = 0; v < n_; ++v) {
      if (mate_[v] != kUnmatched && v < mate_[v]) m.add(Edge(v, mate_[v]));
    }
    return m;
  }

 private:
  std::size_t n_;
  std::vector<std::vector<NodeId>> adj_;
  std::vector<NodeId> mate_, parent_, base_;
  std::vector<char> used_, in_tree_, dead_;
  std::vector<std::uint32_t> mark_;
  std::vector<char> flower_;
  std::uint32_t stamp_ = 0;
  std::vector<NodeId> tree_;
  std::vector<NodeId> queue_;

  void touch(NodeId v) {
    if (!in_tree_[v]) {
      in_tree_[v] = 1;
      tree_.push_back(v);
    }
  }

  void reset() {
    for (NodeId v : tree_) {
      in_tree_[v] = 0;
      used_[v] = 0;
      parent_[v] = kUnmatched;
      base_[v] = v;
    }
    tree_.clear();
  }

  NodeId lca(NodeId a, NodeId b) {
    ++stamp_;
    while (true) {
      a = base_[a];
      mark_[a] = stamp_;
      if (mate_[a] == kUnmatched) break;
      a = parent_[mate_[a]];
    }
    while (true) {
      b = base_[b];
      if (mark_[b] == stamp_) return b;
      b = parent_[mate_[b]];
    }
  }

  void mark_path(NodeId v, NodeId b, NodeId child) {
    while (base_[v] != b) {
      flower_[base_[v]] = flower_[base_[mate_[v]]] = 1;
      parent_[v] = child;
      child = mate_[v];
      v = parent_[mate_[v]];
    }
  }

  NodeId search(NodeId root) {
    queue_.clear();
    used_[root] = 1;
    touch(root);
    queue_.push_back(root);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const NodeId v = queue_[qi];
      for (NodeId to : adj_[v]) {
        if (dead_[to] || base_[v] == base_[to] || mate_[v] == to) continue;
        if (to == root || (mate_[to] != kUnmatched && parent_[mate_[to]] != kUnmatched)) {
          const NodeId cur = lca(v, to);
          for (NodeId x : tree_) flower_[x] = 0;
          mark_path(v, cur, to);
          mark_path(to, cur, v);
          for (NodeId x : std::vector<NodeId>(tree_)) {
            if (flower_[base_[x]]) {
              base_[x] = cur;
              if (!used_[x]) {
                used_[x] = 1;
                queue_.push_back(x);
              }
            }
          }
        } else if (parent_[to] == kUnmatched) {
          parent_[to] = v;
          touch(to);
          if (mate_[to] == kUnmatched) return to;
          const NodeId w = mate_[to];
          used_[w] = 1;
          touch(w);
          queue_.push_back(w);
        }
      }
    }
    return kUnmatched;
  }

  void augment(NodeId v) {
    while (v != kUnmatched) {
      const NodeId pv = parent_[v];
      const NodeId ppv = mate_[pv];
      mate_[v] = pv;
      mate_[pv] = v;
      v = ppv;
    }
  }
};

}  // namespace

Matching edmonds(std::size_t n, std::span<const Edge> edges, const Matching* init) {
  return Blossom(n, edges, init).run();
}

Matching max_matching(const DynamicGraph& g, const std::optional<std::vector<std::uint8_t>>& side) {
  if (side) return hopcroft_karp(g, *side);
  const auto edges = g.edges();
  return edmonds(g.node_count(), edges);
}

Matching greedy_maximal(std::size_t n, std::span<const Edge> edges) {
  std::vector<Edge> sorted(edges.begin(), edges.end());
  std::sort(sorted.begin(), sorted.end());
  Matching m(n);
  for (const Edge& e : sorted) {
    if (!m.matched(e.u) && !m.matched(e.v)) m.add(e);
  }
  return m;
}

Matching greedy_maximal(const DynamicGraph& g) {
  const auto edges = g.edges();
  return greedy_maximal(g.node_count(), edges);
}

bool is_valid_matching(const Matching& m, const DynamicGraph& g) {
  if (m.node_count() != g.node_count()) return false;
  std::size_t count = 0;
  for (NodeId v = 0; v < m.node_count(); ++v) {
    const NodeId w = m.partner(v);
    if (w == kUnmatched) continue;
    if (w >= m.node_count() || w == v || m.partner(w) != v || !g.contains(Edge(v, w))) return false;
    ++count;
  }
  return count == 2 * m.size();
}

double ratio(const Matching& maintained, const DynamicGraph& g,
             const std::optional<std::vector<std::uint8_t>>& side) {
  if (!is_valid_matching(maintained, g)) throw std::invalid_argument("maintained set is not a matching of g");
  // An empty graph is matched perfectly by the empty matching.
  const std::size_t best = max_matching(g, side).size();
  if (best == 0) return 1.0;
  return static_cast<double>(best) / static_cast<double>(std::max<std::size_t>(1, maintained.size()));
}

}  // namespace dynmatch
