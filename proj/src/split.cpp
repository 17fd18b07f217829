#include "dynmatch/split.hpp"

#include <algorithm>
#include <cstdint>
#include <unordered_map>
#include <unordered_set>

namespace dynmatch {

std::vector<Edge> split(std::span<const Edge> edges) {
  if (edges.empty()) return {};

  // Local ids: 0 is the auxiliary node, real nodes follow in ascending order.
  std::vector<NodeId> ids;
  ids.reserve(edges.size() * 2);
  for (const Edge& e : edges) {
    ids.push_back(e.u);
    ids.push_back(e.v);
  }
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  auto local = [&](NodeId x) {
    return static_cast<std::uint32_t>(std::lower_bound(ids.begin(), ids.end(), x) - ids.begin()) + 1;
  };
  const std::size_t k = ids.size() + 1;

  struct Arc {
    std::uint32_t to;
    std::uint32_t edge;
  };
  std::vector<std::pair<std::uint32_t, std::uint32_t>> ends;  // per edge index
  ends.reserve(edges.size() + ids.size());
  std::vector<std::uint32_t> deg(k, 0);
  for (const Edge& e : edges) {
    const auto a = local(e.u), b = local(e.v);
    ends.push_back({a, b});
    ++deg[a];
    ++deg[b];
  }
  const std::size_t real = ends.size();
  for (std::uint32_t x = 1; x < k; ++x) {
    if (deg[x] % 2) ends.push_back({0, x});
  }

  std::vector<std::vector<Arc>> adj(k);
  for (std::uint32_t i = 0; i < ends.size(); ++i) {
    adj[ends[i].first].push_back({ends[i].second, i});
    adj[ends[i].second].push_back({ends[i].first, i});
  }
  for (auto& a : adj) {
    std::sort(a.begin(), a.end(), [](const Arc& x, const Arc& y) {
      return x.to != y.to ? x.to < y.to : x.edge < y.edge;
    });
  }

  std::vector<char> used(ends.size(), 0);
  std::vector<std::size_t> next(k, 0);
  std::vector<char> keep(ends.size(), 0);
  std::vector<std::pair<std::uint32_t, std::uint32_t>> stack;  // (node, edge that led here)
  std::vector<std::uint32_t> circuit;

  for (std::uint32_t start = 0; start < k; ++start) {
    // Hierholzer, iterative; the popped edge sequence is an Euler circuit.
    stack.assign(1, {start, UINT32_MAX});
    circuit.clear();
    while (!stack.empty()) {
      const auto x = stack.back().first;
      auto& p = next[x];
      while (p < adj[x].size() && used[adj[x][p].edge]) ++p;
      if (p == adj[x].size()) {
        if (stack.back().second != UINT32_MAX) circuit.push_back(stack.back().second);
        stack.pop_back();
      } else {
        const Arc a = adj[x][p];
        used[a.edge] = 1;
        stack.push_back({a.to, a.edge});
      }
    }
    std::reverse(circuit.begin(), circuit.end());
    for (std::size_t t = 0; t < circuit.size(); t += 2) keep[circuit[t]] = 1;
  }

  std::vector<Edge> out;
  for (std::size_t i = 0; i < real; ++i) {
    if (keep[i]) out.push_back(edges[i]);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<NodeId> split_violations(std::span<const Edge> in, std::span<const Edge> out,
                                     std::vector<Edge>* stray) {
  std::unordered_map<NodeId, std::int64_t> din, dout;
  std::unordered_set<EdgeKey> members;
  for (const Edge& e : in) {
    ++din[e.u];
    ++din[e.v];
    members.insert(e.key());
  }
  for (const Edge& e : out) {
    ++dout[e.u];
    ++dout[e.v];
    if (stray && !members.count(e.key())) stray->push_back(e);
  }
  std::vector<NodeId> bad;
  for (const auto& [v, d] : din) {
    const std::int64_t twice = 2 * dout[v];
    if (twice < d - 2 || twice > d + 2) bad.push_back(v);
  }
  for (const auto& [v, d] : dout) {
    if (!din.count(v)) bad.push_back(v);
  }
  std::sort(bad.begin(), bad.end());
  return bad;
}

}  // namespace dynmatch
