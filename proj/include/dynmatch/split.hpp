#pragma once

#include <span>
#include <vector>

#include "dynmatch/graph.hpp"

namespace dynmatch {

/// Degree-halving split. Returns E' ⊆ E (ascending) with
///   deg(v,E)/2 - 1 <= deg(v,E') <= deg(v,E)/2 + 1   for every node.
/// Odd-degree nodes are joined to an auxiliary node that sorts before every
/// real id; every component is walked as an Euler circuit (smallest neighbour
/// first) and alternate edges are kept. Deterministic for a given edge set.
std::vector<Edge> split(std::span<const Edge> edges);

/// Nodes violating the halving contract of `out` against `in`, plus any
/// edge of `out` not in `in` reported through `stray`.
std::vector<NodeId> split_violations(std::span<const Edge> in, std::span<const Edge> out,
                                     std::vector<Edge>* stray = nullptr);

}  // namespace dynmatch
