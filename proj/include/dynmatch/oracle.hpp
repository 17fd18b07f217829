#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dynmatch/graph.hpp"
#include "dynmatch/matching.hpp"

namespace dynmatch {

/// Hopcroft-Karp on a bipartite graph; side[v] = 0 marks the left side.
Matching hopcroft_karp(const DynamicGraph& g, const std::vector<std::uint8_t>& side);

/// Maximum matching in a general graph on n nodes by Edmonds' blossom
/// algorithm, grown from `init` (which must be a matching of `edges`).
/// Roots are searched in ascending id order; a root whose search fails has its
/// whole alternating tree discarded, since it can never become augmentable.
Matching edmonds(std::size_t n, std::span<const Edge> edges, const Matching* init = nullptr);

/// Exact maximum matching; Hopcroft-Karp when a bipartition is supplied.
Matching max_matching(const DynamicGraph& g,
                      const std::optional<std::vector<std::uint8_t>>& side = std::nullopt);

/// Greedy maximal matching over edges in ascending canonical order.
Matching greedy_maximal(std::size_t n, std::span<const Edge> edges);
Matching greedy_maximal(const DynamicGraph& g);

/// True iff every edge of m is live in g and no node is covered twice.
bool is_valid_matching(const Matching& m, const DynamicGraph& g);

/// |max_matching(g)| / max(1, |maintained|), and 1 when g has no edges. Throws std::invalid_argument if
/// `maintained` is not a matching of g.
double ratio(const Matching& maintained, const DynamicGraph& g,
             const std::optional<std::vector<std::uint8_t>>& side = std::nullopt);

}  // namespace dynmatch
