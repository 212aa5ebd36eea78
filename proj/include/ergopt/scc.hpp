#pragma once

#include <vector>

namespace ergopt {

/// Strongly connected components of a digraph given as adjacency lists.
/// Returns components in reverse topological order; every vertex appears
/// in exactly one component. Iterative Tarjan.
std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& out_neighbors);

/// gcd of cycle lengths of a strongly connected digraph (its period);
/// returns 1 for a single vertex with a self-loop. Requires the graph to
/// contain at least one edge and be strongly connected.
int graph_period(const std::vector<std::vector<int>>& out_neighbors);

} // namespace ergopt
