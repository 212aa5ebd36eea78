#pragma once

#include <optional>
#include <vector>

#include "ergopt/maxplus.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/sft.hpp"

namespace ergopt {

/// One irreducible component of the Aubry set: a nontrivial strongly
/// connected piece of the critical subgraph, with its entropy and the
/// subaction value on it. subaction_spread records how far the subaction is
/// from constant on the piece (0 up to tolerance whenever the input weights
/// sit at the maximal average on the critical edges, e.g. nonpositive
/// weights with m = 0).
struct AubryComponent {
    int id = 0;
    std::vector<int> vertices;  // sorted vertex ids
    std::vector<int> edges;     // sorted edge ids
    double entropy = 0.0;
    double subaction_value = 0.0;
    double subaction_spread = 0.0;
};

struct AubryDecomposition {
    std::vector<AubryComponent> components;
    std::vector<int> critical_edges;   // edge ids, sorted
    double h = 0.0;                    // max component entropy
    std::vector<int> max_entropy_ids;  // ids with entropy >= h - tol_h
    std::vector<int> vertex_component; // per vertex, -1 when outside every component
    std::vector<int> edge_component;   // per edge, -1 when not critical
};

/// Mane potential data on the normalized graph: walk suprema of length >= 1
/// plus the reflexive zero inside components, and per-component rows
/// S_comp(j, v) = best cost of reaching v from component j.
struct ManeData {
    MaxPlusMatrix star_plus;  // (u,v): max weight over walks of length >= 1
    std::vector<std::vector<MaxPlusValue>> component_rows;

    explicit ManeData(int n) : star_plus(n) {}
};

/// Edges of the normalized graph lying on a zero-weight cycle. The Aubry
/// set is the sub-SFT of infinite paths through this subgraph.
std::vector<int> critical_subgraph(const WeightedEdgeGraph& normalized, double tol_zero = 1e-9);

/// Decompose the critical subgraph into nontrivial strongly connected
/// components with entropies and subaction values.
AubryDecomposition irreducible_components(const WeightedEdgeGraph& normalized,
                                          const std::vector<double>& subaction,
                                          double tol_zero = 1e-9, double tol_h = 1e-9);

/// Walk suprema and component rows; requires normalization (all cycles <= 0).
ManeData mane_matrix(const WeightedEdgeGraph& normalized, const AubryDecomposition& decomp,
                     double tol_zero = 1e-9);

/// Component containing the eventually periodic point, or nullopt when the
/// point lies outside the Aubry set. Throws NotAdmissibleError when the
/// point is not admissible in the system.
std::optional<int> aubry_membership(const EventuallyPeriodicPoint& point,
                                    const SymbolicSystem& system,
                                    const WeightedEdgeGraph& normalized,
                                    const AubryDecomposition& decomp, double tol_zero = 1e-9);

} // namespace ergopt
