#pragma once

#include <vector>

#include "ergopt/aubry.hpp"
#include "ergopt/maxplus.hpp"

namespace ergopt {

/// Matrix of entry costs between irreducible components:
/// entries(j, i) = min over vertices v of component i of the best cost of
/// reaching v from component j through a final edge outside component i.
/// Vertices of component i with no such incoming edge are skipped and
/// recorded per (j, i); entries are bottom when every vertex is skipped or
/// component j cannot reach component i at all.
struct ExtCostMatrix {
    int n = 0;
    MaxPlusMatrix entries;  // entries.at(j, i)
    std::vector<std::vector<std::vector<int>>> skipped_vertices;  // [j][i] -> vertex ids

    explicit ExtCostMatrix(int n_) : n(n_), entries(n_), skipped_vertices(n_, std::vector<std::vector<int>>(n_)) {}
};

/// Rate bound of the pressure residual: the max-plus eigenvalue of the
/// entry-cost matrix restricted to maximal-entropy components.
struct RateBound {
    MaxPlusValue lambda;              // bottom when no finite cycle exists
    std::vector<int> witness_cycle;   // component ids attaining the mean
    std::vector<int> restricted_ids;  // maximal-entropy component ids used
    bool no_finite_cycle = false;
};

/// Single entry cost S_ext(j, i); `skipped` (optional) collects the
/// component-i vertices whose inner max ranged over an empty edge set.
MaxPlusValue s_ext(int j, int i, const ManeData& mane, const AubryDecomposition& decomp,
                   const WeightedEdgeGraph& normalized, std::vector<int>* skipped = nullptr);

/// All pairs, with invariant checks: finite entries nonpositive, finite
/// diagonal entries strictly negative (DiagonalNotNegativeError otherwise).
ExtCostMatrix ext_cost_matrix(const AubryDecomposition& decomp, const ManeData& mane,
                              const WeightedEdgeGraph& normalized, double tol_zero = 1e-9);

/// Restrict to components of entropy >= h - tol_h and take the maximum
/// cycle mean of the restricted cost matrix (arc i -> j carries S_ext(j, i);
/// cycle means are transpose-invariant, so the orientation is immaterial).
RateBound rate_bound(const ExtCostMatrix& ext, const AubryDecomposition& decomp,
                     double tol_h = 1e-9);

} // namespace ergopt
