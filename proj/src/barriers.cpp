#include "ergopt/barriers.hpp"

#include <string>

#include "ergopt/errors.hpp"

namespace ergopt {

MaxPlusValue s_ext(int j, int i, const ManeData& mane, const AubryDecomposition& decomp,
                   const WeightedEdgeGraph& normalized, std::vector<int>* skipped) {
    const auto& row = mane.component_rows[j];
    bool have_entry = false;
    bool hit_bottom = false;
    double best = 0.0;
    for (int v : decomp.components[i].vertices) {
        MaxPlusValue inner = MaxPlusValue::bottom();
        bool has_edge = false;
        for (int e : normalized.in_edges(v)) {
            if (decomp.edge_component[e] == i) continue;  // stay outside the component
            has_edge = true;
            inner = oplus(inner, otimes(row[normalized.edge(e).tail],
                                        MaxPlusValue::of(normalized.edge(e).weight)));
        }
        if (!has_edge) {
            // Empty inner sup: this vertex would force the entry to -infinity
            // for a vacuous reason, so it is skipped and surfaced instead.
            if (skipped) skipped->push_back(v);
            continue;
        }
        if (inner.is_bottom()) {
            hit_bottom = true;  // unreachable from component j
        } else if (!have_entry || inner.value() < best) {
            best = inner.value();
            have_entry = true;
        }
    }
    if (hit_bottom || !have_entry) return MaxPlusValue::bottom();
    return MaxPlusValue::of(best);
}

ExtCostMatrix ext_cost_matrix(const AubryDecomposition& decomp, const ManeData& mane,
                              const WeightedEdgeGraph& normalized, double tol_zero) {
    const int n = static_cast<int>(decomp.components.size());
    ExtCostMatrix ext(n);
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            ext.entries.at(j, i) = s_ext(j, i, mane, decomp, normalized,
                                         &ext.skipped_vertices[j][i]);

    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            MaxPlusValue v = ext.entries.at(j, i);
            if (v.is_bottom()) continue;
            if (v.value() > tol_zero)
                throw Error("S_ext(" + std::to_string(j) + "," + std::to_string(i) +
                            ") = " + std::to_string(v.value()) + " is positive");
            if (i == j && v.value() >= -tol_zero)
                throw DiagonalNotNegativeError(
                    "S_ext(" + std::to_string(i) + "," + std::to_string(i) + ") = " +
                    std::to_string(v.value()) + " must be strictly negative");
        }
    return ext;
}

RateBound rate_bound(const ExtCostMatrix& ext, const AubryDecomposition& decomp, double tol_h) {
    RateBound rb;
    for (const auto& c : decomp.components)
        if (c.entropy >= decomp.h - tol_h) rb.restricted_ids.push_back(c.id);

    const int r = static_cast<int>(rb.restricted_ids.size());
    // Arc a -> b carries the cost of entering component a from component b.
    MaxPlusMatrix digraph(r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b)
            digraph.at(a, b) = ext.entries.at(rb.restricted_ids[b], rb.restricted_ids[a]);

    try {
        auto witness = max_cycle_mean_with_witness(digraph);
        rb.lambda = MaxPlusValue::of(witness.mean);
        for (int local : witness.cycle) rb.witness_cycle.push_back(rb.restricted_ids[local]);
    } catch (const NoCycleError&) {
        rb.lambda = MaxPlusValue::bottom();
        rb.no_finite_cycle = true;
    }
    return rb;
}

} // namespace ergopt
