#include "ergopt/aubry.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "ergopt/errors.hpp"
#include "ergopt/scc.hpp"

namespace ergopt {

std::vector<int> critical_subgraph(const WeightedEdgeGraph& normalized, double tol_zero) {
    MaxPlusMatrix w = weight_matrix(normalized);
    MaxPlusMatrix star = kleene_star(w);
    std::vector<int> crit;
    for (int e = 0; e < normalized.edge_count(); ++e) {
        const Edge& ed = normalized.edge(e);
        MaxPlusValue back = star.at(ed.head, ed.tail);
        if (back.is_bottom()) continue;
        if (ed.weight + back.value() >= -tol_zero) crit.push_back(e);
    }
    return crit;
}

AubryDecomposition irreducible_components(const WeightedEdgeGraph& normalized,
                                          const std::vector<double>& subaction, double tol_zero,
                                          double tol_h) {
    const int n = normalized.vertex_count();
    AubryDecomposition dec;
    dec.critical_edges = critical_subgraph(normalized, tol_zero);
    dec.vertex_component.assign(n, -1);
    dec.edge_component.assign(normalized.edge_count(), -1);

    std::vector<std::vector<int>> adj(n);
    for (int e : dec.critical_edges) adj[normalized.edge(e).tail].push_back(normalized.edge(e).head);

    std::vector<std::vector<int>> comps;
    for (auto& comp : strongly_connected_components(adj)) {
        std::sort(comp.begin(), comp.end());
        comps.push_back(std::move(comp));
    }
    // Deterministic component order: by smallest vertex.
    std::sort(comps.begin(), comps.end());

    for (auto& comp : comps) {
        std::vector<char> inside(n, 0);
        for (int v : comp) inside[v] = 1;
        std::vector<int> edges;
        for (int e : dec.critical_edges)
            if (inside[normalized.edge(e).tail] && inside[normalized.edge(e).head])
                edges.push_back(e);
        if (edges.empty()) continue;  // trivial piece, no cycle through it

        AubryComponent c;
        c.id = static_cast<int>(dec.components.size());
        c.vertices = comp;
        c.edges = std::move(edges);

        for (int e : c.edges)
            if (std::fabs(normalized.edge(e).weight) > tol_zero)
                throw Error("critical edge \"" + word_to_string(normalized.edge(e).label) +
                            "\" has nonzero normalized weight " +
                            std::to_string(normalized.edge(e).weight));

        // Entropy of the sub-SFT: count parallel critical edges.
        const int m = static_cast<int>(comp.size());
        std::vector<int> pos(n, -1);
        for (int i = 0; i < m; ++i) pos[comp[i]] = i;
        std::vector<std::vector<long>> counts(m, std::vector<long>(m, 0));
        for (int e : c.edges)
            ++counts[pos[normalized.edge(e).tail]][pos[normalized.edge(e).head]];
        c.entropy = topological_entropy(counts);

        double lo = subaction[comp[0]], hi = lo;
        for (int v : comp) {
            lo = std::min(lo, subaction[v]);
            hi = std::max(hi, subaction[v]);
        }
        c.subaction_value = subaction[comp[0]];
        c.subaction_spread = hi - lo;

        for (int v : c.vertices) dec.vertex_component[v] = c.id;
        for (int e : c.edges) dec.edge_component[e] = c.id;
        dec.components.push_back(std::move(c));
    }

    if (dec.components.empty())
        throw Error("empty Aubry set: normalization should guarantee a zero cycle");

    dec.h = 0.0;
    for (const auto& c : dec.components) dec.h = std::max(dec.h, c.entropy);
    for (const auto& c : dec.components)
        if (c.entropy >= dec.h - tol_h) dec.max_entropy_ids.push_back(c.id);
    return dec;
}

ManeData mane_matrix(const WeightedEdgeGraph& normalized, const AubryDecomposition& decomp,
                     double tol_zero) {
    const int n = normalized.vertex_count();
    MaxPlusMatrix w = weight_matrix(normalized);
    MaxPlusMatrix star = kleene_star(w);

    ManeData md(n);
    // Walks of length >= 1: one explicit step then the closure.
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            MaxPlusValue best = MaxPlusValue::bottom();
            for (int t = 0; t < n; ++t) best = oplus(best, otimes(w.at(u, t), star.at(t, v)));
            md.star_plus.at(u, v) = best;
        }

    md.component_rows.resize(decomp.components.size());
    for (const auto& comp : decomp.components) {
        auto& row = md.component_rows[comp.id];
        row.assign(n, MaxPlusValue::bottom());
        for (int v = 0; v < n; ++v) {
            MaxPlusValue best = MaxPlusValue::bottom();
            for (int u : comp.vertices) {
                MaxPlusValue s = md.star_plus.at(u, v);
                if (u == v) s = oplus(s, MaxPlusValue::of(0.0));  // reflexive pair
                best = oplus(best, s);
            }
            row[v] = best;
        }
        for (int v : comp.vertices)
            if (row[v].is_bottom() || std::fabs(row[v].value()) > tol_zero)
                throw Error("Mane row of component " + std::to_string(comp.id) +
                            " is not 0 on its own vertex " + std::to_string(v));
    }
    return md;
}

std::optional<int> aubry_membership(const EventuallyPeriodicPoint& point,
                                    const SymbolicSystem& system,
                                    const WeightedEdgeGraph& normalized,
                                    const AubryDecomposition& decomp, double tol_zero) {
    if (point.cycle.empty()) throw NotAdmissibleError("cycle part must be nonempty");
    {
        Word check = point.preperiod;
        check.insert(check.end(), point.cycle.begin(), point.cycle.end());
        check.insert(check.end(), point.cycle.begin(), point.cycle.end());
        if (!system.admissible(check))
            throw NotAdmissibleError("point " + word_to_string(point.preperiod) + "(" +
                                     word_to_string(point.cycle) + ")^inf is not admissible");
    }

    const int k = normalized.range();
    const int pre = static_cast<int>(point.preperiod.size());
    const int per = static_cast<int>(point.cycle.size());

    // Enough symbols for the edge window at every position up to pre+per.
    Word sym = point.preperiod;
    while (static_cast<int>(sym.size()) < pre + per + k)
        sym.insert(sym.end(), point.cycle.begin(), point.cycle.end());

    std::map<Word, int> edge_by_label;
    for (int e = 0; e < normalized.edge_count(); ++e) edge_by_label[normalized.edge(e).label] = e;

    auto edge_at = [&](int i) {
        Word label(sym.begin() + i, sym.begin() + i + k);
        auto it = edge_by_label.find(label);
        if (it == edge_by_label.end())
            throw NotAdmissibleError("word \"" + word_to_string(label) + "\" is not admissible");
        return it->second;
    };

    double pre_sum = 0.0;
    for (int i = 0; i < pre; ++i) pre_sum += normalized.edge(edge_at(i)).weight;
    double cycle_sum = 0.0;
    for (int i = pre; i < pre + per; ++i) cycle_sum += normalized.edge(edge_at(i)).weight;

    if (cycle_sum < -tol_zero || pre_sum < -tol_zero) return std::nullopt;

    // Best return from the cycle back to the starting vertex, empty walk allowed.
    MaxPlusMatrix star = kleene_star(weight_matrix(normalized));
    const int v0 = normalized.edge(edge_at(0)).tail;
    MaxPlusValue best_return = MaxPlusValue::bottom();
    for (int i = pre; i < pre + per; ++i)
        best_return = oplus(best_return, star.at(normalized.edge(edge_at(i)).tail, v0));
    if (best_return.is_bottom() || best_return.value() < -tol_zero) return std::nullopt;

    int comp = decomp.vertex_component[normalized.edge(edge_at(pre)).tail];
    return comp >= 0 ? std::optional<int>(comp) : std::nullopt;
}

} // namespace ergopt
