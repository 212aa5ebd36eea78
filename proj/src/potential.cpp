#include "ergopt/potential.hpp"

#include <algorithm>
#include <cmath>

#include "ergopt/errors.hpp"
#include "ergopt/scc.hpp"
#include "ergopt/tropical_exact.hpp"

namespace ergopt {

LocallyConstantPotential::LocallyConstantPotential(int range, std::map<Word, Rational> values)
    : range_(range), exact_(std::move(values)) {
    if (range_ < 1) throw ValidationError("potential range must be >= 1");
    for (const auto& [w, q] : exact_) {
        if (static_cast<int>(w.size()) != range_)
            throw ValidationError("potential value keyed by \"" + word_to_string(w) +
                                  "\" does not have length " + std::to_string(range_));
        approx_[w] = q.to_double();
    }
}

double LocallyConstantPotential::value(const Word& w) const {
    auto it = approx_.find(w);
    if (it == approx_.end())
        throw MissingCylinderValueError("no potential value for word \"" + word_to_string(w) + "\"");
    return it->second;
}

const Rational& LocallyConstantPotential::exact_value(const Word& w) const {
    auto it = exact_.find(w);
    if (it == exact_.end())
        throw MissingCylinderValueError("no potential value for word \"" + word_to_string(w) + "\"");
    return it->second;
}

double LocallyConstantPotential::max_abs_value() const {
    double m = 0.0;
    for (const auto& [w, v] : approx_) m = std::max(m, std::fabs(v));
    return m;
}

WeightedEdgeGraph attach_potential(const WeightedEdgeGraph& graph,
                                   const LocallyConstantPotential& potential) {
    if (potential.range() != graph.range())
        throw RangeMismatchError("potential range " + std::to_string(potential.range()) +
                                 " does not match graph range " + std::to_string(graph.range()));
    std::vector<Word> missing;
    for (const Edge& e : graph.edges())
        if (!potential.has(e.label)) missing.push_back(e.label);
    if (!missing.empty()) {
        std::string msg = "missing potential values for:";
        for (const Word& w : missing) msg += " \"" + word_to_string(w) + "\"";
        throw MissingCylinderValueError(msg);
    }
    std::vector<double> weights;
    weights.reserve(graph.edge_count());
    for (const Edge& e : graph.edges()) weights.push_back(potential.value(e.label));
    return graph.with_weights(weights);
}

double birkhoff_sum(const LocallyConstantPotential& potential, const Word& word) {
    const int k = potential.range();
    const int n = static_cast<int>(word.size());
    if (n < k)
        throw WordTooShortError("birkhoff_sum: word of length " + std::to_string(n) +
                                " is shorter than the range " + std::to_string(k));
    double s = 0.0;
    for (int i = 0; i + k <= n; ++i) s += potential.value(Word(word.begin() + i, word.begin() + i + k));
    return s;
}

MaxPlusMatrix weight_matrix(const WeightedEdgeGraph& graph) {
    MaxPlusMatrix m(graph.vertex_count());
    for (const Edge& e : graph.edges())
        m.at(e.tail, e.head) = oplus(m.at(e.tail, e.head), MaxPlusValue::of(e.weight));
    return m;
}

double maximal_average(const WeightedEdgeGraph& graph) {
    return max_cycle_mean(weight_matrix(graph));
}

Word maximizing_cycle(const WeightedEdgeGraph& graph) {
    auto witness = max_cycle_mean_with_witness(weight_matrix(graph));
    const auto& cyc = witness.cycle;
    Word word;
    for (size_t i = 0; i < cyc.size(); ++i) {
        int u = cyc[i], v = cyc[(i + 1) % cyc.size()];
        // The best parallel edge is the one the matrix entry stands for.
        int best = -1;
        for (int e : graph.out_edges(u))
            if (graph.edge(e).head == v &&
                (best == -1 || graph.edge(e).weight > graph.edge(best).weight))
                best = e;
        word.push_back(graph.edge(best).label.front());
    }
    return word;
}

std::vector<double> calibrated_subaction(const WeightedEdgeGraph& graph) {
    return principal_eigenvector(weight_matrix(graph));
}

NormalizationData normalize(const WeightedEdgeGraph& graph, double tol_nonpos, double tol_zero) {
    NormalizationData nd;
    nd.m = maximal_average(graph);
    nd.subaction = calibrated_subaction(graph);
    nd.normalized_weights.reserve(graph.edge_count());
    for (const Edge& e : graph.edges())
        nd.normalized_weights.push_back(e.weight - nd.m + nd.subaction[e.tail] -
                                        nd.subaction[e.head]);

    for (int e = 0; e < graph.edge_count(); ++e)
        if (nd.normalized_weights[e] > tol_nonpos)
            throw NormalizationFailureError("normalized weight " +
                                            std::to_string(nd.normalized_weights[e]) +
                                            " on edge \"" + word_to_string(graph.edge(e).label) +
                                            "\" is positive");
    for (int v = 0; v < graph.vertex_count(); ++v) {
        double best = -1e300;
        for (int e : graph.in_edges(v)) best = std::max(best, nd.normalized_weights[e]);
        if (std::fabs(best) > tol_zero)
            throw NormalizationFailureError("calibration defect " + std::to_string(best) +
                                            " at vertex " + std::to_string(v));
    }
    {
        MaxPlusMatrix wbar(graph.vertex_count());
        for (int e = 0; e < graph.edge_count(); ++e) {
            const Edge& ed = graph.edge(e);
            wbar.at(ed.tail, ed.head) =
                oplus(wbar.at(ed.tail, ed.head), MaxPlusValue::of(nd.normalized_weights[e]));
        }
        if (std::fabs(max_cycle_mean(wbar)) > tol_zero)
            throw NormalizationFailureError("maximum cycle mean of normalized weights is not 0");
    }
    return nd;
}

WeightedEdgeGraph normalized_graph(const WeightedEdgeGraph& graph, const NormalizationData& nd) {
    return graph.with_weights(nd.normalized_weights);
}

namespace {

/// Karp on one strongly connected piece, exact rationals.
bool karp_exact_on_component(const std::vector<std::vector<TropQ>>& m,
                             const std::vector<int>& comp, Rational& mean) {
    const int n = static_cast<int>(comp.size());
    bool has_edge = false;
    for (int i = 0; i < n && !has_edge; ++i)
        for (int j = 0; j < n && !has_edge; ++j)
            if (m[comp[i]][comp[j]]) has_edge = true;
    if (!has_edge) return false;

    std::vector<std::vector<TropQ>> f(n + 1, std::vector<TropQ>(n));
    f[0][0] = Rational(0);
    for (int l = 1; l <= n; ++l)
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u)
                f[l][v] = oplusq(f[l][v], otimesq(f[l - 1][u], m[comp[u]][comp[v]]));

    bool found = false;
    for (int v = 0; v < n; ++v) {
        if (!f[n][v]) continue;
        bool inner_found = false;
        Rational inner;
        for (int l = 0; l < n; ++l) {
            if (!f[l][v]) continue;
            Rational cand = (*f[n][v] - *f[l][v]) / Rational(n - l);
            if (!inner_found || cand < inner) {
                inner = cand;
                inner_found = true;
            }
        }
        if (inner_found && (!found || inner > mean)) {
            mean = inner;
            found = true;
        }
    }
    return found;
}

} // namespace

NormalizationData exact_normalize(const WeightedEdgeGraph& graph,
                                  const LocallyConstantPotential& potential) {
    if (potential.range() != graph.range())
        throw RangeMismatchError("potential range does not match graph range");
    const int n = graph.vertex_count();
    const int ne = graph.edge_count();
    std::vector<Rational> wq;
    wq.reserve(ne);
    for (const Edge& e : graph.edges()) wq.push_back(potential.exact_value(e.label));

    std::vector<std::vector<TropQ>> mat(n, std::vector<TropQ>(n));
    for (int e = 0; e < ne; ++e) {
        const Edge& ed = graph.edge(e);
        mat[ed.tail][ed.head] = oplusq(mat[ed.tail][ed.head], TropQ(wq[e]));
    }

    Rational m;
    {
        std::vector<std::vector<int>> adj(n);
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v)
                if (mat[u][v]) adj[u].push_back(v);
        bool found = false;
        for (const auto& comp : strongly_connected_components(adj)) {
            Rational mean;
            if (karp_exact_on_component(mat, comp, mean)) {
                if (!found || mean > m) m = mean;
                found = true;
            }
        }
        if (!found) throw NoCycleError("exact_normalize: no cycle");
    }

    std::vector<std::vector<TropQ>> shifted = mat;
    for (auto& row : shifted)
        for (auto& x : row)
            if (x) x = *x - m;
    auto star = star_exact(shifted);

    std::vector<char> critical_vertex(n, 0);
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            if (!shifted[u][v] || !star[v][u]) continue;
            if ((*shifted[u][v] + *star[v][u]).sign() == 0) critical_vertex[u] = critical_vertex[v] = 1;
        }

    std::vector<Rational> subaction(n);
    for (int v = 0; v < n; ++v) {
        TropQ best;
        for (int c = 0; c < n; ++c)
            if (critical_vertex[c]) best = oplusq(best, star[c][v]);
        if (!best)
            throw NormalizationFailureError("exact_normalize: vertex " + std::to_string(v) +
                                            " unreachable from the critical graph");
        subaction[v] = *best;
    }

    NormalizationData nd;
    nd.m = m.to_double();
    nd.subaction.reserve(n);
    for (const Rational& v : subaction) nd.subaction.push_back(v.to_double());
    nd.normalized_weights.reserve(ne);
    for (int e = 0; e < ne; ++e) {
        const Edge& ed = graph.edge(e);
        Rational wbar = wq[e] - m + subaction[ed.tail] - subaction[ed.head];
        if (wbar.sign() > 0)
            throw NormalizationFailureError("exact_normalize: positive weight on edge \"" +
                                            word_to_string(ed.label) + "\"");
        nd.normalized_weights.push_back(wbar.to_double());
    }
    for (int v = 0; v < n; ++v) {
        double best = -1e300;
        for (int e : graph.in_edges(v)) best = std::max(best, nd.normalized_weights[e]);
        if (best != 0.0)
            throw NormalizationFailureError("exact_normalize: calibration defect at vertex " +
                                            std::to_string(v));
    }
    return nd;
}

} // namespace ergopt
