#include "ergopt/maxplus.hpp"

#include <cmath>
#include <cstdlib>
#include <string>

#include "ergopt/errors.hpp"
#include "ergopt/scc.hpp"

namespace ergopt {

MaxPlusMatrix MaxPlusMatrix::shifted(double c) const {
    MaxPlusMatrix r(n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            MaxPlusValue v = at(i, j);
            r.at(i, j) = v.is_bottom() ? v : MaxPlusValue::of(v.value() - c);
        }
    return r;
}

namespace {

std::vector<std::vector<int>> finite_adjacency(const MaxPlusMatrix& m) {
    std::vector<std::vector<int>> adj(m.size());
    for (int i = 0; i < m.size(); ++i)
        for (int j = 0; j < m.size(); ++j)
            if (!m.at(i, j).is_bottom()) adj[i].push_back(j);
    return adj;
}

/// Karp on one strongly connected piece; comp maps local -> global indices.
/// Returns false when the piece carries no edge at all.
bool karp_on_component(const MaxPlusMatrix& m, const std::vector<int>& comp, double& mean) {
    const int n = static_cast<int>(comp.size());
    std::vector<int> pos(m.size(), -1);
    for (int i = 0; i < n; ++i) pos[comp[i]] = i;

    bool has_edge = false;
    for (int i = 0; i < n && !has_edge; ++i)
        for (int j = 0; j < n && !has_edge; ++j)
            if (!m.at(comp[i], comp[j]).is_bottom()) has_edge = true;
    if (!has_edge) return false;

    // F[l][v] = max weight of a walk of length exactly l from the source.
    std::vector<std::vector<double>> f(n + 1, std::vector<double>(n, 0.0));
    std::vector<std::vector<char>> def(n + 1, std::vector<char>(n, 0));
    def[0][0] = 1;
    for (int l = 1; l <= n; ++l)
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u) {
                if (!def[l - 1][u]) continue;
                MaxPlusValue w = m.at(comp[u], comp[v]);
                if (w.is_bottom()) continue;
                double cand = f[l - 1][u] + w.value();
                if (!def[l][v] || cand > f[l][v]) {
                    f[l][v] = cand;
                    def[l][v] = 1;
                }
            }

    bool found = false;
    double best = 0.0;
    for (int v = 0; v < n; ++v) {
        if (!def[n][v]) continue;
        bool inner_found = false;
        double inner = 0.0;
        for (int l = 0; l < n; ++l) {
            if (!def[l][v]) continue;
            double cand = (f[n][v] - f[l][v]) / (n - l);
            if (!inner_found || cand < inner) {
                inner = cand;
                inner_found = true;
            }
        }
        if (inner_found && (!found || inner > best)) {
            best = inner;
            found = true;
        }
    }
    if (found) mean = best;
    return found;
}

} // namespace

double max_cycle_mean(const MaxPlusMatrix& m) {
    bool found = false;
    double best = 0.0;
    for (const auto& comp : strongly_connected_components(finite_adjacency(m))) {
        double mean;
        if (karp_on_component(m, comp, mean)) {
            if (!found || mean > best) best = mean;
            found = true;
        }
    }
    if (!found) throw NoCycleError("max_cycle_mean: matrix has no cycle");
    return best;
}

MaxPlusMatrix kleene_star(const MaxPlusMatrix& m, double tol) {
    const int n = m.size();
    MaxPlusMatrix star = m;
    for (int w = 0; w < n; ++w)
        for (int u = 0; u < n; ++u) {
            MaxPlusValue uw = star.at(u, w);
            if (uw.is_bottom()) continue;
            for (int v = 0; v < n; ++v)
                star.at(u, v) = oplus(star.at(u, v), otimes(uw, star.at(w, v)));
        }
    for (int v = 0; v < n; ++v) {
        MaxPlusValue d = star.at(v, v);
        if (!d.is_bottom() && d.value() > tol)
            throw PositiveCycleError("kleene_star: positive cycle of weight " +
                                     std::to_string(d.value()) + " through vertex " +
                                     std::to_string(v));
        star.at(v, v) = MaxPlusValue::of(0.0);  // empty walk
    }
    return star;
}

std::vector<std::pair<int, int>> critical_edges(const MaxPlusMatrix& m, double lambda,
                                                double tol) {
    const int n = m.size();
    MaxPlusMatrix star = kleene_star(m.shifted(lambda), tol < 1e-12 ? 1e-12 : tol);
    std::vector<std::pair<int, int>> crit;
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            MaxPlusValue w = m.at(u, v);
            if (w.is_bottom()) continue;
            MaxPlusValue back = star.at(v, u);
            if (back.is_bottom()) continue;
            if ((w.value() - lambda) + back.value() >= -tol) crit.emplace_back(u, v);
        }
    return crit;
}

CycleMeanWitness max_cycle_mean_with_witness(const MaxPlusMatrix& m) {
    CycleMeanWitness res;
    res.mean = max_cycle_mean(m);
    // Any cycle inside the critical graph attains the maximum mean, so a
    // greedy walk over critical edges closes one within |V| steps.
    auto crit = critical_edges(m, res.mean, 1e-10);
    std::vector<std::vector<int>> succ(m.size());
    for (auto [u, v] : crit) succ[u].push_back(v);

    std::vector<int> pos_in_path(m.size(), -1);
    std::vector<int> path;
    int cur = crit.front().first;
    while (pos_in_path[cur] == -1) {
        pos_in_path[cur] = static_cast<int>(path.size());
        path.push_back(cur);
        cur = succ[cur].front();
    }
    res.cycle.assign(path.begin() + pos_in_path[cur], path.end());
    return res;
}

std::vector<double> principal_eigenvector(const MaxPlusMatrix& m) {
    const int n = m.size();
    double lambda = max_cycle_mean(m);
    MaxPlusMatrix star = kleene_star(m.shifted(lambda));
    auto crit = critical_edges(m, lambda);

    std::vector<char> critical_vertex(n, 0);
    for (auto [u, v] : crit) critical_vertex[u] = critical_vertex[v] = 1;

    std::vector<double> vec(n);
    for (int v = 0; v < n; ++v) {
        MaxPlusValue best = MaxPlusValue::bottom();
        for (int c = 0; c < n; ++c)
            if (critical_vertex[c]) best = oplus(best, star.at(c, v));
        if (best.is_bottom())
            throw Error("principal_eigenvector: vertex " + std::to_string(v) +
                        " unreachable from the critical graph");
        vec[v] = best.value();
    }
    return vec;
}

} // namespace ergopt
