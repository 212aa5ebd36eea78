#include "ergopt/spectral.hpp"

#include <cmath>
#include <numeric>
#include <queue>

#include "ergopt/errors.hpp"
#include "ergopt/scc.hpp"

namespace ergopt {

std::vector<std::vector<int>> strongly_connected_components(
    const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> index(n, -1), low(n, 0), on_stack(n, 0);
    std::vector<int> stack_v;
    std::vector<std::vector<int>> comps;
    int next_index = 0;

    // Explicit DFS stack: (vertex, next child position).
    std::vector<std::pair<int, size_t>> call;
    for (int root = 0; root < n; ++root) {
        if (index[root] != -1) continue;
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [v, ci] = call.back();
            if (ci == 0) {
                index[v] = low[v] = next_index++;
                stack_v.push_back(v);
                on_stack[v] = 1;
            }
            if (ci < adj[v].size()) {
                int w = adj[v][ci++];
                if (index[w] == -1) {
                    call.emplace_back(w, 0);
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
            } else {
                if (low[v] == index[v]) {
                    std::vector<int> comp;
                    int w;
                    do {
                        w = stack_v.back();
                        stack_v.pop_back();
                        on_stack[w] = 0;
                        comp.push_back(w);
                    } while (w != v);
                    comps.push_back(std::move(comp));
                }
                int vv = v;
                call.pop_back();
                if (!call.empty()) {
                    int parent = call.back().first;
                    low[parent] = std::min(low[parent], low[vv]);
                }
            }
        }
    }
    return comps;
}

int graph_period(const std::vector<std::vector<int>>& adj) {
    const int n = static_cast<int>(adj.size());
    std::vector<int> level(n, -1);
    std::queue<int> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
        int u = q.front();
        q.pop();
        for (int v : adj[u])
            if (level[v] == -1) {
                level[v] = level[u] + 1;
                q.push(v);
            }
    }
    // The period is the gcd of the level defects over all edges.
    long g = 0;
    for (int u = 0; u < n; ++u)
        for (int v : adj[u]) g = std::gcd(g, static_cast<long>(level[u]) + 1 - level[v]);
    return static_cast<int>(g < 0 ? -g : g);
}

namespace {

BigFloat max_entry(const BigMatrix& m) {
    BigFloat best = m.a[0];
    for (const auto& x : m.a) best = max(best, x);
    return best;
}

BigMatrix square_and_normalize(const BigMatrix& m, mpfr_prec_t prec) {
    const int n = m.n;
    BigMatrix r(n, prec);
    BigFloat acc(prec), t(prec);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            mpfr_set_zero(acc.raw(), 1);
            for (int k = 0; k < n; ++k) {
                mpfr_mul(t.raw(), m.at(i, k).raw(), m.at(k, j).raw(), MPFR_RNDN);
                mpfr_add(acc.raw(), acc.raw(), t.raw(), MPFR_RNDN);
            }
            r.at(i, j) = acc;
        }
    }
    BigFloat scale = max_entry(r);
    for (auto& x : r.a) x /= scale;
    return r;
}

} // namespace

SpectralResult log_spectral_radius(const BigMatrix& m0, const SpectralOptions& opts) {
    const int n = m0.n;
    if (n == 1) {
        SpectralResult res;
        if (m0.at(0, 0).sign() <= 0)
            throw NoCycleError("log_spectral_radius: 1x1 matrix with nonpositive entry");
        res.log_radius = log(m0.at(0, 0));
        res.bracket_width = BigFloat::from_double(0.0, opts.precision);
        res.eigenvector = {BigFloat::from_double(1.0, opts.precision)};
        return res;
    }

    // Requested tolerance, tightened by the optional power-of-two bound.
    // Exponent arithmetic because these routinely underflow double.
    BigFloat tol_b = BigFloat::from_double(opts.log_rel_tol, opts.precision);
    if (opts.tol_exp2 < 0) tol_b = min(tol_b, BigFloat::two_pow(opts.tol_exp2, opts.precision));
    tol_b = max(tol_b, BigFloat::two_pow(16 - static_cast<long>(opts.precision), opts.precision));

    // Near-periodic spectra drain roughly log2(1/modulus-gap) mantissa bits
    // out of the squaring cascade: the rank-1 deficit doubles each round and
    // the injected rounding errors double with it. The loss is unknown ahead
    // of time, so when the iterate freezes into a fixed point of
    // square-and-normalize above tolerance, the cascade restarts at twice
    // the working precision.
    long total_rounds = 0;
    for (mpfr_prec_t wp = opts.precision;; wp *= 2) {
        BigMatrix cur(n, wp);
        for (int i = 0; i < n * n; ++i) {
            cur.a[i] = m0.a[i];
            mpfr_prec_round(cur.a[i].raw(), wp, MPFR_RNDN);
        }
        {
            BigFloat scale = max_entry(cur);
            if (scale.sign() <= 0) throw NoCycleError("log_spectral_radius: zero matrix");
            for (auto& x : cur.a) x /= scale;
        }

        std::vector<BigFloat> u(n, BigFloat(wp)), mu(n, BigFloat(wp));
        BigFloat t(wp);
        SpectralResult res;
        const long inner_budget = 2 * static_cast<long>(wp) + 256;
        for (long round = 0; round <= inner_budget; ++round, ++total_rounds) {
            for (int i = 0; i < n; ++i) {
                mpfr_set_zero(u[i].raw(), 1);
                for (int j = 0; j < n; ++j)
                    mpfr_add(u[i].raw(), u[i].raw(), cur.at(i, j).raw(), MPFR_RNDN);
            }
            BigFloat usup = u[0];
            for (int i = 1; i < n; ++i) usup = max(usup, u[i]);
            for (int i = 0; i < n; ++i) u[i] /= usup;

            // Collatz-Wielandt bracket against the original matrix.
            bool valid = true;
            for (int i = 0; i < n && valid; ++i) {
                mpfr_set_zero(mu[i].raw(), 1);
                for (int j = 0; j < n; ++j) {
                    mpfr_mul(t.raw(), m0.at(i, j).raw(), u[j].raw(), MPFR_RNDN);
                    mpfr_add(mu[i].raw(), mu[i].raw(), t.raw(), MPFR_RNDN);
                }
                if (mu[i].sign() <= 0 || u[i].sign() <= 0) valid = false;
            }
            if (valid) {
                BigFloat lo(wp), hi(wp);
                for (int i = 0; i < n; ++i) {
                    mpfr_div(t.raw(), mu[i].raw(), u[i].raw(), MPFR_RNDN);
                    if (i == 0) { lo = t; hi = t; }
                    else { lo = min(lo, t); hi = max(hi, t); }
                }
                BigFloat llo = log(lo), lhi = log(hi);
                BigFloat width = lhi - llo;
                if (width <= tol_b) {
                    res.log_radius = (llo + lhi) / BigFloat::from_double(2.0, wp);
                    res.bracket_width = width;
                    res.eigenvector = u;
                    res.squarings = total_rounds;
                    return res;
                }
            }
            if (total_rounds >= opts.max_squarings)
                throw NoConvergenceError("log_spectral_radius: no convergence after " +
                                         std::to_string(total_rounds) + " squarings");

            BigMatrix next = square_and_normalize(cur, wp);
            bool stalled = true;
            for (int i = 0; i < n * n && stalled; ++i)
                stalled = mpfr_equal_p(next.a[i].raw(), cur.a[i].raw());
            cur = std::move(next);
            if (stalled) break;  // fixed point of the float map: retry wider
        }
        if (wp > 64 * opts.precision + 4096)
            throw NoConvergenceError(
                "log_spectral_radius: stalled even at working precision " + std::to_string(wp));
    }
}

BigFloat entropy_of_counts(const std::vector<std::vector<long>>& counts,
                           mpfr_prec_t precision, double log_rel_tol) {
    const int n = static_cast<int>(counts.size());
    std::vector<std::vector<int>> adj(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (counts[i][j] > 0) adj[i].push_back(j);

    SpectralOptions opts;
    opts.precision = precision;
    opts.log_rel_tol = log_rel_tol;

    bool found = false;
    BigFloat best(precision);
    for (const auto& comp : strongly_connected_components(adj)) {
        // Keep only pieces with at least one internal edge.
        std::vector<int> pos(n, -1);
        for (size_t i = 0; i < comp.size(); ++i) pos[comp[i]] = static_cast<int>(i);
        bool has_edge = false;
        for (int v : comp)
            for (int w : adj[v])
                if (pos[w] != -1) has_edge = true;
        if (!has_edge) continue;

        const int m = static_cast<int>(comp.size());
        std::vector<std::vector<int>> sub_adj(m);
        long edge_total = 0;
        bool unit_counts = true;
        for (int v : comp)
            for (int w : adj[v])
                if (pos[w] != -1) {
                    sub_adj[pos[v]].push_back(pos[w]);
                    edge_total += counts[v][w];
                    unit_counts = unit_counts && counts[v][w] == 1;
                }
        // A bare permutation cycle has Perron root exactly 1.
        bool permutation = unit_counts && edge_total == m;
        for (const auto& row : sub_adj) permutation = permutation && row.size() == 1;

        BigFloat log_rho(precision);
        if (permutation) {
            // log_rho stays exactly 0
        } else if (graph_period(sub_adj) == 1) {
            BigMatrix sub(m, precision);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    sub.at(i, j) = BigFloat::from_long(counts[comp[i]][comp[j]], precision);
            log_rho = log_spectral_radius(sub, opts).log_radius;
        } else {
            // Periodic piece: shift by the identity to open a modulus gap,
            // then undo the shift. rho >= 1 here, so no cancellation.
            BigMatrix sub(m, precision);
            for (int i = 0; i < m; ++i)
                for (int j = 0; j < m; ++j)
                    sub.at(i, j) = BigFloat::from_long(counts[comp[i]][comp[j]] + (i == j ? 1 : 0),
                                                       precision);
            BigFloat shifted = log_spectral_radius(sub, opts).log_radius;
            log_rho = log(expm1(shifted));
        }
        if (!found || log_rho > best) {
            best = log_rho;
            found = true;
        }
    }
    if (!found) throw NoCycleError("entropy_of_counts: nilpotent adjacency has no cycle");
    return best;
}

} // namespace ergopt
