#include "ergopt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ergopt/barriers.hpp"
#include "ergopt/errors.hpp"
#include "ergopt/pressure.hpp"
#include "ergopt/scc.hpp"
#include "ergopt/tropical_exact.hpp"

namespace ergopt {

namespace {

constexpr int kMaxCycleVertices = 12;

double trop_diff(MaxPlusValue a, const TropQ& b) {
    if (a.is_bottom() != !b.has_value()) return std::numeric_limits<double>::infinity();
    if (a.is_bottom()) return 0.0;
    return std::fabs(a.value() - b->to_double());
}

} // namespace

void for_each_simple_cycle(const WeightedEdgeGraph& graph,
                           const std::function<void(const std::vector<int>&)>& visit) {
    const int n = graph.vertex_count();
    std::vector<char> on_stack(n, 0);
    std::vector<int> path;

    // Vertex-simple cycles, canonicalized by their smallest vertex.
    auto dfs = [&](auto&& self, int start, int v) -> void {
        for (int e : graph.out_edges(v)) {
            int w = graph.edge(e).head;
            if (w < start) continue;
            if (w == start) {
                path.push_back(e);
                visit(path);
                path.pop_back();
            } else if (!on_stack[w]) {
                on_stack[w] = 1;
                path.push_back(e);
                self(self, start, w);
                path.pop_back();
                on_stack[w] = 0;
            }
        }
    };
    for (int s = 0; s < n; ++s) {
        on_stack[s] = 1;
        dfs(dfs, s, s);
        on_stack[s] = 0;
    }
}

double oracle_max_cycle_mean(const WeightedEdgeGraph& graph) {
    if (graph.vertex_count() > kMaxCycleVertices)
        throw TooLargeError("oracle_max_cycle_mean: more than " +
                            std::to_string(kMaxCycleVertices) + " vertices");
    bool found = false;
    double best = 0.0;
    for_each_simple_cycle(graph, [&](const std::vector<int>& cyc) {
        double s = 0.0;
        for (int e : cyc) s += graph.edge(e).weight;
        double mean = s / static_cast<double>(cyc.size());
        if (!found || mean > best) best = mean;
        found = true;
    });
    if (!found) throw NoCycleError("oracle_max_cycle_mean: no cycle");
    return best;
}

double oracle_max_cycle_mean_matrix(const MaxPlusMatrix& m) {
    const int n = m.size();
    if (n > kMaxCycleVertices)
        throw TooLargeError("oracle_max_cycle_mean_matrix: more than " +
                            std::to_string(kMaxCycleVertices) + " vertices");
    bool found = false;
    double best = 0.0;
    std::vector<char> on_stack(n, 0);
    auto dfs = [&](auto&& self, int start, int v, double sum, int len) -> void {
        for (int w = start; w < n; ++w) {
            MaxPlusValue x = m.at(v, w);
            if (x.is_bottom()) continue;
            if (w == start) {
                double mean = (sum + x.value()) / static_cast<double>(len + 1);
                if (!found || mean > best) best = mean;
                found = true;
            } else if (!on_stack[w]) {
                on_stack[w] = 1;
                self(self, start, w, sum + x.value(), len + 1);
                on_stack[w] = 0;
            }
        }
    };
    for (int s = 0; s < n; ++s) {
        on_stack[s] = 1;
        dfs(dfs, s, s, 0.0, 0);
        on_stack[s] = 0;
    }
    if (!found) throw NoCycleError("oracle_max_cycle_mean_matrix: no cycle");
    return best;
}

MaxPlusValue oracle_mane(const WeightedEdgeGraph& g, int u, int v, int max_len) {
    const int n = g.vertex_count();
    if (max_len < n)
        throw TooLargeError("oracle_mane: max_len must be at least the vertex count");
    std::vector<MaxPlusValue> cur(n, MaxPlusValue::bottom());
    cur[u] = MaxPlusValue::of(0.0);
    MaxPlusValue best = MaxPlusValue::bottom();
    int last_improvement = 0;
    for (int l = 1; l <= max_len; ++l) {
        std::vector<MaxPlusValue> next(n, MaxPlusValue::bottom());
        for (const Edge& e : g.edges())
            next[e.head] = oplus(next[e.head], otimes(cur[e.tail], MaxPlusValue::of(e.weight)));
        cur = std::move(next);
        MaxPlusValue cand = oplus(best, cur[v]);
        if (!(cand == best)) {
            best = cand;
            last_improvement = l;
        }
    }
    // With all cycles <= 0 the running max is final once a window of
    // |vertices| lengths passes without improvement.
    if (last_improvement > max_len - n)
        throw TooLargeError("oracle_mane: value still improving at length " +
                            std::to_string(last_improvement) + "; increase max_len");
    return best;
}

double oracle_pressure_words(const SymbolicSystem& system,
                             const LocallyConstantPotential& potential, double beta, int n) {
    const int d = system.alphabet_size();
    const int k = potential.range();
    if (n < k) throw WordTooShortError("oracle_pressure_words: n below the potential range");
    if (d > 3 || n > 18)
        throw TooLargeError("oracle_pressure_words: enumeration limited to D <= 3, n <= 18");

    // O(1) cylinder lookup by rolling base-D index.
    int pk = 1;
    for (int i = 0; i < k; ++i) pk *= d;
    std::vector<double> table(pk, std::numeric_limits<double>::quiet_NaN());
    Word w(k, 0);
    for (int idx = 0; idx < pk; ++idx) {
        int x = idx;
        for (int i = k - 1; i >= 0; --i) {
            w[i] = x % d;
            x /= d;
        }
        if (potential.has(w)) table[idx] = potential.value(w);
    }
    const int mod = pk / d;

    LogSumAccumulator acc;
    auto rec = [&](auto&& self, int depth, int last, int window, double sum) -> void {
        if (depth == n) {
            acc.add(beta * sum);
            return;
        }
        for (Symbol a = 0; a < d; ++a) {
            if (depth > 0 && !system.allows(last, a)) continue;
            int next_window = (window % mod) * d + a;
            double next_sum = sum;
            if (depth + 1 >= k) next_sum += table[next_window];
            self(self, depth + 1, a, next_window, next_sum);
        }
    };
    rec(rec, 0, 0, 0, 0.0);
    return acc.log_sum() / static_cast<double>(n);
}

MaxPlusValue oracle_s_ext(const AubryDecomposition& decomp, const WeightedEdgeGraph& g, int j,
                          int i, int max_len) {
    const auto& comp_j = decomp.components[j].vertices;
    auto row = [&](int target) {
        MaxPlusValue best = MaxPlusValue::bottom();
        for (int u : comp_j) {
            MaxPlusValue s = oracle_mane(g, u, target, max_len);
            if (u == target) s = oplus(s, MaxPlusValue::of(0.0));
            best = oplus(best, s);
        }
        return best;
    };

    bool have_entry = false, hit_bottom = false;
    double best = 0.0;
    for (int v : decomp.components[i].vertices) {
        MaxPlusValue inner = MaxPlusValue::bottom();
        bool has_edge = false;
        for (int e : g.in_edges(v)) {
            if (decomp.edge_component[e] == i) continue;
            has_edge = true;
            inner = oplus(inner, otimes(row(g.edge(e).tail), MaxPlusValue::of(g.edge(e).weight)));
        }
        if (!has_edge) continue;  // same skip convention as the fast path
        if (inner.is_bottom()) {
            hit_bottom = true;
        } else if (!have_entry || inner.value() < best) {
            best = inner.value();
            have_entry = true;
        }
    }
    if (hit_bottom || !have_entry) return MaxPlusValue::bottom();
    return MaxPlusValue::of(best);
}

ExactPipeline exact_pipeline(const WeightedEdgeGraph& graph,
                             const LocallyConstantPotential& potential,
                             const AubryDecomposition& decomp) {
    const int n = graph.vertex_count();
    const int ne = graph.edge_count();
    std::vector<Rational> wq;
    wq.reserve(ne);
    for (const Edge& e : graph.edges()) wq.push_back(potential.exact_value(e.label));

    ExactPipeline out;

    // Exact m(A): best simple-cycle mean.
    if (n > kMaxCycleVertices)
        throw TooLargeError("exact_pipeline: more than " + std::to_string(kMaxCycleVertices) +
                            " vertices");
    bool first = true;
    for_each_simple_cycle(graph, [&](const std::vector<int>& cyc) {
        Rational s(0);
        for (int e : cyc) s += wq[e];
        Rational mean = s / Rational(static_cast<long>(cyc.size()));
        if (first || mean > out.m) out.m = mean;
        first = false;
    });
    if (first) throw NoCycleError("exact_pipeline: no cycle");

    auto matrix_of = [&](const std::vector<Rational>& weights) {
        std::vector<std::vector<TropQ>> m(n, std::vector<TropQ>(n));
        for (int e = 0; e < ne; ++e) {
            const Edge& ed = graph.edge(e);
            m[ed.tail][ed.head] = oplusq(m[ed.tail][ed.head], TropQ(weights[e]));
        }
        return m;
    };

    // Subaction from the closure of (w - m).
    std::vector<Rational> shifted;
    shifted.reserve(ne);
    for (int e = 0; e < ne; ++e) shifted.push_back(wq[e] - out.m);
    auto star_shift = star_exact(matrix_of(shifted));

    std::vector<char> critical_vertex(n, 0);
    for (int e = 0; e < ne; ++e) {
        const Edge& ed = graph.edge(e);
        TropQ back = star_shift[ed.head][ed.tail];
        if (back && (shifted[e] + *back).sign() == 0)
            critical_vertex[ed.tail] = critical_vertex[ed.head] = 1;
    }
    out.subaction.assign(n, Rational(0));
    for (int v = 0; v < n; ++v) {
        TropQ best;
        for (int c = 0; c < n; ++c)
            if (critical_vertex[c]) best = oplusq(best, star_shift[c][v]);
        if (!best) throw Error("exact_pipeline: vertex unreachable from the critical graph");
        out.subaction[v] = *best;
    }

    out.normalized_weights.reserve(ne);
    for (int e = 0; e < ne; ++e) {
        const Edge& ed = graph.edge(e);
        out.normalized_weights.push_back(shifted[e] + out.subaction[ed.tail] -
                                         out.subaction[ed.head]);
    }
    for (const Rational& r : out.normalized_weights)
        if (r.sign() > 0) throw Error("exact_pipeline: positive normalized weight");

    auto star_bar = star_exact(matrix_of(out.normalized_weights));
    for (int e = 0; e < ne; ++e) {
        const Edge& ed = graph.edge(e);
        TropQ back = star_bar[ed.head][ed.tail];
        if (back && (out.normalized_weights[e] + *back).sign() == 0) out.critical_edges.push_back(e);
    }
    if (out.critical_edges != decomp.critical_edges)
        throw Error("exact_pipeline: critical edge set differs from the double-precision one");

    // Walk suprema of length >= 1: one explicit step, then the closure.
    auto wbar_mat = matrix_of(out.normalized_weights);
    std::vector<std::vector<TropQ>> star_plus(n, std::vector<TropQ>(n));
    for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v) {
            TropQ best;
            for (int t = 0; t < n; ++t) best = oplusq(best, otimesq(wbar_mat[u][t], star_bar[t][v]));
            star_plus[u][v] = best;
        }

    out.component_rows.resize(decomp.components.size());
    for (const auto& comp : decomp.components) {
        auto& row = out.component_rows[comp.id];
        row.assign(n, std::nullopt);
        for (int v = 0; v < n; ++v) {
            TropQ best;
            for (int u : comp.vertices) {
                TropQ s = star_plus[u][v];
                if (u == v) s = oplusq(s, TropQ(Rational(0)));
                best = oplusq(best, s);
            }
            row[v] = best;
        }
    }

    const int nc = static_cast<int>(decomp.components.size());
    out.ext_entries.assign(nc, std::vector<TropQ>(nc));
    for (int j = 0; j < nc; ++j)
        for (int i = 0; i < nc; ++i) {
            bool have_entry = false, hit_bottom = false;
            Rational best(0);
            for (int v : decomp.components[i].vertices) {
                TropQ inner;
                bool has_edge = false;
                for (int e : graph.in_edges(v)) {
                    if (decomp.edge_component[e] == i) continue;
                    has_edge = true;
                    inner = oplusq(inner, otimesq(out.component_rows[j][graph.edge(e).tail],
                                                  TropQ(out.normalized_weights[e])));
                }
                if (!has_edge) continue;
                if (!inner) {
                    hit_bottom = true;
                } else if (!have_entry || *inner < best) {
                    best = *inner;
                    have_entry = true;
                }
            }
            if (!hit_bottom && have_entry) out.ext_entries[j][i] = best;
        }

    // Max-plus eigenvalue of the restricted matrix by exact cycle enumeration.
    const auto& ids = decomp.max_entropy_ids;
    const int r = static_cast<int>(ids.size());
    std::vector<char> on_stack(r, 0);
    TropQ lambda;
    auto dfs = [&](auto&& self, int start, int a, Rational sum, long len) -> void {
        for (int b = start; b < r; ++b) {
            // Arc a -> b costs entering component a from component b.
            const TropQ& x = out.ext_entries[ids[b]][ids[a]];
            if (!x) continue;
            if (b == start) {
                Rational mean = (sum + *x) / Rational(len + 1);
                lambda = oplusq(lambda, TropQ(mean));
            } else if (!on_stack[b]) {
                on_stack[b] = 1;
                self(self, start, b, sum + *x, len + 1);
                on_stack[b] = 0;
            }
        }
    };
    for (int s = 0; s < r; ++s) {
        on_stack[s] = 1;
        dfs(dfs, s, s, Rational(0), 0);
        on_stack[s] = 0;
    }
    out.lambda = lambda;
    return out;
}

PlantedInstance random_planted_instance(std::mt19937& rng) {
    auto pick = [&](int lo, int hi) {
        return lo + static_cast<int>(rng() % static_cast<unsigned>(hi - lo + 1));
    };

    const int d = pick(2, 3);
    std::vector<std::vector<int>> transitions;
    bool full = pick(0, 9) < 3;
    if (full) {
        transitions.assign(d, std::vector<int>(d, 1));
    } else {
        for (int attempt = 0;; ++attempt) {
            transitions.assign(d, std::vector<int>(d, 0));
            for (auto& row : transitions)
                for (auto& x : row) x = pick(0, 9) < 7 ? 1 : 0;
            try {
                SymbolicSystem probe(d, transitions);
                break;
            } catch (const Error&) {
                if (attempt > 200) {
                    transitions.assign(d, std::vector<int>(d, 1));
                    full = true;
                    break;
                }
            }
        }
    }
    SymbolicSystem system(d, transitions);
    full = system.is_full_shift();

    const int k = full ? pick(1, 3) : pick(2, 3);
    std::map<Word, Rational> values;
    for (const Word& w : enumerate_words(system, k)) values.emplace(w, Rational(-pick(0, 5)));

    // Plant a zero cycle so that m(A) = 0 and the Aubry set is nonempty.
    {
        LocallyConstantPotential draft(k, values);
        WeightedEdgeGraph graph = recode(system, k);
        std::vector<int> pos(graph.vertex_count(), -1);
        std::vector<int> walk;
        int v = pick(0, graph.vertex_count() - 1);
        while (pos[v] == -1) {
            pos[v] = static_cast<int>(walk.size());
            auto outs = graph.out_edges(v);
            int e = outs[static_cast<size_t>(pick(0, static_cast<int>(outs.size()) - 1))];
            walk.push_back(e);
            v = graph.edge(e).head;
        }
        for (size_t t = static_cast<size_t>(pos[v]); t < walk.size(); ++t)
            values[graph.edge(walk[t]).label] = Rational(0);
    }

    PlantedInstance inst{std::move(system), LocallyConstantPotential(k, std::move(values)),
                         "D=" + std::to_string(d) + " k=" + std::to_string(k) +
                             (full ? " full" : "")};
    return inst;
}

std::vector<OracleReport> run_oracle_checks(const SymbolicSystem& system,
                                            const LocallyConstantPotential& potential,
                                            const OracleOptions& options) {
    std::vector<OracleReport> reports;
    const std::string inst = "D=" + std::to_string(system.alphabet_size()) +
                             " k=" + std::to_string(potential.range());

    auto push = [&](const std::string& what, double opt, double orc, std::string note = "") {
        OracleReport r;
        r.checked_quantity = what;
        r.optimized_value = opt;
        r.oracle_value = orc;
        r.discrepancy = std::fabs(opt - orc);
        r.instance = inst;
        r.pass = r.discrepancy <= options.tol;
        r.note = std::move(note);
        reports.push_back(std::move(r));
    };
    auto push_skip = [&](const std::string& what, const std::string& why) {
        OracleReport r;
        r.checked_quantity = what;
        r.instance = inst;
        r.skipped = true;
        r.note = why;
        reports.push_back(std::move(r));
    };

    WeightedEdgeGraph graph = attach_potential(recode(system, potential.range()), potential);
    const int n = graph.vertex_count();
    const int max_len = options.max_len > 0 ? options.max_len : 2 * n + 4;

    NormalizationData norm = normalize(graph);
    WeightedEdgeGraph gbar = normalized_graph(graph, norm);
    AubryDecomposition decomp = irreducible_components(gbar, norm.subaction);
    ManeData mane = mane_matrix(gbar, decomp);
    ExtCostMatrix ext = ext_cost_matrix(decomp, mane, gbar);
    RateBound rb = rate_bound(ext, decomp);

    try {
        push("m(A) vs cycle enumeration", maximal_average(graph), oracle_max_cycle_mean(graph));
    } catch (const TooLargeError& e) {
        push_skip("m(A) vs cycle enumeration", e.what());
    }

    try {
        double worst = 0.0;
        std::string worst_pair;
        for (int u = 0; u < n; ++u)
            for (int v = 0; v < n; ++v) {
                MaxPlusValue walked = oracle_mane(gbar, u, v, max_len);
                MaxPlusValue fast = mane.star_plus.at(u, v);
                double d = fast.is_bottom() != walked.is_bottom()
                               ? std::numeric_limits<double>::infinity()
                               : (fast.is_bottom() ? 0.0
                                                   : std::fabs(fast.value() - walked.value()));
                if (d >= worst) {
                    worst = d;
                    worst_pair = "(" + std::to_string(u) + "," + std::to_string(v) + ")";
                }
            }
        OracleReport r;
        r.checked_quantity = "Mane star vs walk enumeration";
        r.discrepancy = worst;
        r.instance = inst;
        r.pass = worst <= options.tol;
        r.note = "worst pair " + worst_pair;
        reports.push_back(std::move(r));
    } catch (const TooLargeError& e) {
        push_skip("Mane star vs walk enumeration", e.what());
    }

    const int nc = static_cast<int>(decomp.components.size());
    try {
        for (int j = 0; j < nc; ++j)
            for (int i = 0; i < nc; ++i) {
                MaxPlusValue fast = ext.entries.at(j, i);
                MaxPlusValue direct = oracle_s_ext(decomp, gbar, j, i, max_len);
                std::string what =
                    "S_ext(" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ") vs direct recomputation";
                if (fast.is_bottom() != direct.is_bottom()) {
                    push(what, fast.is_bottom() ? -1.0 : fast.value(),
                         direct.is_bottom() ? -1.0 : direct.value(), "bottom mismatch");
                    reports.back().pass = false;
                    reports.back().discrepancy = std::numeric_limits<double>::infinity();
                } else if (!fast.is_bottom()) {
                    push(what, fast.value(), direct.value());
                }
            }
    } catch (const TooLargeError& e) {
        push_skip("S_ext vs direct recomputation", e.what());
    }

    try {
        ExactPipeline exact = exact_pipeline(graph, potential, decomp);
        push("m(A) vs exact rational", norm.m, exact.m.to_double());
        double worst_v = 0.0;
        for (int v = 0; v < n; ++v)
            worst_v = std::max(worst_v,
                               std::fabs(norm.subaction[v] - exact.subaction[v].to_double()));
        push("subaction V vs exact rational", worst_v, 0.0);
        double worst_w = 0.0;
        for (int e = 0; e < graph.edge_count(); ++e)
            worst_w = std::max(worst_w, std::fabs(norm.normalized_weights[e] -
                                                  exact.normalized_weights[e].to_double()));
        push("normalized weights vs exact rational", worst_w, 0.0);
        double worst_s = 0.0;
        for (int j = 0; j < nc; ++j)
            for (int i = 0; i < nc; ++i)
                worst_s = std::max(worst_s, trop_diff(ext.entries.at(j, i), exact.ext_entries[j][i]));
        push("S_ext vs exact rational", worst_s, 0.0);
        push("lambda vs exact rational", rb.lambda.is_bottom() ? 0.0 : rb.lambda.value(),
             exact.lambda ? exact.lambda->to_double() : 0.0,
             rb.lambda.is_bottom() != !exact.lambda.has_value() ? "bottom mismatch" : "");
        if (rb.lambda.is_bottom() != !exact.lambda.has_value()) {
            reports.back().pass = false;
            reports.back().discrepancy = std::numeric_limits<double>::infinity();
        }
    } catch (const TooLargeError& e) {
        push_skip("exact rational pipeline", e.what());
    }

    try {
        PrecisionConfig cfg;
        cfg.mantissa_bits = options.pressure_bits;
        check_precision(cfg, options.beta, rb.lambda);
        double p_norm = pressure(gbar, options.beta, cfg).to_double();
        double p_original = p_norm + options.beta * norm.m;
        double words = oracle_pressure_words(system, potential, options.beta, options.word_length);
        double wbar_max = 0.0;
        for (double w : norm.normalized_weights) wbar_max = std::max(wbar_max, std::fabs(w));
        double envelope = (options.beta * wbar_max + std::log(system.alphabet_size())) /
                          options.word_length;
        OracleReport r;
        r.checked_quantity = "pressure vs word sums (O(1/n) envelope)";
        r.optimized_value = p_original;
        r.oracle_value = words;
        r.discrepancy = std::fabs(p_original - words);
        r.instance = inst;
        r.pass = r.discrepancy <= envelope + options.tol;
        r.note = "envelope " + std::to_string(envelope) + " at n = " +
                 std::to_string(options.word_length);
        reports.push_back(std::move(r));
    } catch (const TooLargeError& e) {
        push_skip("pressure vs word sums", e.what());
    }

    return reports;
}

} // namespace ergopt
