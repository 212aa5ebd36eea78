#include "ergopt/sft.hpp"

#include <algorithm>
#include <map>

#include "ergopt/errors.hpp"
#include "ergopt/scc.hpp"
#include "ergopt/spectral.hpp"

namespace ergopt {

std::string word_to_string(const Word& w) {
    std::string s;
    s.reserve(w.size());
    for (Symbol a : w) s.push_back(static_cast<char>('0' + a));
    return s;
}

Word word_from_string(std::string_view s) {
    Word w;
    w.reserve(s.size());
    for (char c : s) {
        if (c < '0' || c > '9')
            throw ParseError("word \"" + std::string(s) + "\": symbol '" + c +
                             "' is not a digit (alphabets up to 10 symbols use one digit each)");
        w.push_back(c - '0');
    }
    return w;
}

SymbolicSystem::SymbolicSystem(int alphabet_size, std::vector<std::vector<int>> transitions)
    : d_(alphabet_size), transitions_(std::move(transitions)) {
    if (d_ < 2) throw ValidationError("alphabet size must be at least 2");
    if (static_cast<int>(transitions_.size()) != d_)
        throw ValidationError("transition table must be DxD");
    for (const auto& row : transitions_) {
        if (static_cast<int>(row.size()) != d_)
            throw ValidationError("transition table must be DxD");
        for (int x : row)
            if (x != 0 && x != 1) throw ValidationError("transition entries must be 0 or 1");
    }

    for (int a = 0; a < d_; ++a) {
        bool row_ok = false, col_ok = false;
        for (int b = 0; b < d_; ++b) {
            row_ok = row_ok || transitions_[a][b] != 0;
            col_ok = col_ok || transitions_[b][a] != 0;
        }
        if (!row_ok)
            throw StrandedSymbolError("symbol " + std::to_string(a) + " has no successor");
        if (!col_ok)
            throw StrandedSymbolError("symbol " + std::to_string(a) + " has no predecessor");
    }

    // Primitivity: some boolean power within the Wielandt bound D^2-2D+2
    // must be all ones.
    const int bound = d_ * d_ - 2 * d_ + 2;
    std::vector<std::vector<int>> p = transitions_;
    auto all_ones = [&](const std::vector<std::vector<int>>& m) {
        for (const auto& row : m)
            for (int x : row)
                if (!x) return false;
        return true;
    };
    bool primitive = all_ones(p);
    for (int e = 2; e <= bound && !primitive; ++e) {
        std::vector<std::vector<int>> q(d_, std::vector<int>(d_, 0));
        for (int i = 0; i < d_; ++i)
            for (int k = 0; k < d_; ++k)
                if (p[i][k])
                    for (int j = 0; j < d_; ++j)
                        if (transitions_[k][j]) q[i][j] = 1;
        p = std::move(q);
        primitive = all_ones(p);
    }
    if (!primitive)
        throw NonPrimitiveError("transition matrix is not primitive (no all-ones power up to exponent " +
                                std::to_string(bound) + ")");
}

bool SymbolicSystem::admissible(const Word& w) const {
    for (Symbol a : w)
        if (a < 0 || a >= d_) return false;
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (!allows(w[i], w[i + 1])) return false;
    return true;
}

bool SymbolicSystem::is_full_shift() const {
    for (const auto& row : transitions_)
        for (int x : row)
            if (!x) return false;
    return true;
}

SymbolicSystem build_system(int alphabet_size, std::vector<std::vector<int>> transitions) {
    return SymbolicSystem(alphabet_size, std::move(transitions));
}

WeightedEdgeGraph::WeightedEdgeGraph(int k, std::vector<Word> vertices, std::vector<Edge> edges)
    : k_(k), vertices_(std::move(vertices)), edges_(std::move(edges)) {
    const int n = vertex_count();
    in_.resize(n);
    out_.resize(n);
    for (int e = 0; e < edge_count(); ++e) {
        out_[edges_[e].tail].push_back(e);
        in_[edges_[e].head].push_back(e);
    }
    for (int v = 0; v < n; ++v)
        if (in_[v].empty() || out_[v].empty())
            throw ValidationError("edge graph vertex " + word_to_string(vertices_[v]) +
                                  " lacks an incoming or outgoing edge");
    std::vector<std::vector<int>> adj(n);
    for (const Edge& e : edges_) adj[e.tail].push_back(e.head);
    if (strongly_connected_components(adj).size() != 1)
        throw ValidationError("edge graph is not strongly connected");
}

int WeightedEdgeGraph::vertex_index(const Word& w) const {
    for (int v = 0; v < vertex_count(); ++v)
        if (vertices_[v] == w) return v;
    return -1;
}

WeightedEdgeGraph WeightedEdgeGraph::with_weights(const std::vector<double>& weights) const {
    std::vector<Edge> edges = edges_;
    for (size_t e = 0; e < edges.size(); ++e) edges[e].weight = weights[e];
    return WeightedEdgeGraph(k_, vertices_, std::move(edges));
}

std::vector<std::vector<long>> WeightedEdgeGraph::count_matrix() const {
    std::vector<std::vector<long>> c(vertex_count(), std::vector<long>(vertex_count(), 0));
    for (const Edge& e : edges_) ++c[e.tail][e.head];
    return c;
}

WeightedEdgeGraph recode(const SymbolicSystem& system, int k) {
    if (k < 1) throw ValidationError("recode: range must be >= 1");
    const int d = system.alphabet_size();
    if (k == 1) {
        if (!system.is_full_shift())
            throw RangeTooSmallError(
                "range 1 requires a full shift; re-run with range >= 2 so that the "
                "transition constraints live on the edges");
        std::vector<Edge> edges;
        for (Symbol a = 0; a < d; ++a) edges.push_back({0, 0, Word{a}, 0.0});
        return WeightedEdgeGraph(1, {Word{}}, std::move(edges));
    }

    std::vector<Word> vertices = enumerate_words(system, k - 1);
    std::map<Word, int> index;
    for (int v = 0; v < static_cast<int>(vertices.size()); ++v) index[vertices[v]] = v;

    std::vector<Edge> edges;
    for (const Word& w : enumerate_words(system, k)) {
        Word tail(w.begin(), w.end() - 1);
        Word head(w.begin() + 1, w.end());
        edges.push_back({index.at(tail), index.at(head), w, 0.0});
    }
    return WeightedEdgeGraph(k, std::move(vertices), std::move(edges));
}

std::vector<Word> enumerate_words(const SymbolicSystem& system, int n) {
    if (n < 1) throw ValidationError("enumerate_words: length must be >= 1");
    std::vector<Word> out;
    Word cur;
    const int d = system.alphabet_size();
    // Lexicographic DFS.
    auto rec = [&](auto&& self) -> void {
        if (static_cast<int>(cur.size()) == n) {
            out.push_back(cur);
            return;
        }
        for (Symbol a = 0; a < d; ++a) {
            if (!cur.empty() && !system.allows(cur.back(), a)) continue;
            cur.push_back(a);
            self(self);
            cur.pop_back();
        }
    };
    rec(rec);
    return out;
}

double topological_entropy(const std::vector<std::vector<long>>& adjacency) {
    // 128-bit run of the shared spectral core; the pressure module re-runs
    // it at the configured precision when the entropy feeds a residual.
    return entropy_of_counts(adjacency, 128, 1e-13).to_double();
}

} // namespace ergopt
