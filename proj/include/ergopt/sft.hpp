#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ergopt {

using Symbol = int;
using Word = std::vector<Symbol>;

std::string word_to_string(const Word& w);
Word word_from_string(std::string_view s);  // single-digit symbols, alphabet <= 10

/// One-sided subshift of finite type over {0,...,D-1} with a 0/1 transition
/// table: "ab" is admissible iff transitions[a][b] == 1. Construction
/// validates that no symbol is stranded and that the matrix is primitive
/// (some boolean power within the Wielandt bound is all ones).
class SymbolicSystem {
  public:
    SymbolicSystem(int alphabet_size, std::vector<std::vector<int>> transitions);

    int alphabet_size() const { return d_; }
    bool allows(Symbol a, Symbol b) const { return transitions_[a][b] != 0; }
    bool admissible(const Word& w) const;
    const std::vector<std::vector<int>>& transitions() const { return transitions_; }
    bool is_full_shift() const;

  private:
    int d_;
    std::vector<std::vector<int>> transitions_;
};

/// Finite description of an eventually periodic point: preperiod then the
/// cycle repeated forever. The cycle must be nonempty.
struct EventuallyPeriodicPoint {
    Word preperiod;
    Word cycle;
};

struct Edge {
    int tail;
    int head;
    Word label;  // the k-word the edge reads
    double weight;
};

/// 1-step edge shift obtained by higher-block recoding: vertices are the
/// admissible (k-1)-words, edges the admissible k-words. For k = 1 (full
/// shift only) there is a single vertex carrying one loop per letter.
class WeightedEdgeGraph {
  public:
    WeightedEdgeGraph(int k, std::vector<Word> vertices, std::vector<Edge> edges);

    int range() const { return k_; }
    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const Word& vertex_word(int v) const { return vertices_[v]; }
    const std::vector<Word>& vertices() const { return vertices_; }
    const std::vector<Edge>& edges() const { return edges_; }
    const Edge& edge(int e) const { return edges_[e]; }
    std::span<const int> in_edges(int v) const { return in_[v]; }
    std::span<const int> out_edges(int v) const { return out_[v]; }
    int vertex_index(const Word& w) const;  // -1 if absent

    /// Copy with replaced edge weights (same topology).
    WeightedEdgeGraph with_weights(const std::vector<double>& weights) const;

    /// Count of parallel edges collapsed per (tail, head) pair.
    std::vector<std::vector<long>> count_matrix() const;

  private:
    int k_;
    std::vector<Word> vertices_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> in_, out_;
};

SymbolicSystem build_system(int alphabet_size, std::vector<std::vector<int>> transitions);

/// Higher-block recoding to range k; weights start at 0.
/// Throws RangeTooSmallError for k = 1 on a non-full shift.
WeightedEdgeGraph recode(const SymbolicSystem& system, int k);

/// All admissible n-words in lexicographic order, n >= 1.
std::vector<Word> enumerate_words(const SymbolicSystem& system, int n);

/// Natural log of the Perron root of a nonnegative integer adjacency
/// matrix (0/1 in the simplest use). 0 for a bare permutation cycle;
/// throws NoCycleError when the matrix is nilpotent.
double topological_entropy(const std::vector<std::vector<long>>& adjacency);

} // namespace ergopt
