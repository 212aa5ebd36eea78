#pragma once

#include <map>
#include <vector>

#include "ergopt/maxplus.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/sft.hpp"

namespace ergopt {

/// Potential depending only on the first `range` symbols: one real weight
/// per admissible range-word. Exact rationals are kept as the source of
/// truth (inputs are rationals by construction); the double mirror is what
/// the fast pipeline consumes.
class LocallyConstantPotential {
  public:
    LocallyConstantPotential(int range, std::map<Word, Rational> values);

    int range() const { return range_; }
    bool has(const Word& w) const { return exact_.count(w) != 0; }
    double value(const Word& w) const;               // throws MissingCylinderValueError
    const Rational& exact_value(const Word& w) const;
    const std::map<Word, Rational>& exact_values() const { return exact_; }
    double max_abs_value() const;

  private:
    int range_;
    std::map<Word, Rational> exact_;
    std::map<Word, double> approx_;
};

/// Result of the subaction normalization: m(A), the calibrated subaction V
/// per vertex, and the coboundary-corrected weights
/// wbar(e) = w(e) - m + V(tail) - V(head), nonpositive with calibration
/// max over incoming wbar = 0 at every vertex.
struct NormalizationData {
    double m = 0.0;
    std::vector<double> subaction;
    std::vector<double> normalized_weights;
};

/// Copy of the graph with each edge weighted by the potential value of its
/// label. Throws RangeMismatchError / MissingCylinderValueError (the latter
/// lists every missing word at once).
WeightedEdgeGraph attach_potential(const WeightedEdgeGraph& graph,
                                   const LocallyConstantPotential& potential);

/// Sum of the potential over all range-windows of `word`
/// (the Birkhoff sum S_{n-k+1} evaluated on the cylinder).
double birkhoff_sum(const LocallyConstantPotential& potential, const Word& word);

/// Max-plus matrix of the graph: entry (u,v) is the best weight among
/// parallel edges u -> v, bottom when there is none.
MaxPlusMatrix weight_matrix(const WeightedEdgeGraph& graph);

/// m(A): maximal average of the potential over invariant measures; equals
/// the maximum cycle mean of the weighted graph.
double maximal_average(const WeightedEdgeGraph& graph);

/// One periodic orbit supporting a maximizing measure, returned as the
/// symbol word of a simple cycle whose mean weight is m(A).
Word maximizing_cycle(const WeightedEdgeGraph& graph);

/// Calibrated subaction V per vertex: the canonical max-plus eigenvector
/// of the weight matrix, satisfying
/// V(head) = max over incoming edges of (w(e) - m + V(tail)).
std::vector<double> calibrated_subaction(const WeightedEdgeGraph& graph);

/// Full normalization with invariant checks; throws NormalizationFailureError
/// when any postcondition fails (an upstream bug, not a user error).
NormalizationData normalize(const WeightedEdgeGraph& graph, double tol_nonpos = 1e-12,
                            double tol_zero = 1e-9);

/// Normalization re-derived in exact rational arithmetic from the
/// potential's exact values, then rounded entrywise to double. Edges on a
/// maximizing cycle come out at exactly 0, so downstream residuals carry no
/// coboundary noise even for non-dyadic inputs (weights like 1/3). Same
/// algorithms as the double path (Karp, tropical closure); the oracle's
/// cycle-enumeration route stays independent.
NormalizationData exact_normalize(const WeightedEdgeGraph& graph,
                                  const LocallyConstantPotential& potential);

/// Same topology, weights replaced by the normalized weights.
WeightedEdgeGraph normalized_graph(const WeightedEdgeGraph& graph, const NormalizationData& nd);

} // namespace ergopt
