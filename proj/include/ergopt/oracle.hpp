#pragma once

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ergopt/aubry.hpp"
#include "ergopt/potential.hpp"
#include "ergopt/rational.hpp"
#include "ergopt/sft.hpp"

namespace ergopt {

/// Outcome of one oracle comparison; the discrepancy is recorded even when
/// the check passes.
struct OracleReport {
    std::string checked_quantity;
    double optimized_value = 0.0;
    double oracle_value = 0.0;
    double discrepancy = 0.0;
    std::string instance;
    bool pass = true;
    bool skipped = false;  // instance exceeded the oracle size limits
    std::string note;
};

/// Visit all vertex-simple cycles of the graph as edge-id sequences.
void for_each_simple_cycle(const WeightedEdgeGraph& graph,
                           const std::function<void(const std::vector<int>&)>& visit);

/// Max cycle mean by explicit simple-cycle enumeration (<= 12 vertices).
double oracle_max_cycle_mean(const WeightedEdgeGraph& graph);

/// Same, for a max-plus matrix (used to cross-check Karp on random matrices).
double oracle_max_cycle_mean_matrix(const MaxPlusMatrix& m);

/// Mane potential by explicit walk enumeration: best weight over walks
/// u -> v of lengths 1..max_len; verifies that the value has stabilized and
/// throws TooLargeError when max_len is too small for that.
MaxPlusValue oracle_mane(const WeightedEdgeGraph& normalized, int u, int v, int max_len);

/// Finite-n log-partition average over admissible n-words:
/// (1/n) log sum over words of e^(beta * birkhoff sum). Converges to the
/// pressure of the potential at rate O(1/n). n <= 18 and D <= 3.
double oracle_pressure_words(const SymbolicSystem& system,
                             const LocallyConstantPotential& potential, double beta, int n);

/// Definition-level recomputation of the entry cost S_ext(j, i) from
/// oracle_mane rows, with the identical empty-set skip convention.
MaxPlusValue oracle_s_ext(const AubryDecomposition& decomp, const WeightedEdgeGraph& normalized,
                          int j, int i, int max_len);

/// The whole zero-temperature pipeline in exact rational arithmetic
/// (inputs are rationals by construction). bottom is nullopt.
struct ExactPipeline {
    Rational m;
    std::vector<Rational> subaction;
    std::vector<Rational> normalized_weights;
    std::vector<int> critical_edges;
    std::vector<std::vector<std::optional<Rational>>> component_rows;  // [component][vertex]
    std::vector<std::vector<std::optional<Rational>>> ext_entries;     // [j][i]
    std::optional<Rational> lambda;  // over the decomposition's maximal-entropy ids
};

/// Runs the exact pipeline on the same recoded graph; the component/edge
/// structure is taken from the double-precision decomposition and verified
/// to coincide exactly.
ExactPipeline exact_pipeline(const WeightedEdgeGraph& graph,
                             const LocallyConstantPotential& potential,
                             const AubryDecomposition& decomp);

/// Random system with D <= 3, k <= 3, integer weights in [-5, 0] and a
/// zero-weight simple cycle planted by zeroing one, so the Aubry set is
/// nonempty and m(A) = 0.
struct PlantedInstance {
    SymbolicSystem system;
    LocallyConstantPotential potential;
    std::string description;
};
PlantedInstance random_planted_instance(std::mt19937& rng);

struct OracleOptions {
    int max_len = 0;       // 0: derived from the graph size
    double tol = 1e-10;
    double beta = 5.0;     // for the word-sum pressure check
    int word_length = 14;
    long pressure_bits = 256;
};

/// All oracle comparisons applicable at the instance size.
std::vector<OracleReport> run_oracle_checks(const SymbolicSystem& system,
                                            const LocallyConstantPotential& potential,
                                            const OracleOptions& options);

} // namespace ergopt
