#pragma once

#include <vector>

#include "ergopt/bigfloat.hpp"

namespace ergopt {

/// Dense square matrix of BigFloats, row-major.
struct BigMatrix {
    int n = 0;
    std::vector<BigFloat> a;

    BigMatrix() = default;
    BigMatrix(int n_, mpfr_prec_t prec) : n(n_), a(static_cast<size_t>(n_) * n_, BigFloat(prec)) {}

    BigFloat& at(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
    const BigFloat& at(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
};

struct SpectralOptions {
    mpfr_prec_t precision = 320;  // working precision of the iteration
    double log_rel_tol = 1e-40;   // certified bracket width on log(rho)
    long tol_exp2 = 0;            // when < 0, also require width <= 2^tol_exp2
    long max_squarings = 100000;
};

struct SpectralResult {
    BigFloat log_radius;             // midpoint of the certified bracket
    BigFloat bracket_width;          // upper bound on |log_radius - log rho|*2
    std::vector<BigFloat> eigenvector;  // right Perron vector, sup-norm 1
    long squarings = 0;
};

/// log of the Perron root of a nonnegative primitive matrix (strongly
/// connected and aperiodic). Convergence is by repeated squaring of the
/// normalized matrix; each round is certified with a Collatz-Wielandt
/// bracket min_v (Mu)_v/u_v <= rho <= max_v (Mu)_v/u_v, so near-degenerate
/// spectra (the beta -> infinity regime) still converge in O(log(1/gap))
/// rounds instead of O(1/gap) vector iterations.
SpectralResult log_spectral_radius(const BigMatrix& m, const SpectralOptions& opts);

/// Topological entropy (log Perron root) of a nonnegative integer count
/// matrix: max over nontrivial strongly connected pieces. Periodic pieces
/// are handled by a diagonal shift. Throws NoCycleError when nilpotent.
BigFloat entropy_of_counts(const std::vector<std::vector<long>>& counts,
                           mpfr_prec_t precision, double log_rel_tol);

} // namespace ergopt
