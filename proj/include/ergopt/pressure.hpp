#pragma once

#include <span>
#include <utility>
#include <vector>

#include "ergopt/aubry.hpp"
#include "ergopt/barriers.hpp"
#include "ergopt/bigfloat.hpp"
#include "ergopt/sft.hpp"

namespace ergopt {

struct PrecisionConfig {
    long mantissa_bits = 256;
    double power_iter_rel_tol = 1e-40;
    long max_iters = 100000;
};

struct PressurePoint {
    double beta = 0.0;
    BigFloat pressure;     // P(beta) of the normalized potential
    BigFloat residual;     // P(beta) - h, in extended precision
    double log_residual = 0.0;
    bool trusted = false;  // residual above the 2^(-mantissa_bits+8) floor
    bool exact_zero = false;
};

struct RateReport {
    std::vector<PressurePoint> points;
    std::vector<double> slopes;  // slope into point t from the previous trusted point; NaN if undefined
    double gamma_estimate = 0.0; // slope between the two largest trusted betas
    bool exact_zero = false;     // every point had residual exactly 0
    // Numerical-analysis guards over the grid (tolerance 1e-12 * scale):
    bool monotone = true;
    bool convex = true;
    double max_increase = 0.0;         // worst first difference (should be <= 0)
    double min_second_difference = 0.0;
    // Verdict (filled by verify_rate_bound):
    MaxPlusValue lambda;
    double tol = 1e-3;
    bool pass = false;
    bool lambda_vacuous = false;  // no finite cycle in the rate matrix
};

/// Reject up front any (grid, precision) pair whose residual e^(beta*lambda)
/// would drop under 2^(-mantissa_bits+16). Throws PrecisionError with the
/// bits/beta needed to fix the run.
void check_precision(const PrecisionConfig& cfg, double beta_max, MaxPlusValue lambda_estimate);

/// One application of the beta-transfer operator:
/// out(v) = sum over edges e with head v of e^(beta*w(e)) * in(tail(e)).
std::vector<BigFloat> transfer_apply(const WeightedEdgeGraph& normalized, double beta,
                                     const std::vector<BigFloat>& in, const PrecisionConfig& cfg);

/// log of the dominant eigenvalue of the beta-transfer matrix, certified to
/// power_iter_rel_tol on the log scale. P of the original potential is
/// recovered as P_A(beta) = P(beta) + beta*m(A).
BigFloat pressure(const WeightedEdgeGraph& normalized, double beta, const PrecisionConfig& cfg);

/// Entropy of the maximal-entropy components, recomputed at the configured
/// precision (never reused from the double pass).
BigFloat entropy_extended(const WeightedEdgeGraph& normalized, const AubryDecomposition& decomp,
                          const PrecisionConfig& cfg);

/// Pressure at every beta of the grid (evaluations run in parallel),
/// residuals D = P - h by extended-precision subtraction. Points with
/// D < 2^(-mantissa_bits+8) are marked untrusted.
std::vector<PressurePoint> pressure_sweep(const WeightedEdgeGraph& normalized,
                                          const std::vector<double>& betas, const BigFloat& h,
                                          const PrecisionConfig& cfg);

/// Slope of log D into each point from the previous trusted point
/// (NaN where undefined); only trusted points participate.
std::vector<double> finite_difference_slopes(const std::vector<PressurePoint>& points);

/// Finite-difference slopes of log D against beta and the rate estimate
/// from the two largest trusted betas. Requires >= 3 trusted points unless
/// the residual is identically zero. Also fills the monotonicity/convexity
/// guards.
RateReport empirical_rate(std::vector<PressurePoint> points);

/// PASS iff gamma_estimate >= lambda - tol. A bottom lambda (no finite
/// cycle, e.g. the Aubry set is everything) bounds nothing and passes.
RateReport verify_rate_bound(RateReport report, const RateBound& bound, double tol = 1e-3);

struct EigenfunctionResult {
    std::vector<BigFloat> values;     // positive right eigenvector, sup-norm 1
    std::vector<double> log_scaled;   // (1/beta) log H per vertex
};

EigenfunctionResult eigenfunction(const WeightedEdgeGraph& normalized, double beta,
                                  const PrecisionConfig& cfg);

/// (1/n) log sum_i exp(n*(phi_i + psi_i)), stable under max-subtraction.
double scaled_log_sum_exp(std::span<const std::pair<double, double>> terms, long n);

/// Streaming accumulator with the same max-subtraction arithmetic, for sums
/// too large to materialize.
class LogSumAccumulator {
  public:
    void add(double exponent);           // accumulates exp(exponent)
    double log_sum() const;              // log of the accumulated sum
    long count() const { return count_; }

  private:
    double max_ = 0.0;
    double sum_ = 0.0;  // sum of exp(x - max_)
    long count_ = 0;
};

} // namespace ergopt
