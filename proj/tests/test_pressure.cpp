#include <doctest.h>

#include <cmath>
#include <vector>

#include "ergopt/errors.hpp"
#include "ergopt/io.hpp"
#include "ergopt/pressure.hpp"
#include "helpers.hpp"

using namespace ergopt;
using namespace ergopt::testing;

namespace {

struct Pipeline {
    WeightedEdgeGraph normalized;
    NormalizationData norm;
    AubryDecomposition decomp;
    RateBound rate;
};

Pipeline run(const WeightedEdgeGraph& g) {
    NormalizationData nd = normalize(g);
    WeightedEdgeGraph gbar = normalized_graph(g, nd);
    AubryDecomposition dec = irreducible_components(gbar, nd.subaction);
    ManeData md = mane_matrix(gbar, dec);
    ExtCostMatrix ext = ext_cost_matrix(dec, md, gbar);
    RateBound rb = rate_bound(ext, dec);
    return Pipeline{std::move(gbar), std::move(nd), std::move(dec), std::move(rb)};
}

PrecisionConfig cfg256() { return PrecisionConfig{}; }

constexpr mpfr_prec_t kRefPrec = 384;

// Closed-form pressures of the three reference systems, evaluated in MPFR.
BigFloat e2_closed_form(double beta) {
    BigFloat b = BigFloat::from_double(-beta, kRefPrec);
    return log(BigFloat::from_long(1, kRefPrec) + exp(b));
}

BigFloat e3_closed_form(double beta) {
    BigFloat b = BigFloat::from_double(-1.5 * beta, kRefPrec);
    return log(BigFloat::from_long(1, kRefPrec) + exp(b));
}

BigFloat e4_closed_form(double beta) {
    BigFloat one = BigFloat::from_long(1, kRefPrec);
    BigFloat e2b = exp(BigFloat::from_double(-2.0 * beta, kRefPrec));
    BigFloat disc = sqrt(one + BigFloat::from_long(8, kRefPrec) * e2b);
    return log((BigFloat::from_long(3, kRefPrec) + disc) / BigFloat::from_long(2, kRefPrec));
}

bool within_two_pow(const BigFloat& a, const BigFloat& b, long exp2) {
    return abs(a - b) <= BigFloat::two_pow(exp2, kRefPrec);
}

} // namespace

TEST_CASE("transfer_apply matches the hand computation") {
    Pipeline p3 = run(e3_graph());
    std::vector<BigFloat> in(2, BigFloat::from_long(1, 320));
    auto out = transfer_apply(p3.normalized, 1.0, in, cfg256());
    CHECK(out[0].to_double() == doctest::Approx(1.0 + std::exp(-2.0)).epsilon(1e-12));
    CHECK(out[1].to_double() == doctest::Approx(std::exp(-1.0) + 1.0).epsilon(1e-12));

    // beta = 0 is the adjacency action.
    auto deg = transfer_apply(p3.normalized, 0.0, in, cfg256());
    CHECK(deg[0].to_double() == doctest::Approx(2.0));
    CHECK(deg[1].to_double() == doctest::Approx(2.0));
}

TEST_CASE("pressure matches the closed forms to extended precision") {
    Pipeline p2 = run(e2_graph());
    Pipeline p3 = run(e3_graph());
    Pipeline p4 = run(e4_graph());
    for (double beta : {1.0, 10.0, 30.0}) {
        CHECK(within_two_pow(pressure(p2.normalized, beta, cfg256()), e2_closed_form(beta), -244));
        CHECK(within_two_pow(pressure(p3.normalized, beta, cfg256()), e3_closed_form(beta), -244));
        CHECK(within_two_pow(pressure(p4.normalized, beta, cfg256()), e4_closed_form(beta), -244));
    }
}

TEST_CASE("pressure at beta 0 is the topological entropy") {
    Pipeline p3 = run(e3_graph());
    CHECK(pressure(p3.normalized, 0.0, cfg256()).to_double() ==
          doctest::Approx(std::log(2.0)).epsilon(1e-12));
    Pipeline p4 = run(e4_graph());
    CHECK(pressure(p4.normalized, 0.0, cfg256()).to_double() ==
          doctest::Approx(std::log(3.0)).epsilon(1e-12));
}

TEST_CASE("sweep residuals against closed forms") {
    Pipeline p2 = run(e2_graph());
    BigFloat h2 = entropy_extended(p2.normalized, p2.decomp, cfg256());
    CHECK(h2.is_zero());  // single fixed point
    auto pts = pressure_sweep(p2.normalized, {10.0, 20.0}, h2, cfg256());
    CHECK(pts[0].residual.to_double() == doctest::Approx(4.5398e-5).epsilon(1e-4));
    CHECK(pts[1].residual.to_double() == doctest::Approx(2.0612e-9).epsilon(1e-4));
    CHECK(pts[0].trusted);
    CHECK(pts[1].trusted);

    Pipeline p3 = run(e3_graph());
    BigFloat h3 = entropy_extended(p3.normalized, p3.decomp, cfg256());
    auto pts3 = pressure_sweep(p3.normalized, {20.0}, h3, cfg256());
    CHECK(pts3[0].residual.to_double() == doctest::Approx(9.3576e-14).epsilon(1e-4));

    for (const auto& p : pts3) CHECK(p.residual.sign() >= 0);
}

TEST_CASE("residual is exactly zero for a coboundary potential") {
    auto zero = make_potential(2, {{"00", "0"}, {"01", "0"}, {"10", "0"}, {"11", "0"}});
    Pipeline pz = run(attach_potential(recode(full_shift(2), 2), zero));
    BigFloat h = entropy_extended(pz.normalized, pz.decomp, cfg256());
    auto pts = pressure_sweep(pz.normalized, {1.0, 5.0, 9.0}, h, cfg256());
    for (const auto& p : pts) {
        CHECK(p.exact_zero);
        CHECK(p.residual.is_zero());
    }
    RateReport r = empirical_rate(pts);
    CHECK(r.exact_zero);
    CHECK(std::isinf(r.gamma_estimate));
    CHECK(r.gamma_estimate < 0);
}

TEST_CASE("empirical rate recovers the decay exponents") {
    Pipeline p2 = run(e2_graph());
    BigFloat h2 = entropy_extended(p2.normalized, p2.decomp, cfg256());
    RateReport r2 = empirical_rate(pressure_sweep(p2.normalized, {20.0, 30.0, 40.0}, h2, cfg256()));
    CHECK(r2.gamma_estimate == doctest::Approx(-1.0).epsilon(1e-12));

    Pipeline p3 = run(e3_graph());
    BigFloat h3 = entropy_extended(p3.normalized, p3.decomp, cfg256());
    RateReport r3 = empirical_rate(pressure_sweep(p3.normalized, {20.0, 30.0, 40.0}, h3, cfg256()));
    CHECK(r3.gamma_estimate == doctest::Approx(-1.5).epsilon(1e-12));

    // Verdicts against the (known) rate bounds.
    RateBound b2;
    b2.lambda = MaxPlusValue::of(-1.0);
    CHECK(verify_rate_bound(r2, b2).pass);
    RateBound b3;
    b3.lambda = MaxPlusValue::of(-1.5);
    CHECK(verify_rate_bound(r3, b3).pass);
    RateBound wrong;
    wrong.lambda = MaxPlusValue::of(-0.5);  // stronger bound than the truth: must fail
    CHECK(!verify_rate_bound(r3, wrong).pass);
}

TEST_CASE("insufficient trusted points is an error") {
    Pipeline p2 = run(e2_graph());
    BigFloat h2 = entropy_extended(p2.normalized, p2.decomp, cfg256());
    auto pts = pressure_sweep(p2.normalized, {10.0, 20.0}, h2, cfg256());
    CHECK_THROWS_AS(empirical_rate(pts), InsufficientPointsError);
}

TEST_CASE("pressure guards: monotone and convex along the grid") {
    Pipeline p3 = run(e3_graph());
    BigFloat h3 = entropy_extended(p3.normalized, p3.decomp, cfg256());
    std::vector<double> grid;
    for (int t = 1; t <= 20; ++t) grid.push_back(t);
    RateReport r = empirical_rate(pressure_sweep(p3.normalized, grid, h3, cfg256()));
    CHECK(r.monotone);
    CHECK(r.convex);
    CHECK(r.max_increase <= 0.0);
    for (size_t t = 0; t < r.points.size(); ++t)
        if (!std::isnan(r.slopes[t]) && r.points[t].residual.cmp_d(1.0) < 0)
            CHECK(r.slopes[t] <= 0.0);
}

TEST_CASE("precision pre-check rejects underflowing grids") {
    PrecisionConfig small;
    small.mantissa_bits = 64;
    CHECK_THROWS_AS(check_precision(small, 50.0, MaxPlusValue::of(-1.5)), PrecisionError);
    CHECK_NOTHROW(check_precision(small, 10.0, MaxPlusValue::of(-1.5)));
    CHECK_NOTHROW(check_precision(small, 1e9, MaxPlusValue::bottom()));
    try {
        check_precision(small, 50.0, MaxPlusValue::of(-1.5));
    } catch (const PrecisionError& e) {
        std::string msg = e.what();
        CHECK(msg.find("precision_bits") != std::string::npos);
        CHECK(msg.find("beta") != std::string::npos);
    }
    PrecisionConfig tiny;
    tiny.mantissa_bits = 32;
    CHECK_THROWS_AS(check_precision(tiny, 1.0, MaxPlusValue::of(-1.0)), PrecisionError);
}

TEST_CASE("eigenfunction: calibration defect decays like 1/beta") {
    Pipeline p3 = run(e3_graph());
    for (double beta : {20.0, 50.0}) {
        EigenfunctionResult eig = eigenfunction(p3.normalized, beta, cfg256());
        for (const auto& v : eig.values) {
            CHECK(v.sign() > 0);
            CHECK(v.cmp_d(1.0) <= 0);
        }
        double defect = 0.0;
        for (int v = 0; v < p3.normalized.vertex_count(); ++v) {
            double best = -1e300;
            for (int e : p3.normalized.in_edges(v))
                best = std::max(best, p3.normalized.edge(e).weight +
                                          eig.log_scaled[p3.normalized.edge(e).tail]);
            defect = std::max(defect, std::fabs(eig.log_scaled[v] - best));
        }
        CHECK(defect <= std::log(2.0) / beta + 1e-12);
    }

    // Uniform eigenvector for the zero potential.
    auto zero = make_potential(2, {{"00", "0"}, {"01", "0"}, {"10", "0"}, {"11", "0"}});
    Pipeline pz = run(attach_potential(recode(full_shift(2), 2), zero));
    EigenfunctionResult eig = eigenfunction(pz.normalized, 7.0, cfg256());
    CHECK(eig.values[0].to_double() == doctest::Approx(1.0));
    CHECK(eig.values[1].to_double() == doctest::Approx(1.0));

    // Single-vertex graph: H = (1) and the scaled log vanishes.
    Pipeline p2 = run(e2_graph());
    EigenfunctionResult e1 = eigenfunction(p2.normalized, 3.0, cfg256());
    CHECK(e1.values.size() == 1);
    CHECK(e1.log_scaled[0] == doctest::Approx(0.0));
}

TEST_CASE("scaled_log_sum_exp") {
    std::vector<std::pair<double, double>> terms{{0.0, 0.0}, {-1.0, 0.0}};
    double v = scaled_log_sum_exp(terms, 10);
    CHECK(v == doctest::Approx(std::log1p(std::exp(-10.0)) / 10.0).epsilon(1e-12));

    std::vector<std::pair<double, double>> single{{0.25, 0.5}};
    for (long n : {1L, 5L, 50L}) CHECK(scaled_log_sum_exp(single, n) == doctest::Approx(0.75));

    std::vector<std::pair<double, double>> equal{{-1.0, 0.0}, {-1.0, 0.0}, {-1.0, 0.0}};
    CHECK(scaled_log_sum_exp(equal, 5) == doctest::Approx(-1.0 + std::log(3.0) / 5.0));

    CHECK_THROWS_AS(scaled_log_sum_exp({}, 3), EmptyTermListError);

    // Quantitative sandwich: the value sits within log(count)/n of the max.
    std::vector<std::pair<double, double>> mixed{{0.3, -0.1}, {-2.0, 1.0}, {0.1, 0.1}};
    for (long n : {1L, 2L, 7L, 40L}) {
        double max_term = 0.3 - 0.1;
        for (auto [a, b] : mixed) max_term = std::max(max_term, a + b);
        double lse = scaled_log_sum_exp(mixed, n);
        CHECK(lse >= max_term - 1e-12);
        CHECK(lse <= max_term + std::log(3.0) / static_cast<double>(n) + 1e-12);
    }
}

TEST_CASE("residual sweeps stay clean for non-dyadic weights") {
    // Weights in thirds; the maximizing cycle is the 2-cycle, the slow decay
    // channel is the 00 loop at normalized weight -1/6. With the exact
    // coboundary the residual is a clean e^(-beta/6); with double
    // normalization it would drown in 1e-16 noise.
    auto thirds = make_potential(2, {{"00", "-1/3"}, {"01", "0"}, {"10", "-1/3"}, {"11", "-2/3"}});
    WeightedEdgeGraph g = attach_potential(recode(full_shift(2), 2), thirds);
    NormalizationData nd = exact_normalize(g, thirds);
    WeightedEdgeGraph gbar = normalized_graph(g, nd);
    AubryDecomposition dec = irreducible_components(gbar, nd.subaction);
    CHECK(dec.components.size() == 1);
    CHECK(dec.components[0].entropy == doctest::Approx(0.0));

    PrecisionConfig cfg;
    BigFloat h = entropy_extended(gbar, dec, cfg);
    CHECK(h.is_zero());
    RateReport rep = empirical_rate(pressure_sweep(gbar, {30.0, 60.0, 90.0}, h, cfg));
    for (const auto& p : rep.points) {
        CHECK(p.trusted);
        CHECK(p.residual.sign() > 0);
    }
    CHECK(rep.gamma_estimate == doctest::Approx(-1.0 / 6.0).epsilon(1e-9));

    // The rate bound is set by the best excursion, here through the 11 loop;
    // the observed decay through the 00 loop is slower, which is the allowed
    // inequality direction.
    ManeData mane = mane_matrix(gbar, dec);
    ExtCostMatrix ext = ext_cost_matrix(dec, mane, gbar);
    RateBound rb = rate_bound(ext, dec);
    CHECK(rb.lambda.value() == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(verify_rate_bound(rep, rb).pass);
}

TEST_CASE("pressure of the original potential via the back conversion") {
    // P_A(beta) = P(beta) + beta*m for a constant shift: constant c has
    // P_A(beta) = log 2 + beta*c on the full 2-shift.
    auto constant = make_potential(1, {{"0", "-2"}, {"1", "-2"}});
    WeightedEdgeGraph g = attach_potential(recode(full_shift(2), 1), constant);
    NormalizationData nd = normalize(g);
    WeightedEdgeGraph gbar = normalized_graph(g, nd);
    double p_norm = pressure(gbar, 3.0, cfg256()).to_double();
    CHECK(p_norm + 3.0 * nd.m == doctest::Approx(std::log(2.0) - 6.0).epsilon(1e-12));
}
