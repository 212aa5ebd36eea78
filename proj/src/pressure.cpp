#include "ergopt/pressure.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "ergopt/errors.hpp"
#include "ergopt/scc.hpp"
#include "ergopt/spectral.hpp"

namespace ergopt {

namespace {

constexpr mpfr_prec_t kGuardBits = 64;

SpectralOptions spectral_options(const PrecisionConfig& cfg) {
    SpectralOptions o;
    o.precision = static_cast<mpfr_prec_t>(cfg.mantissa_bits) + kGuardBits;
    o.log_rel_tol = cfg.power_iter_rel_tol;
    // The bracket squares per round, so asking for the full mantissa rather
    // than power_iter_rel_tol costs at most one extra squaring.
    o.tol_exp2 = -(cfg.mantissa_bits - 10);
    o.max_squarings = cfg.max_iters;
    return o;
}

BigMatrix transfer_matrix(const WeightedEdgeGraph& g, double beta, mpfr_prec_t prec) {
    BigMatrix t(g.vertex_count(), prec);
    BigFloat b = BigFloat::from_double(beta, prec);
    for (const Edge& e : g.edges()) {
        BigFloat w = exp(b * BigFloat::from_double(e.weight, prec));
        t.at(e.head, e.tail) += w;
    }
    return t;
}

void validate_bits(const PrecisionConfig& cfg) {
    if (cfg.mantissa_bits < 64)
        throw PrecisionError("mantissa_bits must be at least 64 (got " +
                             std::to_string(cfg.mantissa_bits) + ")");
}

} // namespace

void check_precision(const PrecisionConfig& cfg, double beta_max, MaxPlusValue lambda_estimate) {
    validate_bits(cfg);
    if (lambda_estimate.is_bottom()) return;  // residual identically zero, nothing to underflow
    const double nats = beta_max * std::fabs(lambda_estimate.value());
    const double budget = (static_cast<double>(cfg.mantissa_bits) - 16) * std::log(2.0);
    if (nats > budget) {
        const long need_bits = static_cast<long>(std::ceil(nats / std::log(2.0))) + 16;
        const double max_beta = budget / std::fabs(lambda_estimate.value());
        throw PrecisionError(
            "residual ~ e^(beta*lambda) would underflow the " +
            std::to_string(cfg.mantissa_bits) + "-bit mantissa at beta = " +
            std::to_string(beta_max) + " with lambda ~ " +
            std::to_string(lambda_estimate.value()) + "; raise precision_bits to >= " +
            std::to_string(need_bits) + " or keep beta <= " + std::to_string(max_beta));
    }
}

std::vector<BigFloat> transfer_apply(const WeightedEdgeGraph& g, double beta,
                                     const std::vector<BigFloat>& in, const PrecisionConfig& cfg) {
    validate_bits(cfg);
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(cfg.mantissa_bits) + kGuardBits;
    BigFloat b = BigFloat::from_double(beta, prec);
    std::vector<BigFloat> out(g.vertex_count(), BigFloat(prec));
    for (const Edge& e : g.edges())
        out[e.head] += exp(b * BigFloat::from_double(e.weight, prec)) * in[e.tail];
    return out;
}

BigFloat pressure(const WeightedEdgeGraph& g, double beta, const PrecisionConfig& cfg) {
    validate_bits(cfg);
    const SpectralOptions opts = spectral_options(cfg);
    try {
        return log_spectral_radius(transfer_matrix(g, beta, opts.precision), opts).log_radius;
    } catch (const NoConvergenceError& e) {
        throw NoConvergenceError(std::string(e.what()) + " (beta = " + std::to_string(beta) + ")");
    }
}

BigFloat entropy_extended(const WeightedEdgeGraph& g, const AubryDecomposition& decomp,
                          const PrecisionConfig& cfg) {
    validate_bits(cfg);
    const SpectralOptions opts = spectral_options(cfg);
    bool found = false;
    BigFloat best(opts.precision);
    for (int id : decomp.max_entropy_ids) {
        const auto& comp = decomp.components[id];
        const int m = static_cast<int>(comp.vertices.size());
        std::vector<int> pos(g.vertex_count(), -1);
        for (int i = 0; i < m; ++i) pos[comp.vertices[i]] = i;
        std::vector<std::vector<long>> counts(m, std::vector<long>(m, 0));
        std::vector<std::vector<int>> adj(m);
        for (int e : comp.edges) {
            int a = pos[g.edge(e).tail], b = pos[g.edge(e).head];
            if (counts[a][b]++ == 0) adj[a].push_back(b);
        }
        bool permutation = static_cast<int>(comp.edges.size()) == m;
        for (const auto& row : adj) permutation = permutation && row.size() == 1;

        BigFloat h(opts.precision);
        if (permutation) {
            // A bare periodic orbit: Perron root exactly 1, entropy exactly 0.
        } else if (graph_period(adj) == 1) {
            // Same code path as pressure() so that a potential that is a pure
            // coboundary yields a residual of exactly zero.
            BigMatrix sub(m, opts.precision);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    sub.at(a, b) = BigFloat::from_long(counts[a][b], opts.precision);
            h = log_spectral_radius(sub, opts).log_radius;
        } else {
            BigMatrix sub(m, opts.precision);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    sub.at(a, b) = BigFloat::from_long(counts[a][b] + (a == b ? 1 : 0),
                                                       opts.precision);
            h = log(expm1(log_spectral_radius(sub, opts).log_radius));
        }
        if (!found || h > best) {
            best = h;
            found = true;
        }
    }
    if (!found) throw Error("entropy_extended: no maximal-entropy component");
    return best;
}

std::vector<PressurePoint> pressure_sweep(const WeightedEdgeGraph& g,
                                          const std::vector<double>& betas, const BigFloat& h,
                                          const PrecisionConfig& cfg) {
    validate_bits(cfg);
    const mpfr_prec_t prec = static_cast<mpfr_prec_t>(cfg.mantissa_bits) + kGuardBits;
    BigFloat floor_b(prec);
    mpfr_set_ui_2exp(floor_b.raw(), 1, static_cast<mpfr_exp_t>(-cfg.mantissa_bits + 8), MPFR_RNDN);

    std::vector<PressurePoint> points(betas.size());
    auto eval = [&](size_t t) {
        PressurePoint p;
        p.beta = betas[t];
        p.pressure = pressure(g, betas[t], cfg);
        p.residual = p.pressure - h;
        if (p.residual.cmp_d(-1e-12) < 0)
            throw Error("pressure " + std::to_string(p.pressure.to_double()) + " below entropy " +
                        std::to_string(h.to_double()) + " at beta = " + std::to_string(p.beta));
        if (p.residual.is_zero()) {
            p.exact_zero = true;
            p.trusted = false;
            p.log_residual = -std::numeric_limits<double>::infinity();
        } else {
            p.trusted = p.residual >= floor_b;
            p.log_residual = p.residual.sign() > 0
                                 ? log(p.residual).to_double()
                                 : std::numeric_limits<double>::quiet_NaN();
        }
        points[t] = std::move(p);
    };

    const size_t workers =
        std::min<size_t>(betas.size(), std::max(1u, std::thread::hardware_concurrency()));
    if (workers <= 1 || betas.size() <= 1) {
        for (size_t t = 0; t < betas.size(); ++t) eval(t);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::exception_ptr> errors(workers);
        std::vector<std::thread> pool;
        for (size_t w = 0; w < workers; ++w)
            pool.emplace_back([&, w] {
                try {
                    for (size_t t; (t = next.fetch_add(1)) < betas.size();) eval(t);
                } catch (...) {
                    errors[w] = std::current_exception();
                }
            });
        for (auto& th : pool) th.join();
        for (const auto& e : errors)
            if (e) std::rethrow_exception(e);
    }
    return points;
}

std::vector<double> finite_difference_slopes(const std::vector<PressurePoint>& points) {
    std::vector<double> slopes(points.size(), std::numeric_limits<double>::quiet_NaN());
    size_t prev = points.size();
    for (size_t t = 0; t < points.size(); ++t) {
        if (!points[t].trusted) continue;
        if (prev < t)
            slopes[t] = (points[t].log_residual - points[prev].log_residual) /
                        (points[t].beta - points[prev].beta);
        prev = t;
    }
    return slopes;
}

RateReport empirical_rate(std::vector<PressurePoint> points) {
    RateReport r;
    r.slopes.assign(points.size(), std::numeric_limits<double>::quiet_NaN());
    r.exact_zero = !points.empty();
    for (const auto& p : points) r.exact_zero = r.exact_zero && p.exact_zero;

    // Guards: P non-increasing and convex along the grid.
    if (points.size() >= 2) {
        double scale = 1.0;
        for (const auto& p : points) scale = std::max(scale, std::fabs(p.pressure.to_double()));
        const double tol = 1e-12 * scale;
        for (size_t t = 1; t < points.size(); ++t) {
            double d = (points[t].pressure - points[t - 1].pressure).to_double();
            r.max_increase = std::max(r.max_increase, d);
            if (d > tol) r.monotone = false;
        }
        for (size_t t = 2; t < points.size(); ++t) {
            double d2 = (points[t].pressure - points[t - 1].pressure).to_double() -
                        (points[t - 1].pressure - points[t - 2].pressure).to_double();
            r.min_second_difference = std::min(r.min_second_difference, d2);
            if (d2 < -tol) r.convex = false;
        }
    }

    std::vector<size_t> trusted;
    for (size_t t = 0; t < points.size(); ++t)
        if (points[t].trusted) trusted.push_back(t);

    if (r.exact_zero) {
        r.gamma_estimate = -std::numeric_limits<double>::infinity();
        r.points = std::move(points);
        return r;
    }
    if (trusted.size() < 3)
        throw InsufficientPointsError("empirical_rate: need at least 3 trusted points, have " +
                                      std::to_string(trusted.size()));

    r.slopes = finite_difference_slopes(points);
    r.gamma_estimate = r.slopes[trusted.back()];
    r.points = std::move(points);
    return r;
}

RateReport verify_rate_bound(RateReport report, const RateBound& bound, double tol) {
    report.lambda = bound.lambda;
    report.tol = tol;
    if (bound.lambda.is_bottom()) {
        // Nothing to bound: any decay (even P == h identically) passes.
        report.lambda_vacuous = true;
        report.pass = true;
    } else if (report.exact_zero) {
        // Residual identically zero next to a finite lower bound would mean
        // the bound is wrong; surface that honestly.
        report.pass = false;
    } else {
        report.pass = report.gamma_estimate >= bound.lambda.value() - tol;
    }
    return report;
}

EigenfunctionResult eigenfunction(const WeightedEdgeGraph& g, double beta,
                                  const PrecisionConfig& cfg) {
    validate_bits(cfg);
    const SpectralOptions opts = spectral_options(cfg);
    auto res = log_spectral_radius(transfer_matrix(g, beta, opts.precision), opts);
    EigenfunctionResult out;
    out.values = std::move(res.eigenvector);
    out.log_scaled.reserve(out.values.size());
    for (const auto& v : out.values) out.log_scaled.push_back(log(v).to_double() / beta);
    return out;
}

double scaled_log_sum_exp(std::span<const std::pair<double, double>> terms, long n) {
    if (terms.empty()) throw EmptyTermListError("scaled_log_sum_exp: empty term list");
    double m = -std::numeric_limits<double>::infinity();
    for (auto [phi, psi] : terms) m = std::max(m, phi + psi);
    double sum = 0.0;
    for (auto [phi, psi] : terms) sum += std::exp(static_cast<double>(n) * (phi + psi - m));
    return m + std::log(sum) / static_cast<double>(n);
}

void LogSumAccumulator::add(double exponent) {
    if (count_ == 0) {
        max_ = exponent;
        sum_ = 1.0;
    } else if (exponent <= max_) {
        sum_ += std::exp(exponent - max_);
    } else {
        sum_ = sum_ * std::exp(max_ - exponent) + 1.0;
        max_ = exponent;
    }
    ++count_;
}

double LogSumAccumulator::log_sum() const {
    if (count_ == 0) throw EmptyTermListError("LogSumAccumulator: nothing accumulated");
    return max_ + std::log(sum_);
}

} // namespace ergopt
