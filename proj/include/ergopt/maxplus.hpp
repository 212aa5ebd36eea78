#pragma once

#include <utility>
#include <vector>

namespace ergopt {

/// Element of the max-plus semiring: a real or bottom (-infinity).
/// bottom absorbs otimes and is the identity of oplus; keeping it tagged
/// rather than as a float sentinel removes every NaN path.
class MaxPlusValue {
  public:
    constexpr MaxPlusValue() : finite_(false), v_(0.0) {}

    static constexpr MaxPlusValue bottom() { return MaxPlusValue(); }
    static constexpr MaxPlusValue of(double v) { return MaxPlusValue(v); }

    constexpr bool is_bottom() const { return !finite_; }
    constexpr double value() const { return v_; }  // meaningful only when finite

    friend constexpr MaxPlusValue oplus(MaxPlusValue a, MaxPlusValue b) {
        if (a.is_bottom()) return b;
        if (b.is_bottom()) return a;
        return of(a.v_ > b.v_ ? a.v_ : b.v_);
    }
    friend constexpr MaxPlusValue otimes(MaxPlusValue a, MaxPlusValue b) {
        if (a.is_bottom() || b.is_bottom()) return bottom();
        return of(a.v_ + b.v_);
    }
    friend constexpr bool operator==(MaxPlusValue a, MaxPlusValue b) {
        if (a.is_bottom() || b.is_bottom()) return a.is_bottom() == b.is_bottom();
        return a.v_ == b.v_;
    }

  private:
    explicit constexpr MaxPlusValue(double v) : finite_(true), v_(v) {}
    bool finite_;
    double v_;
};

class MaxPlusMatrix {
  public:
    explicit MaxPlusMatrix(int n) : n_(n), e_(static_cast<size_t>(n) * n) {}

    int size() const { return n_; }
    MaxPlusValue& at(int i, int j) { return e_[static_cast<size_t>(i) * n_ + j]; }
    MaxPlusValue at(int i, int j) const { return e_[static_cast<size_t>(i) * n_ + j]; }

    /// Entrywise shift by -c on finite entries.
    MaxPlusMatrix shifted(double c) const;

  private:
    int n_;
    std::vector<MaxPlusValue> e_;
};

/// Maximum over directed cycles of (sum of entries)/(length). Karp's
/// algorithm per strongly connected component, maximized over components.
/// Throws NoCycleError when no cycle of finite entries exists.
double max_cycle_mean(const MaxPlusMatrix& m);

struct CycleMeanWitness {
    double mean;
    std::vector<int> cycle;  // vertex sequence v0 -> v1 -> ... -> v0 (v0 not repeated)
};

/// As max_cycle_mean, but also extracts one simple cycle attaining the mean.
CycleMeanWitness max_cycle_mean_with_witness(const MaxPlusMatrix& m);

/// Tropical closure: entry (u,v) = max over walks u->v of length >= 0 of the
/// total weight. Requires every cycle nonpositive; Floyd-Warshall relaxation,
/// then the diagonal is clamped to 0 (the empty walk). Throws
/// PositiveCycleError when a diagonal relaxes above +tol.
MaxPlusMatrix kleene_star(const MaxPlusMatrix& m, double tol = 1e-12);

/// Edges lying on some cycle of mean lambda: (u,v) is critical iff the entry
/// w is finite and (w - lambda) + star(v,u) vanishes within tol, with star
/// the closure of the shifted matrix.
std::vector<std::pair<int, int>> critical_edges(const MaxPlusMatrix& m, double lambda,
                                                double tol = 1e-9);

/// Canonical max-plus eigenvector: V(v) = max over critical vertices c of
/// star(c, v) for the closure of (m - lambda). Satisfies
/// V(v) = max_u [V(u) + m(u,v) - lambda] when m is strongly connected.
std::vector<double> principal_eigenvector(const MaxPlusMatrix& m);

} // namespace ergopt
