#pragma once

#include <mpfr.h>

#include <string>
#include <utility>

namespace ergopt {

/// Arbitrary-precision float backed by MPFR, round-to-nearest everywhere.
/// Precision is fixed per value at construction; binary operations produce
/// results at the wider of the two operand precisions.
class BigFloat {
  public:
    explicit BigFloat(mpfr_prec_t prec = 64) { mpfr_init2(x_, prec); mpfr_set_zero(x_, 1); }

    BigFloat(const BigFloat& o) { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
    BigFloat(BigFloat&& o) noexcept { mpfr_init2(x_, mpfr_get_prec(o.x_)); mpfr_swap(x_, o.x_); }
    BigFloat& operator=(const BigFloat& o) {
        if (this != &o) { mpfr_set_prec(x_, mpfr_get_prec(o.x_)); mpfr_set(x_, o.x_, MPFR_RNDN); }
        return *this;
    }
    BigFloat& operator=(BigFloat&& o) noexcept { mpfr_swap(x_, o.x_); return *this; }
    ~BigFloat() { mpfr_clear(x_); }

    static BigFloat from_double(double v, mpfr_prec_t prec) {
        BigFloat r(prec); mpfr_set_d(r.x_, v, MPFR_RNDN); return r;
    }
    static BigFloat from_long(long v, mpfr_prec_t prec) {
        BigFloat r(prec); mpfr_set_si(r.x_, v, MPFR_RNDN); return r;
    }
    static BigFloat two_pow(long e, mpfr_prec_t prec) {
        BigFloat r(prec); mpfr_set_ui_2exp(r.x_, 1, static_cast<mpfr_exp_t>(e), MPFR_RNDN); return r;
    }

    mpfr_prec_t precision() const { return mpfr_get_prec(x_); }
    double to_double() const { return mpfr_get_d(x_, MPFR_RNDN); }
    bool is_zero() const { return mpfr_zero_p(x_); }
    int sign() const { return mpfr_sgn(x_); }

    /// Scientific-notation string with `digits` significant digits.
    std::string to_string(int digits = 25) const;

    friend BigFloat operator+(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b)); mpfr_add(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
    }
    friend BigFloat operator-(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b)); mpfr_sub(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
    }
    friend BigFloat operator*(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b)); mpfr_mul(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
    }
    friend BigFloat operator/(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b)); mpfr_div(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
    }
    BigFloat operator-() const { BigFloat r(precision()); mpfr_neg(r.x_, x_, MPFR_RNDN); return r; }

    BigFloat& operator+=(const BigFloat& o) { mpfr_add(x_, x_, o.x_, MPFR_RNDN); return *this; }
    BigFloat& operator-=(const BigFloat& o) { mpfr_sub(x_, x_, o.x_, MPFR_RNDN); return *this; }
    BigFloat& operator*=(const BigFloat& o) { mpfr_mul(x_, x_, o.x_, MPFR_RNDN); return *this; }
    BigFloat& operator/=(const BigFloat& o) { mpfr_div(x_, x_, o.x_, MPFR_RNDN); return *this; }

    friend BigFloat exp(const BigFloat& a) { BigFloat r(a.precision()); mpfr_exp(r.x_, a.x_, MPFR_RNDN); return r; }
    friend BigFloat expm1(const BigFloat& a) { BigFloat r(a.precision()); mpfr_expm1(r.x_, a.x_, MPFR_RNDN); return r; }
    friend BigFloat log(const BigFloat& a) { BigFloat r(a.precision()); mpfr_log(r.x_, a.x_, MPFR_RNDN); return r; }
    friend BigFloat abs(const BigFloat& a) { BigFloat r(a.precision()); mpfr_abs(r.x_, a.x_, MPFR_RNDN); return r; }
    friend BigFloat sqrt(const BigFloat& a) { BigFloat r(a.precision()); mpfr_sqrt(r.x_, a.x_, MPFR_RNDN); return r; }
    friend BigFloat max(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b)); mpfr_max(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
    }
    friend BigFloat min(const BigFloat& a, const BigFloat& b) {
        BigFloat r(wider(a, b)); mpfr_min(r.x_, a.x_, b.x_, MPFR_RNDN); return r;
    }

    friend int cmp(const BigFloat& a, const BigFloat& b) { return mpfr_cmp(a.x_, b.x_); }
    friend bool operator<(const BigFloat& a, const BigFloat& b) { return mpfr_less_p(a.x_, b.x_); }
    friend bool operator>(const BigFloat& a, const BigFloat& b) { return mpfr_greater_p(a.x_, b.x_); }
    friend bool operator<=(const BigFloat& a, const BigFloat& b) { return mpfr_lessequal_p(a.x_, b.x_); }
    friend bool operator>=(const BigFloat& a, const BigFloat& b) { return mpfr_greaterequal_p(a.x_, b.x_); }
    friend bool operator==(const BigFloat& a, const BigFloat& b) { return mpfr_equal_p(a.x_, b.x_); }

    int cmp_d(double v) const { return mpfr_cmp_d(x_, v); }

    mpfr_ptr raw() { return x_; }
    mpfr_srcptr raw() const { return x_; }

  private:
    static mpfr_prec_t wider(const BigFloat& a, const BigFloat& b) {
        return a.precision() > b.precision() ? a.precision() : b.precision();
    }
    mpfr_t x_;
};

} // namespace ergopt
