#pragma once

#include <gmp.h>

#include <string>
#include <string_view>

namespace ergopt {

/// Exact rational, RAII over GMP's mpq. Every accepted input value is
/// representable here (decimal strings, p/q strings, binary doubles), which
/// is what lets the oracle pipeline run without rounding.
class Rational {
  public:
    Rational() { mpq_init(q_); }
    Rational(long n) { mpq_init(q_); mpq_set_si(q_, n, 1); }
    Rational(long n, long d) { mpq_init(q_); mpq_set_si(q_, n, d); mpq_canonicalize(q_); }

    Rational(const Rational& o) { mpq_init(q_); mpq_set(q_, o.q_); }
    Rational(Rational&& o) noexcept { mpq_init(q_); mpq_swap(q_, o.q_); }
    Rational& operator=(const Rational& o) {
        if (this != &o) mpq_set(q_, o.q_);
        return *this;
    }
    Rational& operator=(Rational&& o) noexcept { mpq_swap(q_, o.q_); return *this; }
    ~Rational() { mpq_clear(q_); }

    /// Exact value of a binary double (every finite double is dyadic).
    static Rational from_double(double v) {
        Rational r;
        mpq_set_d(r.q_, v);
        return r;
    }

    /// Accepts "p/q", plain integers, and decimal notation with optional
    /// exponent ("-1.5", "2e-3"). Throws std::invalid_argument otherwise.
    static Rational parse(std::string_view text);

    double to_double() const { return mpq_get_d(q_); }
    std::string to_string() const;

    bool is_integer() const { return mpz_cmp_ui(mpq_denref(q_), 1) == 0; }
    /// Numerator/denominator as longs; only valid when they fit.
    long num_long() const { return mpz_get_si(mpq_numref(q_)); }
    long den_long() const { return mpz_get_si(mpq_denref(q_)); }
    bool fits_long() const {
        return mpz_fits_slong_p(mpq_numref(q_)) && mpz_fits_slong_p(mpq_denref(q_));
    }

    friend Rational operator+(const Rational& a, const Rational& b) {
        Rational r; mpq_add(r.q_, a.q_, b.q_); return r;
    }
    friend Rational operator-(const Rational& a, const Rational& b) {
        Rational r; mpq_sub(r.q_, a.q_, b.q_); return r;
    }
    friend Rational operator*(const Rational& a, const Rational& b) {
        Rational r; mpq_mul(r.q_, a.q_, b.q_); return r;
    }
    friend Rational operator/(const Rational& a, const Rational& b) {
        Rational r; mpq_div(r.q_, a.q_, b.q_); return r;
    }
    Rational operator-() const { Rational r; mpq_neg(r.q_, q_); return r; }
    Rational& operator+=(const Rational& o) { mpq_add(q_, q_, o.q_); return *this; }
    Rational& operator-=(const Rational& o) { mpq_sub(q_, q_, o.q_); return *this; }

    friend bool operator==(const Rational& a, const Rational& b) { return mpq_equal(a.q_, b.q_); }
    friend bool operator!=(const Rational& a, const Rational& b) { return !mpq_equal(a.q_, b.q_); }
    friend bool operator<(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) < 0; }
    friend bool operator>(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) > 0; }
    friend bool operator<=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) <= 0; }
    friend bool operator>=(const Rational& a, const Rational& b) { return mpq_cmp(a.q_, b.q_) >= 0; }
    int sign() const { return mpq_sgn(q_); }

  private:
    mpq_t q_;
};

} // namespace ergopt
