#include "ergopt/rational.hpp"

#include <cctype>
#include <stdexcept>
#include <vector>

namespace ergopt {

Rational Rational::parse(std::string_view text) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    if (s.empty()) throw std::invalid_argument("empty number");

    if (s.find('/') != std::string::npos) {
        Rational r;
        if (mpq_set_str(r.q_, s.c_str(), 10) != 0)
            throw std::invalid_argument("bad rational \"" + s + "\"");
        if (mpz_sgn(mpq_denref(r.q_)) == 0)
            throw std::invalid_argument("zero denominator in \"" + s + "\"");
        mpq_canonicalize(r.q_);
        return r;
    }

    // Decimal with optional exponent: sign digits [.digits] [e sign digits]
    size_t i = 0;
    bool neg = false;
    if (i < s.size() && (s[i] == '+' || s[i] == '-')) neg = (s[i++] == '-');
    std::string digits;
    long frac_len = 0, exponent = 0;
    bool any = false;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
        digits.push_back(s[i++]);
        any = true;
    }
    if (i < s.size() && s[i] == '.') {
        ++i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
            digits.push_back(s[i++]);
            ++frac_len;
            any = true;
        }
    }
    if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
        ++i;
        bool eneg = false;
        if (i < s.size() && (s[i] == '+' || s[i] == '-')) eneg = (s[i++] == '-');
        if (i >= s.size()) throw std::invalid_argument("bad exponent in \"" + s + "\"");
        long e = 0;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i])))
            e = e * 10 + (s[i++] - '0');
        exponent = eneg ? -e : e;
    }
    if (!any || i != s.size()) throw std::invalid_argument("bad number \"" + s + "\"");
    if (digits.empty()) digits = "0";

    mpz_t num, den;
    mpz_init_set_str(num, digits.c_str(), 10);
    mpz_init_set_ui(den, 1);
    long pow10 = exponent - frac_len;
    mpz_t ten;
    mpz_init_set_ui(ten, 10);
    if (pow10 > 0) {
        mpz_t f;
        mpz_init(f);
        mpz_pow_ui(f, ten, static_cast<unsigned long>(pow10));
        mpz_mul(num, num, f);
        mpz_clear(f);
    } else if (pow10 < 0) {
        mpz_pow_ui(den, ten, static_cast<unsigned long>(-pow10));
    }
    if (neg) mpz_neg(num, num);

    Rational r;
    mpq_set_num(r.q_, num);
    mpq_set_den(r.q_, den);
    mpq_canonicalize(r.q_);
    mpz_clear(num);
    mpz_clear(den);
    mpz_clear(ten);
    return r;
}

std::string Rational::to_string() const {
    std::vector<char> buf(mpz_sizeinbase(mpq_numref(q_), 10) +
                          mpz_sizeinbase(mpq_denref(q_), 10) + 8);
    mpq_get_str(buf.data(), 10, q_);
    return std::string(buf.data());
}

} // namespace ergopt
