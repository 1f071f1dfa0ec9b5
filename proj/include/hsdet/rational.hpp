#pragma once
/**
 * @file rational.hpp
 * @brief Exact rational arithmetic and half-integer gamma bookkeeping.
 *
 * Values of the form q * pi^(k/2) with q rational are what every gamma
 * function of an integer or half-integer argument produces; PiRational
 * carries them through products and quotients without ever touching floats.
 */
#include <gmpxx.h>

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace hsdet {

using Rational = mpq_class;
using Integer = mpz_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw std::invalid_argument("make_rational: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

/// "p/q" (or "p" when q == 1).
inline std::string to_string(const Rational& r) {
    if (r.get_den() == 1) return r.get_num().get_str();
    return r.get_num().get_str() + "/" + r.get_den().get_str();
}

inline Rational parse_rational(std::string_view text) {
    std::string s(text);
    auto slash = s.find('/');
    try {
        Rational r;
        if (slash == std::string::npos) {
            r = Rational(Integer(s));
        } else {
            Integer num(s.substr(0, slash));
            Integer den(s.substr(slash + 1));
            if (den == 0) throw std::invalid_argument("zero denominator");
            r = Rational(num, den);
        }
        r.canonicalize();
        return r;
    } catch (const std::invalid_argument&) {
        throw std::invalid_argument("parse_rational: not a rational literal: '" + s + "'");
    }
}

inline double to_double(const Rational& r) { return r.get_d(); }

/// Long-double conversion that survives numerators and denominators far
/// outside the double range.
inline long double to_long_double(const Rational& r) {
    if (r == 0) return 0.0L;
    const long num_bits = static_cast<long>(mpz_sizeinbase(r.get_num_mpz_t(), 2));
    const long den_bits = static_cast<long>(mpz_sizeinbase(r.get_den_mpz_t(), 2));
    // scale so the integer quotient carries at least 64 significant bits
    const long shift = 66 - (num_bits - den_bits);
    Integer num = abs(r.get_num());
    Integer den = r.get_den();
    if (shift > 0) num <<= static_cast<mp_bitcnt_t>(shift);
    else den <<= static_cast<mp_bitcnt_t>(-shift);
    Integer q = num / den;
    long drop = static_cast<long>(mpz_sizeinbase(q.get_mpz_t(), 2)) - 64;
    if (drop > 0) q >>= static_cast<mp_bitcnt_t>(drop);
    else drop = 0;
    long double mant = static_cast<long double>(mpz_get_ui(q.get_mpz_t()));
    if (sgn(r) < 0) mant = -mant;
    return std::ldexp(mant, static_cast<int>(drop - shift));
}

inline Rational pow(const Rational& base, unsigned exponent) {
    Rational out(1);
    Rational b = base;
    while (exponent) {
        if (exponent & 1U) out *= b;
        exponent >>= 1U;
        if (exponent) b *= b;
    }
    return out;
}

inline Rational pow(const Rational& base, int exponent) {
    if (exponent >= 0) return pow(base, static_cast<unsigned>(exponent));
    if (base == 0) throw std::domain_error("pow: zero to a negative power");
    Rational inv = 1 / base;
    return pow(inv, static_cast<unsigned>(-exponent));
}

inline Integer factorial(unsigned n) {
    Integer f;
    mpz_fac_ui(f.get_mpz_t(), n);
    return f;
}

inline Integer binomial(unsigned n, unsigned k) {
    Integer b;
    mpz_bin_uiui(b.get_mpz_t(), n, k);
    return b;
}

inline bool is_integer(const Rational& r) { return r.get_den() == 1; }

/// q * pi^(half_pi_power / 2)
struct PiRational {
    Rational coefficient{0};
    int half_pi_power{0};

    PiRational() = default;
    PiRational(Rational c, int k) : coefficient(std::move(c)), half_pi_power(k) {}

    [[nodiscard]] bool is_zero() const { return coefficient == 0; }

    /// Exponent of pi; throws if it is not an integer.
    [[nodiscard]] int pi_exponent() const {
        if (half_pi_power % 2 != 0)
            throw std::logic_error("PiRational: odd power of sqrt(pi)");
        return half_pi_power / 2;
    }

    friend PiRational operator*(const PiRational& a, const PiRational& b) {
        return {a.coefficient * b.coefficient, a.half_pi_power + b.half_pi_power};
    }
    friend PiRational operator/(const PiRational& a, const PiRational& b) {
        if (b.coefficient == 0) throw std::domain_error("PiRational: division by zero");
        return {a.coefficient / b.coefficient, a.half_pi_power - b.half_pi_power};
    }
};

/// Gamma(twice_arg / 2) for a positive integer twice_arg.
inline PiRational half_gamma(int twice_arg) {
    if (twice_arg <= 0) throw std::domain_error("half_gamma: argument must be positive");
    if (twice_arg % 2 == 0) {
        return {Rational(factorial(static_cast<unsigned>(twice_arg / 2 - 1))), 0};
    }
    // Gamma(n + 1/2) = (2n)! / (4^n n!) sqrt(pi)
    const unsigned n = static_cast<unsigned>((twice_arg - 1) / 2);
    Integer four_n;
    mpz_ui_pow_ui(four_n.get_mpz_t(), 4, n);
    Rational c(factorial(2 * n), four_n * factorial(n));
    c.canonicalize();
    return {c, 1};
}

}  // namespace hsdet
