#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "latticewave/errors.hpp"

namespace lw {

// Exact rational scalar. mpq_class keeps values canonical as long as they are
// produced through arithmetic; direct (num, den) construction goes through
// make_rational below, which canonicalizes.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
    if (den == 0) throw Degenerate("rational with zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
}

// Exact conversion: every finite double is a dyadic rational.
inline Rational rational_from_double(double x) { return Rational(x); }

inline double to_double(const Rational& r) { return r.get_d(); }

// "p/q" (or "p" when q == 1).
inline std::string to_string(const Rational& r) { return r.get_str(); }

inline Rational rational_from_string(const std::string& s) {
    Rational r;
    if (r.set_str(s, 10) != 0) throw SyntaxError("bad rational literal '" + s + "'", 0);
    r.canonicalize();
    return r;
}

inline Rational pow(const Rational& base, int e) {
    if (e < 0) {
        if (base == 0) throw Degenerate("0^negative");
        Rational inv = 1 / base;
        return pow(inv, -e);
    }
    Rational acc = 1, b = base;
    while (e > 0) {
        if (e & 1) acc *= b;
        b *= b;
        e >>= 1;
    }
    return acc;
}

inline Rational binomial(long n, long k) {
    if (k < 0 || k > n) return 0;
    Rational acc = 1;
    for (long i = 0; i < k; ++i) acc *= Rational(n - i) / Rational(i + 1);
    return acc;
}

// Generalized binomial C(1/2, k), the Taylor coefficients of sqrt(1+u).
inline Rational sqrt_series_coeff(int k) {
    Rational acc = 1;
    Rational half = make_rational(1, 2);
    for (int i = 0; i < k; ++i) acc *= (half - i) / Rational(i + 1);
    return acc;
}

}  // namespace lw
