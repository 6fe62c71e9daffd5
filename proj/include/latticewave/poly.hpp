#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "latticewave/rational.hpp"

namespace lw {

// Multi-index of exponents; size equals the variable count of the polynomial.
using Exponents = std::vector<int>;

inline int total_degree(const Exponents& g) {
    int s = 0;
    for (int e : g) s += e;
    return s;
}

// Multivariate polynomial with exact rational coefficients, stored sparsely.
// Zero coefficients are never kept; exponents are nonnegative.
class SparsePoly {
  public:
    using TermMap = std::map<Exponents, Rational>;

    explicit SparsePoly(int nvars = 0) : nvars_(nvars) {}

    static SparsePoly constant(int nvars, const Rational& c);
    static SparsePoly monomial(Exponents g, const Rational& c);
    static SparsePoly variable(int nvars, int var);  // var is 0-based

    int nvars() const { return nvars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }

    Rational coeff(const Exponents& g) const;
    void add_term(const Exponents& g, const Rational& c);

    SparsePoly operator+(const SparsePoly& o) const;
    SparsePoly operator-(const SparsePoly& o) const;
    SparsePoly operator*(const SparsePoly& o) const;
    SparsePoly operator-() const;
    bool operator==(const SparsePoly& o) const { return nvars_ == o.nvars_ && terms_ == o.terms_; }

    SparsePoly scaled(const Rational& c) const;
    // Product discarding all monomials of total degree > max_degree (< 0: no cap).
    SparsePoly mul_truncated(const SparsePoly& o, int max_degree) const;
    SparsePoly pow(int e, int max_degree = -1) const;
    SparsePoly truncated(int max_degree) const;
    SparsePoly derivative(int var) const;

    int total_degree() const;  // -1 for the zero polynomial
    int degree_in(int var) const;

    double eval(const std::vector<double>& x) const;
    Rational eval_exact(const std::vector<Rational>& x) const;

    // Substitute variable i by images[i]; cap the result's total degree if asked.
    SparsePoly substitute(const std::vector<SparsePoly>& images, int max_degree = -1) const;

  private:
    int nvars_;
    TermMap terms_;
};

// P(A y): exact composition with a square rational matrix (row i gives the
// linear form replacing variable i).
SparsePoly compose_linear(const SparsePoly& P, const std::vector<std::vector<Rational>>& A);

// Text form: signed sum of terms `c * x<i>^e * ...`, variables x1..x9.
SparsePoly parse_poly(const std::string& text);
std::string to_string(const SparsePoly& P);

// Power series truncated at a fixed total degree; arithmetic stays below it.
class TruncatedSeries {
  public:
    TruncatedSeries(SparsePoly p, int degree) : poly_(p.truncated(degree)), degree_(degree) {}

    const SparsePoly& poly() const { return poly_; }
    int truncation_degree() const { return degree_; }
    int nvars() const { return poly_.nvars(); }

    TruncatedSeries operator+(const TruncatedSeries& o) const;
    TruncatedSeries operator-(const TruncatedSeries& o) const;
    TruncatedSeries operator*(const TruncatedSeries& o) const;
    TruncatedSeries scaled(const Rational& c) const;

    // sum_k coeffs[k] * (*this)^k; requires a zero constant term.
    TruncatedSeries compose_germ(const std::vector<Rational>& coeffs) const;

    TruncatedSeries compose_linear(const std::vector<std::vector<Rational>>& A) const;

  private:
    SparsePoly poly_;
    int degree_;
};

// 1-D analytic germs as truncated coefficient lists (index = power).
std::vector<Rational> sqrt1p_germ(int degree);  // sqrt(1+u)
std::vector<Rational> sin_germ(int degree);     // sin(u)
std::vector<Rational> cos_germ(int degree);     // cos(u) - constant included

using Weight = std::vector<Rational>;

Weight weight_wd(int d);  // (1/3, ..., 1/3, 1/2)

Rational weighted_degree(const Exponents& g, const Weight& alpha);
// min over terms of gamma . alpha; empty for the zero polynomial.
std::optional<Rational> weighted_min_degree(const SparsePoly& P, const Weight& alpha);
bool is_in_H(const SparsePoly& P, const Weight& alpha);  // strict: every term > 1

// Q_{a,b}^m(z) = a (sum z_j)^3 - b sum z_j^3 in m variables.
SparsePoly make_Q(const Rational& a, const Rational& b, int m);
// Y(z') in 2k variables: 4 (sum z_{2j-1})^3 - sum z_{2j-1}^3 - 3 sum z_{2j-1} z_{2j}^2.
SparsePoly make_Y(int k);

}  // namespace lw
