#include "latticewave/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

#include "latticewave/errors.hpp"

namespace lw {

SparsePoly SparsePoly::constant(int nvars, const Rational& c) {
    SparsePoly p(nvars);
    p.add_term(Exponents(nvars, 0), c);
    return p;
}

SparsePoly SparsePoly::monomial(Exponents g, const Rational& c) {
    SparsePoly p(static_cast<int>(g.size()));
    p.add_term(g, c);
    return p;
}

SparsePoly SparsePoly::variable(int nvars, int var) {
    Exponents g(nvars, 0);
    g[var] = 1;
    return monomial(g, 1);
}

Rational SparsePoly::coeff(const Exponents& g) const {
    auto it = terms_.find(g);
    return it == terms_.end() ? Rational(0) : it->second;
}

void SparsePoly::add_term(const Exponents& g, const Rational& c) {
    if (static_cast<int>(g.size()) != nvars_) throw DimensionMismatch("exponent arity != nvars");
    if (c == 0) return;
    auto [it, inserted] = terms_.emplace(g, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

SparsePoly SparsePoly::operator+(const SparsePoly& o) const {
    if (nvars_ != o.nvars_) throw DimensionMismatch("poly nvars mismatch in +");
    SparsePoly r = *this;
    for (const auto& [g, c] : o.terms_) r.add_term(g, c);
    return r;
}

SparsePoly SparsePoly::operator-(const SparsePoly& o) const {
    if (nvars_ != o.nvars_) throw DimensionMismatch("poly nvars mismatch in -");
    SparsePoly r = *this;
    for (const auto& [g, c] : o.terms_) r.add_term(g, -c);
    return r;
}

SparsePoly SparsePoly::operator-() const {
    SparsePoly r(nvars_);
    for (const auto& [g, c] : terms_) r.terms_.emplace(g, -c);
    return r;
}

SparsePoly SparsePoly::scaled(const Rational& c) const {
    SparsePoly r(nvars_);
    if (c == 0) return r;
    for (const auto& [g, k] : terms_) r.terms_.emplace(g, k * c);
    return r;
}

SparsePoly SparsePoly::mul_truncated(const SparsePoly& o, int max_degree) const {
    if (nvars_ != o.nvars_) throw DimensionMismatch("poly nvars mismatch in *");
    SparsePoly r(nvars_);
    Exponents g(nvars_);
    for (const auto& [ga, ca] : terms_) {
        int da = lw::total_degree(ga);
        if (max_degree >= 0 && da > max_degree) continue;
        for (const auto& [gb, cb] : o.terms_) {
            if (max_degree >= 0 && da + lw::total_degree(gb) > max_degree) continue;
            for (int i = 0; i < nvars_; ++i) g[i] = ga[i] + gb[i];
            r.add_term(g, ca * cb);
        }
    }
    return r;
}

SparsePoly SparsePoly::operator*(const SparsePoly& o) const { return mul_truncated(o, -1); }

SparsePoly SparsePoly::pow(int e, int max_degree) const {
    if (e < 0) throw NegativeExponent("negative power of a polynomial", 0);
    SparsePoly acc = constant(nvars_, 1);
    SparsePoly base = *this;
    while (e > 0) {
        if (e & 1) acc = acc.mul_truncated(base, max_degree);
        e >>= 1;
        if (e > 0) base = base.mul_truncated(base, max_degree);
    }
    return acc;
}

SparsePoly SparsePoly::truncated(int max_degree) const {
    if (max_degree < 0) return *this;
    SparsePoly r(nvars_);
    for (const auto& [g, c] : terms_)
        if (lw::total_degree(g) <= max_degree) r.terms_.emplace(g, c);
    return r;
}

SparsePoly SparsePoly::derivative(int var) const {
    SparsePoly r(nvars_);
    for (const auto& [g, c] : terms_) {
        if (g[var] == 0) continue;
        Exponents h = g;
        h[var] -= 1;
        r.add_term(h, c * g[var]);
    }
    return r;
}

int SparsePoly::total_degree() const {
    int d = -1;
    for (const auto& [g, c] : terms_) d = std::max(d, lw::total_degree(g));
    return d;
}

int SparsePoly::degree_in(int var) const {
    int d = 0;
    for (const auto& [g, c] : terms_) d = std::max(d, g[var]);
    return d;
}

double SparsePoly::eval(const std::vector<double>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw DimensionMismatch("eval arity");
    double s = 0;
    for (const auto& [g, c] : terms_) {
        double m = to_double(c);
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < g[i]; ++k) m *= x[i];
        s += m;
    }
    return s;
}

Rational SparsePoly::eval_exact(const std::vector<Rational>& x) const {
    if (static_cast<int>(x.size()) != nvars_) throw DimensionMismatch("eval arity");
    Rational s = 0;
    for (const auto& [g, c] : terms_) {
        Rational m = c;
        for (int i = 0; i < nvars_; ++i)
            for (int k = 0; k < g[i]; ++k) m *= x[i];
        s += m;
    }
    return s;
}

SparsePoly SparsePoly::substitute(const std::vector<SparsePoly>& images, int max_degree) const {
    if (static_cast<int>(images.size()) != nvars_) throw DimensionMismatch("substitute arity");
    int out_vars = images.empty() ? 0 : images[0].nvars();
    for (const auto& im : images)
        if (im.nvars() != out_vars) throw DimensionMismatch("inconsistent image arity");

    // Per-variable power tables, built lazily up to the largest exponent used.
    std::vector<std::vector<SparsePoly>> powers(nvars_);
    for (int i = 0; i < nvars_; ++i) powers[i].push_back(SparsePoly::constant(out_vars, 1));

    auto power_of = [&](int var, int e) -> const SparsePoly& {
        auto& tab = powers[var];
        while (static_cast<int>(tab.size()) <= e)
            tab.push_back(tab.back().mul_truncated(images[var], max_degree));
        return tab[e];
    };

    SparsePoly r(out_vars);
    for (const auto& [g, c] : terms_) {
        SparsePoly m = SparsePoly::constant(out_vars, c);
        for (int i = 0; i < nvars_ && !m.is_zero(); ++i)
            if (g[i] > 0) m = m.mul_truncated(power_of(i, g[i]), max_degree);
        r = r + m;
    }
    return r;
}

SparsePoly compose_linear(const SparsePoly& P, const std::vector<std::vector<Rational>>& A) {
    int n = P.nvars();
    if (static_cast<int>(A.size()) != n) throw DimensionMismatch("matrix rows != nvars");
    std::vector<SparsePoly> images;
    images.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(A[i].size()) != n) throw DimensionMismatch("matrix is not square");
        SparsePoly li(n);
        for (int j = 0; j < n; ++j) {
            Exponents g(n, 0);
            g[j] = 1;
            li.add_term(g, A[i][j]);
        }
        images.push_back(li);
    }
    return P.substitute(images);
}

// ---------------------------------------------------------------------------
// Parser. Grammar:
//   poly   := [sign] term (sign term)*
//   term   := factor ('*' factor)*
//   factor := rational | 'x' digit ['^' nat]
// ---------------------------------------------------------------------------
namespace {

struct Cursor {
    const std::string& s;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= s.size();
    }
    char peek() {
        skip_ws();
        return pos < s.size() ? s[pos] : '\0';
    }
    char take() {
        skip_ws();
        return s[pos++];
    }
};

long parse_integer(Cursor& c) {
    c.skip_ws();
    std::size_t start = c.pos;
    std::string digits;
    while (c.pos < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.pos]))) digits += c.s[c.pos++];
    if (digits.empty()) throw SyntaxError("expected integer", start);
    try {
        return std::stol(digits);
    } catch (const std::out_of_range&) {
        throw SyntaxError("integer literal too large", start);
    }
}

}  // namespace

SparsePoly parse_poly(const std::string& text) {
    Cursor c{text};
    struct RawTerm {
        Rational coeff;
        std::map<int, int> exps;  // var index (0-based) -> exponent
    };
    std::vector<RawTerm> raw;
    int max_var = 0;

    bool first = true;
    while (!c.done()) {
        Rational sign = 1;
        char p = c.peek();
        if (p == '+' || p == '-') {
            c.take();
            if (p == '-') sign = -1;
        } else if (!first) {
            throw SyntaxError("expected '+' or '-' between terms", c.pos);
        }
        first = false;

        RawTerm t{sign, {}};
        bool saw_factor = false;
        while (true) {
            char q = c.peek();
            if (q == 'x') {
                c.take();
                std::size_t vpos = c.pos;
                long idx = parse_integer(c);
                if (idx < 1 || idx > 9) throw SyntaxError("variables are x1..x9", vpos);
                int e = 1;
                if (c.peek() == '^') {
                    c.take();
                    std::size_t epos = c.pos;
                    if (c.peek() == '-') throw NegativeExponent("negative exponent", epos);
                    long ee = parse_integer(c);
                    e = static_cast<int>(ee);
                }
                t.exps[static_cast<int>(idx) - 1] += e;
                max_var = std::max(max_var, static_cast<int>(idx));
            } else if (std::isdigit(static_cast<unsigned char>(q))) {
                long num = parse_integer(c);
                if (c.peek() == '/') {
                    c.take();
                    std::size_t dpos = c.pos;
                    long den = parse_integer(c);
                    if (den == 0) throw SyntaxError("zero denominator", dpos);
                    t.coeff *= make_rational(num, den);
                } else {
                    t.coeff *= Rational(num);
                }
            } else {
                if (!saw_factor) throw SyntaxError("expected a factor", c.pos);
                break;
            }
            saw_factor = true;
            if (c.peek() == '*') {
                c.take();
                continue;
            }
            break;
        }
        raw.push_back(std::move(t));
    }
    if (raw.empty()) throw SyntaxError("empty polynomial", 0);

    SparsePoly P(max_var == 0 ? 1 : max_var);
    for (const auto& t : raw) {
        Exponents g(P.nvars(), 0);
        for (const auto& [v, e] : t.exps) g[v] = e;
        P.add_term(g, t.coeff);
    }
    return P;
}

std::string to_string(const SparsePoly& P) {
    if (P.is_zero()) return "0";
    std::ostringstream out;
    bool first = true;
    for (const auto& [g, c] : P.terms()) {
        Rational a = c;
        if (first) {
            if (a < 0) {
                out << "-";
                a = -a;
            }
        } else {
            out << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;

        bool has_vars = lw::total_degree(g) > 0;
        bool wrote = false;
        if (a != 1 || !has_vars) {
            out << to_string(a);
            wrote = true;
        }
        for (std::size_t i = 0; i < g.size(); ++i) {
            if (g[i] == 0) continue;
            if (wrote) out << "*";
            out << "x" << (i + 1);
            if (g[i] > 1) out << "^" << g[i];
            wrote = true;
        }
    }
    return out.str();
}

TruncatedSeries TruncatedSeries::operator+(const TruncatedSeries& o) const {
    int d = std::min(degree_, o.degree_);
    return TruncatedSeries(poly_ + o.poly_, d);
}

TruncatedSeries TruncatedSeries::operator-(const TruncatedSeries& o) const {
    int d = std::min(degree_, o.degree_);
    return TruncatedSeries(poly_ - o.poly_, d);
}

TruncatedSeries TruncatedSeries::operator*(const TruncatedSeries& o) const {
    int d = std::min(degree_, o.degree_);
    return TruncatedSeries(poly_.mul_truncated(o.poly_, d), d);
}

TruncatedSeries TruncatedSeries::scaled(const Rational& c) const {
    return TruncatedSeries(poly_.scaled(c), degree_);
}

TruncatedSeries TruncatedSeries::compose_germ(const std::vector<Rational>& coeffs) const {
    if (poly_.coeff(Exponents(nvars(), 0)) != 0)
        throw Degenerate("germ composition needs a zero constant term");
    SparsePoly acc(nvars());
    SparsePoly upow = SparsePoly::constant(nvars(), 1);
    for (std::size_t k = 0; k < coeffs.size() && static_cast<int>(k) <= degree_; ++k) {
        if (k > 0) upow = upow.mul_truncated(poly_, degree_);
        if (coeffs[k] != 0) acc = acc + upow.scaled(coeffs[k]);
    }
    return TruncatedSeries(acc, degree_);
}

TruncatedSeries TruncatedSeries::compose_linear(const std::vector<std::vector<Rational>>& A) const {
    return TruncatedSeries(lw::compose_linear(poly_, A), degree_);
}

std::vector<Rational> sqrt1p_germ(int degree) {
    std::vector<Rational> c(degree + 1);
    for (int k = 0; k <= degree; ++k) c[k] = sqrt_series_coeff(k);
    return c;
}

std::vector<Rational> sin_germ(int degree) {
    std::vector<Rational> c(degree + 1, 0);
    Rational fact = 1;
    for (int k = 1; k <= degree; ++k) {
        fact *= k;
        if (k % 2 == 1) c[k] = ((k / 2) % 2 == 0 ? 1 : -1) / fact;
    }
    return c;
}

std::vector<Rational> cos_germ(int degree) {
    std::vector<Rational> c(degree + 1, 0);
    c[0] = 1;
    Rational fact = 1;
    for (int k = 1; k <= degree; ++k) {
        fact *= k;
        if (k % 2 == 0) c[k] = ((k / 2) % 2 == 0 ? 1 : -1) / fact;
    }
    return c;
}

Weight weight_wd(int d) {
    Weight w(d, make_rational(1, 3));
    w[d - 1] = make_rational(1, 2);
    return w;
}

Rational weighted_degree(const Exponents& g, const Weight& alpha) {
    if (g.size() != alpha.size()) throw DimensionMismatch("weight arity");
    Rational s = 0;
    for (std::size_t i = 0; i < g.size(); ++i) s += alpha[i] * g[i];
    return s;
}

std::optional<Rational> weighted_min_degree(const SparsePoly& P, const Weight& alpha) {
    std::optional<Rational> m;
    for (const auto& [g, c] : P.terms()) {
        Rational d = weighted_degree(g, alpha);
        if (!m || d < *m) m = d;
    }
    return m;
}

bool is_in_H(const SparsePoly& P, const Weight& alpha) {
    auto m = weighted_min_degree(P, alpha);
    return !m || *m > 1;
}

SparsePoly make_Q(const Rational& a, const Rational& b, int m) {
    SparsePoly sum(m);
    SparsePoly cubes(m);
    for (int j = 0; j < m; ++j) {
        sum = sum + SparsePoly::variable(m, j);
        Exponents g(m, 0);
        g[j] = 3;
        cubes.add_term(g, 1);
    }
    return sum.pow(3).scaled(a) - cubes.scaled(b);
}

SparsePoly make_Y(int k) {
    int n = 2 * k;
    SparsePoly odd_sum(n);
    SparsePoly odd_cubes(n);
    SparsePoly cross(n);
    for (int j = 0; j < k; ++j) {
        int o = 2 * j;      // z_{2j-1} is 0-based index 2j
        int e = 2 * j + 1;  // z_{2j}
        odd_sum = odd_sum + SparsePoly::variable(n, o);
        Exponents gc(n, 0);
        gc[o] = 3;
        odd_cubes.add_term(gc, 1);
        Exponents gx(n, 0);
        gx[o] = 1;
        gx[e] = 2;
        cross.add_term(gx, 1);
    }
    return odd_sum.pow(3).scaled(4) - odd_cubes - cross.scaled(3);
}

}  // namespace lw
