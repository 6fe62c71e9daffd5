#include "latticewave/phase_series.hpp"

#include <cmath>

#include "latticewave/errors.hpp"

namespace lw {

std::vector<TrigCoord> trig_from_quarter_turns(const std::vector<int>& quarter_turns) {
    static const int cs[4] = {1, 0, -1, 0};
    static const int sn[4] = {0, 1, 0, -1};
    std::vector<TrigCoord> out;
    out.reserve(quarter_turns.size());
    for (int q : quarter_turns) {
        int m = ((q % 4) + 4) % 4;
        out.push_back({Rational(cs[m]), Rational(sn[m])});
    }
    return out;
}

std::vector<TrigCoord> trig_from_doubles(const std::vector<double>& xi) {
    std::vector<TrigCoord> out;
    out.reserve(xi.size());
    for (double x : xi) out.push_back({rational_from_double(std::cos(x)), rational_from_double(std::sin(x))});
    return out;
}

double PhaseSeries::coeff_value(const Exponents& g) const {
    return to_double(series.poly().coeff(g)) * std::sqrt(to_double(omega0_sq));
}

PhaseSeries taylor_phase(int d, const Rational& mass_sq, const std::vector<TrigCoord>& xi0, int D,
                         const std::optional<std::vector<double>>& v0) {
    if (static_cast<int>(xi0.size()) != d) throw DimensionMismatch("taylor_phase base point arity");
    if (D > 8) throw TooLarge("taylor_phase: truncation degree over 8");

    // omega(xi0 + xi)^2 = r (1 + w(xi)) with
    //   r = mass^2 + sum(2 - 2 cos xi0_j)
    //   r w = sum( 2 cos(xi0_j) (1 - cos xi_j) + 2 sin(xi0_j) sin xi_j )
    Rational r = mass_sq;
    for (const auto& t : xi0) r += 2 - 2 * t.cos_v;
    if (r == 0) throw SingularPoint("taylor_phase at a zero of omega");

    auto sinc = sin_germ(D);
    auto cosc = cos_germ(D);

    SparsePoly w(d);
    for (int j = 0; j < d; ++j) {
        for (int k = 1; k <= D; ++k) {
            Rational coeff = -2 * xi0[j].cos_v * cosc[k] + 2 * xi0[j].sin_v * sinc[k];
            if (coeff != 0) {
                Exponents g(d, 0);
                g[j] = k;
                w.add_term(g, coeff / r);
            }
        }
    }

    TruncatedSeries W(w, D);
    TruncatedSeries root = W.compose_germ(sqrt1p_germ(D));  // omega/omega0

    // (v0 . xi)/omega0 uses the exactly-critical velocity sin(xi0)/omega0, so
    // the linear term cancels identically.
    SparsePoly vterm(d);
    for (int j = 0; j < d; ++j) {
        Exponents g(d, 0);
        g[j] = 1;
        vterm.add_term(g, xi0[j].sin_v / r);
    }
    SparsePoly B = vterm - root.poly();
    B.add_term(Exponents(d, 0), 1);  // drop the constant -1 from sqrt(1+w)

    PhaseSeries ps{TruncatedSeries(B, D), r, d};

    if (v0) {
        if (static_cast<int>(v0->size()) != d) throw DimensionMismatch("taylor_phase v0 arity");
        double omega0 = std::sqrt(to_double(r));
        double worst = 0;
        for (int j = 0; j < d; ++j) {
            double exact = to_double(xi0[j].sin_v) / omega0;
            worst = std::max(worst, std::abs((*v0)[j] - exact));
        }
        if (worst > 1e-10) throw NotCritical("supplied velocity leaves a linear term of size " +
                                             std::to_string(worst));
    }

    // Internal consistency: constant and linear parts vanish exactly.
    if (ps.series.poly().coeff(Exponents(d, 0)) != 0) throw NotCritical("constant term nonzero");
    for (int j = 0; j < d; ++j) {
        Exponents g(d, 0);
        g[j] = 1;
        if (ps.series.poly().coeff(g) != 0) throw NotCritical("linear term nonzero");
    }
    return ps;
}

namespace {

// Shear to (z', z_d) coordinates: xi_j = z_j for j < d, xi_d = z_d - sum z_j.
std::vector<std::vector<Rational>> shear_matrix(int d) {
    std::vector<std::vector<Rational>> A(d, std::vector<Rational>(d, Rational(0)));
    for (int j = 0; j + 1 < d; ++j) A[j][j] = 1;
    for (int j = 0; j + 1 < d; ++j) A[d - 1][j] = -1;
    A[d - 1][d - 1] = 1;
    return A;
}

// Pairing map y = Psi(z): y_{2j-1} = z_{2j-1} + z_{2j}, y_{2j} = z_{2j-1} - z_{2j}, y_d = z_d.
std::vector<std::vector<Rational>> pairing_matrix(int d) {
    std::vector<std::vector<Rational>> A(d, std::vector<Rational>(d, Rational(0)));
    int k = (d - 1) / 2;
    for (int j = 0; j < k; ++j) {
        A[2 * j][2 * j] = 1;
        A[2 * j][2 * j + 1] = 1;
        A[2 * j + 1][2 * j] = 1;
        A[2 * j + 1][2 * j + 1] = -1;
    }
    A[d - 1][d - 1] = 1;
    return A;
}

std::vector<Rational> to_point(const Exponents& g) {
    std::vector<Rational> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) p[i] = g[i];
    return p;
}

std::vector<std::vector<Rational>> mat_mul(const std::vector<std::vector<Rational>>& A,
                                           const std::vector<std::vector<Rational>>& B) {
    int n = static_cast<int>(A.size());
    std::vector<std::vector<Rational>> C(n, std::vector<Rational>(n, Rational(0)));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (A[i][k] != 0)
                for (int j = 0; j < n; ++j) C[i][j] += A[i][k] * B[k][j];
    return C;
}

}  // namespace

MostDegenerateSplit most_degenerate_split(int d, int D) {
    if (d < 3) throw DimensionMismatch("most_degenerate_split needs d >= 3");
    MostDegenerateSplit out{taylor_phase(d, 0, trig_from_quarter_turns(std::vector<int>(d, 1)), D),
                             TruncatedSeries(SparsePoly(d), D),
                             0,
                             0,
                             SparsePoly(d),
                             false,
                             false,
                             false};
    out.transformed = out.phase.series.compose_linear(shear_matrix(d));

    const SparsePoly& T = out.transformed.poly();
    Exponents zd2(d, 0);
    zd2[d - 1] = 2;
    out.a1 = T.coeff(zd2);

    // Quadratic part must be exactly a1 z_d^2.
    out.quadratic_is_pure_zd2 = true;
    SparsePoly rest(d);
    SparsePoly zcubic(d);
    for (const auto& [g, c] : T.terms()) {
        int deg = total_degree(g);
        if (deg == 2) {
            if (g != zd2) out.quadratic_is_pure_zd2 = false;
            continue;
        }
        if (deg == 3 && g[d - 1] == 0) {
            zcubic.add_term(g, c);
            continue;
        }
        rest.add_term(g, c);
    }

    // z'-cubic part proportional to Q_{1,1}^{d-1}; fix the scale from z_1^2 z_2
    // (the pure cubes cancel inside Q_{1,1}).
    SparsePoly Q = make_Q(1, 1, d - 1);
    Exponents ref(d - 1, 0);
    ref[0] = 2;
    ref[1] = 1;
    Exponents refd(d, 0);
    refd[0] = 2;
    refd[1] = 1;
    Rational qc = Q.coeff(ref);
    out.a3 = qc == 0 ? Rational(0) : zcubic.coeff(refd) / qc;
    SparsePoly Qd(d);
    for (const auto& [g, c] : Q.terms()) {
        Exponents h = g;
        h.push_back(0);
        Qd.add_term(h, c);
    }
    out.cubic_matches_Q = (zcubic == Qd.scaled(out.a3)) && out.a3 != 0;

    out.remainder = rest;
    out.remainder_in_H = is_in_H(out.remainder, weight_wd(d)) && out.quadratic_is_pure_zd2;
    return out;
}

Sigma2Decomposition sigma2_decompose(double xi_star, int D) {
    const int d = 4;
    std::vector<TrigCoord> base = trig_from_quarter_turns({1, 1, 1});
    base.push_back(trig_from_doubles({xi_star})[0]);

    Sigma2Decomposition out{taylor_phase(d, 0, base, D),
                            TruncatedSeries(SparsePoly(d), D),
                            false,
                            false,
                            0,
                            SparsePoly(d),
                            false};

    // Columns gamma1 = (1,-1,0,0), gamma2 = (1,1,-2,0), e3, e4.
    std::vector<std::vector<Rational>> A = {
        {1, 1, 0, 0}, {-1, 1, 0, 0}, {0, -2, 1, 0}, {0, 0, 0, 1}};
    out.transformed = out.phase.series.compose_linear(A);

    const SparsePoly& T = out.transformed.poly();
    out.kernel_clean = true;
    SparsePoly d4cubic(d);
    SparsePoly rest(d);
    for (const auto& [g, c] : T.terms()) {
        int deg = total_degree(g);
        bool touches_kernel = g[0] > 0 || g[1] > 0;
        if (deg == 2) {
            if (touches_kernel) out.kernel_clean = false;
            continue;  // principal quadratic in (y3, y4)
        }
        if (deg == 3 && g[2] == 0 && g[3] == 0) {
            d4cubic.add_term(g, c);
            continue;
        }
        rest.add_term(g, c);
    }

    SparsePoly model(d);  // y2^3 - y1^2 y2
    model.add_term({0, 3, 0, 0}, 1);
    model.add_term({2, 1, 0, 0}, -1);
    out.cubic_coeff = d4cubic.coeff({0, 3, 0, 0});
    out.cubic_is_D4 = out.cubic_coeff != 0 && d4cubic == model.scaled(out.cubic_coeff);

    Weight alpha_star{make_rational(1, 3), make_rational(1, 3), make_rational(1, 2),
                      make_rational(1, 2)};
    out.remainder_V = rest;
    out.V_in_H = is_in_H(rest, alpha_star) && out.kernel_clean;
    return out;
}

ConjPhase build_conj_phase(int d, int D) {
    if (d < 3 || d % 2 == 0) throw DimensionMismatch("build_conj_phase needs odd d >= 3");
    const int k = (d - 1) / 2;

    ConjPhase out{d, TruncatedSeries(SparsePoly(d), D), {}, {}, false, false, false, false, false};

    PhaseSeries phase = taylor_phase(d, 0, trig_from_quarter_turns(std::vector<int>(d, 1)), D);
    auto M = mat_mul(shear_matrix(d), pairing_matrix(d));
    out.stilde = phase.series.compose_linear(M);

    Weight wd = weight_wd(d);
    const SparsePoly& S = out.stilde.poly();

    // The principal piece lives on the hyperplane w_d . gamma = 1; everything
    // else must sit strictly above it.
    SparsePoly on_plane(d);
    bool all_above_or_on = true;
    for (const auto& [g, c] : S.terms()) {
        Rational wdeg = weighted_degree(g, wd);
        if (wdeg == 1) {
            on_plane.add_term(g, c);
            out.s_support.push_back(g);
        } else if (wdeg < 1) {
            all_above_or_on = false;
        }
    }

    // z'-cubic content of the plane part is a multiple of Y (z_d^2 is the only
    // other plane monomial).
    SparsePoly zc(d);
    Exponents zd2(d, 0);
    zd2[d - 1] = 2;
    for (const auto& [g, c] : on_plane.terms())
        if (g != zd2) zc.add_term(g, c);
    SparsePoly Y = make_Y(k);
    SparsePoly Yd(d);
    for (const auto& [g, c] : Y.terms()) {
        Exponents h = g;
        h.push_back(0);
        Yd.add_term(h, c);
    }
    Exponents z13(d, 0);
    z13[0] = 3;
    Rational yscale = Yd.coeff(z13) == 0 ? Rational(0) : zc.coeff(z13) / Yd.coeff(z13);
    out.cubic_matches_Y = yscale != 0 && zc == Yd.scaled(yscale) && all_above_or_on &&
                          on_plane.coeff(zd2) != 0;

    NewtonOptions nopts;
    nopts.enumerate_faces = false;
    out.newton = newton_data(S, nopts);

    // T1 = z_d (sum z_{2j-1})^2: even coordinates vanish and each support
    // point lies strictly above the compact boundary of N(S).
    {
        SparsePoly odd_sum(d);
        for (int j = 0; j < k; ++j) odd_sum = odd_sum + SparsePoly::variable(d, 2 * j);
        SparsePoly T1 = odd_sum.pow(2) * SparsePoly::variable(d, d - 1);
        bool ok = true;
        for (const auto& [g, c] : T1.terms()) {
            for (int j = 0; j < k; ++j)
                if (g[2 * j + 1] != 0) ok = false;
            if (!(weighted_degree(g, wd) > 1)) ok = false;
            if (!strictly_above_compact_boundary(out.s_support, to_point(g))) ok = false;
        }
        out.t1_ok = ok;
    }

    // T_{2N+1} = sum_j (z_{2j-1} - z_{2j})^{2N+1} + (z_{2j-1} + z_{2j})^{2N+1}.
    auto check_T = [&](int N) {
        bool ok = true;
        for (int j = 0; j < k; ++j) {
            SparsePoly a = SparsePoly::variable(d, 2 * j) - SparsePoly::variable(d, 2 * j + 1);
            SparsePoly b = SparsePoly::variable(d, 2 * j) + SparsePoly::variable(d, 2 * j + 1);
            SparsePoly T = a.pow(2 * N + 1) + b.pow(2 * N + 1);
            for (const auto& [g, c] : T.terms()) {
                if (!(weighted_degree(g, wd) > 1)) ok = false;
                if (!strictly_above_compact_boundary(out.s_support, to_point(g))) ok = false;
            }
        }
        return ok;
    };
    out.t5_ok = check_T(2);
    out.t7_ok = check_T(3);

    // lambda0 * (1,...,1) as a strictly positive combination of the A_j.
    {
        Rational lambda0 = make_rational(6, 2 * d + 1);
        std::vector<Exponents> A;
        for (int j = 0; j < k; ++j) {
            Exponents a(d, 0);
            a[2 * j] = 3;
            A.push_back(a);  // A_{2j-1}
            Exponents b(d, 0);
            b[2 * j] = 1;
            b[2 * j + 1] = 2;
            A.push_back(b);  // A_{2j}
        }
        Exponents ad(d, 0);
        ad[d - 1] = 2;
        A.push_back(ad);

        bool ok = out.newton.d_S == lambda0;
        std::vector<Rational> comb(d, Rational(0));
        Rational total = 0;
        for (std::size_t i = 0; i < A.size(); ++i) {
            bool is_cube = false;
            for (int j = 0; j < k; ++j)
                if (A[i][2 * j] == 3) is_cube = true;
            Rational mu = is_cube ? lambda0 / 6 : lambda0 / 2;
            total += mu;
            for (int j = 0; j < d; ++j) comb[j] += mu * A[i][j];
            // every A_j really appears in the support of S
            bool present = false;
            for (const auto& g : out.s_support)
                if (g == A[i]) present = true;
            if (!present) ok = false;
        }
        if (total != 1) ok = false;
        for (int j = 0; j < d; ++j)
            if (comb[j] != lambda0) ok = false;
        out.diagonal_ok = ok;
    }

    return out;
}

}  // namespace lw
