#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latticewave/errors.hpp"
#include "latticewave/poly.hpp"

using namespace lw;

TEST_CASE("parser canonical forms") {
    SparsePoly p = parse_poly("x1*x2*x3");
    CHECK(p.nvars() == 3);
    CHECK(p.term_count() == 1);
    CHECK(p.coeff({1, 1, 1}) == 1);

    SparsePoly q = parse_poly("x1^2*x2 - x2^3");
    CHECK(q.term_count() == 2);
    CHECK(q.coeff({2, 1}) == 1);
    CHECK(q.coeff({0, 3}) == -1);

    SparsePoly r = parse_poly("-3/2*x1 + 1/2*x1 + x1");
    CHECK(r.is_zero());

    SparsePoly s = parse_poly("2*x2^2");
    CHECK(s.nvars() == 2);
    CHECK(s.coeff({0, 2}) == 2);
}

TEST_CASE("parser rejects bad input") {
    CHECK_THROWS_AS(parse_poly("x1^-1"), NegativeExponent);
    CHECK_THROWS_AS(parse_poly(""), SyntaxError);
    CHECK_THROWS_AS(parse_poly("x1 + + x2 2"), SyntaxError);
    CHECK_THROWS_AS(parse_poly("y1"), SyntaxError);
    CHECK_THROWS_AS(parse_poly("1/0"), SyntaxError);
}

TEST_CASE("printer round-trips") {
    std::mt19937 rng(12345);
    std::uniform_int_distribution<int> nv(1, 4), e(0, 5), c(-9, 9), nt(1, 8);
    for (int trial = 0; trial < 50; ++trial) {
        int n = nv(rng);
        SparsePoly p(n);
        int terms = nt(rng);
        for (int t = 0; t < terms; ++t) {
            Exponents g(n);
            for (int i = 0; i < n; ++i) g[i] = e(rng);
            int num = c(rng);
            if (num == 0) num = 1;
            p.add_term(g, make_rational(num, 1 + (t % 3)));
        }
        if (p.is_zero()) continue;
        SparsePoly back = parse_poly(to_string(p));
        // Reparse may infer fewer variables if trailing ones are absent.
        CHECK(to_string(back) == to_string(p));
    }
}

TEST_CASE("Q and Y constructions") {
    // Q_{1,1}^2 = 3 z1^2 z2 + 3 z1 z2^2
    SparsePoly q2 = make_Q(1, 1, 2);
    CHECK(q2 == parse_poly("3*x1^2*x2 + 3*x1*x2^2"));

    // Y(1) = 3 z1^3 - 3 z1 z2^2
    SparsePoly y1 = make_Y(1);
    CHECK(y1 == parse_poly("3*x1^3 - 3*x1*x2^2"));

    Weight w4 = weight_wd(4);
    CHECK(w4[0] == make_rational(1, 3));
    CHECK(w4[2] == make_rational(1, 3));
    CHECK(w4[3] == make_rational(1, 2));
}

TEST_CASE("compose_linear identities") {
    // Q_{1,1}^3(y) = (y1+y2+y3)^3 - y1^3 - y2^3 - y3^3 = 3 (y1+y2)(y1+y3)(y2+y3)
    SparsePoly q3 = make_Q(1, 1, 3);
    SparsePoly a = parse_poly("x1 + x2 + 0*x3");
    SparsePoly b = parse_poly("x1 + 0*x2 + x3");
    SparsePoly c = parse_poly("0*x1 + x2 + x3");
    CHECK(q3 == (a * b * c).scaled(3));

    std::vector<std::vector<Rational>> id = {{1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
    CHECK(compose_linear(q3, id) == q3);

    // d=3 pair map applied to Q_{1,1}^2 gives 2 Y(1): y1 = z1+z2, y2 = z1-z2.
    SparsePoly q2 = make_Q(1, 1, 2);
    std::vector<std::vector<Rational>> pair_map = {{1, 1}, {1, -1}};
    CHECK(compose_linear(q2, pair_map) == make_Y(1).scaled(2));
}

TEST_CASE("series arithmetic respects truncation") {
    std::mt19937 rng(777);
    std::uniform_int_distribution<int> e(0, 3), c(-5, 5);
    const int D = 6;
    for (int trial = 0; trial < 40; ++trial) {
        SparsePoly pa(2), pb(2), pc(2);
        for (int t = 0; t < 5; ++t) {
            Exponents g{e(rng), e(rng)};
            pa.add_term(g, c(rng));
            Exponents h{e(rng), e(rng)};
            pb.add_term(h, c(rng));
            Exponents k{e(rng), e(rng)};
            pc.add_term(k, c(rng));
        }
        TruncatedSeries A(pa, D), B(pb, D), C(pc, D);
        // distributivity at fixed truncation
        CHECK(((A + B) * C).poly() == (A * C + B * C).poly());
        // multiplication agrees with exact product truncated
        CHECK((A * B).poly() == (pa * pb).truncated(D));
    }
}

TEST_CASE("germ composition sqrt(1+u)") {
    // (sqrt(1+u))^2 = 1 + u for u = x1 + x1*x2 up to degree 6
    SparsePoly u = parse_poly("x1 + x1*x2");
    TruncatedSeries U(u, 6);
    TruncatedSeries root = U.compose_germ(sqrt1p_germ(6));
    SparsePoly sq = (root * root).poly();
    SparsePoly expect = SparsePoly::constant(2, 1) + u;
    CHECK(sq.truncated(5) == expect.truncated(5));  // degree-6 tail is truncation noise
    CHECK_THROWS_AS(TruncatedSeries(SparsePoly::constant(2, 1), 6).compose_germ(sqrt1p_germ(6)),
                    Degenerate);
}

TEST_CASE("weighted degrees and H membership") {
    Weight third{make_rational(1, 3), make_rational(1, 3), make_rational(1, 3)};
    SparsePoly q3 = make_Q(1, 1, 3);
    auto m = weighted_min_degree(q3, third);
    REQUIRE(m.has_value());
    CHECK(*m == 1);
    CHECK_FALSE(is_in_H(q3, third));

    CHECK(is_in_H(SparsePoly(3), third));  // zero polynomial: vacuous

    // xi_d^2 has w_d-degree exactly 1, so it is excluded from H_{w_d,d}
    SparsePoly xd2(4);
    xd2.add_term({0, 0, 0, 2}, 1);
    CHECK(weighted_degree({0, 0, 0, 2}, weight_wd(4)) == 1);
    CHECK_FALSE(is_in_H(xd2, weight_wd(4)));
}

TEST_CASE("substitution with power cache matches naive eval") {
    SparsePoly p = parse_poly("x1^3*x2 - 2*x2^2 + 1/3*x1");
    std::vector<std::vector<Rational>> A = {{2, 1}, {-1, 3}};
    SparsePoly q = compose_linear(p, A);
    std::vector<Rational> x{make_rational(1, 2), make_rational(-2, 3)};
    std::vector<Rational> Ax{A[0][0] * x[0] + A[0][1] * x[1], A[1][0] * x[0] + A[1][1] * x[1]};
    CHECK(q.eval_exact(x) == p.eval_exact(Ax));
}
