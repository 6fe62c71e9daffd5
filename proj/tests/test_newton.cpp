#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "latticewave/errors.hpp"
#include "latticewave/newton.hpp"

using namespace lw;

namespace {

SparsePoly random_poly(std::mt19937& rng, int nvars, int nterms, int max_exp) {
    std::uniform_int_distribution<int> e(0, max_exp), c(1, 9), sgn(0, 1);
    SparsePoly p(nvars);
    while (static_cast<int>(p.term_count()) < nterms) {
        Exponents g(nvars);
        int tot = 0;
        for (int i = 0; i < nvars; ++i) {
            g[i] = e(rng);
            tot += g[i];
        }
        if (tot == 0) continue;
        p.add_term(g, (sgn(rng) ? 1 : -1) * Rational(c(rng)));
    }
    return p;
}

}  // namespace

TEST_CASE("reference Newton distances") {
    // xi1^3 with a dummy second variable
    SparsePoly cusp(2);
    cusp.add_term({3, 0}, 1);
    NewtonData nd = newton_data(cusp);
    CHECK(nd.d_S == 3);
    CHECK(nd.k_S == 1);
    CHECK(nd.certificate.verified);

    NewtonData a = newton_data(parse_poly("x1^2 + x1*x2^2"));
    CHECK(a.d_S == make_rational(4, 3));
    CHECK(a.k_S == 1);
    CHECK(a.certificate.verified);

    NewtonData b = newton_data(parse_poly("x1^2*x2 - x2^3"));
    CHECK(b.d_S == make_rational(3, 2));
    CHECK(b.k_S == 1);
    CHECK(b.varchenko.first == make_rational(-2, 3));
    CHECK(b.varchenko.second == 0);

    NewtonData c = newton_data(parse_poly("x1*x2*x3"));
    CHECK(c.d_S == 1);
    CHECK(c.k_S == 3);
    CHECK(c.varchenko.first == -1);
    CHECK(c.varchenko.second == 2);
}

TEST_CASE("single monomial identity") {
    std::mt19937 rng(4242);
    std::uniform_int_distribution<int> nv(1, 5), e(0, 7);
    for (int trial = 0; trial < 100; ++trial) {
        int n = nv(rng);
        Exponents g(n);
        int mx = 0, tot = 0;
        for (int i = 0; i < n; ++i) {
            g[i] = e(rng);
            mx = std::max(mx, g[i]);
            tot += g[i];
        }
        if (tot == 0) continue;
        NewtonData nd = newton_data(SparsePoly::monomial(g, 1));
        CHECK(nd.d_S == mx);
    }
}

TEST_CASE("permutation invariance and monotonicity of d_S") {
    std::mt19937 rng(99);
    for (int trial = 0; trial < 50; ++trial) {
        SparsePoly p = random_poly(rng, 3, 4, 5);
        NewtonData base = newton_data(p);

        std::vector<int> perm{0, 1, 2};
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<std::vector<Rational>> A(3, std::vector<Rational>(3, Rational(0)));
        for (int i = 0; i < 3; ++i) A[i][perm[i]] = 1;
        SparsePoly q = compose_linear(p, A);
        CHECK(newton_data(q).d_S == base.d_S);

        // Adding a monomial never increases d_S.
        std::uniform_int_distribution<int> e(0, 5);
        Exponents g{e(rng), e(rng), e(rng)};
        if (total_degree(g) > 0 && p.coeff(g) == 0) {
            SparsePoly bigger = p;
            bigger.add_term(g, 1);
            CHECK(newton_data(bigger).d_S <= base.d_S);
        }
    }
}

TEST_CASE("principal face membership and face_part") {
    SparsePoly p = parse_poly("x1^2*x2 - x2^3 + x1^5");
    NewtonData nd = newton_data(p);
    CHECK(nd.d_S == make_rational(3, 2));
    SparsePoly pf = face_part(p, nd.principal);
    CHECK(pf == parse_poly("x1^2*x2 - x2^3"));

    // face part of face part is idempotent
    CHECK(face_part(pf, nd.principal) == pf);

    // vertex face of x1*x2*x3 is the monomial itself
    NewtonData c = newton_data(parse_poly("x1*x2*x3"));
    REQUIRE(c.faces_enumerated);
    bool found_vertex_face = false;
    for (const auto& f : c.compact_faces) {
        if (f.affine_dim == 0) {
            CHECK(face_part(parse_poly("x1*x2*x3"), f) == parse_poly("x1*x2*x3"));
            found_vertex_face = true;
        }
    }
    CHECK(found_vertex_face);
}

TEST_CASE("vertices and membership LPs") {
    SparsePoly p = parse_poly("x1^2 + x1*x2^2 + x1^2*x2^2 + x2^5");
    NewtonData nd = newton_data(p);
    // (2,2) is dominated territory: inside the polyhedron, not a vertex
    CHECK(point_in_polyhedron(nd.support, {Rational(2), Rational(2)}));
    CHECK(strictly_above_compact_boundary(nd.support, {Rational(2), Rational(2)}));
    for (const auto& v : nd.vertices) CHECK(v != Exponents{2, 2});
    // the diagonal point itself is on the boundary, not strictly above
    std::vector<Rational> center{nd.d_S, nd.d_S};
    CHECK(point_in_polyhedron(nd.support, center));
    CHECK_FALSE(strictly_above_compact_boundary(nd.support, center));
}

TEST_CASE("LP certificate audit on random instances") {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        SparsePoly p = random_poly(rng, 2 + trial % 3, 3 + trial % 5, 6);
        NewtonData nd = newton_data(p);
        CHECK(nd.certificate.verified);
    }
}

TEST_CASE("adapted coordinate recognition in d=2") {
    CHECK(adapted_check_2d(parse_poly("x1^2*x2 - x2^3")));
    CHECK(adapted_check_2d(parse_poly("x1^2 + x1*x2^2")));
    // (x1 - x2)^2: double root on the diagonal
    CHECK_FALSE(adapted_check_2d(parse_poly("x1^2 - 2*x1*x2 + x2^2")));
    CHECK_THROWS_AS(adapted_check_2d(parse_poly("x1*x2*x3")), NotApplicable);
}

TEST_CASE("sampled R-nondegeneracy verdicts") {
    auto verdicts = check_R_nondegenerate(parse_poly("x1*x2*x3"));
    REQUIRE(!verdicts.empty());
    for (const auto& v : verdicts) CHECK(v.nondegenerate);

    auto bad = check_R_nondegenerate(parse_poly("x1^2 - 2*x1*x2 + x2^2"));
    bool witness_found = false;
    for (const auto& v : bad)
        if (!v.nondegenerate) witness_found = true;
    CHECK(witness_found);
}

TEST_CASE("exact Q-family criticality") {
    CHECK_FALSE(q_critical_witness(4, 1, 2).has_value());
    CHECK_FALSE(q_critical_witness(4, 1, 3).has_value());
    // Q_{1,1}^3 degenerates along (1,1,-1)
    auto w = q_critical_witness(1, 1, 3);
    REQUIRE(w.has_value());
    int sum = 0;
    for (int s : *w) sum += s;
    CHECK(sum * sum == 1);
    CHECK_FALSE(q_critical_witness(1, 1, 2).has_value());
}

TEST_CASE("degenerate inputs raise typed errors") {
    CHECK_THROWS_AS(newton_data(SparsePoly(2)), Degenerate);
    NewtonOptions tight;
    tight.max_terms = 2;
    CHECK_THROWS_AS(newton_data(parse_poly("x1 + x2 + x1*x2"), tight), TooLarge);
}
