#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "latticewave/dispersion.hpp"
#include "latticewave/numutil.hpp"

using namespace lw;
namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> random_xi(int d, std::mt19937& rng, double margin = 0.1) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::vector<double> xi(d);
    while (true) {
        for (auto& x : xi) x = u(rng);
        DispersionRelation rel{d, 0.0};
        if (rel.omega(xi) > margin) return xi;
    }
}

}  // namespace

TEST_CASE("omega reference values") {
    DispersionRelation r4{4, 0.0};
    CHECK(r4.omega(std::vector<double>(4, 0.0)) == 0.0);
    CHECK(r4.omega(std::vector<double>(4, kPi / 2)) ==
          doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    DispersionRelation r2m{2, 1.0};
    CHECK(r2m.omega({0.0, 0.0}) == doctest::Approx(1.0).epsilon(1e-15));
    // periodicity and evenness
    DispersionRelation r3{3, 0.0};
    std::mt19937 rng(5);
    for (int t = 0; t < 50; ++t) {
        auto xi = random_xi(3, rng);
        auto neg = xi;
        auto shift = xi;
        for (auto& x : neg) x = -x;
        shift[t % 3] += 2 * kPi;
        CHECK(r3.omega(xi) == doctest::Approx(r3.omega(neg)).epsilon(1e-14));
        CHECK(r3.omega(xi) == doctest::Approx(r3.omega(shift)).epsilon(1e-13));
        double w2 = r3.mass * r3.mass;
        for (double x : xi) w2 += 2.0 - 2.0 * std::cos(x);
        CHECK(r3.omega_sq(xi) == doctest::Approx(w2).epsilon(1e-14));
    }
}

TEST_CASE("gradient reference values and finite differences") {
    DispersionRelation r4{4, 0.0};
    auto g = r4.grad_omega(std::vector<double>(4, kPi / 2));
    for (double gj : g) CHECK(gj == doctest::Approx(1.0 / (2.0 * std::sqrt(2.0))).epsilon(1e-14));

    DispersionRelation r2{2, 0.0};
    auto gpi = r2.grad_omega({kPi, kPi});
    CHECK(std::abs(gpi[0]) < 1e-15);
    CHECK(std::abs(gpi[1]) < 1e-15);

    CHECK_THROWS_AS(r2.grad_omega({0.0, 0.0}), SingularPoint);

    std::mt19937 rng(17);
    for (int d : {2, 3, 4}) {
        DispersionRelation rel{d, 0.0};
        for (int t = 0; t < 340; ++t) {
            auto xi = random_xi(d, rng, 0.3);
            auto g0 = rel.grad_omega(xi);
            const double h = 1e-5;
            for (int j = 0; j < d; ++j) {
                auto xp = xi, xm = xi;
                xp[j] += h;
                xm[j] -= h;
                double fd = (rel.omega(xp) - rel.omega(xm)) / (2 * h);
                CHECK(std::abs(g0[j] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
            }
        }
    }
}

TEST_CASE("hessian closed form at the most degenerate point") {
    DispersionRelation r4{4, 0.0};
    auto H = r4.hess_omega(std::vector<double>(4, kPi / 2));
    double expect = -1.0 / (16.0 * std::sqrt(2.0));
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(H[i * 4 + j] == doctest::Approx(expect).epsilon(1e-13));
    auto ev = symmetric_eigenvalues(H, 4);
    CHECK(ev[0] == doctest::Approx(-1.0 / (4.0 * std::sqrt(2.0))).epsilon(1e-12));
    for (int k = 1; k < 4; ++k) CHECK(std::abs(ev[k]) < 1e-14);
}

TEST_CASE("hessian matches finite differences and is symmetric") {
    std::mt19937 rng(23);
    for (int d : {2, 3}) {
        DispersionRelation rel{d, 0.0};
        for (int t = 0; t < 120; ++t) {
            auto xi = random_xi(d, rng, 0.3);
            auto H = rel.hess_omega(xi);
            const double h = 1e-5;
            for (int i = 0; i < d; ++i) {
                CHECK(H[i * d + i] == H[i * d + i]);
                for (int j = 0; j < d; ++j) {
                    CHECK(H[i * d + j] == H[j * d + i]);
                    auto xp = xi, xm = xi;
                    xp[j] += h;
                    xm[j] -= h;
                    double fd = (rel.grad_omega(xp)[i] - rel.grad_omega(xm)[i]) / (2 * h);
                    CHECK(std::abs(H[i * d + j] - fd) <= 1e-6 * std::max(1.0, std::abs(fd)));
                }
            }
        }
    }
    DispersionRelation r2{2, 0.0};
    auto Hpi = r2.hess_omega({kPi, kPi});
    double w = r2.omega({kPi, kPi});
    CHECK(Hpi[0] == doctest::Approx(-1.0 / w).epsilon(1e-14));
    CHECK(Hpi[3] == doctest::Approx(-1.0 / w).epsilon(1e-14));
    CHECK(std::abs(Hpi[1]) < 1e-15);
}

TEST_CASE("group speed facts") {
    DispersionRelation r4{4, 0.0};
    CHECK(r4.group_speed_sq(std::vector<double>(4, kPi / 2)) == doctest::Approx(0.5).epsilon(1e-14));

    // limit 1 along rays toward the origin
    for (double t : {1e-2, 1e-3, 1e-4}) {
        std::vector<double> xi{t, 0.7 * t, -0.3 * t, 0.1 * t};
        CHECK(r4.group_speed_sq(xi) == doctest::Approx(1.0).epsilon(1e-3));
    }

    std::mt19937 rng(31);
    for (int t = 0; t < 10000; ++t) {
        auto xi = random_xi(4, rng, 1e-3);
        double V = r4.group_speed_sq(xi);
        CHECK(V < 1.0);
        auto g = r4.grad_omega(xi);
        double g2 = 0;
        for (double x : g) g2 += x * x;
        CHECK(std::abs(V - g2) <= 1e-12);
    }
}

TEST_CASE("sigma1' residual") {
    DispersionRelation r2{2, 0.0};
    CHECK(sigma1prime_residual(r2, {kPi / 3, kPi / 3}) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(sigma1prime_residual(r2, {kPi / 2, 1.0}), SecPole);

    // constructed Sigma1' members solve the equation to machine precision
    auto xi = make_sigma1prime_point(2, {1.45});
    REQUIRE(xi.has_value());
    CHECK(std::abs(sigma1prime_residual(r2, *xi)) <= 1e-8);

    // residual identity sum (cos-1)^2/cos
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> u(0.1, 1.4);
    for (int t = 0; t < 100; ++t) {
        std::vector<double> p{u(rng), u(rng)};
        double lhs = sigma1prime_residual(r2, p);
        double rhs = 0;
        for (double x : p) {
            double c = std::cos(x);
            rhs += (c - 1) * (c - 1) / c;
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("classification of reference points") {
    DispersionRelation r4{4, 0.0};
    auto most = classify(r4, std::vector<double>(4, kPi / 2));
    CHECK(most.corank == 3);
    CHECK(to_string(most.label) == "Sigma3");

    auto s2 = classify(r4, {kPi / 2, kPi / 2, kPi / 2, 1.0});
    CHECK(s2.corank == 2);
    CHECK(to_string(s2.label) == "Sigma2");

    DispersionRelation r2{2, 0.0};
    auto p = make_sigma1prime_point(2, {1.45});
    REQUIRE(p.has_value());
    auto s1p = classify(r2, *p);
    CHECK(s1p.corank == 1);
    CHECK(to_string(s1p.label) == "Sigma1'");

    auto s1pp = classify(r2, {kPi / 2, -kPi / 2});
    CHECK(s1pp.corank == 1);
    CHECK(to_string(s1pp.label) == "Sigma1''");
}

TEST_CASE("classifier agreement on constructed strata") {
    std::mt19937 rng(2718);
    for (int d : {2, 3, 4}) {
        DispersionRelation rel{d, 0.0};
        for (int k = 1; k < d; ++k) {
            for (int t = 0; t < 100; ++t) {
                auto xi = make_sigma_k_point(d, k, rng);
                auto cp = classify(rel, xi);
                CHECK(cp.corank == k);
            }
        }
        // Sigma0: no quarter-pi coordinates, residual bounded away from zero
        for (int t = 0; t < 100; ++t) {
            std::vector<double> xi;
            do {
                xi = random_xi(d, rng, 0.2);
                bool quarter = false;
                for (double x : xi)
                    if (std::abs(std::cos(x)) < 0.05) quarter = true;
                if (quarter) continue;
                if (std::abs(sigma1prime_residual(rel, xi)) < 0.01) continue;
                break;
            } while (true);
            CHECK(classify(rel, xi).corank == 0);
        }
    }
}

TEST_CASE("critical point search") {
    DispersionRelation r4{4, 0.0};

    SUBCASE("outside the light cone the critical set is empty") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> u(-1, 1);
        for (int t = 0; t < 40; ++t) {
            std::vector<double> v(4);
            double n2 = 0;
            for (auto& x : v) {
                x = u(rng);
                n2 += x * x;
            }
            double scale = (1.0 + 1.5 * (t % 10) / 10.0) / std::sqrt(n2);
            for (auto& x : v) x *= scale;
            CHECK(find_critical_points(r4, v).empty());
        }
    }

    SUBCASE("most degenerate velocity recovers the quarter-pi point") {
        double v0 = 1.0 / std::sqrt(8.0);
        auto pts = find_critical_points(r4, {v0, v0, v0, v0});
        bool found = false;
        for (const auto& cp : pts) {
            bool match = true;
            for (double x : cp.xi)
                if (std::abs(x - kPi / 2) > 1e-8) match = false;
            if (match) {
                found = true;
                CHECK(cp.corank == 3);
            }
        }
        CHECK(found);
    }

    SUBCASE("zero velocity yields the 0/pi patterns") {
        auto pts = find_critical_points(r4, {0, 0, 0, 0});
        CHECK(pts.size() == 15);  // all {0, pi}^4 patterns except the origin
        bool has_pi000 = false;
        for (const auto& cp : pts) {
            int npi = 0, nzero = 0;
            for (double x : cp.xi) {
                if (std::abs(std::abs(x) - kPi) < 1e-9) ++npi;
                if (std::abs(x) < 1e-9) ++nzero;
            }
            CHECK(npi + nzero == 4);
            CHECK(npi >= 1);
            if (npi == 1 && std::abs(std::abs(cp.xi[0]) - kPi) < 1e-9) has_pi000 = true;
        }
        CHECK(has_pi000);
    }

    SUBCASE("generic interior velocity is consistent with the gradient") {
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> u(-0.6, 0.6);
        for (int t = 0; t < 12; ++t) {
            std::vector<double> v{u(rng), u(rng), u(rng), u(rng)};
            auto pts = find_critical_points(r4, v);
            CHECK(!pts.empty());
            for (const auto& cp : pts) {
                auto g = r4.grad_omega(cp.xi);
                for (int j = 0; j < 4; ++j) CHECK(std::abs(g[j] - v[j]) <= 1e-8);
            }
        }
    }
}

TEST_CASE("velocity images of Sigma2 and Sigma3 stay apart in d=4") {
    DispersionRelation r4{4, 0.0};
    std::vector<double> v3 = r4.grad_omega(std::vector<double>(4, kPi / 2));
    double min_dist = 1e9;
    for (int i = 0; i < 400; ++i) {
        double xs = kPi * (i + 0.5) / 400;
        if (std::abs(xs - kPi / 2) < 1e-8) continue;
        std::vector<double> xi{kPi / 2, kPi / 2, kPi / 2, xs};
        auto v = r4.grad_omega(xi);
        double dist = 0;
        for (int j = 0; j < 4; ++j) dist = std::max(dist, std::abs(v[j] - v3[j]));
        min_dist = std::min(min_dist, dist);
    }
    CHECK(min_dist > 1e-6);
}

TEST_CASE("b0 estimate") {
    DispersionRelation r4{4, 0.0};
    B0Estimate e4 = estimate_b0(r4, 48);
    CHECK(e4.sup_speed >= 1.0 / std::sqrt(2.0) - 1e-12);
    CHECK(e4.sup_speed < 1.0);
    CHECK(e4.delta > 0);
    CHECK(e4.converged);

    DispersionRelation r3{3, 0.0};
    B0Estimate e3 = estimate_b0(r3, 64);
    CHECK(e3.sup_speed < 1.0);
    CHECK(e3.delta > 0);
    CHECK(e3.converged);
}
