#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "latticewave/evolve.hpp"
#include "latticewave/oscquad.hpp"
#include "latticewave/quadrature.hpp"

using namespace lw;
namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

LatticeField random_field(int d, int L, std::mt19937& rng, bool cplx = false, double spread = 1.0) {
    LatticeField f(d, L, cplx);
    std::normal_distribution<double> g(0.0, spread);
    if (cplx)
        for (auto& v : f.cplx_data()) v = {g(rng), g(rng)};
    else
        for (auto& v : f.real_data()) v = g(rng);
    return f;
}

double dot(const LatticeField& a, const LatticeField& b) {
    long double s = 0;
    for (std::size_t i = 0; i < a.sites(); ++i) s += a.at(i).real() * b.at(i).real();
    return static_cast<double>(s);
}

}  // namespace

TEST_CASE("linear propagation basics") {
    std::mt19937 rng(4);
    LatticeField g = random_field(2, 32, rng);
    LatticeField f = random_field(2, 32, rng);

    SUBCASE("t = 0 is the identity") {
        EvolutionState s = linear_propagate(g, f, 0.0);
        for (std::size_t i = 0; i < g.sites(); ++i) {
            CHECK(s.u.at(i).real() == doctest::Approx(g.at(i).real()).epsilon(1e-14));
            CHECK(s.ut.at(i).real() == doctest::Approx(f.at(i).real()).epsilon(1e-14));
        }
    }

    SUBCASE("semigroup composition") {
        EvolutionState once = linear_propagate(g, f, 7.0);
        EvolutionState stepped = linear_propagate(once.u, once.ut, 5.0);
        EvolutionState direct = linear_propagate(g, f, 12.0);
        double scale = std::max(1.0, direct.u.lp_norm(kInf));
        for (std::size_t i = 0; i < g.sites(); ++i) {
            CHECK(std::abs(stepped.u.at(i) - direct.u.at(i)) <= 1e-12 * scale);
            CHECK(std::abs(stepped.ut.at(i) - direct.ut.at(i)) <= 1e-12 * scale);
        }
    }

    SUBCASE("energy conservation") {
        EvolutionState s0 = linear_propagate(g, f, 0.0);
        double e0 = field_energy(s0);
        for (double t : {13.0, 47.0, 100.0}) {
            EvolutionState s = linear_propagate(g, f, t);
            CHECK(std::abs(field_energy(s) - e0) <= 1e-10 * e0);
        }
    }

    SUBCASE("box guard") {
        CHECK_THROWS_AS(linear_propagate(g, f, 30.0, true), BoxTooSmall);
    }
}

TEST_CASE("cross-backend: FFT propagator vs direct quadrature") {
    for (int d : {2, 3}) {
        DispersionRelation rel{d, 0.0};
        int L = d == 2 ? 128 : 96;
        double t = d == 2 ? 30.0 : 25.0;
        LatticeField f = LatticeField::delta(d, L);
        EvolutionState s = linear_propagate(LatticeField(d, L), f, t, true);
        std::mt19937 rng(19 + d);
        std::uniform_int_distribution<long> pick(-12, 12);
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<long> x(d);
            for (auto& v : x) v = pick(rng);
            GreenResult g = green_G(rel, x, t);
            CHECK(std::abs(s.u.value(x).real() - g.value) < 1e-8);
        }
    }
}

TEST_CASE("finite speed of propagation") {
    int d = 2, L = 96;
    double t = 20.0;
    EvolutionState s = linear_propagate(LatticeField(d, L), LatticeField::delta(d, L), t, true);
    for (long x1 = -L / 2 + 1; x1 <= L / 2; ++x1) {
        long x2 = L / 2 - std::abs(x1);
        if (std::abs(x1) + std::abs(x2) <= static_cast<long>(t) + 10) continue;
        CHECK(std::abs(s.u.value({x1, x2}).real()) < 1e-8);
    }
}

TEST_CASE("half wave unitarity and group law") {
    std::mt19937 rng(9);
    LatticeField f = random_field(3, 16, rng, true);
    double n0 = f.l2_norm();

    LatticeField a = half_wave(f, 4.5, +1);
    CHECK(a.l2_norm() == doctest::Approx(n0).epsilon(1e-12));

    LatticeField b = half_wave(a, 7.5, +1);
    LatticeField c = half_wave(f, 12.0, +1);
    double err = 0;
    for (std::size_t i = 0; i < f.sites(); ++i) err = std::max(err, std::abs(b.at(i) - c.at(i)));
    CHECK(err <= 1e-12 * std::max(1.0, n0));

    LatticeField id = half_wave(f, 0.0, +1);
    for (std::size_t i = 0; i < f.sites(); ++i) CHECK(std::abs(id.at(i) - f.at(i)) < 1e-14);

    // adjoint pair: e^{itD} then e^{-itD} returns the input
    LatticeField back = half_wave(a, 4.5, -1);
    for (std::size_t i = 0; i < f.sites(); ++i) CHECK(std::abs(back.at(i) - f.at(i)) < 1e-12);
}

TEST_CASE("inv_D facts") {
    std::mt19937 rng(21);
    LatticeField f = random_field(2, 32, rng);
    // remove the mean so that 1/D is exactly invertible by D
    double mean = 0;
    for (double v : f.real_data()) mean += v;
    mean /= static_cast<double>(f.sites());
    for (double& v : f.real_data()) v -= mean;

    InvDResult r = inv_D(f);
    CHECK_FALSE(r.mean_warning);
    LatticeField back = apply_D(r.field);
    for (std::size_t i = 0; i < f.sites(); ++i)
        CHECK(std::abs(back.at(i).real() - f.at(i).real()) <= 1e-12 * std::max(1.0, f.lp_norm(kInf)));

    LatticeField biased = random_field(2, 32, rng);
    biased.real_data()[0] += 50.0;
    CHECK(inv_D(biased).mean_warning);
}

TEST_CASE("1/D kernel decays like |x|^{1-d} (quick look)") {
    int d = 2, L = 512;
    InvDResult r = inv_D(LatticeField::delta(d, L));
    // log-log slope over 8 <= |x| <= 48 along the axis
    std::vector<double> lx, lv;
    for (long m = 8; m <= 48; m += 4) {
        double v = std::abs(r.field.value({m, 0}).real());
        lx.push_back(std::log((double)m));
        lv.push_back(std::log(v));
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += lv[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * lv[i];
    }
    double n = static_cast<double>(lx.size());
    double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    CHECK(slope == doctest::Approx(-1.0).epsilon(0.2));
}

TEST_CASE("nonlinear solver") {
    std::mt19937 rng(31);

    SUBCASE("k = 0 reproduces the linear flow") {
        LatticeField g = random_field(2, 24, rng);
        LatticeField f = random_field(2, 24, rng);
        NonlinearOptions opts;
        opts.k = 0;
        opts.dt = 0.5;
        opts.snapshot_stride = 1 << 20;
        auto traj = nonlinear_solve_collect(g, f, 10.0, opts);
        EvolutionState lin = linear_propagate(g, f, 10.0);
        const EvolutionState& last = traj.back();
        double scale = std::max(1.0, lin.u.lp_norm(kInf));
        for (std::size_t i = 0; i < g.sites(); ++i)
            CHECK(std::abs(last.u.at(i) - lin.u.at(i)) <= 1e-12 * scale);
    }

    SUBCASE("second order in dt") {
        LatticeField g(2, 16);
        LatticeField f(2, 16);
        f.real_data()[f.index({0, 0})] = 1.0;
        f.real_data()[f.index({1, 0})] = -0.5;
        auto run = [&](double dt) {
            NonlinearOptions o;
            o.k = 3;
            o.dt = dt;
            o.snapshot_stride = 1 << 20;
            return nonlinear_solve_collect(g, f, 4.0, o).back();
        };
        EvolutionState ref = run(0.0125);
        double errs[3];
        double dts[3] = {0.1, 0.05, 0.025};
        for (int i = 0; i < 3; ++i) {
            EvolutionState s = run(dts[i]);
            double e = 0;
            for (std::size_t k = 0; k < g.sites(); ++k)
                e = std::max(e, std::abs(s.u.at(k) - ref.u.at(k)));
            errs[i] = e;
        }
        double rate1 = std::log2(errs[0] / errs[1]);
        double rate2 = std::log2(errs[1] / errs[2]);
        CHECK(rate1 == doctest::Approx(2.0).epsilon(0.08));
        CHECK(rate2 == doctest::Approx(2.0).epsilon(0.12));
    }

    SUBCASE("blowup guard") {
        LatticeField g(1, 16);
        LatticeField f(1, 16);
        f.real_data()[0] = 10.0;
        NonlinearOptions o;
        o.k = 5;
        o.dt = 0.05;
        o.blowup_cap = 50.0;
        CHECK_THROWS_AS(nonlinear_solve_collect(g, f, 50.0, o), Blowup);
    }
}

TEST_CASE("pairing symmetry of the propagator") {
    std::mt19937 rng(41);
    LatticeField f = random_field(2, 32, rng);
    LatticeField g = random_field(2, 32, rng);
    double t = 9.0;
    LatticeField zero(2, 32);
    LatticeField Gf = linear_propagate(zero, f, t).u;
    LatticeField Gg = linear_propagate(zero, g, t).u;
    CHECK(dot(Gf, g) == doctest::Approx(dot(f, Gg)).epsilon(1e-12));
}

TEST_CASE("Parseval consistency with torus quadrature") {
    // sum_x G(x,t)^2 for d=3, t=10 against (2pi)^{-d} int sin^2/omega^2
    int d = 3, L = 64;
    double t = 10.0;
    EvolutionState s = linear_propagate(LatticeField(d, L), LatticeField::delta(d, L), t, true);
    long double lhs = 0;
    for (std::size_t i = 0; i < s.u.sites(); ++i) lhs += s.u.at(i).real() * s.u.at(i).real();

    Complex rhs = quad_torus(
        [t](const std::vector<double>& xi) {
            double w2 = 0;
            for (double x : xi) w2 += 2.0 - 2.0 * std::cos(x);
            double w = std::sqrt(w2);
            double v = w < 1e-12 ? t : std::sin(t * w) / w;
            return Complex(v * v, 0.0);
        },
        d, 128);
    double expect = rhs.real() / std::pow(2 * std::numbers::pi, d);
    CHECK(static_cast<double>(lhs) == doctest::Approx(expect).epsilon(1e-6));
}

TEST_CASE("mixed norms") {
    // constant-in-time: L^q over [0,T] equals T^{1/q} times the snapshot norm
    std::vector<double> ts;
    std::vector<double> ns;
    for (int i = 0; i <= 20; ++i) {
        ts.push_back(0.5 * i);
        ns.push_back(3.0);
    }
    MixedNormReport rep = mixed_norm(ts, ns, 4.0, 2.0);
    CHECK(rep.value == doctest::Approx(std::pow(10.0, 0.25) * 3.0).epsilon(1e-12));

    MixedNormReport sup = mixed_norm(ts, ns, kInf, 2.0);
    CHECK(sup.value == doctest::Approx(3.0).epsilon(1e-14));

    // nesting on a snapshot: l2 >= l4
    std::mt19937 rng(7);
    LatticeField f = random_field(2, 24, rng);
    CHECK(f.lp_norm(2.0) >= f.lp_norm(4.0));
}

TEST_CASE("lplq quick run in d = 2") {
    LplqTable tab = lplq_experiment(2, 96, 1.0, kInf, 30.0, 1.0);
    CHECK(tab.target_exponent == doctest::Approx(0.75));
    CHECK_FALSE(tab.log_corrected);
    CHECK(tab.rows.size() == 30);
    CHECK(tab.bounded);

    // (2,2) boundedness needs the 1/omega^2 integral to converge, i.e. d >= 3
    LplqTable l2 = lplq_experiment(3, 64, 2.0, 2.0, 30.0, 1.0);
    CHECK(l2.target_exponent == 0.0);
    CHECK(l2.bounded);
}

TEST_CASE("field io round trip") {
    std::mt19937 rng(77);
    LatticeField f = random_field(3, 8, rng, true);
    write_field(f, "/tmp/lw_field_test.bin");
    LatticeField g = read_field("/tmp/lw_field_test.bin");
    REQUIRE(g.sites() == f.sites());
    CHECK(g.is_complex());
    for (std::size_t i = 0; i < f.sites(); ++i) CHECK(std::abs(f.at(i) - g.at(i)) == 0.0);
}
