#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "latticewave/decayfit.hpp"
#include "latticewave/suites.hpp"

using namespace lw;

namespace {

DecaySamples synthetic(double beta, int p, double logC, double t0, double t1, int n) {
    DecaySamples s;
    for (int i = 0; i < n; ++i) {
        double t = t0 * std::pow(t1 / t0, static_cast<double>(i) / (n - 1));
        s.t.push_back(t);
        s.magnitude.push_back(std::exp(logC) * std::pow(t, beta) * std::pow(std::log(t), p));
    }
    return s;
}

}  // namespace

TEST_CASE("exact recovery on synthetic power laws") {
    for (double beta : {-0.25, -0.75, -1.0, -1.5, -2.0}) {
        for (int p : {0, 1, 2}) {
            DecaySamples s = synthetic(beta, p, 0.3, 10.0, 1000.0, 25);
            DecayFit fit = fit_decay(s);
            CAPTURE(beta);
            CAPTURE(p);
            CHECK(std::abs(fit.models.at(p).beta - beta) < 1e-8);
            CHECK(fit.p == p);
            if (p > 0) CHECK(fit.p_resolved);
        }
    }
}

TEST_CASE("reference synthetic case selects p = 1") {
    DecaySamples s = synthetic(-1.5, 1, 0.0, 10.0, 1000.0, 30);
    DecayFit fit = fit_decay(s);
    CHECK(std::abs(fit.beta + 1.5) < 1e-6);
    CHECK(fit.p == 1);
}

TEST_CASE("model selection honesty on pure power laws") {
    // on t^{-1} data the p = 1 model must not win
    DecaySamples s = synthetic(-1.0, 0, 0.0, 10.0, 500.0, 25);
    DecayFit fit = fit_decay(s);
    CHECK(fit.p == 0);
    CHECK(fit.models.at(0).rms <= fit.models.at(1).rms + 1e-6);
}

TEST_CASE("scale equivariance") {
    DecaySamples s = synthetic(-0.8, 0, 0.0, 9.0, 800.0, 22);
    DecaySamples scaled = s;
    for (auto& m : scaled.magnitude) m *= 1e3;
    DecayFit a = fit_decay(s);
    DecayFit b = fit_decay(scaled);
    CHECK(std::abs(a.beta - b.beta) < 1e-12);
    CHECK(a.p == b.p);
    CHECK(std::abs(b.logC - a.logC - std::log(1e3)) < 1e-10);
}

TEST_CASE("envelope fitting rides over zeros") {
    // oscillating magnitude m = t^{-1} |cos t|: raw log-fit would be wrecked
    DecaySamples s;
    for (int i = 0; i < 120; ++i) {
        double t = 10.0 + i;
        s.t.push_back(t);
        s.magnitude.push_back(std::abs(std::cos(t)) / t);
    }
    FitOptions fo;
    fo.envelope_window = 5;
    DecayFit fit = fit_decay(s, fo);
    CHECK(std::abs(fit.models.at(0).beta + 1.0) < 0.06);
}

TEST_CASE("insufficient range is rejected") {
    DecaySamples narrow = synthetic(-1.0, 0, 0.0, 10.0, 30.0, 12);
    CHECK_THROWS_AS(fit_decay(narrow), InsufficientRange);
    DecaySamples few = synthetic(-1.0, 0, 0.0, 10.0, 100.0, 5);
    CHECK_THROWS_AS(fit_decay(few), InsufficientRange);
}

TEST_CASE("schedule robustness: thinning changes beta by little") {
    DecaySamples s = synthetic(-0.75, 0, 0.2, 10.0, 500.0, 40);
    // inject mild deterministic oscillation
    for (std::size_t i = 0; i < s.t.size(); ++i)
        s.magnitude[i] *= 1.0 + 0.05 * std::sin(3.0 * s.t[i]);
    DecaySamples thin;
    for (std::size_t i = 0; i < s.t.size(); i += 2) {
        thin.t.push_back(s.t[i]);
        thin.magnitude.push_back(s.magnitude[i]);
    }
    double b_full = fit_decay(s).beta;
    double b_thin = fit_decay(thin).beta;
    CHECK(std::abs(b_full - b_thin) <= 0.02);
}

TEST_CASE("geometric schedule spans the requested window") {
    auto sched = geometric_schedule(10.0, 200.0, 1.2);
    CHECK(sched.front() == 10.0);
    CHECK(sched.back() == 200.0);
    for (std::size_t i = 0; i + 1 < sched.size(); ++i) {
        CHECK(sched[i + 1] / sched[i] <= 1.2 + 1e-12);
        CHECK(sched[i + 1] > sched[i]);
    }
}

TEST_CASE("sigma1prime ray-(1,2) point is on the stratum with the right slope") {
    auto xi = sigma1prime_ray12_point();
    DispersionRelation r2{2, 0.0};
    CHECK(std::abs(sigma1prime_residual(r2, xi)) < 1e-9);
    auto v = r2.grad_omega(xi);
    CHECK(v[1] / v[0] == doctest::Approx(2.0).epsilon(1e-9));
    CHECK(classify(r2, xi, 1e-7).corank == 1);
}
