#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latticewave/decayfit.hpp"
#include "latticewave/dispersion.hpp"
#include "latticewave/evolve.hpp"
#include "latticewave/oscquad.hpp"

namespace lw {

// Geometric time schedule t0 * ratio^k capped at t1 (t1 always included).
std::vector<double> geometric_schedule(double t0, double t1, double ratio);

struct PhaseSuiteRow {
    std::string name;
    double target_beta = 0;
    int target_p = 0;
    double fitted_beta = 0;     // beta of the selected model
    int selected_p = 0;
    bool p_resolved = true;
    double beta_at_target_p = 0;  // beta of the model with the target log power
    double rms0 = 0, rms_target = 0;
    bool pass = false;
    DecaySamples samples;
};

// |J| decay fits over the model-phase catalog.
std::vector<PhaseSuiteRow> run_model_phase_suite(const std::vector<double>& schedule,
                                                 double beta_tol = 0.05, double j_rtol = 1e-5);

struct RaySuiteRow {
    std::string name;         // stratum label + dimension
    int d = 0;
    std::vector<long> ray;    // x = m * ray
    double t_per_m = 0;       // t = m * t_per_m
    double rotation_rate = 0; // |v.xi0 - omega(xi0)|, the carrier frequency
    double target_beta = 0;
    int target_p = 0;
    double beta_tol = 0.1;
    double fitted_beta = 0;
    int selected_p = 0;
    bool p_resolved = true;
    double rms0 = 0, rms1 = 0;
    bool pass = false;
    DecaySamples samples;
};

// |G| along exact lattice rays at stratum velocities, fitted against the
// dispersive-decay table.
std::vector<RaySuiteRow> run_table1_suite(int d, double rtol = 1e-7);

struct ConjSuiteResult {
    int d = 0;
    double target_beta = 0;  // -(2d+1)/6
    double fitted_beta = 0;
    int selected_p = 0;
    bool upper_bound_ok = false;  // fitted beta <= target + slack
    DecaySamples samples;
};

ConjSuiteResult run_conj_suite(int d, double slack = 0.1);

// The Sigma_1' point in d=2 whose velocity is proportional to (1,2).
std::vector<double> sigma1prime_ray12_point();

struct StrichartzResult {
    std::vector<double> ratios;  // ||u||_{L4 l4} / |f|_{4/3} per random datum
    double max_ratio = 0, median_ratio = 0;
};

StrichartzResult strichartz_experiment(int d, int L, int count, double T, double dt,
                                       std::uint64_t seed);

struct KernelDecayResult {
    int d = 0;
    std::vector<std::pair<std::string, double>> direction_exponents;
    double worst_deviation = 0;  // max |exponent + (d-1)|
};

KernelDecayResult kernel_decay_experiment(int d, long r_min = 10, long r_max = 100);

struct ClassifierAgreement {
    long total = 0;
    long agreed = 0;
    long empty_checks = 0;
    long empty_ok = 0;
};

// Criterion-style classifier sweep: constructed stratum points per corank for
// d = 2,3,4 plus emptiness of the critical set outside the light cone.
ClassifierAgreement classifier_agreement_suite(long per_stratum, long empty_count,
                                               std::uint64_t seed);

struct NonlinearTrackResult {
    std::vector<double> times;
    std::vector<double> nonlinear_sup;
    std::vector<double> linear_sup;
    double max_factor = 0;  // max over times of max(nl/lin, lin/nl)
};

// Small-data nonlinear run against the linear flow on the same box.
NonlinearTrackResult nonlinear_tracking_experiment(int d, int L, int k, double f_l1, double T,
                                                   double dt, const std::vector<double>& sample_times);

}  // namespace lw
