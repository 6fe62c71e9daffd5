#pragma once

#include <optional>
#include <random>
#include <string>
#include <vector>

#include "latticewave/errors.hpp"

namespace lw {

// Lattice dispersion relation omega(xi)^2 = mass^2 + sum(2 - 2 cos xi_j).
// Immutable; all member operations are pure.
struct DispersionRelation {
    int d = 1;
    double mass = 0.0;

    double omega(const std::vector<double>& xi) const;
    double omega_sq(const std::vector<double>& xi) const;
    std::vector<double> grad_omega(const std::vector<double>& xi) const;  // SingularPoint at omega=0
    std::vector<double> hess_omega(const std::vector<double>& xi) const;  // row-major d x d
    double group_speed_sq(const std::vector<double>& xi) const;           // wave case only
};

// Stratum label: corank plus the prime/double-prime split at corank 1.
struct StratumLabel {
    int corank = 0;
    bool prime = false;  // Sigma_1' (sec-sum locus) vs Sigma_1'' (two quarter-pi coords)
};
std::string to_string(const StratumLabel& s);

struct CriticalPoint {
    std::vector<double> xi;
    int corank = 0;
    StratumLabel label;
    std::vector<double> velocity;
};

// sum(cos xi_j + sec xi_j) - 2d; zero marks the Sigma_1' locus.
double sigma1prime_residual(const DispersionRelation& rel, const std::vector<double>& xi);

// Eigenvalue corank and symbolic label must agree, else ClassificationConflict.
CriticalPoint classify(const DispersionRelation& rel, const std::vector<double>& xi,
                       double tol = 1e-8);

// All critical points of phi(v, .) in (-pi, pi]^d, by branch enumeration over
// the 2^d arcsin sheets and a 1-D solve in w = omega.
std::vector<CriticalPoint> find_critical_points(const DispersionRelation& rel,
                                                const std::vector<double>& v, double tol = 1e-8);

struct B0Estimate {
    double sup_speed = 0.0;  // sup |grad omega| over the degenerate strata
    double delta = 0.0;      // 1 - sup_speed
    bool converged = false;
    double refinement_change = 0.0;
    std::vector<std::pair<std::string, double>> per_stratum;
};

// Numerical sup over Sigma by stratum-wise sampling (quarter-pi slices plus
// the Sigma_1' root continuation), with a grid-doubling stability check.
B0Estimate estimate_b0(const DispersionRelation& rel, int grid_density = 96);

// Stratum point constructors used by suites and tests (wave case).
std::vector<double> make_sigma_k_point(int d, int k, std::mt19937& rng);
// Solve the Sigma_1' equation for xi_1 given the remaining coordinates;
// nullopt when the residual target is out of range.
std::optional<std::vector<double>> make_sigma1prime_point(int d, const std::vector<double>& tail,
                                                          bool first_obtuse = true);

}  // namespace lw
