#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "latticewave/bump.hpp"
#include "latticewave/dispersion.hpp"
#include "latticewave/poly.hpp"
#include "latticewave/quadrature.hpp"

namespace lw {

struct GreenResult {
    double value = 0.0;
    int grid_n = 0;
    std::vector<std::pair<int, double>> history;
    bool converged = false;
    double rel_change = 0.0;
    double imag_residual = 0.0;  // |Im| of the assembled value before discarding
};

struct GreenOptions {
    double rtol = 1e-8;
    QuadBudget budget;
};

// Green's function G(x,t) by trapezoid-on-torus with per-coordinate even
// folding and grouped permutation folding over equal |x_j|.
GreenResult green_G(const DispersionRelation& rel, const std::vector<long>& x, double t,
                    const GreenOptions& opts = {});

// d/dt of the Green's function: the cosine-kernel mean of cos(x.xi) cos(t w).
GreenResult green_G_dt(const DispersionRelation& rel, const std::vector<long>& x, double t,
                       const GreenOptions& opts = {});

struct OscIOptions {
    double rtol = 1e-6;
    AmplitudeSpec cutoff = AmplitudeSpec::origin_cutoff();
    QuadBudget budget;

    OscIOptions() { budget.max_refinements = 4; }
};

struct OscIResult {
    Complex value{0, 0};
    Complex part_singular{0, 0};  // ball around the origin, polar quadrature
    Complex part_smooth{0, 0};    // torus quadrature of the cut remainder
    QuadratureResult smooth_detail;
    bool converged = false;
};

// I(v,t) = (2pi)^{-d} \int exp(it(v.xi - omega)) / omega with the cutoff
// split around the amplitude singularity.
OscIResult oscint_I(const DispersionRelation& rel, const std::vector<double>& v, double t,
                    const OscIOptions& opts = {});

// Infinite-lattice kernel of 1/D at integer x, by the same cutoff split as
// oscint_I: the smooth cut part on the torus (rapidly convergent), the
// origin ball in polar coordinates.
GreenResult invD_kernel(const DispersionRelation& rel, const std::vector<long>& x,
                        const OscIOptions& opts = {});

struct JOptions {
    double rtol = 1e-6;
    double c_osc = 4.0;
    QuadBudget budget;
    AmplitudeSpec amplitude = AmplitudeSpec::separable(1.0);
    // collapse a linearly-occurring variable through the precomputed 1-D
    // transform when a block has at least this many variables (0 = never)
    int collapse_min_dim = 3;
};

// J(t, S, psi) = \int exp(it S(x)) psi(x) dx over the amplitude support.
QuadratureResult oscint_J(const SparsePoly& phase, double t, const JOptions& opts = {});

struct ModelPhase {
    std::string name;
    SparsePoly phase;
    double beta = 0.0;
    int log_power = 0;
    // amplitude support radius at which the envelope matches the plain
    // C t^beta log^p t model over desk-scale windows
    double fit_radius = 1.0;
};

// Catalog of model phases with their sharp decay/log exponents.
std::vector<ModelPhase> model_phase_catalog();

struct ProbeResult {
    std::vector<double> t;
    std::vector<double> baseline;  // |J(t, S)|
    std::vector<double> envelope;  // sup over perturbations of |J(t, S + w.xi)|
    double max_ratio = 0.0;        // max over t of envelope/baseline
};

// Envelope of |J| under `count` random linear perturbations |w| <= eps.
ProbeResult perturbation_probe(const SparsePoly& phase, double eps, int count,
                               const std::vector<double>& t_schedule, std::uint64_t seed = 1,
                               const JOptions& opts = {});

}  // namespace lw
