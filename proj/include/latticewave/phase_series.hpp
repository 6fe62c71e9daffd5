#pragma once

#include <optional>
#include <vector>

#include "latticewave/newton.hpp"
#include "latticewave/poly.hpp"

namespace lw {

// cos/sin of one base-point coordinate, held exactly. Quarter-turn points are
// exact by construction; arbitrary points are rationalized dyadically from
// doubles, which keeps all downstream arithmetic exact relative to that
// rounded base point.
struct TrigCoord {
    Rational cos_v;
    Rational sin_v;
};

std::vector<TrigCoord> trig_from_quarter_turns(const std::vector<int>& quarter_turns);
std::vector<TrigCoord> trig_from_doubles(const std::vector<double>& xi);

// Truncated Taylor series of phi(v0, xi0 + xi) - phi(v0, xi0). All
// coefficients lie in omega0 * Q; `series` stores the rational factor, so the
// actual phase series is omega0 * series with omega0 = sqrt(omega0_sq).
struct PhaseSeries {
    TruncatedSeries series;
    Rational omega0_sq;
    int d = 0;

    double coeff_value(const Exponents& g) const;  // omega0 * rational coefficient
};

// v0 defaults to grad omega(xi0), the exactly-critical velocity. A caller
// velocity is only validated: the linear term it induces must stay below
// 1e-10 (exactly zero for quarter-turn base points), else NotCritical.
PhaseSeries taylor_phase(int d, const Rational& mass_sq, const std::vector<TrigCoord>& xi0, int D,
                         const std::optional<std::vector<double>>& v0 = std::nullopt);

// Decomposition of the most-degenerate phase at (pi/2, ..., pi/2): after the
// shear z_d = sum(xi), the series splits into a1 z_d^2 + a3 Q_{1,1}^{d-1}(z')
// plus a remainder whose monomials all have w_d-degree > 1.
struct MostDegenerateSplit {
    PhaseSeries phase;
    TruncatedSeries transformed;  // series composed with the shear
    Rational a1;
    Rational a3;
    SparsePoly remainder;
    bool quadratic_is_pure_zd2 = false;
    bool cubic_matches_Q = false;
    bool remainder_in_H = false;
};
MostDegenerateSplit most_degenerate_split(int d, int D = 6);

// The d=4 corank-2 case at (pi/2, pi/2, pi/2, xi_star): in the eigenbasis
// columns (1,-1,0,0), (1,1,-2,0), e3, e4 the series splits into a quadratic
// form in (y3,y4), a D4 cubic in (y1,y2), and a remainder in H_{alpha*,4}.
struct Sigma2Decomposition {
    PhaseSeries phase;
    TruncatedSeries transformed;
    bool kernel_clean = false;   // no y1/y2 in the quadratic part
    bool cubic_is_D4 = false;    // pure (y1,y2)-cubic proportional to y2^3 - y1^2 y2
    Rational cubic_coeff;
    SparsePoly remainder_V;
    bool V_in_H = false;         // alpha* = (1/3,1/3,1/2,1/2), strict
};
Sigma2Decomposition sigma2_decompose(double xi_star, int D = 6);

// Conjugate-phase construction for odd d: the series at the most degenerate
// point in the paired coordinates, its Newton data, and the exact
// negligibility checks for the extra Taylor terms.
struct ConjPhase {
    int d = 0;
    TruncatedSeries stilde;            // full transformed series (rational factor)
    std::vector<Exponents> s_support;  // support points on the w_d = 1 hyperplane
    NewtonData newton;
    bool t1_ok = false;                // T1 support: even coords 0, strictly inside
    bool t5_ok = false;                // T_{2N+1}, N = 2
    bool t7_ok = false;                // T_{2N+1}, N = 3
    bool diagonal_ok = false;          // lambda0*(1,..,1) strictly positive combination of the A_j
    bool cubic_matches_Y = false;      // z'-cubic part on the hyperplane is a multiple of Y
};
ConjPhase build_conj_phase(int d, int D = 6);

}  // namespace lw
