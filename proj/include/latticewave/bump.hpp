#pragma once

#include <cmath>
#include <vector>

#include "latticewave/errors.hpp"

namespace lw {

// Standard smooth bump profile exp(-x^2/(1-x^2)) on (-1,1), peak value 1.
inline double bump_profile(double x) {
    double x2 = x * x;
    if (x2 >= 1.0) return 0.0;
    return std::exp(-x2 / (1.0 - x2));
}

// C^inf transition: 1 for s <= 0, 0 for s >= 1.
inline double smooth_step_down(double s) {
    if (s <= 0.0) return 1.0;
    if (s >= 1.0) return 0.0;
    auto B = [](double u) { return std::exp(-1.0 / u); };
    return B(1.0 - s) / (B(s) + B(1.0 - s));
}

enum class AmplitudeKind { TorusBump, OriginCutoff, CompactBump, SeparableBump };

// Compactly supported amplitudes used by the oscillatory integrals. The
// radial kinds evaluate on |x|; SeparableBump is the product of identical 1-D
// bumps of the given radius.
struct AmplitudeSpec {
    AmplitudeKind kind = AmplitudeKind::SeparableBump;
    double radius = 1.0;
    double inner_radius = 0.0;  // plateau radius for OriginCutoff

    static AmplitudeSpec separable(double r = 1.0) {
        return {AmplitudeKind::SeparableBump, r, 0.0};
    }
    static AmplitudeSpec compact(double r = 1.0) { return {AmplitudeKind::CompactBump, r, 0.0}; }
    static AmplitudeSpec origin_cutoff(double r_outer = 0.75) {
        return {AmplitudeKind::OriginCutoff, r_outer, r_outer / 3};
    }

    double eval1d(double x) const { return bump_profile(x / radius); }

    // OriginCutoff value as a function of |x|.
    double cutoff(double rho) const {
        if (kind != AmplitudeKind::OriginCutoff) throw NotApplicable("cutoff on a non-cutoff amplitude");
        return smooth_step_down((rho - inner_radius) / (radius - inner_radius));
    }

    double eval(const std::vector<double>& x) const {
        switch (kind) {
            case AmplitudeKind::SeparableBump: {
                double v = 1.0;
                for (double xi : x) v *= eval1d(xi);
                return v;
            }
            case AmplitudeKind::CompactBump:
            case AmplitudeKind::TorusBump: {
                double r2 = 0;
                for (double xi : x) r2 += xi * xi;
                return bump_profile(std::sqrt(r2) / radius);
            }
            case AmplitudeKind::OriginCutoff: {
                double r2 = 0;
                for (double xi : x) r2 += xi * xi;
                return cutoff(std::sqrt(r2));
            }
        }
        return 0.0;
    }
};

}  // namespace lw
