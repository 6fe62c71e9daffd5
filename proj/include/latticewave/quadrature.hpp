#pragma once

#include <complex>
#include <functional>
#include <utility>
#include <vector>

#include "latticewave/errors.hpp"

namespace lw {

using Complex = std::complex<double>;

struct QuadratureResult {
    Complex value{0.0, 0.0};
    int grid_n = 0;  // per-dimension resolution of the accepted evaluation
    std::vector<std::pair<int, Complex>> history;
    bool converged = false;
    double rel_change = 0.0;
};

struct QuadBudget {
    // evaluation cap per call; symmetry folding counts actual leaf visits
    double max_evals = 2e9;
    int max_refinements = 3;
    double growth = 2.0;  // grid growth per refinement
};

// (2pi)^d times the mean of a 2pi-periodic integrand over the uniform N^d
// grid; spectrally accurate for smooth periodic integrands.
Complex quad_torus(const std::function<Complex(const std::vector<double>&)>& f, int d, int N,
                   const QuadBudget& budget = {});

// Gauss-Legendre nodes/weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

// Convergence driver: evaluates at n0 and geometrically grown grids until
// successive values agree to rtol (relative, with a small absolute floor),
// recording history.
QuadratureResult refine_to_tolerance(const std::function<Complex(int)>& eval_at, int n0,
                                     double rtol, int max_refinements, double growth = 2.0);

}  // namespace lw
