#pragma once

#include <vector>

#include "latticewave/rational.hpp"

namespace lw {

enum class LPStatus { Optimal, Infeasible, Unbounded };

struct LPSolution {
    LPStatus status = LPStatus::Infeasible;
    Rational objective;
    std::vector<Rational> x;  // primal solution
    std::vector<Rational> y;  // duals, one per equality row
};

// Exact two-phase primal simplex with Bland's rule:
//   minimize c.x  subject to  A x = b, x >= 0.
// Instances here are tiny (rows <= ~10), so the dense tableau is kept in
// rationals throughout; Bland's rule guarantees termination.
LPSolution simplex_solve(const std::vector<std::vector<Rational>>& A, const std::vector<Rational>& b,
                         const std::vector<Rational>& c);

}  // namespace lw
