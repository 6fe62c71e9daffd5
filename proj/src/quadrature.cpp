#include "latticewave/quadrature.hpp"

#include <cmath>
#include <numbers>

namespace lw {

namespace {
constexpr double kPi = std::numbers::pi;
}

Complex quad_torus(const std::function<Complex(const std::vector<double>&)>& f, int d, int N,
                   const QuadBudget& budget) {
    if (N < 4) throw Degenerate("quad_torus needs N >= 4");
    double total = std::pow(static_cast<double>(N), d);
    if (total > budget.max_evals)
        throw BudgetExceeded("quad_torus: " + std::to_string(total) + " evaluations over budget");

    std::vector<double> xi(d);
    std::vector<int> idx(d, 0);
    long double sr = 0, si = 0;
    while (true) {
        for (int j = 0; j < d; ++j) xi[j] = -kPi + 2.0 * kPi * idx[j] / N;
        Complex v = f(xi);
        sr += v.real();
        si += v.imag();
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[j] < N) break;
            idx[j] = 0;
        }
        if (j == d) break;
    }
    double scale = std::pow(2.0 * kPi, d) / total;
    return Complex(static_cast<double>(sr) * scale, static_cast<double>(si) * scale);
}

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double pp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[n - 1 - i] = weights[i];
    }
}

QuadratureResult refine_to_tolerance(const std::function<Complex(int)>& eval_at, int n0,
                                     double rtol, int max_refinements, double growth) {
    QuadratureResult res;
    int n = n0;
    Complex prev = eval_at(n);
    res.history.push_back({n, prev});
    for (int k = 0; k < max_refinements; ++k) {
        int n2 = static_cast<int>(std::ceil(n * growth / 2.0)) * 2;
        if (n2 <= n) n2 = n + 2;
        Complex cur = eval_at(n2);
        res.history.push_back({n2, cur});
        double change = std::abs(cur - prev);
        double scale = std::max(std::abs(cur), 1e-300);
        res.rel_change = change / scale;
        if (change <= rtol * scale + 1e-13) {
            res.value = cur;
            res.grid_n = n2;
            res.converged = true;
            return res;
        }
        prev = cur;
        n = n2;
    }
    res.value = prev;
    res.grid_n = n;
    res.converged = false;
    throw NotConverged("quadrature did not settle after " + std::to_string(max_refinements) +
                       " refinements (last rel change " + std::to_string(res.rel_change) + ")");
}

}  // namespace lw
