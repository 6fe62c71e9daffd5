#include "latticewave/oscquad.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>

#include "latticewave/numutil.hpp"

namespace lw {

namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
    double f = 1;
    for (int i = 2; i <= n; ++i) f *= i;
    return f;
}

// ---------------------------------------------------------------------------
// Folded trapezoid sum on the torus.
//
// The grid xi_k = -pi + 2 pi k / N is closed under xi -> -xi, so an integrand
// that is even per coordinate reduces to the half grid m = 0..N/2 with
// weights {1, 2, ..., 2, 1}. Dimensions that share the same cosine table are
// additionally folded by sorted enumeration with multiset multiplicities.
// The kernel sees the accumulated sum of 2-2cos(xi_j) and of xi_j^2.
// ---------------------------------------------------------------------------
struct FoldedTorus {
    int d = 0;
    int N = 0;
    std::vector<double> sigma;               // 2 - 2 cos(xi_m)
    std::vector<double> xi2;                 // xi_m^2
    std::vector<std::vector<double>> ctab;   // per group: weighted cos factors
    std::vector<int> group_of_dim;           // contiguous nondecreasing
    double leaf_estimate = 0;

    static FoldedTorus build(int d, int N, const std::vector<double>& freq) {
        FoldedTorus ft;
        ft.d = d;
        ft.N = N;
        int M = N / 2;
        ft.sigma.resize(M + 1);
        ft.xi2.resize(M + 1);
        for (int m = 0; m <= M; ++m) {
            double x = 2.0 * kPi * m / N;
            double h = std::sin(0.5 * x);
            ft.sigma[m] = 4.0 * h * h;
            ft.xi2[m] = x * x;
        }
        // group dimensions by |frequency|
        std::vector<double> keys;
        ft.group_of_dim.resize(d);
        for (int j = 0; j < d; ++j) {
            double k = std::abs(freq[j]);
            int g = -1;
            for (std::size_t i = 0; i < keys.size(); ++i)
                if (std::abs(keys[i] - k) < 1e-15) g = static_cast<int>(i);
            if (g < 0) {
                g = static_cast<int>(keys.size());
                keys.push_back(k);
            }
            ft.group_of_dim[j] = g;
        }
        std::sort(ft.group_of_dim.begin(), ft.group_of_dim.end());
        for (double k : keys) {
            std::vector<double> c(M + 1);
            for (int m = 0; m <= M; ++m) {
                double w = (m == 0 || m == M) ? 1.0 : 2.0;
                c[m] = w * std::cos(k * (2.0 * kPi * m / N));
            }
            ft.ctab.push_back(std::move(c));
        }
        // leaves: product over groups of C(M + g, g)
        std::vector<int> gsz(keys.size(), 0);
        for (int g : ft.group_of_dim) ++gsz[g];
        ft.leaf_estimate = 1;
        for (int g : gsz) {
            double c = 1;
            for (int i = 1; i <= g; ++i) c = c * (M + i) / i;
            ft.leaf_estimate *= c;
        }
        return ft;
    }

    // kernel(sigma_sum, xi2_sum) -> Complex; returns the grid mean.
    template <class Kernel>
    Complex mean(Kernel&& kernel) const {
        const int M = N / 2;
        std::vector<int> ms(d, 0);
        long double sr = 0, si = 0;

        // recursive sorted enumeration
        auto leaf_multiplicity = [&]() {
            double mult = 1;
            int j = 0;
            while (j < d) {
                int g = group_of_dim[j];
                int gend = j;
                while (gend < d && group_of_dim[gend] == g) ++gend;
                double perms = factorial(gend - j);
                int run = 1;
                for (int i = j + 1; i < gend; ++i) {
                    if (ms[i] == ms[i - 1]) {
                        ++run;
                    } else {
                        perms /= factorial(run);
                        run = 1;
                    }
                }
                perms /= factorial(run);
                mult *= perms;
                j = gend;
            }
            return mult;
        };

        auto rec = [&](auto&& self, int j, double prod, double ssum, double x2sum) -> void {
            if (j == d) {
                Complex k = kernel(ssum, x2sum);
                double w = prod * leaf_multiplicity();
                sr += w * k.real();
                si += w * k.imag();
                return;
            }
            int start = (j > 0 && group_of_dim[j] == group_of_dim[j - 1]) ? ms[j - 1] : 0;
            const auto& c = ctab[group_of_dim[j]];
            for (int m = start; m <= M; ++m) {
                ms[j] = m;
                self(self, j + 1, prod * c[m], ssum + sigma[m], x2sum + xi2[m]);
            }
        };
        rec(rec, 0, 1.0, 0.0, 0.0);

        double scale = std::pow(static_cast<double>(N), d);
        return Complex(static_cast<double>(sr / scale), static_cast<double>(si / scale));
    }
};

int even_at_least(double x) {
    int n = static_cast<int>(std::ceil(x));
    if (n % 2) ++n;
    return std::max(n, 4);
}

}  // namespace

GreenResult green_G(const DispersionRelation& rel, const std::vector<long>& x, double t,
                    const GreenOptions& opts) {
    const int d = rel.d;
    if (static_cast<int>(x.size()) != d) throw DimensionMismatch("green_G point arity");
    const double m2 = rel.mass * rel.mass;

    std::vector<double> freq(d);
    for (int j = 0; j < d; ++j) freq[j] = static_cast<double>(x[j]);

    auto eval_at = [&](int N) -> Complex {
        FoldedTorus ft = FoldedTorus::build(d, N, freq);
        if (ft.leaf_estimate > opts.budget.max_evals)
            throw BudgetExceeded("green_G: grid " + std::to_string(N) + "^d over budget");
        return ft.mean([&](double ssum, double) -> Complex {
            double w2 = m2 + ssum;
            double w = std::sqrt(w2);
            double k = (w < 1e-8) ? t * (1.0 - t * t * w2 / 6.0) : std::sin(t * w) / w;
            return Complex(k, 0.0);
        });
    };

    int n0 = even_at_least(std::max(64.0, 4.0 * std::ceil(1.0 + std::abs(t))));
    QuadratureResult qr = refine_to_tolerance(eval_at, n0, opts.rtol, opts.budget.max_refinements);

    GreenResult g;
    g.value = qr.value.real();
    g.grid_n = qr.grid_n;
    g.converged = qr.converged;
    g.rel_change = qr.rel_change;
    // The even-folded sum realizes the odd-part cancellation exactly.
    g.imag_residual = std::abs(qr.value.imag());
    if (g.imag_residual > 1e-10) throw NotConverged("green_G: imaginary residue too large");
    for (auto& [n, v] : qr.history) g.history.push_back({n, v.real()});
    return g;
}

GreenResult green_G_dt(const DispersionRelation& rel, const std::vector<long>& x, double t,
                       const GreenOptions& opts) {
    const int d = rel.d;
    if (static_cast<int>(x.size()) != d) throw DimensionMismatch("green_G_dt point arity");
    const double m2 = rel.mass * rel.mass;
    std::vector<double> freq(d);
    for (int j = 0; j < d; ++j) freq[j] = static_cast<double>(x[j]);

    auto eval_at = [&](int N) -> Complex {
        FoldedTorus ft = FoldedTorus::build(d, N, freq);
        if (ft.leaf_estimate > opts.budget.max_evals)
            throw BudgetExceeded("green_G_dt: grid over budget");
        return ft.mean([&](double ssum, double) -> Complex {
            return Complex(std::cos(t * std::sqrt(m2 + ssum)), 0.0);
        });
    };
    int n0 = even_at_least(std::max(64.0, 4.0 * std::ceil(1.0 + std::abs(t))));
    QuadratureResult qr = refine_to_tolerance(eval_at, n0, opts.rtol, opts.budget.max_refinements);
    GreenResult g;
    g.value = qr.value.real();
    g.grid_n = qr.grid_n;
    g.converged = qr.converged;
    g.rel_change = qr.rel_change;
    for (auto& [n, v] : qr.history) g.history.push_back({n, v.real()});
    return g;
}

namespace {

// Product quadrature on S^{d-1}: polar angles with sin-power weights, GL in
// each, trapezoid in the final azimuth.
struct SphereRule {
    std::vector<std::vector<double>> points;
    std::vector<double> weights;
};

SphereRule sphere_rule(int d, int n_polar, int n_azimuth) {
    SphereRule rule;
    if (d == 1) {
        rule.points = {{1.0}, {-1.0}};
        rule.weights = {1.0, 1.0};
        return rule;
    }
    if (d == 2) {
        for (int i = 0; i < n_azimuth; ++i) {
            double phi = 2.0 * kPi * i / n_azimuth;
            rule.points.push_back({std::cos(phi), std::sin(phi)});
            rule.weights.push_back(2.0 * kPi / n_azimuth);
        }
        return rule;
    }
    // recurse: x = (sin(theta) y, cos(theta)) with weight sin^{d-2}(theta)
    SphereRule sub = sphere_rule(d - 1, n_polar, n_azimuth);
    std::vector<double> gn, gw;
    gauss_legendre(n_polar, gn, gw);
    for (int i = 0; i < n_polar; ++i) {
        double theta = 0.5 * kPi * (gn[i] + 1.0);  // [0, pi]
        double jac = 0.5 * kPi * gw[i] * std::pow(std::sin(theta), d - 2);
        for (std::size_t s = 0; s < sub.points.size(); ++s) {
            std::vector<double> p;
            p.reserve(d);
            for (double y : sub.points[s]) p.push_back(std::sin(theta) * y);
            p.push_back(std::cos(theta));
            rule.points.push_back(std::move(p));
            rule.weights.push_back(jac * sub.weights[s]);
        }
    }
    return rule;
}

}  // namespace

OscIResult oscint_I(const DispersionRelation& rel, const std::vector<double>& v, double t,
                    const OscIOptions& opts) {
    const int d = rel.d;
    if (static_cast<int>(v.size()) != d) throw DimensionMismatch("oscint_I velocity arity");
    if (rel.mass != 0) throw NotApplicable("oscint_I is a wave-case integral");
    const AmplitudeSpec& chi = opts.cutoff;
    if (chi.kind != AmplitudeKind::OriginCutoff) throw NotApplicable("oscint_I needs an origin cutoff");

    OscIResult out;
    double vnorm = norm2(v);

    // Smooth part on the torus: (1 - chi)(|xi|) e^{-it omega} / omega folded
    // against prod cos(t v_j xi_j).
    std::vector<double> freq(d);
    for (int j = 0; j < d; ++j) freq[j] = t * v[j];
    double m2 = 0.0;
    double inner2 = chi.inner_radius * chi.inner_radius;

    auto eval_smooth = [&](int N) -> Complex {
        FoldedTorus ft = FoldedTorus::build(d, N, freq);
        if (ft.leaf_estimate > opts.budget.max_evals)
            throw BudgetExceeded("oscint_I: torus grid over budget");
        return ft.mean([&](double ssum, double x2) -> Complex {
            if (x2 <= inner2) return Complex(0, 0);
            double cut = 1.0 - chi.cutoff(std::sqrt(x2));
            if (cut == 0.0) return Complex(0, 0);
            double w = std::sqrt(m2 + ssum);
            double a = cut / w;
            double ph = -t * w;
            return Complex(a * std::cos(ph), a * std::sin(ph));
        });
    };

    double L = 0;
    for (double vj : v) L = std::max(L, std::abs(vj));
    L += 1.0;
    int n0 = even_at_least(std::max(256.0, 4.0 * std::ceil(1.0 + std::abs(t) * L)));
    out.smooth_detail = refine_to_tolerance(eval_smooth, n0, opts.rtol, opts.budget.max_refinements,
                                            opts.budget.growth);
    out.part_smooth = out.smooth_detail.value;

    // Singular part in polar coordinates; rho^{d-1} absorbs the 1/omega.
    double r0 = chi.radius;
    double osc = std::abs(t) * r0 * (vnorm + 1.0);
    auto eval_singular = [&](int refine) -> Complex {
        int n_rho = (24 + static_cast<int>(std::ceil(0.9 * osc))) * refine;
        int n_pol = std::max(16, static_cast<int>(std::ceil(0.7 * osc))) * refine;
        int n_az = std::max(24, 2 * static_cast<int>(std::ceil(osc))) * refine;
        SphereRule sphere = sphere_rule(d, n_pol, n_az);
        std::vector<double> rn, rw;
        gauss_legendre(n_rho, rn, rw);

        long double sr = 0, si = 0;
        std::vector<double> xi(d);
        for (int i = 0; i < n_rho; ++i) {
            double rho = 0.5 * r0 * (rn[i] + 1.0);
            double wr = 0.5 * r0 * rw[i];
            double cut = chi.cutoff(rho);
            if (cut == 0.0) continue;
            double radial = wr * cut * std::pow(rho, d - 1);
            for (std::size_t s = 0; s < sphere.points.size(); ++s) {
                double vdot = 0;
                for (int j = 0; j < d; ++j) {
                    xi[j] = rho * sphere.points[s][j];
                    vdot += v[j] * xi[j];
                }
                double w = rel.omega(xi);
                double ph = t * (vdot - w);
                double a = radial * sphere.weights[s] / w;
                sr += a * std::cos(ph);
                si += a * std::sin(ph);
            }
        }
        double scale = std::pow(2.0 * kPi, -d);
        return Complex(static_cast<double>(sr) * scale, static_cast<double>(si) * scale);
    };

    Complex i1 = eval_singular(1);
    Complex i1b = eval_singular(2);
    double change = std::abs(i1b - i1);
    double scale = std::max({std::abs(i1b), std::abs(out.part_smooth) * 1e-3, 1e-300});
    if (change > opts.rtol * scale + 1e-12) {
        Complex i1c = eval_singular(4);
        change = std::abs(i1c - i1b);
        i1b = i1c;
        if (change > opts.rtol * scale + 1e-12)
            throw NotConverged("oscint_I: singular part did not settle");
    }
    out.part_singular = i1b;
    out.value = out.part_singular + out.part_smooth;
    out.converged = out.smooth_detail.converged;
    return out;
}

GreenResult invD_kernel(const DispersionRelation& rel, const std::vector<long>& x,
                        const OscIOptions& opts) {
    const int d = rel.d;
    if (static_cast<int>(x.size()) != d) throw DimensionMismatch("invD_kernel point arity");
    if (rel.mass != 0) throw NotApplicable("invD_kernel is a wave-case object");
    const AmplitudeSpec& chi = opts.cutoff;

    std::vector<double> freq(d);
    double xmax = 0;
    for (int j = 0; j < d; ++j) {
        freq[j] = static_cast<double>(x[j]);
        xmax = std::max(xmax, std::abs(freq[j]));
    }
    double inner2 = chi.inner_radius * chi.inner_radius;

    auto eval_smooth = [&](int N) -> Complex {
        FoldedTorus ft = FoldedTorus::build(d, N, freq);
        if (ft.leaf_estimate > opts.budget.max_evals)
            throw BudgetExceeded("invD_kernel: torus grid over budget");
        return ft.mean([&](double ssum, double x2) -> Complex {
            if (x2 <= inner2) return Complex(0, 0);
            double cut = 1.0 - chi.cutoff(std::sqrt(x2));
            if (cut == 0.0) return Complex(0, 0);
            return Complex(cut / std::sqrt(ssum), 0.0);
        });
    };
    int n0 = even_at_least(std::max(256.0, 4.0 * std::ceil(1.0 + xmax)));
    QuadratureResult smooth =
        refine_to_tolerance(eval_smooth, n0, opts.rtol, opts.budget.max_refinements,
                            opts.budget.growth);

    // singular ball: cos(x . rho theta) chi(rho) rho^{d-1} / omega
    double r0 = chi.radius;
    double xnorm = 0;
    for (double f : freq) xnorm += f * f;
    xnorm = std::sqrt(xnorm);
    double osc = xnorm * r0;
    auto eval_singular = [&](int refine) -> double {
        int n_rho = (24 + static_cast<int>(std::ceil(0.9 * osc))) * refine;
        int n_pol = std::max(16, static_cast<int>(std::ceil(0.7 * osc))) * refine;
        int n_az = std::max(24, 2 * static_cast<int>(std::ceil(osc))) * refine;
        SphereRule sphere = sphere_rule(d, n_pol, n_az);
        std::vector<double> rn, rw;
        gauss_legendre(n_rho, rn, rw);
        long double acc = 0;
        std::vector<double> xi(d);
        for (int i = 0; i < n_rho; ++i) {
            double rho = 0.5 * r0 * (rn[i] + 1.0);
            double wr = 0.5 * r0 * rw[i];
            double cut = chi.cutoff(rho);
            if (cut == 0.0) continue;
            double radial = wr * cut * std::pow(rho, d - 1);
            for (std::size_t s = 0; s < sphere.points.size(); ++s) {
                double dot = 0;
                for (int j = 0; j < d; ++j) {
                    xi[j] = rho * sphere.points[s][j];
                    dot += freq[j] * xi[j];
                }
                acc += radial * sphere.weights[s] * std::cos(dot) / rel.omega(xi);
            }
        }
        return static_cast<double>(acc) * std::pow(2.0 * kPi, -d);
    };
    double s1 = eval_singular(1);
    double s2 = eval_singular(2);
    if (std::abs(s2 - s1) > opts.rtol * std::max(std::abs(s2), 1e-300) + 1e-12) {
        double s4 = eval_singular(4);
        if (std::abs(s4 - s2) > opts.rtol * std::max(std::abs(s4), 1e-300) + 1e-12)
            throw NotConverged("invD_kernel: singular part did not settle");
        s2 = s4;
    }

    GreenResult out;
    out.value = smooth.value.real() + s2;
    out.grid_n = smooth.grid_n;
    out.converged = smooth.converged;
    out.rel_change = smooth.rel_change;
    return out;
}

// ---------------------------------------------------------------------------
// J(t, S, psi)
// ---------------------------------------------------------------------------
namespace {

struct CompiledPoly {
    struct Term {
        double c;
        std::array<int, 8> e;
    };
    std::vector<Term> terms;
    int nvars = 0;

    static CompiledPoly from(const SparsePoly& p) {
        CompiledPoly cp;
        cp.nvars = p.nvars();
        for (const auto& [g, c] : p.terms()) {
            Term t;
            t.c = to_double(c);
            t.e.fill(0);
            for (int i = 0; i < cp.nvars; ++i) t.e[i] = g[i];
            cp.terms.push_back(t);
        }
        return cp;
    }

    double eval(const std::vector<double>& x) const {
        double s = 0;
        for (const auto& t : terms) {
            double m = t.c;
            for (int i = 0; i < nvars; ++i)
                for (int k = 0; k < t.e[i]; ++k) m *= x[i];
            s += m;
        }
        return s;
    }
};

// sup of |grad S| over the amplitude box, by coarse tensor sampling.
double phase_gradient_sup(const SparsePoly& S, double r) {
    int d = S.nvars();
    std::vector<CompiledPoly> grad;
    for (int j = 0; j < d; ++j) grad.push_back(CompiledPoly::from(S.derivative(j)));
    int n = d <= 3 ? 9 : 7;
    std::vector<int> idx(d, 0);
    std::vector<double> x(d);
    double sup = 0;
    while (true) {
        for (int j = 0; j < d; ++j) x[j] = -r + 2.0 * r * idx[j] / (n - 1);
        double g2 = 0;
        for (int j = 0; j < d; ++j) {
            double g = grad[j].eval(x);
            g2 += g * g;
        }
        sup = std::max(sup, g2);
        int j = 0;
        for (; j < d; ++j) {
            if (++idx[j] < n) break;
            idx[j] = 0;
        }
        if (j == d) break;
    }
    return 1.1 * std::sqrt(sup);
}

// 1-D bump transform \int b(x) e^{isx} dx (real and even in s), tabulated on
// a uniform grid with 6-point interpolation.
struct BumpTransform {
    double h = 0.25;
    double r = 1.0;
    std::vector<double> table;  // values at s = k h, k = 0..K

    static BumpTransform build(double r, double s_max) {
        BumpTransform bt;
        bt.r = r;
        int K = static_cast<int>(std::ceil(s_max / bt.h)) + 8;
        bt.table.resize(K + 1);
        const int n = 2048;
        std::vector<double> xs(n), bs(n);
        for (int i = 0; i < n; ++i) {
            xs[i] = -r + 2.0 * r * (i + 0.5) / n;
            bs[i] = bump_profile(xs[i] / r);
        }
        double dx = 2.0 * r / n;
        for (int k = 0; k <= K; ++k) {
            double s = k * bt.h;
            long double acc = 0;
            for (int i = 0; i < n; ++i) acc += bs[i] * std::cos(s * xs[i]);
            bt.table[k] = static_cast<double>(acc) * dx;
        }
        return bt;
    }

    double operator()(double s) const {
        s = std::abs(s);
        double u = s / h;
        int k0 = static_cast<int>(u) - 2;
        k0 = std::clamp(k0, 0, static_cast<int>(table.size()) - 6);
        double acc = 0;
        for (int a = 0; a < 6; ++a) {
            double w = 1.0;
            for (int b = 0; b < 6; ++b) {
                if (a == b) continue;
                w *= (u - (k0 + b)) / static_cast<double>(a - b);
            }
            acc += w * table[k0 + a];
        }
        return acc;
    }
};

struct Block {
    std::vector<int> vars;  // global variable ids
    SparsePoly phase;       // in block-local variables
};

std::vector<Block> split_blocks(const SparsePoly& S) {
    int d = S.nvars();
    // union-find over variables joined by shared monomials
    std::vector<int> parent(d);
    for (int i = 0; i < d; ++i) parent[i] = i;
    std::function<int(int)> find = [&](int i) { return parent[i] == i ? i : parent[i] = find(parent[i]); };
    for (const auto& [g, c] : S.terms()) {
        int first = -1;
        for (int i = 0; i < d; ++i) {
            if (g[i] == 0) continue;
            if (first < 0)
                first = i;
            else
                parent[find(i)] = find(first);
        }
    }
    std::vector<Block> blocks;
    std::vector<int> block_of(d, -1);
    for (int i = 0; i < d; ++i) {
        if (S.degree_in(i) == 0) continue;  // amplitude-only variable
        int root = find(i);
        int bi = -1;
        for (std::size_t b = 0; b < blocks.size(); ++b)
            if (!blocks[b].vars.empty() && find(blocks[b].vars[0]) == root) bi = static_cast<int>(b);
        if (bi < 0) {
            bi = static_cast<int>(blocks.size());
            blocks.push_back(Block{{}, SparsePoly(0)});
        }
        blocks[bi].vars.push_back(i);
        block_of[i] = bi;
    }
    for (auto& b : blocks) {
        int n = static_cast<int>(b.vars.size());
        SparsePoly local(n);
        for (const auto& [g, c] : S.terms()) {
            Exponents h(n, 0);
            bool in_block = false;
            for (int k = 0; k < n; ++k) {
                h[k] = g[b.vars[k]];
                if (h[k] > 0) in_block = true;
            }
            if (in_block) local.add_term(h, c);
        }
        b.phase = local;
    }
    return blocks;
}

double bump_mass_1d(double r) {
    const int n = 4096;
    long double acc = 0;
    for (int i = 0; i < n; ++i) acc += bump_profile((-r + 2.0 * r * (i + 0.5) / n) / r);
    return static_cast<double>(acc) * 2.0 * r / n;
}

Complex eval_block_direct(const Block& b, double t, double r, int N, const QuadBudget& budget) {
    int n = static_cast<int>(b.vars.size());
    if (std::pow(static_cast<double>(N), n) > budget.max_evals)
        throw BudgetExceeded("oscint_J: block grid over budget");
    CompiledPoly S = CompiledPoly::from(b.phase);

    std::vector<double> grid(N), bamp(N);
    for (int k = 0; k < N; ++k) {
        grid[k] = -r + 2.0 * r * (k + 0.5) / N;
        bamp[k] = bump_profile(grid[k] / r);
    }
    // per-variable power tables
    std::vector<std::vector<double>> pow_tab(n);
    std::vector<int> maxdeg(n, 0);
    for (int j = 0; j < n; ++j) maxdeg[j] = b.phase.degree_in(j);
    for (int j = 0; j < n; ++j) {
        pow_tab[j].assign(static_cast<std::size_t>(N) * (maxdeg[j] + 1), 1.0);
        for (int k = 0; k < N; ++k)
            for (int e = 1; e <= maxdeg[j]; ++e)
                pow_tab[j][k * (maxdeg[j] + 1) + e] = pow_tab[j][k * (maxdeg[j] + 1) + e - 1] * grid[k];
    }

    std::vector<int> idx(n, 0);
    long double sr = 0, si = 0;
    while (true) {
        double amp = 1.0, Sv = 0.0;
        for (int j = 0; j < n; ++j) amp *= bamp[idx[j]];
        for (const auto& term : S.terms) {
            double m = term.c;
            for (int j = 0; j < n; ++j) m *= pow_tab[j][idx[j] * (maxdeg[j] + 1) + term.e[j]];
            Sv += m;
        }
        double ph = t * Sv;
        sr += amp * std::cos(ph);
        si += amp * std::sin(ph);
        int j = 0;
        for (; j < n; ++j) {
            if (++idx[j] < N) break;
            idx[j] = 0;
        }
        if (j == n) break;
    }
    double cell = std::pow(2.0 * r / N, n);
    return Complex(static_cast<double>(sr) * cell, static_cast<double>(si) * cell);
}

Complex eval_block_collapsed(const Block& b, int lin, double t, double r, int N,
                             const QuadBudget& budget) {
    int n = static_cast<int>(b.vars.size());
    // S = xi_lin * A(rest) + B(rest)
    SparsePoly A(n), B(n);
    for (const auto& [g, c] : b.phase.terms()) {
        if (g[lin] == 1) {
            Exponents h = g;
            h[lin] = 0;
            A.add_term(h, c);
        } else if (g[lin] == 0) {
            B.add_term(g, c);
        } else {
            throw NotApplicable("collapse variable is not linear");
        }
    }
    double a_bound = 0;
    for (const auto& [g, c] : A.terms()) a_bound += std::abs(to_double(c)) * std::pow(r, total_degree(g));
    BumpTransform bt = BumpTransform::build(r, std::abs(t) * a_bound + 2.0);

    int m = n - 1;
    if (m == 0) return Complex(bt(t * CompiledPoly::from(A).eval({})), 0.0);
    if (std::pow(static_cast<double>(N), m) > budget.max_evals)
        throw BudgetExceeded("oscint_J: collapsed grid over budget");

    CompiledPoly CA = CompiledPoly::from(A), CB = CompiledPoly::from(B);
    std::vector<double> grid(N), bamp(N);
    for (int k = 0; k < N; ++k) {
        grid[k] = -r + 2.0 * r * (k + 0.5) / N;
        bamp[k] = bump_profile(grid[k] / r);
    }

    std::vector<int> rest;
    for (int j = 0; j < n; ++j)
        if (j != lin) rest.push_back(j);

    std::vector<int> idx(m, 0);
    std::vector<double> x(n, 0.0);
    long double sr = 0, si = 0;
    while (true) {
        double amp = 1.0;
        for (int j = 0; j < m; ++j) {
            x[rest[j]] = grid[idx[j]];
            amp *= bamp[idx[j]];
        }
        double s = t * CA.eval(x);
        double ph = t * CB.eval(x);
        double w = amp * bt(s);
        sr += w * std::cos(ph);
        si += w * std::sin(ph);
        int j = 0;
        for (; j < m; ++j) {
            if (++idx[j] < N) break;
            idx[j] = 0;
        }
        if (j == m) break;
    }
    double cell = std::pow(2.0 * r / N, m);
    return Complex(static_cast<double>(sr) * cell, static_cast<double>(si) * cell);
}

}  // namespace

QuadratureResult oscint_J(const SparsePoly& phase, double t, const JOptions& opts) {
    if (phase.nvars() > 6) throw TooLarge("oscint_J: more than 6 variables");
    if (opts.amplitude.kind != AmplitudeKind::SeparableBump)
        throw NotApplicable("oscint_J uses separable bump amplitudes");
    const double r = opts.amplitude.radius;
    const int d = phase.nvars();

    std::vector<Block> blocks = split_blocks(phase);
    int amplitude_only = d;
    for (const auto& b : blocks) amplitude_only -= static_cast<int>(b.vars.size());
    double outer = std::pow(bump_mass_1d(r), amplitude_only);

    double L = phase_gradient_sup(phase, r);
    int n0 = even_at_least(std::max(64.0, opts.c_osc * std::ceil(1.0 + std::abs(t) * L)));

    auto eval_at = [&](int N) -> Complex {
        Complex prod(outer, 0.0);
        for (const auto& b : blocks) {
            int n = static_cast<int>(b.vars.size());
            int lin = -1;
            if (opts.collapse_min_dim > 0 && n >= opts.collapse_min_dim) {
                for (int j = 0; j < n && lin < 0; ++j)
                    if (b.phase.degree_in(j) == 1) lin = j;
            }
            Complex v = lin >= 0 ? eval_block_collapsed(b, lin, t, r, N, opts.budget)
                                 : eval_block_direct(b, t, r, N, opts.budget);
            prod *= v;
        }
        return prod;
    };

    return refine_to_tolerance(eval_at, n0, opts.rtol, opts.budget.max_refinements);
}

std::vector<ModelPhase> model_phase_catalog() {
    std::vector<ModelPhase> out;
    out.push_back({"x^2", parse_poly("x1^2"), -0.5, 0, 2.0});
    out.push_back({"x^3", parse_poly("x1^3"), -1.0 / 3.0, 0, 2.0});
    out.push_back({"x^4", parse_poly("x1^4"), -0.25, 0, 2.0});
    out.push_back({"D4-: x1^2 x2 - x2^3", parse_poly("x1^2*x2 - x2^3"), -2.0 / 3.0, 0, 2.0});
    out.push_back({"x1 x2 x3", parse_poly("x1*x2*x3"), -1.0, 1, 1.476});
    out.push_back({"x1^2 x2", parse_poly("x1^2*x2"), -0.5, 0, 2.0});
    out.push_back({"x1^2 x2^2", parse_poly("x1^2*x2^2"), -0.5, 1, 1.0});
    out.push_back({"z1 (z2^2 - z3^2)", parse_poly("x1*x2^2 - x1*x3^2"), -1.0, 1, 1.0});
    return out;
}

ProbeResult perturbation_probe(const SparsePoly& phase, double eps, int count,
                               const std::vector<double>& t_schedule, std::uint64_t seed,
                               const JOptions& opts) {
    if (count < 1) throw Degenerate("perturbation_probe needs count >= 1");
    const int d = phase.nvars();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    ProbeResult out;
    out.t = t_schedule;
    out.baseline.resize(t_schedule.size());
    out.envelope.assign(t_schedule.size(), 0.0);

    for (std::size_t i = 0; i < t_schedule.size(); ++i)
        out.baseline[i] = std::abs(oscint_J(phase, t_schedule[i], opts).value);

    for (int c = 0; c < count; ++c) {
        std::vector<double> w(d);
        double n2 = 0;
        for (auto& x : w) {
            x = gauss(rng);
            n2 += x * x;
        }
        double radius = eps * std::pow(unif(rng), 1.0 / d);
        double scale = n2 > 0 ? radius / std::sqrt(n2) : 0.0;
        SparsePoly pert = phase;
        for (int j = 0; j < d; ++j) {
            Exponents g(d, 0);
            g[j] = 1;
            pert.add_term(g, rational_from_double(w[j] * scale));
        }
        for (std::size_t i = 0; i < t_schedule.size(); ++i) {
            double v = std::abs(oscint_J(pert, t_schedule[i], opts).value);
            out.envelope[i] = std::max(out.envelope[i], v);
        }
    }
    for (std::size_t i = 0; i < t_schedule.size(); ++i)
        if (out.baseline[i] > 0)
            out.max_ratio = std::max(out.max_ratio, out.envelope[i] / out.baseline[i]);
    return out;
}

}  // namespace lw
