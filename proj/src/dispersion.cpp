#include "latticewave/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "latticewave/numutil.hpp"

namespace lw {

namespace {
constexpr double kPi = std::numbers::pi;

double wrap_pi(double x) {
    // into (-pi, pi]
    x = std::fmod(x + kPi, 2 * kPi);
    if (x <= 0) x += 2 * kPi;
    return x - kPi;
}
}  // namespace

double DispersionRelation::omega_sq(const std::vector<double>& xi) const {
    double s = mass * mass;
    for (double x : xi) {
        double h = std::sin(0.5 * x);
        s += 4.0 * h * h;
    }
    return s;
}

double DispersionRelation::omega(const std::vector<double>& xi) const {
    return std::sqrt(omega_sq(xi));
}

std::vector<double> DispersionRelation::grad_omega(const std::vector<double>& xi) const {
    double w = omega(xi);
    if (w == 0) throw SingularPoint("grad omega at a zero of omega");
    std::vector<double> g(d);
    for (int j = 0; j < d; ++j) g[j] = std::sin(xi[j]) / w;
    return g;
}

std::vector<double> DispersionRelation::hess_omega(const std::vector<double>& xi) const {
    double w = omega(xi);
    if (w == 0) throw SingularPoint("hess omega at a zero of omega");
    double w3 = w * w * w;
    std::vector<double> h(d * d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
            double v = -std::sin(xi[i]) * std::sin(xi[j]) / w3;
            if (i == j) v += std::cos(xi[j]) / w;
            h[i * d + j] = v;
        }
    return h;
}

double DispersionRelation::group_speed_sq(const std::vector<double>& xi) const {
    if (mass != 0) throw NotApplicable("group_speed_sq is defined for the wave case");
    double num = 0, den = 0;
    for (double x : xi) {
        double s = std::sin(x);
        num += s * s;
        double h = std::sin(0.5 * x);
        den += 4.0 * h * h;
    }
    if (den == 0) throw SingularPoint("group_speed_sq at the origin");
    return num / den;
}

std::string to_string(const StratumLabel& s) {
    if (s.corank == 0) return "Sigma0";
    if (s.corank == 1) return s.prime ? "Sigma1'" : "Sigma1''";
    return "Sigma" + std::to_string(s.corank);
}

double sigma1prime_residual(const DispersionRelation& rel, const std::vector<double>& xi) {
    double s = 0;
    for (double x : xi) {
        double c = std::cos(x);
        if (std::abs(c) < 1e-12) throw SecPole("sec pole at a quarter-pi coordinate");
        s += c + 1.0 / c;
    }
    return s - 2.0 * rel.d;
}

CriticalPoint classify(const DispersionRelation& rel, const std::vector<double>& xi, double tol) {
    if (rel.mass != 0) throw NotApplicable("classification is implemented for the wave case");
    const int d = rel.d;

    // Symbolic side: count quarter-pi coordinates; with none, test the
    // sec-sum residual.
    int quarter = 0;
    for (double x : xi)
        if (std::abs(std::cos(x)) <= tol) ++quarter;

    StratumLabel label;
    if (quarter >= 2) {
        label.corank = quarter - 1;
        label.prime = false;
    } else if (quarter == 1) {
        label.corank = 0;
    } else {
        double res = sigma1prime_residual(rel, xi);
        if (std::abs(res) <= tol * 100) {
            label.corank = 1;
            label.prime = true;
        } else {
            label.corank = 0;
        }
    }

    // Eigenvalue side.
    auto H = rel.hess_omega(xi);
    auto ev = symmetric_eigenvalues(H, d);
    double scale = 0;
    for (double e : ev) scale = std::max(scale, std::abs(e));
    int corank = 0;
    for (double e : ev)
        if (std::abs(e) <= tol * scale) ++corank;

    if (corank != label.corank)
        throw ClassificationConflict("eigenvalue corank " + std::to_string(corank) +
                                     " != symbolic " + to_string(label));

    CriticalPoint cp;
    cp.xi = xi;
    cp.corank = corank;
    cp.label = label;
    cp.velocity = rel.grad_omega(xi);
    return cp;
}

std::vector<CriticalPoint> find_critical_points(const DispersionRelation& rel,
                                                const std::vector<double>& v, double tol) {
    if (rel.mass != 0) throw NotApplicable("critical sets are implemented for the wave case");
    const int d = rel.d;
    if (static_cast<int>(v.size()) != d) throw DimensionMismatch("velocity arity");

    double vmax = 0;
    for (double x : v) vmax = std::max(vmax, std::abs(x));
    double w_hi = 2.0 * std::sqrt(static_cast<double>(d));
    if (vmax > 0) w_hi = std::min(w_hi, 1.0 / vmax);

    // Branch b: coordinate j uses cos >= 0 (principal arcsin sheet) when bit
    // j is clear, cos <= 0 otherwise.
    auto assemble = [&](int b, double w) {
        std::vector<double> xi(d);
        for (int j = 0; j < d; ++j) {
            double s = std::clamp(v[j] * w, -1.0, 1.0);
            double a = std::asin(s);
            if ((b >> j) & 1)
                xi[j] = s >= 0 ? kPi - a : -kPi - a;
            else
                xi[j] = a;
        }
        return xi;
    };
    auto F = [&](int b, double w) {
        double s = 0;
        for (int j = 0; j < d; ++j) {
            double q = v[j] * w;
            double c = std::sqrt(std::max(0.0, 1.0 - q * q));
            if ((b >> j) & 1) c = -c;
            s += 2.0 - 2.0 * c;
        }
        return s - w * w;
    };

    std::vector<std::vector<double>> found;
    const int n_scan = 4096;
    for (int b = 0; b < (1 << d); ++b) {
        double prev_w = w_hi / n_scan, prev_f = F(b, prev_w);
        std::vector<double> roots;
        for (int i = 2; i <= n_scan; ++i) {
            double w = w_hi * i / n_scan;
            double f = F(b, w);
            if ((prev_f < 0 && f > 0) || (prev_f > 0 && f < 0)) {
                double lo = prev_w, hi = w, flo = prev_f;
                for (int it = 0; it < 80; ++it) {
                    double mid = 0.5 * (lo + hi), fm = F(b, mid);
                    if ((flo < 0) == (fm < 0)) {
                        lo = mid;
                        flo = fm;
                    } else {
                        hi = mid;
                    }
                }
                roots.push_back(0.5 * (lo + hi));
            } else if (std::abs(f) < 1e-4 && i < n_scan) {
                // tangency candidate: local minimum of |F|
                double wn = w_hi * (i + 1) / n_scan;
                if (std::abs(prev_f) >= std::abs(f) && std::abs(F(b, wn)) >= std::abs(f)) {
                    double x = w;
                    for (int it = 0; it < 60; ++it) {
                        double h = 1e-7;
                        double df = (F(b, x + h) - F(b, x - h)) / (2 * h);
                        if (df == 0) break;
                        double step = F(b, x) / df;
                        x -= step;
                        if (!(x > 0 && x <= w_hi)) break;
                        if (std::abs(step) < 1e-15) break;
                    }
                    if (x > 0 && x <= w_hi && std::abs(F(b, x)) < 1e-11) roots.push_back(x);
                }
            }
            prev_w = w;
            prev_f = f;
        }
        if (std::abs(F(b, w_hi)) < 1e-10) roots.push_back(w_hi);

        for (double w : roots) found.push_back(assemble(b, w));
    }

    // Verify against the gradient and deduplicate on the torus.
    std::vector<CriticalPoint> out;
    double accept = std::max(tol, 1e-9) * (1.0 + norm2(v));
    for (auto& xi : found) {
        for (auto& x : xi) x = wrap_pi(x);
        double w = rel.omega(xi);
        if (w < 1e-9) continue;
        auto g = rel.grad_omega(xi);
        double err = 0;
        for (int j = 0; j < d; ++j) err = std::max(err, std::abs(g[j] - v[j]));
        if (err > accept) continue;
        bool dup = false;
        for (const auto& cp : out) {
            double dist = 0;
            for (int j = 0; j < d; ++j) {
                double diff = std::abs(wrap_pi(xi[j] - cp.xi[j]));
                dist = std::max(dist, diff);
            }
            if (dist < 1e-8) {
                dup = true;
                break;
            }
        }
        if (!dup) out.push_back(classify(rel, xi, std::max(tol, 1e-7)));
    }
    std::sort(out.begin(), out.end(),
              [](const CriticalPoint& a, const CriticalPoint& b) { return a.xi < b.xi; });
    return out;
}

namespace {

// Sup of the group speed over one stratum family: `quarter` coordinates are
// pinned at pi/2 and the rest sweep a grid over (0, pi); for Sigma_1' the
// first coordinate solves the sec-sum equation instead.
struct StratumScan {
    double sup = 0;
    std::vector<double> arg;
};

double speed_at(const DispersionRelation& rel, const std::vector<double>& xi) {
    return std::sqrt(rel.group_speed_sq(xi));
}

StratumScan scan_quarter_stratum(const DispersionRelation& rel, int quarter, int n) {
    const int d = rel.d;
    const int free_n = d - quarter;
    std::vector<double> xi(d, kPi / 2);
    StratumScan best;
    if (free_n == 0) {
        best.sup = speed_at(rel, xi);
        best.arg = xi;
        return best;
    }
    std::vector<int> idx(free_n, 0);
    while (true) {
        for (int j = 0; j < free_n; ++j) xi[quarter + j] = kPi * (idx[j] + 0.5) / n;
        double s = speed_at(rel, xi);
        if (s > best.sup) {
            best.sup = s;
            best.arg = xi;
        }
        int j = 0;
        for (; j < free_n; ++j) {
            if (++idx[j] < n) break;
            idx[j] = 0;
        }
        if (j == free_n) break;
    }
    // Local refinement around the best grid point.
    double h = kPi / n;
    for (int round = 0; round < 4; ++round) {
        StratumScan local = best;
        std::vector<int> off(free_n, -2);
        while (true) {
            std::vector<double> cand = best.arg;
            bool valid = true;
            for (int j = 0; j < free_n; ++j) {
                cand[quarter + j] += off[j] * h / 4;
                if (cand[quarter + j] <= 0 || cand[quarter + j] >= kPi) valid = false;
            }
            if (valid) {
                double s = speed_at(rel, cand);
                if (s > local.sup) {
                    local.sup = s;
                    local.arg = cand;
                }
            }
            int j = 0;
            for (; j < free_n; ++j) {
                if (++off[j] <= 2) break;
                off[j] = -2;
            }
            if (j == free_n) break;
        }
        best = local;
        h /= 4;
    }
    return best;
}

StratumScan scan_sigma1prime(const DispersionRelation& rel, int n) {
    const int d = rel.d;
    const int free_n = d - 1;
    StratumScan best;
    std::vector<int> idx(free_n, 0);
    while (true) {
        std::vector<double> tail(free_n);
        for (int j = 0; j < free_n; ++j) tail[j] = kPi * (idx[j] + 0.5) / n;
        for (bool obtuse : {false, true}) {
            auto xi = make_sigma1prime_point(d, tail, obtuse);
            if (xi) {
                double s = speed_at(rel, *xi);
                if (s > best.sup) {
                    best.sup = s;
                    best.arg = *xi;
                }
            }
        }
        int j = 0;
        for (; j < free_n; ++j) {
            if (++idx[j] < n) break;
            idx[j] = 0;
        }
        if (j == free_n) break;
    }
    // Refinement in the tail parameters.
    if (!best.arg.empty()) {
        double h = kPi / n;
        for (int round = 0; round < 4; ++round) {
            StratumScan local = best;
            std::vector<int> off(free_n, -2);
            while (true) {
                std::vector<double> tail(free_n);
                bool valid = true;
                for (int j = 0; j < free_n; ++j) {
                    tail[j] = best.arg[1 + j] + off[j] * h / 4;
                    if (tail[j] <= 0 || tail[j] >= kPi) valid = false;
                }
                if (valid) {
                    for (bool obtuse : {false, true}) {
                        auto xi = make_sigma1prime_point(d, tail, obtuse);
                        if (xi) {
                            double s = speed_at(rel, *xi);
                            if (s > local.sup) {
                                local.sup = s;
                                local.arg = *xi;
                            }
                        }
                    }
                }
                int j = 0;
                for (; j < free_n; ++j) {
                    if (++off[j] <= 2) break;
                    off[j] = -2;
                }
                if (j == free_n) break;
            }
            best = local;
            h /= 4;
        }
    }
    return best;
}

double sup_over_sigma(const DispersionRelation& rel, int n,
                      std::vector<std::pair<std::string, double>>* table) {
    double sup = 0;
    for (int corank = rel.d - 1; corank >= 1; --corank) {
        StratumScan s = scan_quarter_stratum(rel, corank + 1, n);
        if (table) table->push_back({to_string(StratumLabel{corank, false}), s.sup});
        sup = std::max(sup, s.sup);
    }
    StratumScan sp = scan_sigma1prime(rel, n);
    if (table) table->push_back({"Sigma1'", sp.sup});
    return std::max(sup, sp.sup);
}

}  // namespace

B0Estimate estimate_b0(const DispersionRelation& rel, int grid_density) {
    if (rel.d < 3) throw NotApplicable("estimate_b0 needs d >= 3");
    if (rel.mass != 0) throw NotApplicable("estimate_b0 is a wave-case probe");

    B0Estimate out;
    double coarse = sup_over_sigma(rel, grid_density, nullptr);
    double fine = sup_over_sigma(rel, 2 * grid_density, &out.per_stratum);
    out.sup_speed = std::max(coarse, fine);
    out.delta = 1.0 - out.sup_speed;
    out.refinement_change = std::abs(fine - coarse);
    out.converged = out.refinement_change <= 1e-4;
    if (!out.converged)
        throw NotConverged("estimate_b0: doubling moved the sup by " +
                           std::to_string(out.refinement_change));
    return out;
}

std::vector<double> make_sigma_k_point(int d, int k, std::mt19937& rng) {
    std::uniform_real_distribution<double> u(-kPi, kPi);
    std::uniform_int_distribution<int> coin(0, 1);
    std::vector<int> pos(d);
    for (int i = 0; i < d; ++i) pos[i] = i;
    std::shuffle(pos.begin(), pos.end(), rng);

    std::vector<double> xi(d);
    int quarter = k + 1;  // corank k comes from k+1 quarter-pi coordinates
    for (int i = 0; i < d; ++i) {
        if (i < quarter) {
            xi[pos[i]] = coin(rng) ? kPi / 2 : -kPi / 2;
        } else {
            double x;
            do {
                x = u(rng);
            } while (std::abs(std::cos(x)) < 0.05 || std::abs(x) < 0.05);
            xi[pos[i]] = x;
        }
    }
    return xi;
}

std::optional<std::vector<double>> make_sigma1prime_point(int d, const std::vector<double>& tail,
                                                          bool first_obtuse) {
    if (static_cast<int>(tail.size()) != d - 1) throw DimensionMismatch("sigma1' tail arity");
    double t = 2.0 * d;
    for (double x : tail) {
        double c = std::cos(x);
        if (std::abs(c) < 1e-12) return std::nullopt;
        t -= c + 1.0 / c;
    }
    // cos xi_1 + sec xi_1 = t has a root in [-1,1] iff |t| >= 2.
    if (std::abs(t) < 2) return std::nullopt;
    double c1;
    if (t >= 2)
        c1 = (t - std::sqrt(t * t - 4)) / 2;  // acute branch
    else
        c1 = (t + std::sqrt(t * t - 4)) / 2;  // obtuse branch
    if (first_obtuse != (c1 < 0)) return std::nullopt;
    std::vector<double> xi(d);
    xi[0] = std::acos(std::clamp(c1, -1.0, 1.0));
    for (int j = 1; j < d; ++j) xi[j] = tail[j - 1];
    return xi;
}

}  // namespace lw
