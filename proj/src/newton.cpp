#include "latticewave/newton.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "latticewave/errors.hpp"
#include "latticewave/simplex.hpp"

namespace lw {

namespace {

std::vector<Rational> to_rational_point(const Exponents& g) {
    std::vector<Rational> p(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) p[i] = g[i];
    return p;
}

bool dominates(const Exponents& a, const Exponents& b) {
    // a <= b componentwise, a != b
    bool strict = false;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i] > b[i]) return false;
        if (a[i] < b[i]) strict = true;
    }
    return strict;
}

std::vector<Exponents> pareto_minimal(const std::vector<Exponents>& T) {
    std::vector<Exponents> out;
    for (const auto& g : T) {
        bool dominated = false;
        for (const auto& h : T)
            if (dominates(h, g)) {
                dominated = true;
                break;
            }
        if (!dominated) out.push_back(g);
    }
    return out;
}

// Feasibility/objective LP over y in conv(T) + R_+^d with y + t = p, t >= 0:
// maximizes sum(t). Infeasible <=> p outside the polyhedron; optimum 0 <=> p
// Pareto-minimal (on a compact face).
std::optional<Rational> dominance_gap(const std::vector<Exponents>& T, const std::vector<Rational>& p) {
    const int d = static_cast<int>(p.size());
    const int nT = static_cast<int>(T.size());
    // variables: lambda (nT), s (d), t (d)
    const int n = nT + 2 * d;
    std::vector<std::vector<Rational>> A(d + 1, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> b(d + 1, Rational(0));
    std::vector<Rational> c(n, Rational(0));
    for (int j = 0; j < d; ++j) {
        for (int k = 0; k < nT; ++k) A[j][k] = T[k][j];
        A[j][nT + j] = 1;
        A[j][nT + d + j] = 1;
        b[j] = p[j];
        c[nT + d + j] = -1;  // maximize sum t
    }
    for (int k = 0; k < nT; ++k) A[d][k] = 1;
    b[d] = 1;
    LPSolution sol = simplex_solve(A, b, c);
    if (sol.status != LPStatus::Optimal) return std::nullopt;
    return -sol.objective;
}

// Largest eps in [0,1] with center - eps*(z - center) still in the polyhedron.
// Positive exactly when z lies on the minimal face of the center.
Rational face_generation_eps(const std::vector<Exponents>& T, const std::vector<Rational>& center,
                             const std::vector<Rational>& z) {
    const int d = static_cast<int>(center.size());
    const int nT = static_cast<int>(T.size());
    // variables: eps, lambda (nT), s (d), cap slack
    const int n = 1 + nT + d + 1;
    std::vector<std::vector<Rational>> A(d + 2, std::vector<Rational>(n, Rational(0)));
    std::vector<Rational> b(d + 2, Rational(0));
    std::vector<Rational> c(n, Rational(0));
    c[0] = -1;  // maximize eps
    for (int j = 0; j < d; ++j) {
        A[j][0] = z[j] - center[j];
        for (int k = 0; k < nT; ++k) A[j][1 + k] = T[k][j];
        A[j][1 + nT + j] = 1;
        b[j] = center[j];
    }
    for (int k = 0; k < nT; ++k) A[d][1 + k] = 1;
    b[d] = 1;
    A[d + 1][0] = 1;
    A[d + 1][1 + nT + d] = 1;
    b[d + 1] = 1;
    LPSolution sol = simplex_solve(A, b, c);
    if (sol.status != LPStatus::Optimal) return 0;
    return -sol.objective;
}

bool is_vertex(const std::vector<Exponents>& T, const Exponents& g) {
    std::vector<Exponents> rest;
    for (const auto& h : T)
        if (h != g) rest.push_back(h);
    if (rest.empty()) return true;
    return !point_in_polyhedron(rest, to_rational_point(g));
}

int rational_rank(std::vector<std::vector<Rational>> M) {
    int rank = 0;
    std::size_t cols = M.empty() ? 0 : M[0].size();
    for (std::size_t col = 0; col < cols && rank < static_cast<int>(M.size()); ++col) {
        int piv = -1;
        for (std::size_t r = rank; r < M.size(); ++r)
            if (M[r][col] != 0) {
                piv = static_cast<int>(r);
                break;
            }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        for (std::size_t r = 0; r < M.size(); ++r) {
            if (static_cast<int>(r) == rank || M[r][col] == 0) continue;
            Rational f = M[r][col] / M[rank][col];
            for (std::size_t cc = col; cc < cols; ++cc) M[r][cc] -= f * M[rank][cc];
        }
        ++rank;
    }
    return rank;
}

int affine_dimension(const std::vector<Exponents>& members, const std::vector<int>& rays, int d) {
    if (members.empty()) return -1;
    std::vector<std::vector<Rational>> rows;
    for (std::size_t i = 1; i < members.size(); ++i) {
        std::vector<Rational> r(d);
        for (int j = 0; j < d; ++j) r[j] = members[i][j] - members[0][j];
        rows.push_back(r);
    }
    for (int j : rays) {
        std::vector<Rational> r(d, Rational(0));
        r[j] = 1;
        rows.push_back(r);
    }
    if (rows.empty()) return 0;
    return rational_rank(rows);
}

// Nullspace vector of the (rows x d) system M kappa = 0 when the solution
// space is one-dimensional; empty otherwise.
std::vector<Rational> nullspace_1d(std::vector<std::vector<Rational>> M, int d) {
    std::vector<int> pivot_col;
    int rank = 0;
    for (int col = 0; col < d && rank < static_cast<int>(M.size()); ++col) {
        int piv = -1;
        for (std::size_t r = rank; r < M.size(); ++r)
            if (M[r][col] != 0) {
                piv = static_cast<int>(r);
                break;
            }
        if (piv < 0) continue;
        std::swap(M[rank], M[piv]);
        Rational p = M[rank][col];
        for (int cc = 0; cc < d; ++cc) M[rank][cc] /= p;
        for (std::size_t r = 0; r < M.size(); ++r) {
            if (static_cast<int>(r) == rank || M[r][col] == 0) continue;
            Rational f = M[r][col];
            for (int cc = 0; cc < d; ++cc) M[r][cc] -= f * M[rank][cc];
        }
        pivot_col.push_back(col);
        ++rank;
    }
    if (rank != d - 1) return {};
    std::vector<bool> is_pivot(d, false);
    for (int c : pivot_col) is_pivot[c] = true;
    int free_col = -1;
    for (int c = 0; c < d; ++c)
        if (!is_pivot[c]) free_col = c;
    std::vector<Rational> k(d, Rational(0));
    k[free_col] = 1;
    for (int r = 0; r < rank; ++r) k[pivot_col[r]] = -M[r][free_col];
    return k;
}

struct RawFacet {
    std::vector<Rational> normal;
    Rational value;
    std::set<int> tightT;  // indices into the support list
    std::set<int> tightE;  // axis directions on the facet
};

}  // namespace

bool point_in_polyhedron(const std::vector<Exponents>& support, const std::vector<Rational>& p) {
    return dominance_gap(support, p).has_value();
}

bool strictly_above_compact_boundary(const std::vector<Exponents>& support,
                                     const std::vector<Rational>& p) {
    auto gap = dominance_gap(support, p);
    return gap && *gap > 0;
}

NewtonData newton_data(const SparsePoly& P, const NewtonOptions& opts) {
    if (P.is_zero()) throw Degenerate("newton_data of the zero polynomial");
    if (P.nvars() > opts.max_nvars)
        throw TooLarge("newton_data: nvars " + std::to_string(P.nvars()) + " over budget");
    if (P.term_count() > opts.max_terms) throw TooLarge("newton_data: too many terms");

    NewtonData nd;
    const int d = P.nvars();
    nd.nvars = d;
    for (const auto& [g, c] : P.terms()) nd.support.push_back(g);
    const auto& T = nd.support;
    std::vector<Exponents> Tmin = pareto_minimal(T);

    // d_S: minimize rho with rho*(1,..,1) in conv(Tmin) + R_+^d.
    {
        const int nT = static_cast<int>(Tmin.size());
        const int n = 1 + nT + d;  // rho, lambda, s
        std::vector<std::vector<Rational>> A(d + 1, std::vector<Rational>(n, Rational(0)));
        std::vector<Rational> b(d + 1, Rational(0));
        std::vector<Rational> c(n, Rational(0));
        c[0] = 1;
        for (int j = 0; j < d; ++j) {
            A[j][0] = 1;
            for (int k = 0; k < nT; ++k) A[j][1 + k] = -Rational(Tmin[k][j]);
            A[j][1 + nT + j] = -1;
        }
        for (int k = 0; k < nT; ++k) A[d][1 + k] = 1;
        b[d] = 1;
        LPSolution sol = simplex_solve(A, b, c);
        if (sol.status != LPStatus::Optimal) throw Degenerate("newton_data: d_S LP failed");
        nd.d_S = sol.objective;

        for (int k = 0; k < nT; ++k)
            if (sol.x[1 + k] != 0) nd.certificate.combination.emplace_back(Tmin[k], sol.x[1 + k]);
        nd.certificate.separating_normal.assign(d, Rational(0));
        for (int j = 0; j < d; ++j) nd.certificate.separating_normal[j] = sol.y[j];
        nd.certificate.epsilon = make_rational(1, 1000);
    }

    // Certificate audit in plain rational arithmetic.
    {
        auto& cert = nd.certificate;
        bool ok = true;
        Rational lam_sum = 0;
        std::vector<Rational> comb(d, Rational(0));
        for (const auto& [g, lam] : cert.combination) {
            if (lam < 0) ok = false;
            lam_sum += lam;
            for (int j = 0; j < d; ++j) comb[j] += lam * g[j];
        }
        if (lam_sum != 1) ok = false;
        for (int j = 0; j < d; ++j)
            if (comb[j] > nd.d_S) ok = false;
        Rational ksum = 0;
        for (int j = 0; j < d; ++j) {
            if (cert.separating_normal[j] < 0) ok = false;
            ksum += cert.separating_normal[j];
        }
        if (nd.d_S > 0) {
            std::optional<Rational> minv;
            for (const auto& g : T) {
                Rational v = 0;
                for (int j = 0; j < d; ++j) v += cert.separating_normal[j] * g[j];
                if (!minv || v < *minv) minv = v;
            }
            if (!minv || *minv != nd.d_S || ksum != 1) ok = false;
            // (d_S - eps) * 1 has normal value below the support minimum.
            if (!((nd.d_S - cert.epsilon) * ksum < *minv)) ok = false;
        }
        cert.verified = ok;
    }

    // Principal face: minimal face containing the diagonal point.
    {
        std::vector<Rational> center(d, nd.d_S);
        const auto& kappa = nd.certificate.separating_normal;
        Rational tight_value = nd.d_S;
        for (const auto& g : T) {
            Rational v = 0;
            for (int j = 0; j < d; ++j) v += kappa[j] * g[j];
            bool candidate = (nd.d_S == 0) || (v == tight_value);
            if (candidate && face_generation_eps(Tmin, center, to_rational_point(g)) > 0)
                nd.principal.members.push_back(g);
        }
        for (int j = 0; j < d; ++j) {
            if (nd.d_S > 0 && kappa[j] != 0) continue;
            std::vector<Rational> z = center;
            z[j] += 1;
            if (face_generation_eps(Tmin, center, z) > 0) nd.principal.rays.push_back(j);
        }
        nd.principal.normal = kappa;
        nd.principal.support_value = nd.d_S;
        nd.principal.compact = nd.principal.rays.empty();
        nd.principal.affine_dim = affine_dimension(nd.principal.members, nd.principal.rays, d);
        if (nd.principal.affine_dim < 0) nd.principal.affine_dim = 0;
        nd.k_S = d - nd.principal.affine_dim;
    }

    nd.varchenko = varchenko_bound(nd);

    if (opts.want_vertices) {
        for (const auto& g : Tmin)
            if (is_vertex(Tmin, g)) nd.vertices.push_back(g);
    }

    bool small_enough = d <= 5 && nd.vertices.size() <= 24 && opts.want_vertices;
    if (opts.enumerate_faces && small_enough) {
        // Candidate facet normals from p vertices + q axes with (p-1)+q = d-1.
        const auto& V = nd.vertices;
        const int nv = static_cast<int>(V.size());
        std::vector<RawFacet> facets;

        std::vector<int> pick;
        auto consider = [&](const std::vector<int>& pts, const std::vector<int>& axes) {
            std::vector<std::vector<Rational>> M;
            for (std::size_t i = 1; i < pts.size(); ++i) {
                std::vector<Rational> r(d);
                for (int j = 0; j < d; ++j) r[j] = Rational(V[pts[i]][j]) - Rational(V[pts[0]][j]);
                M.push_back(r);
            }
            for (int a : axes) {
                std::vector<Rational> r(d, Rational(0));
                r[a] = 1;
                M.push_back(r);
            }
            std::vector<Rational> k = nullspace_1d(M, d);
            if (k.empty()) return;
            bool nonneg = true, nonpos = true;
            for (const auto& v : k) {
                if (v < 0) nonneg = false;
                if (v > 0) nonpos = false;
            }
            if (!nonneg && !nonpos) return;
            if (nonpos)
                for (auto& v : k) v = -v;
            // Supporting value and tight sets over the full support.
            std::optional<Rational> minv;
            for (const auto& g : T) {
                Rational val = 0;
                for (int j = 0; j < d; ++j) val += k[j] * g[j];
                if (!minv || val < *minv) minv = val;
            }
            RawFacet f;
            f.normal = k;
            f.value = *minv;
            for (int i = 0; i < static_cast<int>(T.size()); ++i) {
                Rational val = 0;
                for (int j = 0; j < d; ++j) val += k[j] * T[i][j];
                if (val == f.value) f.tightT.insert(i);
            }
            for (int j = 0; j < d; ++j)
                if (k[j] == 0) f.tightE.insert(j);
            // All chosen generators must be tight or the hyperplane is not supporting there.
            for (int p0 : pts) {
                Rational val = 0;
                for (int j = 0; j < d; ++j) val += k[j] * V[p0][j];
                if (val != f.value) return;
            }
            for (const auto& done : facets)
                if (done.tightT == f.tightT && done.tightE == f.tightE) return;
            facets.push_back(std::move(f));
        };

        // Enumerate subsets of vertices of size p and axis sets of size d-p.
        std::vector<int> axes_all(d);
        for (int j = 0; j < d; ++j) axes_all[j] = j;
        std::vector<int> pts, axes;
        auto rec_axes = [&](auto&& self, int start, int need) -> void {
            if (need == 0) {
                consider(pts, axes);
                return;
            }
            for (int a = start; a < d; ++a) {
                axes.push_back(a);
                self(self, a + 1, need - 1);
                axes.pop_back();
            }
        };
        auto rec_pts = [&](auto&& self, int start, int need) -> void {
            if (need == 0) {
                axes.clear();
                rec_axes(rec_axes, 0, d - static_cast<int>(pts.size()));
                return;
            }
            for (int v = start; v < nv; ++v) {
                pts.push_back(v);
                self(self, v + 1, need - 1);
                pts.pop_back();
            }
        };
        for (int p = 1; p <= std::min(d, nv); ++p) {
            pick.clear();
            pts.clear();
            rec_pts(rec_pts, 0, p);
        }

        // Face lattice: close facet tight-sets under intersection.
        std::set<std::pair<std::set<int>, std::set<int>>> seen;
        std::vector<std::pair<std::set<int>, std::set<int>>> faces;
        for (const auto& f : facets) {
            if (seen.insert({f.tightT, f.tightE}).second) faces.emplace_back(f.tightT, f.tightE);
        }
        for (std::size_t i = 0; i < faces.size(); ++i)
            for (std::size_t j = 0; j < i; ++j) {
                std::set<int> ti, te;
                std::set_intersection(faces[i].first.begin(), faces[i].first.end(),
                                      faces[j].first.begin(), faces[j].first.end(),
                                      std::inserter(ti, ti.begin()));
                std::set_intersection(faces[i].second.begin(), faces[i].second.end(),
                                      faces[j].second.begin(), faces[j].second.end(),
                                      std::inserter(te, te.begin()));
                if (ti.empty()) continue;
                if (seen.insert({ti, te}).second) faces.emplace_back(ti, te);
            }

        for (const auto& [tightT, tightE] : faces) {
            if (!tightE.empty()) continue;  // non-compact
            NewtonFace face;
            for (int i : tightT) face.members.push_back(T[i]);
            face.normal.assign(d, Rational(0));
            for (const auto& f : facets) {
                bool contains = std::includes(f.tightT.begin(), f.tightT.end(), tightT.begin(),
                                              tightT.end());
                if (!contains) continue;
                for (int j = 0; j < d; ++j) face.normal[j] += f.normal[j];
            }
            bool strictly_positive = true;
            for (int j = 0; j < d; ++j)
                if (face.normal[j] <= 0) strictly_positive = false;
            if (!strictly_positive) continue;  // sits inside a non-compact flat
            face.support_value = 0;
            for (int j = 0; j < d; ++j) face.support_value += face.normal[j] * face.members[0][j];
            face.compact = true;
            face.affine_dim = affine_dimension(face.members, {}, d);
            nd.compact_faces.push_back(std::move(face));
        }
        std::sort(nd.compact_faces.begin(), nd.compact_faces.end(),
                  [](const NewtonFace& a, const NewtonFace& b) {
                      if (a.affine_dim != b.affine_dim) return a.affine_dim < b.affine_dim;
                      return a.members < b.members;
                  });
        nd.faces_enumerated = true;
    }

    return nd;
}

SparsePoly face_part(const SparsePoly& P, const NewtonFace& face) {
    if (static_cast<int>(face.normal.size()) != P.nvars())
        throw FaceNotFound("face normal arity does not match the polynomial");
    SparsePoly r(P.nvars());
    bool any = false;
    for (const auto& [g, c] : P.terms()) {
        Rational v = 0;
        for (int j = 0; j < P.nvars(); ++j) v += face.normal[j] * g[j];
        if (v == face.support_value) {
            r.add_term(g, c);
            any = true;
        }
    }
    if (!any) throw FaceNotFound("no support points on the given face");
    return r;
}

std::pair<Rational, int> varchenko_bound(const NewtonData& nd) {
    if (nd.d_S == 0) throw Degenerate("varchenko bound undefined for d_S = 0");
    return {-1 / nd.d_S, nd.k_S - 1};
}

// ---------------------------------------------------------------------------
// Univariate helpers over Q for the d=2 adapted-coordinate test.
// ---------------------------------------------------------------------------
namespace {

using UPoly = std::vector<Rational>;  // coefficient list, index = power

void utrim(UPoly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

int udeg(const UPoly& p) { return static_cast<int>(p.size()) - 1; }

UPoly uderive(const UPoly& p) {
    UPoly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(p[i] * static_cast<long>(i));
    return d;
}

UPoly umul(const UPoly& a, const UPoly& b) {
    if (a.empty() || b.empty()) return {};
    UPoly r(a.size() + b.size() - 1, Rational(0));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return r;
}

// Remainder of a by b (b nonzero).
UPoly urem(UPoly a, const UPoly& b) {
    utrim(a);
    while (udeg(a) >= udeg(b) && !a.empty()) {
        Rational f = a.back() / b.back();
        int shift = udeg(a) - udeg(b);
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        utrim(a);
    }
    return a;
}

UPoly uquot(UPoly a, const UPoly& b) {
    utrim(a);
    UPoly q(std::max(0, udeg(a) - udeg(b) + 1), Rational(0));
    while (udeg(a) >= udeg(b) && !a.empty()) {
        Rational f = a.back() / b.back();
        int shift = udeg(a) - udeg(b);
        q[shift] = f;
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= f * b[i];
        utrim(a);
    }
    return q;
}

UPoly ugcd(UPoly a, UPoly b) {
    utrim(a);
    utrim(b);
    while (!b.empty()) {
        UPoly r = urem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Rational lead = a.back();
        for (auto& c : a) c /= lead;
    }
    return a;
}

// Yun's square-free decomposition: p = prod factors[i]^(i+1).
std::vector<UPoly> square_free(UPoly p) {
    utrim(p);
    std::vector<UPoly> out;
    if (udeg(p) <= 0) return out;
    UPoly d = uderive(p);
    UPoly a = ugcd(p, d);
    UPoly b = uquot(p, a);
    UPoly c = uquot(d, a);
    while (true) {
        UPoly delta = c;
        UPoly bd = uderive(b);
        for (std::size_t i = 0; i < bd.size(); ++i) {
            if (delta.size() <= i) delta.resize(i + 1, Rational(0));
            delta[i] -= bd[i];
        }
        utrim(delta);
        UPoly f = ugcd(b, delta);
        out.push_back(f);
        if (udeg(b) == udeg(f) || b.empty()) break;
        b = uquot(b, f);
        c = uquot(delta, f);
        if (udeg(b) <= 0) break;
    }
    return out;
}

int sturm_sign_variations_at_infinity(const std::vector<UPoly>& chain, int sign_of_inf) {
    int var = 0, prev = 0;
    for (const auto& p : chain) {
        if (p.empty()) continue;
        int s = p.back() > 0 ? 1 : -1;
        if (sign_of_inf < 0 && udeg(p) % 2 == 1) s = -s;
        if (prev != 0 && s != prev) ++var;
        prev = s;
    }
    return var;
}

bool has_real_root(const UPoly& p0) {
    UPoly p = p0;
    utrim(p);
    if (p.empty()) return true;  // zero polynomial
    if (udeg(p) == 0) return false;
    if (udeg(p) % 2 == 1) return true;
    std::vector<UPoly> chain{p, uderive(p)};
    while (!chain.back().empty() && udeg(chain.back()) > 0) {
        UPoly r = urem(chain[chain.size() - 2], chain.back());
        for (auto& c : r) c = -c;
        utrim(r);
        if (r.empty()) break;
        chain.push_back(r);
    }
    return sturm_sign_variations_at_infinity(chain, -1) - sturm_sign_variations_at_infinity(chain, 1) > 0;
}

}  // namespace

bool adapted_check_2d(const SparsePoly& P) {
    if (P.nvars() != 2) throw NotApplicable("adapted_check_2d needs two variables");
    NewtonData nd = newton_data(P);
    const NewtonFace& pf = nd.principal;
    if (!pf.compact || pf.affine_dim != 1)
        throw NotApplicable("the center does not lie on a compact edge");
    // Edge through two members: gamma2 = a2 - a1*gamma1 with a1, a2 natural.
    const Exponents& g0 = pf.members.front();
    const Exponents& g1 = pf.members.back();
    if (g0[0] == g1[0]) throw NotApplicable("principal edge is vertical");
    Rational a1 = Rational(g0[1] - g1[1]) / Rational(g1[0] - g0[0]);
    Rational a2 = Rational(g0[1]) + a1 * g0[0];
    if (a1 < 0 || a2 < 0 || a1.get_den() != 1 || a2.get_den() != 1)
        throw NotApplicable("principal edge is not of the form a1*x1 + x2 = a2 with naturals");

    SparsePoly section = face_part(P, pf);
    UPoly u;
    for (const auto& [g, c] : section.terms()) {
        if (static_cast<std::size_t>(g[0]) >= u.size()) u.resize(g[0] + 1, Rational(0));
        u[g[0]] += c;
    }
    Rational threshold = a2 / (1 + a1);

    auto factors = square_free(u);
    for (std::size_t i = 0; i < factors.size(); ++i) {
        Rational multiplicity = static_cast<long>(i + 1);
        if (multiplicity <= threshold) continue;
        if (!factors[i].empty() && udeg(factors[i]) >= 1 && has_real_root(factors[i])) return false;
    }
    return true;
}

std::vector<FaceVerdict> check_R_nondegenerate(const SparsePoly& P, const NondegenerateOptions& opts) {
    if (P.nvars() > 5) throw TooLarge("check_R_nondegenerate: nvars > 5");
    NewtonData nd = newton_data(P);
    if (!nd.faces_enumerated) throw TooLarge("check_R_nondegenerate: face enumeration skipped");

    const int d = P.nvars();
    int per_axis = opts.points_per_decade * opts.decades;
    // Fit the tensor sampling grid inside the budget.
    while (per_axis > 4) {
        double total = std::pow(2.0 * per_axis, d);
        if (total <= static_cast<double>(opts.sample_budget)) break;
        --per_axis;
    }

    std::vector<double> mags(per_axis);
    double lo = opts.center_exponent - opts.decades / 2.0;
    for (int i = 0; i < per_axis; ++i)
        mags[i] = std::pow(10.0, lo + opts.decades * (i + 0.5) / per_axis);

    std::vector<FaceVerdict> out;
    for (const auto& face : nd.compact_faces) {
        SparsePoly S = face_part(P, face);
        std::vector<SparsePoly> grad;
        for (int j = 0; j < d; ++j) grad.push_back(S.derivative(j));

        FaceVerdict v;
        v.face = face;
        v.min_relative_gradient = std::numeric_limits<double>::infinity();

        std::vector<double> x(d);
        std::vector<int> idx(d, 0);
        long n_samples = 0;
        for (int signs = 0; signs < (1 << d); ++signs) {
            std::fill(idx.begin(), idx.end(), 0);
            while (true) {
                for (int j = 0; j < d; ++j)
                    x[j] = ((signs >> j) & 1 ? -1.0 : 1.0) * mags[idx[j]];
                double g2 = 0, scale2 = 0;
                for (int j = 0; j < d; ++j) {
                    double gj = grad[j].eval(x);
                    g2 += gj * gj;
                    double sj = 0;
                    for (const auto& [gam, c] : grad[j].terms()) {
                        double m = std::abs(to_double(c));
                        for (int i = 0; i < d; ++i)
                            for (int k = 0; k < gam[i]; ++k) m *= std::abs(x[i]);
                        sj += m;
                    }
                    scale2 += sj * sj;
                }
                double rel = scale2 > 0 ? std::sqrt(g2 / scale2) : 0.0;
                ++n_samples;
                if (rel < v.min_relative_gradient) {
                    v.min_relative_gradient = rel;
                    v.witness = x;
                }
                int j = 0;
                for (; j < d; ++j) {
                    if (++idx[j] < per_axis) break;
                    idx[j] = 0;
                }
                if (j == d) break;
            }
        }
        v.nondegenerate = v.min_relative_gradient > opts.threshold;
        std::ostringstream ev;
        ev << "sampled evidence: " << n_samples << " points, " << per_axis
           << " magnitudes/axis over " << opts.decades << " decades";
        v.evidence = ev.str();
        out.push_back(std::move(v));
    }
    return out;
}

std::optional<std::vector<int>> q_critical_witness(const Rational& a, const Rational& b, int m) {
    // grad Q = 0 off the axes forces w_j = eps_j * tau with e = sum(eps) and
    // e^2 = b / a; a sign pattern with that sum is an explicit witness.
    if (a == 0 || b == 0) return std::nullopt;
    Rational ratio = b / a;
    if (ratio < 0) return std::nullopt;
    if (ratio.get_den() != 1) return std::nullopt;
    mpz_class num = ratio.get_num();
    mpz_class root = sqrt(num);
    if (root * root != num) return std::nullopt;
    long e = root.get_si();
    if (e == 0 || e > m || (m - e) % 2 != 0) return std::nullopt;
    long plus = (m + e) / 2;
    std::vector<int> signs(m, -1);
    for (long i = 0; i < plus; ++i) signs[i] = 1;
    return signs;
}

}  // namespace lw
