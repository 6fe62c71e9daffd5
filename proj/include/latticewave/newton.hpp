#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latticewave/poly.hpp"

namespace lw {

struct NewtonFace {
    std::vector<Rational> normal;    // all components > 0 when compact
    Rational support_value;          // min of normal . gamma over the support
    std::vector<Exponents> members;  // support points lying on the face
    std::vector<int> rays;           // axis directions contained in the face
    int affine_dim = 0;
    bool compact = true;
};

struct NewtonCertificate {
    // Convex combination of support points whose coordinates are all <= d_S.
    std::vector<std::pair<Exponents, Rational>> combination;
    // kappa >= 0 with min_gamma kappa.gamma = d_S and sum kappa = 1; separates
    // (d_S - eps) * (1,...,1) from the polyhedron.
    std::vector<Rational> separating_normal;
    Rational epsilon;
    bool verified = false;
};

struct NewtonData {
    int nvars = 0;
    std::vector<Exponents> support;
    std::vector<Exponents> vertices;
    std::vector<NewtonFace> compact_faces;
    bool faces_enumerated = false;
    Rational d_S;
    NewtonFace principal;  // minimal face containing (d_S, ..., d_S)
    int k_S = 0;
    std::pair<Rational, int> varchenko;  // (-1/d_S, k_S - 1)
    NewtonCertificate certificate;
};

struct NewtonOptions {
    bool enumerate_faces = true;  // skipped automatically for large instances
    bool want_vertices = true;
    int max_nvars = 8;
    std::size_t max_terms = 2000;
};

NewtonData newton_data(const SparsePoly& P, const NewtonOptions& opts = {});

SparsePoly face_part(const SparsePoly& P, const NewtonFace& face);

std::pair<Rational, int> varchenko_bound(const NewtonData& nd);

// Membership in conv(support) + R_+^d.
bool point_in_polyhedron(const std::vector<Exponents>& support, const std::vector<Rational>& p);

// p is in the polyhedron but on none of its compact faces (equivalently, p is
// dominated by another point of the polyhedron).
bool strictly_above_compact_boundary(const std::vector<Exponents>& support,
                                     const std::vector<Rational>& p);

// Proposition-style d=2 test: every real root of the principal-face section
// S_Gamma(., 1) has multiplicity <= a2 / (1 + a1).
bool adapted_check_2d(const SparsePoly& P);

struct FaceVerdict {
    NewtonFace face;
    bool nondegenerate = false;
    double min_relative_gradient = 0.0;
    std::vector<double> witness;  // sample achieving the minimum
    std::string evidence;         // sampling parameters; verdicts are evidence, not proof
};

struct NondegenerateOptions {
    int points_per_decade = 20;
    int decades = 3;
    double center_exponent = -1.0;  // magnitudes span 10^center-ish decades
    double threshold = 1e-6;
    std::size_t sample_budget = 20'000'000;
};

std::vector<FaceVerdict> check_R_nondegenerate(const SparsePoly& P,
                                               const NondegenerateOptions& opts = {});

// Exact analysis of grad Q_{a,b}^m = 0 off the coordinate hyperplanes: returns
// a sign-pattern witness when a nonzero critical point exists.
std::optional<std::vector<int>> q_critical_witness(const Rational& a, const Rational& b, int m);

}  // namespace lw
