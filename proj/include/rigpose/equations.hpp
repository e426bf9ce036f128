#pragma once

#include "rigpose/core.hpp"
#include "rigpose/poly.hpp"

#include <vector>

namespace rigpose {

enum class Parametrization { Cayley, Quaternion };

/// A minimal six-correspondence relative pose problem.
struct SixPointProblem {
    std::vector<CameraExtrinsic> rig;
    std::vector<RayCorrespondence> pcs; // exactly six
    Parametrization parametrization = Parametrization::Cayley;

    void validate() const; // throws InvalidProblem
};

/// Correspondences sharing one (i, ip) camera pair. Groups of size >= 3
/// contribute rank-2 constraints on the translation-coefficient block.
struct RayBundleGroup {
    int i = 0;
    int ip = 0;
    std::vector<int> rows; // sorted correspondence indices
};

/// The hidden-variable equation system for the Cayley parametrization.
/// e1 holds the quotients of the nonvanishing 4x4 minors of m (degree 6),
/// e2 the quotients of the ray-bundle 3x3 minors (degree 4).
struct EquationSystem {
    std::vector<TriPoly> e1;
    std::vector<TriPoly> e2;
    PolyMatrix<3> m; // 6x4, coefficients of (tx, ty, tz, 1)
    std::vector<RayBundleGroup> groups;
};

/// Same construction over the quaternion variables (qw, qx, qy, qz).
/// No common factor is divided out; exposed for construction testing only.
struct QuatEquationSystem {
    std::vector<QuatPoly> e1;
    std::vector<QuatPoly> e2;
    PolyMatrix<4> m;
};

/// Numerator of the Cayley rotation (Eq. 5 without the 1/(1+|q|^2) factor):
/// entries quadratic in (qx, qy, qz).
const PolyMatrix<3>& cayley_numerator();

/// Quaternion rotation matrix: entries quadratic in (qw, qx, qy, qz).
const PolyMatrix<4>& quaternion_numerator();

/// Build the 6x4 matrix M with M(q) * (tx, ty, tz, 1)^T = 0 at the true
/// pose. Row k dotted with (t, 1) equals (1+|q|^2) * xp^T E x for the k-th
/// correspondence; the dropped factor only scales rows.
PolyMatrix<3> build_M(const SixPointProblem& problem);
PolyMatrix<4> build_M_quat(const SixPointProblem& problem);

/// Maximal groups of correspondences with identical (i, ip); only groups
/// of size >= 3 are returned.
std::vector<RayBundleGroup> detect_ray_bundle_groups(const SixPointProblem& problem);

EquationSystem build_equations(const SixPointProblem& problem);
QuatEquationSystem build_equations_quat(const SixPointProblem& problem);

/// The fixed divisor qx^2 + qy^2 + qz^2 + 1.
TriPoly cayley_norm_poly();

} // namespace rigpose
