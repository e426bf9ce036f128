#pragma once

#include "rigpose/core.hpp"
#include "rigpose/equations.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace rigpose {

struct SolverConfig {
    int expansion_degree = 8;  // total degree of the Macaulay truncation
    int saturation_rounds = 0; // extra degrees intersected away (removes roots at infinity)
    double rank_tol = 1e-10;   // singular values below rank_tol * sigma_max count as zero
    double imag_tol = 1e-6;    // |Im| bound for accepting a root as real
    double dedup_radius = 1e-6;
    double bound = 10.0;       // search region |q| <= bound
    double residual_tol = 1e-6;
    int polish_iterations = 3;
    int expected_solutions = 0; // 0 = unknown; mismatch triggers degree escalation
    int max_escalations = 2;
    uint64_t seed = 0; // fixes the random multiplication direction

    static SolverConfig for_e1_only_bundles() {
        // Systems of 4x4-minor equations on bundle configurations carry a
        // curve at infinity; one saturation round removes it.
        SolverConfig c;
        c.expansion_degree = 7;
        c.saturation_rounds = 1;
        return c;
    }
};

struct SolutionSet {
    std::vector<Eigen::Vector3d> roots; // real Cayley vectors
    std::vector<double> residuals;      // max |p(root)| / max|coeff(p)| over the system
    int complex_count = 0;              // isolated roots over C (quotient dimension)
};

/// Find all isolated real roots of the polynomial system by expanding it to
/// a Macaulay truncation, extracting the kernel, and eigen-decomposing the
/// multiplication map of a seeded random linear form. Returns an empty set
/// when no real root exists; throws SolveFailure on numerical breakdown.
SolutionSet solve_polys(const std::vector<TriPoly>& polys, const SolverConfig& cfg);

/// Solve e1 union e2. Throws InvalidProblem when the system has an
/// intra-camera bundle but an empty e2 (such systems have one-dimensional
/// families of extraneous roots).
SolutionSet solve_system(const EquationSystem& sys, const SolverConfig& cfg);

/// Translation from the least-singular direction v of the numeric M(q):
/// t = (v1, v2, v3) / v4. Throws TranslationAtInfinity when |v4| is
/// negligible, which flags a degenerate or extraneous root.
Eigen::Vector3d recover_translation(const PolyMatrix<3>& m, const Eigen::Vector3d& q);

/// One pose per real root with finite translation; roots at infinity are
/// dropped silently.
std::vector<RigPose> assemble_poses(const EquationSystem& sys, const SolutionSet& sols);

/// Dimension of the solution set over C, certified by reproducing the same
/// corank with a clean spectral gap at two consecutive truncation degrees.
/// Returns nullopt when the corank is ambiguous or does not stabilize.
std::optional<int> certify_root_count(const std::vector<TriPoly>& polys, int degree,
                                      int saturation_rounds, double rank_tol = 1e-10,
                                      double min_gap = 1e5);

} // namespace rigpose
