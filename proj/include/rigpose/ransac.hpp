#pragma once

#include "rigpose/core.hpp"
#include "rigpose/minimal_solvers.hpp"

#include <cstdint>
#include <vector>

namespace rigpose {

struct RansacConfig {
    double confidence = 0.99;    // probability of drawing one outlier-free sample
    int max_iterations = 20000;
    double threshold_deg = 0.1;  // angular inlier threshold
    int sample_size = 6;
    uint64_t seed = 0;
    bool sum_error = false; // aggregate the two view errors by sum instead of max
};

struct RansacResult {
    RigPose pose;
    std::vector<char> inlier_mask;
    int inlier_count = 0;
    int iterations = 0;
    double outlier_ratio = 1.0; // estimate from the best model
};

struct AngularError {
    bool degenerate = false; // near-parallel rays: counted as an outlier
    double error = 0.0;      // 1 - cos(theta) of the worse reprojected view
};

/// Triangulate the correspondence by the midpoint of the common
/// perpendicular in the view-1 camera frame, reproject into both views and
/// return 1 - cos of the larger angular residual (or their sum).
AngularError angular_reprojection_error(const RigPose& pose,
                                        const std::vector<CameraExtrinsic>& rig,
                                        const RayCorrespondence& pc, bool sum_error = false);

/// Inlier iff the angular error is finite and below 1 - cos(threshold).
bool angular_inlier_test(const RigPose& pose, const std::vector<CameraExtrinsic>& rig,
                         const RayCorrespondence& pc, double threshold_deg,
                         double* error_out = nullptr, bool sum_error = false);

/// N = ceil(log(1-p) / log(1 - (1-eps)^s)); 1 when every point is an inlier.
long long ransac_iterations(double p, int s, double eps);

/// Variant accounting for solver stability: (1-eps) is damped by the
/// probability p2 of an accurate solve from an all-inlier sample.
long long ransac_iterations_stable(double p, int s, double eps, double p2);

/// Adaptive RANSAC over six-correspondence samples, stratified when the
/// solver needs two specific ray-bundle groups. Throws NoModelFound when
/// no sample produces a model.
RansacResult run_ransac(const std::vector<RayCorrespondence>& pcs,
                        const std::vector<CameraExtrinsic>& rig, SolverKind kind,
                        const RansacConfig& cfg, const SolverConfig& solver_cfg = {});

/// Solver choice for a correspondence pool: the specific two-bundle solvers
/// when the pool offers the required strata, the generic solver otherwise.
SolverKind auto_select_pool(const std::vector<RayCorrespondence>& pcs);

} // namespace rigpose
