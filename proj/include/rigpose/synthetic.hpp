#pragma once

#include "rigpose/core.hpp"
#include "rigpose/minimal_solvers.hpp"
#include "rigpose/random.hpp"

#include <vector>

namespace rigpose {

enum class Scenario { TwoCameraRig, GeneralizedCamera };
enum class MotionType { Forward, Sideways, Random };
enum class CaseType { Generic, Inter, Intra };

struct SceneConfig {
    Scenario scenario = Scenario::TwoCameraRig;
    CaseType match_case = CaseType::Intra;
    MotionType motion = MotionType::Random;
    double noise_px = 0.0;
    double outlier_ratio = 0.0;
    int pc_count = 100;
    uint64_t seed = 0;

    // Two-camera rig scenario (paper protocol values).
    double baseline_m = 1.0;
    double translation_m = 3.0;
    double focal_px = 400.0;
    int image_w = 640;
    int image_h = 480;
    double cam_perturb_deg = 5.0; // forward-facing cameras, per-axis perturbation
    double view_rot_deg = 10.0;   // per-axis rotation between the two views
    double ground_height_m = 1.5; // below the rig origin (y points down)
    int plane_count = 50;
    double patch_half_m = 1.0; // random planes carry 2 m square patches

    // Generalized-camera scenario.
    int omni_camera_count = 12;   // generic case; inter/intra use 2
    double max_rotation_deg = 90.0;
    double max_translation_m = 3.0;
};

struct LabeledPC {
    RayCorrespondence pc;
    bool is_outlier = false;
};

struct SyntheticInstance {
    std::vector<CameraExtrinsic> rig;
    RigPose gt;
    std::vector<LabeledPC> pcs;
    bool pinhole = true;
    double focal_px = 400.0;
    int image_w = 640;
    int image_h = 480;

    std::vector<RayCorrespondence> correspondences() const;
};

/// Two forward-facing perspective cameras, 1 m baseline, 3 m view
/// translation, a ground plane plus 50 random planes. Points landing
/// outside the 640x480 image in either view are respawned.
SyntheticInstance make_two_camera_rig(const SceneConfig& cfg);

/// Omnidirectional cameras with fully random extrinsics: 12 for the generic
/// case, 2 for inter/intra. Bearings are exact unit vectors before noise.
SyntheticInstance make_generalized_camera(const SceneConfig& cfg);

SyntheticInstance make_instance(const SceneConfig& cfg);

/// Gaussian pixel noise on both image observations, bearings re-derived.
void add_pixel_noise(SyntheticInstance& instance, double sigma_px, Rng& rng);

/// Tangent-plane Gaussian with per-axis deviation sigma_px / focal radians,
/// the angular equivalent of pixel noise for omnidirectional bearings.
void add_bearing_noise(SyntheticInstance& instance, double sigma_px, Rng& rng);

/// Replace the view-2 bearing of a random subset with uniformly random
/// directions and label them.
void inject_outliers(SyntheticInstance& instance, double ratio, Rng& rng);

/// Minimal six-correspondence sample per the correspondence-selection rule:
/// one per designated camera pair for the generic solver, three from each
/// of two bundle strata for the two-camera solvers.
std::vector<RayCorrespondence> select_minimal_sample(const SyntheticInstance& instance,
                                                     SolverKind kind, Rng& rng);

struct StabilityStats {
    std::vector<int> trial_ids;        // successful trials, ascending
    std::vector<double> log10_rot_err; // aligned with trial_ids
    std::vector<double> log10_trans_err;
    std::vector<double> log10_tdir_err;
    int trials = 0;
    int failures = 0; // trials with no usable pose
    double p2 = 0.0;  // fraction of trials with rot and trans error < 1e-3
};

/// Noise-free minimal-solve stability experiment: per trial, generate an
/// instance, solve one minimal sample and log the errors of the root
/// closest to ground truth. Failed trials count in the p2 denominator.
StabilityStats run_stability_experiment(SolverKind kind, const SceneConfig& cfg, int trials,
                                        const SolverConfig& solver_cfg = {}, int threads = 1);

} // namespace rigpose
