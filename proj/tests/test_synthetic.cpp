#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rigpose/geometry.hpp"
#include "rigpose/ransac.hpp"
#include "rigpose/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <set>

using namespace rigpose;

namespace {

double max_epipolar_residual(const SyntheticInstance& inst) {
    double worst = 0.0;
    for (const auto& l : inst.pcs) {
        if (l.is_outlier) continue;
        const Eigen::Matrix3d E =
            essential_matrix(inst.gt, inst.rig[l.pc.i], inst.rig[l.pc.ip]);
        // unit-scale residual so the bound is comparable across instances
        const double r = std::abs(l.pc.xp.normalized().dot(E * l.pc.x.normalized()));
        worst = std::max(worst, r);
    }
    return worst;
}

} // namespace

TEST_CASE("two-camera rig: exact construction") {
    SceneConfig cfg;
    cfg.scenario = Scenario::TwoCameraRig;
    cfg.match_case = CaseType::Intra;
    cfg.seed = 21;
    const SyntheticInstance inst = make_two_camera_rig(cfg);

    CHECK(inst.pcs.size() == 100);
    CHECK(inst.rig.size() == 2);
    CHECK((inst.rig[0].s - inst.rig[1].s).norm() == doctest::Approx(1.0));
    CHECK(inst.gt.t.norm() == doctest::Approx(3.0));
    CHECK(max_epipolar_residual(inst) < 1e-12);

    SUBCASE("all projections stay inside the image") {
        for (const auto& l : inst.pcs) {
            for (const auto& [b, cam] :
                 {std::pair{l.pc.x, l.pc.i}, std::pair{l.pc.xp, l.pc.ip}}) {
                (void)cam;
                const double u = cfg.focal_px * b.x() / b.z() + cfg.image_w / 2.0;
                const double v = cfg.focal_px * b.y() / b.z() + cfg.image_h / 2.0;
                CHECK(u >= 0.0);
                CHECK(u < cfg.image_w);
                CHECK(v >= 0.0);
                CHECK(v < cfg.image_h);
            }
        }
    }

    SUBCASE("intra pairs only") {
        for (const auto& l : inst.pcs) CHECK(l.pc.i == l.pc.ip);
    }

    SUBCASE("seeded determinism") {
        const SyntheticInstance again = make_two_camera_rig(cfg);
        REQUIRE(again.pcs.size() == inst.pcs.size());
        for (size_t k = 0; k < inst.pcs.size(); ++k) {
            CHECK(again.pcs[k].pc.x == inst.pcs[k].pc.x);
            CHECK(again.pcs[k].pc.xp == inst.pcs[k].pc.xp);
        }
    }
}

TEST_CASE("two-camera rig: motion types") {
    SceneConfig cfg;
    cfg.scenario = Scenario::TwoCameraRig;
    cfg.match_case = CaseType::Inter;
    cfg.seed = 22;

    cfg.motion = MotionType::Forward;
    SyntheticInstance fwd = make_two_camera_rig(cfg);
    // rig center displacement is R^T applied to -t
    const Eigen::Vector3d c_fwd = -fwd.gt.R.transpose() * fwd.gt.t;
    CHECK(c_fwd.normalized().z() == doctest::Approx(1.0));

    cfg.motion = MotionType::Sideways;
    SyntheticInstance side = make_two_camera_rig(cfg);
    const Eigen::Vector3d c_side = -side.gt.R.transpose() * side.gt.t;
    CHECK(std::abs(c_side.normalized().x()) == doctest::Approx(1.0));

    for (const auto& l : side.pcs) CHECK(l.pc.i != l.pc.ip);
}

TEST_CASE("generalized camera: construction") {
    SceneConfig cfg;
    cfg.scenario = Scenario::GeneralizedCamera;
    cfg.match_case = CaseType::Generic;
    cfg.seed = 23;
    const SyntheticInstance inst = make_generalized_camera(cfg);

    CHECK(inst.rig.size() == 12);
    CHECK(max_epipolar_residual(inst) < 1e-12);
    for (const auto& l : inst.pcs) {
        CHECK(l.pc.x.norm() == doctest::Approx(1.0));
        CHECK(l.pc.xp.norm() == doctest::Approx(1.0));
    }

    SUBCASE("minimal sample uses the six designated camera pairs") {
        Rng rng(1);
        const auto sample = select_minimal_sample(inst, SolverKind::Generic64, rng);
        REQUIRE(sample.size() == 6);
        std::set<std::pair<int, int>> pairs;
        for (const auto& pc : sample) pairs.insert({pc.i, pc.ip});
        CHECK(pairs.size() == 6);
        for (const auto& [i, ip] : pairs) CHECK(ip == i + 1);
    }

    SUBCASE("inter case produces only cross-camera pairs") {
        cfg.match_case = CaseType::Inter;
        const SyntheticInstance inter = make_generalized_camera(cfg);
        CHECK(inter.rig.size() == 2);
        for (const auto& l : inter.pcs) CHECK(l.pc.i != l.pc.ip);
    }
}

TEST_CASE("pixel noise statistics") {
    SceneConfig cfg;
    cfg.scenario = Scenario::TwoCameraRig;
    cfg.match_case = CaseType::Intra;
    const double sigma = 1.0;

    double sum2 = 0.0;
    int count = 0;
    for (uint64_t seed = 0; seed < 25; ++seed) {
        cfg.seed = seed;
        const SyntheticInstance clean = make_two_camera_rig(cfg);
        SyntheticInstance noisy = clean;
        Rng rng(seed + 1000);
        add_pixel_noise(noisy, sigma, rng);
        for (size_t k = 0; k < clean.pcs.size(); ++k) {
            const auto px = [&](const Eigen::Vector3d& b) {
                return Eigen::Vector2d(cfg.focal_px * b.x() / b.z(),
                                       cfg.focal_px * b.y() / b.z());
            };
            const Eigen::Vector2d d1 = px(noisy.pcs[k].pc.x) - px(clean.pcs[k].pc.x);
            const Eigen::Vector2d d2 = px(noisy.pcs[k].pc.xp) - px(clean.pcs[k].pc.xp);
            sum2 += d1.squaredNorm() + d2.squaredNorm();
            count += 4;
        }
    }
    const double std_observed = std::sqrt(sum2 / count);
    CHECK(std::abs(std_observed - sigma) < 0.05 * sigma); // 10^4 draws, 5 percent

    SUBCASE("zero noise leaves the instance untouched") {
        cfg.seed = 3;
        const SyntheticInstance clean = make_two_camera_rig(cfg);
        SyntheticInstance copy = clean;
        Rng rng(7);
        add_pixel_noise(copy, 0.0, rng);
        for (size_t k = 0; k < clean.pcs.size(); ++k)
            CHECK(copy.pcs[k].pc.x == clean.pcs[k].pc.x);
    }
}

TEST_CASE("bearing noise matches the pixel-equivalent magnitude") {
    SceneConfig cfg;
    cfg.scenario = Scenario::GeneralizedCamera;
    cfg.match_case = CaseType::Generic;
    const double sigma = 1.0;
    const double s_rad = sigma / cfg.focal_px; // per-axis tangent deviation

    double sum2 = 0.0;
    int count = 0;
    for (uint64_t seed = 0; seed < 25; ++seed) {
        cfg.seed = seed;
        const SyntheticInstance clean = make_generalized_camera(cfg);
        SyntheticInstance noisy = clean;
        Rng rng(seed + 2000);
        add_bearing_noise(noisy, sigma, rng);
        for (size_t k = 0; k < clean.pcs.size(); ++k) {
            const double a1 = std::acos(std::clamp(
                noisy.pcs[k].pc.x.dot(clean.pcs[k].pc.x), -1.0, 1.0));
            const double a2 = std::acos(std::clamp(
                noisy.pcs[k].pc.xp.dot(clean.pcs[k].pc.xp), -1.0, 1.0));
            sum2 += a1 * a1 + a2 * a2;
            count += 2;
        }
    }
    // two tangent axes: E[angle^2] = 2 s^2
    const double rms = std::sqrt(sum2 / count);
    CHECK(std::abs(rms - s_rad * std::sqrt(2.0)) < 0.05 * s_rad * std::sqrt(2.0));
    // sanity: about 0.143 degrees per axis at one pixel and f = 400
    CHECK(std::atan(1.0 / 400.0) * 180.0 / M_PI == doctest::Approx(0.143).epsilon(0.01));
}

TEST_CASE("outlier injection") {
    SceneConfig cfg;
    cfg.scenario = Scenario::TwoCameraRig;
    cfg.match_case = CaseType::Intra;
    int total_outliers = 0, failing = 0;
    for (uint64_t seed = 0; seed < 50; ++seed) {
        cfg.seed = seed;
        cfg.outlier_ratio = 1.0;
        const SyntheticInstance inst = make_two_camera_rig(cfg);
        for (const auto& l : inst.pcs) {
            REQUIRE(l.is_outlier);
            ++total_outliers;
            if (!angular_inlier_test(inst.gt, inst.rig, l.pc, 0.1)) ++failing;
        }
    }
    CHECK(total_outliers == 5000);
    CHECK(failing >= static_cast<int>(0.998 * total_outliers));

    SUBCASE("ratio produces the expected label count") {
        cfg.seed = 5;
        cfg.outlier_ratio = 0.3;
        const SyntheticInstance inst = make_two_camera_rig(cfg);
        int n = 0;
        for (const auto& l : inst.pcs) n += l.is_outlier ? 1 : 0;
        CHECK(n == 30);
    }
}

TEST_CASE("stability experiment smoke run") {
    SceneConfig cfg;
    cfg.scenario = Scenario::TwoCameraRig;
    cfg.match_case = CaseType::Intra;
    cfg.seed = 31;
    const StabilityStats stats =
        run_stability_experiment(SolverKind::Intra48, cfg, 40, SolverConfig{}, 2);
    CHECK(stats.trials == 40);
    CHECK(stats.failures <= 2);
    CHECK(stats.p2 > 0.9);
    std::vector<double> rot = stats.log10_rot_err;
    std::sort(rot.begin(), rot.end());
    CHECK(rot[rot.size() / 2] < -6.0); // median well below the target

    SUBCASE("deterministic across thread counts") {
        const StabilityStats again =
            run_stability_experiment(SolverKind::Intra48, cfg, 40, SolverConfig{}, 1);
        REQUIRE(again.log10_rot_err.size() == stats.log10_rot_err.size());
        for (size_t k = 0; k < stats.log10_rot_err.size(); ++k)
            CHECK(again.log10_rot_err[k] == stats.log10_rot_err[k]);
    }
}
