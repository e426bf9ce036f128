#include "rigpose/synthetic.hpp"

#include "rigpose/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <thread>

namespace rigpose {

namespace {

struct Plane {
    Eigen::Vector3d center;
    Eigen::Vector3d e1, e2; // orthonormal in-plane basis
};

Plane random_plane(const SceneConfig& cfg, Rng& rng) {
    Plane p;
    p.center = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(10.0, 20.0)};
    const Eigen::Vector3d n = rng.unit_vector();
    p.e1 = n.cross(std::abs(n.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX())
               .normalized();
    p.e2 = n.cross(p.e1);
    (void)cfg;
    return p;
}

Eigen::Vector3d point_on_plane(const Plane& p, double half, Rng& rng) {
    return p.center + rng.uniform(-half, half) * p.e1 + rng.uniform(-half, half) * p.e2;
}

Eigen::Vector3d point_on_ground(const SceneConfig& cfg, Rng& rng) {
    return {rng.uniform(-5.0, 5.0), cfg.ground_height_m, rng.uniform(4.0, 20.0)};
}

// Projection test for the pinhole rig; fills the exact normalized-plane
// bearing when the point lands inside the image.
bool project_pinhole(const SceneConfig& cfg, const CameraExtrinsic& cam,
                     const Eigen::Vector3d& X, Eigen::Vector3d* bearing) {
    const Eigen::Vector3d Xc = cam.Q.transpose() * (X - cam.s);
    if (Xc.z() < 0.5)
        return false;
    const double u = cfg.focal_px * Xc.x() / Xc.z() + cfg.image_w / 2.0;
    const double v = cfg.focal_px * Xc.y() / Xc.z() + cfg.image_h / 2.0;
    if (u < 0.0 || u >= cfg.image_w || v < 0.0 || v >= cfg.image_h)
        return false;
    *bearing = {Xc.x() / Xc.z(), Xc.y() / Xc.z(), 1.0};
    return true;
}

std::vector<std::pair<int, int>> pair_cycle(const SceneConfig& cfg, int n_cams) {
    switch (cfg.match_case) {
    case CaseType::Intra:
        return {{0, 0}, {1, 1}};
    case CaseType::Inter:
        return {{0, 1}, {1, 0}};
    case CaseType::Generic: {
        if (n_cams == 2)
            return {{0, 0}, {1, 1}, {0, 1}, {1, 0}};
        std::vector<std::pair<int, int>> pairs;
        for (int j = 0; 2 * j + 1 < n_cams; ++j) pairs.push_back({2 * j, 2 * j + 1});
        return pairs;
    }
    }
    return {};
}

void apply_noise_and_outliers(SyntheticInstance& inst, const SceneConfig& cfg, Rng& rng) {
    if (cfg.noise_px > 0.0) {
        if (inst.pinhole)
            add_pixel_noise(inst, cfg.noise_px, rng);
        else
            add_bearing_noise(inst, cfg.noise_px, rng);
    }
    if (cfg.outlier_ratio > 0.0)
        inject_outliers(inst, cfg.outlier_ratio, rng);
}

} // namespace

std::vector<RayCorrespondence> SyntheticInstance::correspondences() const {
    std::vector<RayCorrespondence> out;
    out.reserve(pcs.size());
    for (const auto& l : pcs) out.push_back(l.pc);
    return out;
}

SyntheticInstance make_two_camera_rig(const SceneConfig& cfg) {
    Rng rng(cfg.seed);
    SyntheticInstance inst;
    inst.pinhole = true;
    inst.focal_px = cfg.focal_px;
    inst.image_w = cfg.image_w;
    inst.image_h = cfg.image_h;

    for (int c = 0; c < 2; ++c) {
        CameraExtrinsic cam;
        cam.id = c;
        cam.Q = rng.rotation_per_axis(cfg.cam_perturb_deg);
        cam.s = {(c == 0 ? -0.5 : 0.5) * cfg.baseline_m, 0.0, 0.0};
        inst.rig.push_back(cam);
    }

    const Eigen::Matrix3d Rm = rng.rotation_per_axis(cfg.view_rot_deg);
    Eigen::Vector3d dir;
    switch (cfg.motion) {
    case MotionType::Forward: dir = Eigen::Vector3d::UnitZ(); break;
    case MotionType::Sideways: dir = Eigen::Vector3d::UnitX(); break;
    case MotionType::Random: dir = rng.unit_vector(); break;
    }
    const Eigen::Vector3d center = cfg.translation_m * dir;
    inst.gt.R = Rm.transpose();
    inst.gt.t = -Rm.transpose() * center;

    std::vector<Plane> planes;
    planes.reserve(cfg.plane_count);
    for (int k = 0; k < cfg.plane_count; ++k) planes.push_back(random_plane(cfg, rng));

    const auto pairs = pair_cycle(cfg, 2);
    const int n_ground = cfg.pc_count / 2;
    for (int k = 0; k < cfg.pc_count; ++k) {
        const auto [i, ip] = pairs[k % pairs.size()];
        const bool from_ground = k < n_ground;
        int plane_idx = cfg.plane_count > 0 ? (k - n_ground) % cfg.plane_count : 0;
        LabeledPC lpc;
        lpc.pc.i = i;
        lpc.pc.ip = ip;
        for (int attempt = 0;; ++attempt) {
            const Eigen::Vector3d X = from_ground
                                          ? point_on_ground(cfg, rng)
                                          : point_on_plane(planes[plane_idx], cfg.patch_half_m, rng);
            Eigen::Vector3d b1, b2;
            if (!project_pinhole(cfg, inst.rig[i], X, &b1)) {
            } else {
                const Eigen::Vector3d X2 = inst.gt.R * X + inst.gt.t;
                if (project_pinhole(cfg, inst.rig[ip], X2, &b2)) {
                    lpc.pc.x = b1;
                    lpc.pc.xp = b2;
                    break;
                }
            }
            if (!from_ground && attempt > 0 && attempt % 200 == 0)
                planes[plane_idx] = random_plane(cfg, rng); // patch invisible, respawn it
            if (attempt > 20000)
                throw SolveFailure("two_camera_rig: could not place a visible point");
        }
        inst.pcs.push_back(lpc);
    }

    apply_noise_and_outliers(inst, cfg, rng);
    return inst;
}

SyntheticInstance make_generalized_camera(const SceneConfig& cfg) {
    Rng rng(cfg.seed);
    SyntheticInstance inst;
    inst.pinhole = false;
    inst.focal_px = cfg.focal_px;

    const int n_cams = cfg.match_case == CaseType::Generic ? cfg.omni_camera_count : 2;
    for (int c = 0; c < n_cams; ++c) {
        CameraExtrinsic cam;
        cam.id = c;
        cam.Q = rng.rotation();
        cam.s = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
        inst.rig.push_back(cam);
    }

    // Rotation magnitude stays inside the Cayley search region.
    inst.gt.R = rng.rotation_max_angle(cfg.max_rotation_deg);
    inst.gt.t = rng.unit_vector() * rng.uniform(0.5, cfg.max_translation_m);

    const auto pairs = pair_cycle(cfg, n_cams);
    for (int k = 0; k < cfg.pc_count; ++k) {
        const auto [i, ip] = pairs[k % pairs.size()];
        LabeledPC lpc;
        lpc.pc.i = i;
        lpc.pc.ip = ip;
        for (int attempt = 0;; ++attempt) {
            const Eigen::Vector3d X = {rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0),
                                       rng.uniform(-5.0, 5.0)};
            const Eigen::Vector3d r1 = X - inst.rig[i].s;
            const Eigen::Vector3d X2 = inst.gt.R * X + inst.gt.t;
            const Eigen::Vector3d r2 = X2 - inst.rig[ip].s;
            if (r1.norm() > 0.5 && r2.norm() > 0.5) {
                lpc.pc.x = (inst.rig[i].Q.transpose() * r1).normalized();
                lpc.pc.xp = (inst.rig[ip].Q.transpose() * r2).normalized();
                break;
            }
            if (attempt > 20000)
                throw SolveFailure("generalized_camera: could not place a point");
        }
        inst.pcs.push_back(lpc);
    }

    apply_noise_and_outliers(inst, cfg, rng);
    return inst;
}

SyntheticInstance make_instance(const SceneConfig& cfg) {
    return cfg.scenario == Scenario::TwoCameraRig ? make_two_camera_rig(cfg)
                                                  : make_generalized_camera(cfg);
}

void add_pixel_noise(SyntheticInstance& instance, double sigma_px, Rng& rng) {
    if (sigma_px <= 0.0)
        return;
    const double f = instance.focal_px;
    auto perturb = [&](Eigen::Vector3d& b) {
        if (b.z() <= 0.0)
            return; // not an image-plane observation
        const double u = f * b.x() / b.z() + rng.normal() * sigma_px;
        const double v = f * b.y() / b.z() + rng.normal() * sigma_px;
        b = {u / f, v / f, 1.0};
    };
    for (auto& l : instance.pcs) {
        perturb(l.pc.x);
        perturb(l.pc.xp);
    }
}

void add_bearing_noise(SyntheticInstance& instance, double sigma_px, Rng& rng) {
    if (sigma_px <= 0.0)
        return;
    const double sigma_rad = sigma_px / instance.focal_px;
    auto perturb = [&](Eigen::Vector3d& b) {
        const Eigen::Vector3d n = b.normalized();
        const Eigen::Vector3d e1 =
            n.cross(std::abs(n.z()) < 0.9 ? Eigen::Vector3d::UnitZ() : Eigen::Vector3d::UnitX())
                .normalized();
        const Eigen::Vector3d e2 = n.cross(e1);
        b = (n + sigma_rad * (rng.normal() * e1 + rng.normal() * e2)).normalized();
    };
    for (auto& l : instance.pcs) {
        perturb(l.pc.x);
        perturb(l.pc.xp);
    }
}

void inject_outliers(SyntheticInstance& instance, double ratio, Rng& rng) {
    const int n = static_cast<int>(instance.pcs.size());
    const int n_out = static_cast<int>(std::lround(ratio * n));
    std::vector<int> idx(n);
    for (int k = 0; k < n; ++k) idx[k] = k;
    for (int k = 0; k < n_out; ++k) {
        const int j = k + rng.uniform_int(n - k);
        std::swap(idx[k], idx[j]);
        instance.pcs[idx[k]].pc.xp = rng.unit_vector();
        instance.pcs[idx[k]].is_outlier = true;
    }
}

std::vector<RayCorrespondence> select_minimal_sample(const SyntheticInstance& instance,
                                                     SolverKind kind, Rng& rng) {
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (size_t k = 0; k < instance.pcs.size(); ++k)
        buckets[{instance.pcs[k].pc.i, instance.pcs[k].pc.ip}].push_back(static_cast<int>(k));

    auto pick = [&](const std::vector<int>& pool, int n, std::vector<int>* out) {
        std::vector<int> local = pool;
        for (int k = 0; k < n; ++k) {
            const int j = k + rng.uniform_int(static_cast<int>(local.size()) - k);
            std::swap(local[k], local[j]);
            out->push_back(local[k]);
        }
    };

    std::vector<int> chosen;
    if (kind == SolverKind::Generic64) {
        std::vector<const std::vector<int>*> groups;
        for (const auto& [pair, members] : buckets) groups.push_back(&members);
        if (groups.size() < 6)
            throw ConfigurationMismatch("generic sample needs six distinct camera pairs");
        std::vector<int> order(groups.size());
        for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
        std::vector<int> sel;
        pick(order, 6, &sel);
        for (int g : sel) pick(*groups[g], 1, &chosen);
    } else {
        const bool want_intra = kind == SolverKind::Intra48;
        std::vector<const std::vector<int>*> strata;
        for (const auto& [pair, members] : buckets)
            if ((pair.first == pair.second) == want_intra && members.size() >= 3)
                strata.push_back(&members);
        if (strata.size() < 2)
            throw ConfigurationMismatch("need two ray-bundle strata for " + to_string(kind));
        std::vector<int> order(strata.size());
        for (size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
        std::vector<int> sel;
        pick(order, 2, &sel);
        pick(*strata[sel[0]], 3, &chosen);
        pick(*strata[sel[1]], 3, &chosen);
    }
    std::vector<RayCorrespondence> sample;
    sample.reserve(6);
    for (int k : chosen) sample.push_back(instance.pcs[k].pc);
    return sample;
}

StabilityStats run_stability_experiment(SolverKind kind, const SceneConfig& cfg, int trials,
                                        const SolverConfig& solver_cfg, int threads) {
    StabilityStats stats;
    stats.trials = trials;
    std::vector<double> er(trials, -1.0), et(trials, -1.0), ed(trials, -1.0);
    std::vector<char> ok(trials, 0);

    Rng master(cfg.seed);
    auto run_range = [&](int lo, int hi) {
        for (int trial = lo; trial < hi; ++trial) {
            SceneConfig c = cfg;
            c.noise_px = 0.0;
            c.outlier_ratio = 0.0;
            c.seed = master.fork(static_cast<uint64_t>(trial)).next_u64();
            try {
                const SyntheticInstance inst = make_instance(c);
                Rng srng = master.fork(static_cast<uint64_t>(trial) ^ 0x5DEECE66Dull);
                const auto sample = select_minimal_sample(inst, kind, srng);
                const auto poses = solve(sample, inst.rig, kind, solver_cfg);
                double best_r = -1.0, best_t = 0.0, best_d = 0.0;
                for (const auto& pose : poses) {
                    const double r = rotation_error_deg(inst.gt.R, pose.R);
                    if (best_r < 0.0 || r < best_r) {
                        best_r = r;
                        best_t = translation_error(inst.gt.t, pose.t);
                        best_d = pose.t.norm() > 0.0
                                     ? translation_dir_error_deg(inst.gt.t, pose.t)
                                     : 180.0;
                    }
                }
                if (best_r >= 0.0) {
                    er[trial] = best_r;
                    et[trial] = best_t;
                    ed[trial] = best_d;
                    ok[trial] = 1;
                }
            } catch (const Error&) {
            }
        }
    };

    threads = std::max(1, threads);
    if (threads == 1) {
        run_range(0, trials);
    } else {
        std::vector<std::thread> pool;
        const int chunk = (trials + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int lo = t * chunk, hi = std::min(trials, lo + chunk);
            if (lo < hi) pool.emplace_back(run_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    int accurate = 0;
    auto log_clamped = [](double v) { return std::log10(std::max(v, 1e-18)); };
    for (int trial = 0; trial < trials; ++trial) {
        if (!ok[trial]) {
            ++stats.failures;
            continue;
        }
        stats.trial_ids.push_back(trial);
        stats.log10_rot_err.push_back(log_clamped(er[trial]));
        stats.log10_trans_err.push_back(log_clamped(et[trial]));
        stats.log10_tdir_err.push_back(log_clamped(ed[trial]));
        if (er[trial] < 1e-3 && et[trial] < 1e-3)
            ++accurate;
    }
    stats.p2 = trials > 0 ? static_cast<double>(accurate) / trials : 0.0;
    return stats;
}

} // namespace rigpose
