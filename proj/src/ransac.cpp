#include "rigpose/ransac.hpp"

#include "rigpose/geometry.hpp"
#include "rigpose/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace rigpose {

namespace {

constexpr long long kIterCap = 1000000000LL;

// Midpoint of the common perpendicular of two rays (p1=0, d1) and (p2, d2).
// Returns false when the rays are numerically parallel.
bool midpoint_triangulate(const Eigen::Vector3d& d1, const Eigen::Vector3d& p2,
                          const Eigen::Vector3d& d2, Eigen::Vector3d* X) {
    const double b = d1.dot(d2);
    const double denom = 1.0 - b * b;
    if (denom < 1e-12)
        return false;
    const double e = d1.dot(p2), f = d2.dot(p2);
    const double l1 = (e - b * f) / denom;
    const double l2 = (b * e - f) / denom;
    *X = 0.5 * (l1 * d1 + p2 + l2 * d2);
    return true;
}

struct Strata {
    // (i, ip) -> member indices; only pairs eligible for the solver kind.
    std::vector<std::vector<int>> groups;
};

Strata collect_strata(const std::vector<RayCorrespondence>& pcs, SolverKind kind) {
    std::map<std::pair<int, int>, std::vector<int>> buckets;
    for (size_t k = 0; k < pcs.size(); ++k)
        buckets[{pcs[k].i, pcs[k].ip}].push_back(static_cast<int>(k));
    Strata strata;
    const bool want_intra = kind == SolverKind::Intra48;
    for (auto& [pair, members] : buckets) {
        if (members.size() < 3) continue;
        if ((pair.first == pair.second) != want_intra) continue;
        strata.groups.push_back(std::move(members));
    }
    return strata;
}

void sample_without_replacement(const std::vector<int>& pool, int n, Rng& rng,
                                std::vector<int>* out) {
    std::vector<int> local = pool;
    for (int k = 0; k < n; ++k) {
        const int j = k + rng.uniform_int(static_cast<int>(local.size()) - k);
        std::swap(local[k], local[j]);
        out->push_back(local[k]);
    }
}

// Draw a sample satisfying the solver's structural precondition: 3 + 3 from
// two distinct eligible strata for the two-bundle solvers, 6 distinct
// correspondences otherwise.
bool draw_sample(const std::vector<RayCorrespondence>& pcs, SolverKind kind,
                 const Strata& strata, Rng& rng, std::vector<RayCorrespondence>* sample) {
    sample->clear();
    std::vector<int> idx;
    if (kind == SolverKind::Generic64) {
        std::vector<int> pool(pcs.size());
        for (size_t k = 0; k < pcs.size(); ++k) pool[k] = static_cast<int>(k);
        sample_without_replacement(pool, 6, rng, &idx);
    } else {
        if (strata.groups.size() < 2)
            return false;
        const int a = rng.uniform_int(static_cast<int>(strata.groups.size()));
        int b = rng.uniform_int(static_cast<int>(strata.groups.size()) - 1);
        if (b >= a) ++b;
        sample_without_replacement(strata.groups[a], 3, rng, &idx);
        sample_without_replacement(strata.groups[b], 3, rng, &idx);
    }
    for (int k : idx) sample->push_back(pcs[k]);
    return kind_accepts(kind, *sample);
}

} // namespace

AngularError angular_reprojection_error(const RigPose& pose,
                                        const std::vector<CameraExtrinsic>& rig,
                                        const RayCorrespondence& pc, bool sum_error) {
    AngularError out;
    const auto [R, t] = compose_camera_pair(pose, rig[pc.i], rig[pc.ip]);
    const Eigen::Vector3d f1 = pc.x.normalized();
    const Eigen::Vector3d f2 = pc.xp.normalized();
    // Ray 2 expressed in the view-1 camera frame: origin -R^T t, direction R^T f2.
    const Eigen::Vector3d p2 = -R.transpose() * t;
    const Eigen::Vector3d d2 = R.transpose() * f2;
    Eigen::Vector3d X;
    if (!midpoint_triangulate(f1, p2, d2, &X)) {
        out.degenerate = true;
        out.error = std::numeric_limits<double>::infinity();
        return out;
    }
    const Eigen::Vector3d X2 = R * X + t;
    if (X.norm() < 1e-12 || X2.norm() < 1e-12) {
        out.degenerate = true;
        out.error = std::numeric_limits<double>::infinity();
        return out;
    }
    const double e1 = 1.0 - X.normalized().dot(f1);
    const double e2 = 1.0 - X2.normalized().dot(f2);
    out.error = sum_error ? e1 + e2 : std::max(e1, e2);
    return out;
}

bool angular_inlier_test(const RigPose& pose, const std::vector<CameraExtrinsic>& rig,
                         const RayCorrespondence& pc, double threshold_deg, double* error_out,
                         bool sum_error) {
    const AngularError err = angular_reprojection_error(pose, rig, pc, sum_error);
    if (error_out)
        *error_out = err.error;
    if (err.degenerate)
        return false;
    const double cutoff = 1.0 - std::cos(threshold_deg * M_PI / 180.0);
    return err.error < cutoff;
}

SolverKind auto_select_pool(const std::vector<RayCorrespondence>& pcs) {
    if (collect_strata(pcs, SolverKind::Intra48).groups.size() >= 2)
        return SolverKind::Intra48;
    if (collect_strata(pcs, SolverKind::Inter56).groups.size() >= 2)
        return SolverKind::Inter56;
    return SolverKind::Generic64;
}

long long ransac_iterations(double p, int s, double eps) {
    return ransac_iterations_stable(p, s, eps, 1.0);
}

long long ransac_iterations_stable(double p, int s, double eps, double p2) {
    const double good = std::pow(p2 * (1.0 - eps), s);
    if (good >= 1.0)
        return 1;
    if (good <= 0.0)
        return kIterCap;
    const double n = std::log(1.0 - p) / std::log(1.0 - good);
    if (!(n < static_cast<double>(kIterCap)))
        return kIterCap;
    return static_cast<long long>(std::ceil(n));
}

RansacResult run_ransac(const std::vector<RayCorrespondence>& pcs,
                        const std::vector<CameraExtrinsic>& rig, SolverKind kind,
                        const RansacConfig& cfg, const SolverConfig& solver_cfg) {
    if (cfg.confidence <= 0.0 || cfg.confidence >= 1.0)
        throw InvalidProblem("confidence must be in (0, 1)");
    if (cfg.threshold_deg <= 0.0)
        throw InvalidProblem("threshold must be positive");
    if (static_cast<int>(pcs.size()) < cfg.sample_size)
        throw InvalidProblem("not enough correspondences for a minimal sample");

    const Strata strata = collect_strata(pcs, kind);
    if (kind != SolverKind::Generic64 && strata.groups.size() < 2)
        throw NoModelFound("fewer than two eligible ray-bundle strata for " + to_string(kind));
    const int n = static_cast<int>(pcs.size());
    Rng master(cfg.seed);

    RansacResult best;
    best.inlier_mask.assign(n, 0);
    bool found = false;
    long long adaptive = cfg.max_iterations;
    int iter = 0;
    for (; iter < cfg.max_iterations && iter < adaptive; ++iter) {
        Rng rng = master.fork(static_cast<uint64_t>(iter));
        std::vector<RayCorrespondence> sample;
        if (!draw_sample(pcs, kind, strata, rng, &sample))
            continue;
        std::vector<RigPose> poses;
        try {
            poses = solve(sample, rig, kind, solver_cfg);
        } catch (const Error&) {
            continue;
        }
        for (const auto& pose : poses) {
            int count = 0;
            for (const auto& pc : pcs)
                if (angular_inlier_test(pose, rig, pc, cfg.threshold_deg, nullptr, cfg.sum_error))
                    ++count;
            if (count > best.inlier_count) {
                best.pose = pose;
                best.inlier_count = count;
                found = true;
                // Outlier ratio re-estimated from the current best model.
                const double eps = 1.0 - static_cast<double>(count) / n;
                adaptive = ransac_iterations(cfg.confidence, cfg.sample_size, eps);
            }
        }
    }
    if (!found)
        throw NoModelFound("no sample produced a model");
    best.iterations = iter;
    best.outlier_ratio = 1.0 - static_cast<double>(best.inlier_count) / n;
    for (int k = 0; k < n; ++k)
        best.inlier_mask[k] =
            angular_inlier_test(best.pose, rig, pcs[k], cfg.threshold_deg, nullptr, cfg.sum_error)
                ? 1
                : 0;
    return best;
}

} // namespace rigpose
