#include "rigpose/geometry.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace rigpose {

namespace {
constexpr double kRadToDeg = 180.0 / M_PI;
}

Eigen::Matrix3d skew(const Eigen::Vector3d& v) {
    Eigen::Matrix3d m;
    m << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
    return m;
}

bool is_rotation(const Eigen::Matrix3d& R, double tol) {
    return (R.transpose() * R - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() <= tol &&
           std::abs(R.determinant() - 1.0) <= tol;
}

Eigen::Matrix3d cayley_to_rotation(const Eigen::Vector3d& q) {
    const double x = q.x(), y = q.y(), z = q.z();
    const double s = 1.0 / (x * x + y * y + z * z + 1.0);
    Eigen::Matrix3d R;
    R << 1 + x * x - y * y - z * z, 2 * x * y - 2 * z, 2 * x * z + 2 * y,
         2 * x * y + 2 * z, 1 - x * x + y * y - z * z, 2 * y * z - 2 * x,
         2 * x * z - 2 * y, 2 * y * z + 2 * x, 1 - x * x - y * y + z * z;
    return s * R;
}

Eigen::Matrix3d quat_to_rotation(const Eigen::Vector4d& q) {
    if (std::abs(q.norm() - 1.0) > 1e-9)
        throw NotNormalized("quat_to_rotation: quaternion norm deviates from 1");
    const double w = q(0), x = q(1), y = q(2), z = q(3);
    Eigen::Matrix3d R;
    R << w * w + x * x - y * y - z * z, 2 * x * y - 2 * w * z, 2 * x * z + 2 * w * y,
         2 * x * y + 2 * w * z, w * w - x * x + y * y - z * z, 2 * y * z - 2 * w * x,
         2 * x * z - 2 * w * y, 2 * y * z + 2 * w * x, w * w - x * x - y * y + z * z;
    return R;
}

Eigen::Vector3d rotation_to_cayley(const Eigen::Matrix3d& R) {
    const double denom = 1.0 + R.trace();
    if (denom < 1e-9)
        throw DegenerateRotation("rotation_to_cayley: 180 degree rotation");
    return Eigen::Vector3d(R(2, 1) - R(1, 2), R(0, 2) - R(2, 0), R(1, 0) - R(0, 1)) / denom;
}

std::pair<Eigen::Matrix3d, Eigen::Vector3d>
compose_camera_pair(const RigPose& pose, const CameraExtrinsic& cam_i,
                    const CameraExtrinsic& cam_ip) {
    Eigen::Matrix3d R = cam_ip.Q.transpose() * pose.R * cam_i.Q;
    Eigen::Vector3d t = cam_ip.Q.transpose() * (pose.R * cam_i.s + pose.t - cam_ip.s);
    return {R, t};
}

Eigen::Matrix3d essential_matrix(const RigPose& pose, const CameraExtrinsic& cam_i,
                                 const CameraExtrinsic& cam_ip) {
    return cam_ip.Q.transpose() *
           (pose.R * skew(cam_i.s) + skew(pose.t - cam_ip.s) * pose.R) * cam_i.Q;
}

double epipolar_residual(const Eigen::Matrix3d& E, const RayCorrespondence& pc) {
    return pc.xp.dot(E * pc.x);
}

double rotation_error_deg(const Eigen::Matrix3d& R_gt, const Eigen::Matrix3d& R) {
    const double c = std::clamp(((R_gt * R.transpose()).trace() - 1.0) / 2.0, -1.0, 1.0);
    if (c > 0.99) {
        // acos cannot resolve angles below ~2e-8 rad; evaluate the same
        // angle through |R_gt - R|_F = 2 sqrt(2) sin(theta / 2).
        const double s = std::clamp((R_gt - R).norm() / (2.0 * std::sqrt(2.0)), 0.0, 1.0);
        return 2.0 * std::asin(s) * kRadToDeg;
    }
    return std::acos(c) * kRadToDeg;
}

double translation_error(const Eigen::Vector3d& t_gt, const Eigen::Vector3d& t) {
    const double denom = t_gt.norm() + t.norm();
    if (denom == 0.0)
        return 0.0;
    return 2.0 * (t_gt - t).norm() / denom;
}

double translation_dir_error_deg(const Eigen::Vector3d& t_gt, const Eigen::Vector3d& t) {
    const double ng = t_gt.norm(), n = t.norm();
    if (ng == 0.0 || n == 0.0)
        throw ZeroVector("translation_dir_error_deg: zero-length input");
    // atan2 form of the arccos of the normalized dot product; exact at both
    // ends of the range.
    return std::atan2(t_gt.cross(t).norm(), t_gt.dot(t)) * kRadToDeg;
}

} // namespace rigpose
