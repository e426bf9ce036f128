#pragma once

#include "rigpose/core.hpp"

#include <utility>

namespace rigpose {

Eigen::Matrix3d skew(const Eigen::Vector3d& v);

bool is_rotation(const Eigen::Matrix3d& R, double tol = 1e-12);

/// Rotation from a Cayley vector q, i.e. the homogeneous quaternion
/// [1, qx, qy, qz]. Total on R^3; 180 degree rotations are unreachable.
Eigen::Matrix3d cayley_to_rotation(const Eigen::Vector3d& q);

/// Rotation from a unit quaternion (w, x, y, z). Throws NotNormalized if
/// the norm deviates from 1 by more than 1e-9.
Eigen::Matrix3d quat_to_rotation(const Eigen::Vector4d& q);

/// Inverse of cayley_to_rotation. Throws DegenerateRotation for rotations
/// at (or numerically at) 180 degrees, where trace(R) = -1.
Eigen::Vector3d rotation_to_cayley(const Eigen::Matrix3d& R);

/// Relative pose from camera i in view 1 to camera ip in view 2:
///   R_iip = Qip^T R Qi,  t_iip = Qip^T (R si + t - sip).
std::pair<Eigen::Matrix3d, Eigen::Vector3d>
compose_camera_pair(const RigPose& pose, const CameraExtrinsic& cam_i,
                    const CameraExtrinsic& cam_ip);

/// Essential matrix of a camera pair inside the rig:
///   E = Qip^T (R [si]x + [t - sip]x R) Qi,
/// equal to [t_iip]x R_iip from compose_camera_pair.
Eigen::Matrix3d essential_matrix(const RigPose& pose,
                                 const CameraExtrinsic& cam_i,
                                 const CameraExtrinsic& cam_ip);

/// Epipolar residual xp^T E x. Bilinear in the (unnormalized) bearings.
double epipolar_residual(const Eigen::Matrix3d& E, const RayCorrespondence& pc);

/// Angular rotation error in degrees: acos((trace(R_gt R^T) - 1) / 2).
double rotation_error_deg(const Eigen::Matrix3d& R_gt, const Eigen::Matrix3d& R);

/// Scale-aware translation error: 2 |t_gt - t| / (|t_gt| + |t|).
double translation_error(const Eigen::Vector3d& t_gt, const Eigen::Vector3d& t);

/// Translation direction error in degrees. Throws ZeroVector on zero input.
double translation_dir_error_deg(const Eigen::Vector3d& t_gt,
                                 const Eigen::Vector3d& t);

} // namespace rigpose
