#pragma once

#include <Eigen/Core>
#include <stdexcept>
#include <string>
#include <vector>

namespace rigpose {

/// Rigid transform of the multi-camera reference between two views.
/// Maps view-1 reference coordinates to view-2 reference coordinates:
/// X2 = R * X1 + t.
struct RigPose {
    Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
    Eigen::Vector3d t = Eigen::Vector3d::Zero();
};

/// Pose of a single perspective camera within the rig: X_rig = Q * X_cam + s.
struct CameraExtrinsic {
    Eigen::Matrix3d Q = Eigen::Matrix3d::Identity();
    Eigen::Vector3d s = Eigen::Vector3d::Zero();
    int id = 0;
};

/// One point correspondence: bearing x observed by camera i in view 1,
/// bearing xp observed by camera ip in view 2. Bearings are kept at the
/// scale they were given (homogeneous image-plane or unit vectors).
struct RayCorrespondence {
    Eigen::Vector3d x = Eigen::Vector3d::UnitZ();
    Eigen::Vector3d xp = Eigen::Vector3d::UnitZ();
    int i = 0;
    int ip = 0;
};

class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

#define RIGPOSE_DEFINE_ERROR(NAME)                                            \
    class NAME : public Error {                                               \
      public:                                                                 \
        using Error::Error;                                                   \
    }

RIGPOSE_DEFINE_ERROR(NotNormalized);
RIGPOSE_DEFINE_ERROR(DegenerateRotation);
RIGPOSE_DEFINE_ERROR(ZeroVector);
RIGPOSE_DEFINE_ERROR(NotSquare);
RIGPOSE_DEFINE_ERROR(NotDivisible);
RIGPOSE_DEFINE_ERROR(InvalidProblem);
RIGPOSE_DEFINE_ERROR(ConfigurationMismatch);
RIGPOSE_DEFINE_ERROR(SolveFailure);
RIGPOSE_DEFINE_ERROR(TranslationAtInfinity);
RIGPOSE_DEFINE_ERROR(NoModelFound);

#undef RIGPOSE_DEFINE_ERROR

} // namespace rigpose
