#pragma once

#include "rigpose/config_enum.hpp"
#include "rigpose/core.hpp"
#include "rigpose/ransac.hpp"

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace rigpose {

/// On-disk problem document: rig extrinsics, correspondences with 0-based
/// camera indices, and an optional ground-truth pose.
struct ProblemFile {
    std::vector<CameraExtrinsic> rig;
    std::vector<RayCorrespondence> pcs;
    std::optional<RigPose> ground_truth;
};

nlohmann::json problem_to_json(const ProblemFile& pf);
ProblemFile problem_from_json(const nlohmann::json& j); // throws InvalidProblem

ProblemFile read_problem(const std::string& path);
void write_problem(const std::string& path, const ProblemFile& pf);

nlohmann::json pose_to_json(const RigPose& pose);
RigPose pose_from_json(const nlohmann::json& j);

nlohmann::json poses_to_json(const std::vector<RigPose>& poses,
                             const std::vector<double>& residuals = {});

nlohmann::json ransac_result_to_json(const RansacResult& result);

nlohmann::json graphs_to_json(const std::vector<DirectedMultigraph>& graphs);

void write_json(const std::string& path, const nlohmann::json& j);

} // namespace rigpose
