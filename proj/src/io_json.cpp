#include "rigpose/io_json.hpp"

#include <nlohmann/json.hpp>

#include <fstream>

namespace rigpose {

using nlohmann::json;

namespace {

json mat3_to_json(const Eigen::Matrix3d& m) {
    json a = json::array();
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) a.push_back(m(r, c)); // row-major
    return a;
}

Eigen::Matrix3d mat3_from_json(const json& a) {
    if (!a.is_array() || a.size() != 9)
        throw InvalidProblem("expected a 9-element row-major 3x3 matrix");
    Eigen::Matrix3d m;
    for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) m(r, c) = a.at(r * 3 + c).get<double>();
    return m;
}

json vec3_to_json(const Eigen::Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

Eigen::Vector3d vec3_from_json(const json& a) {
    if (!a.is_array() || a.size() != 3)
        throw InvalidProblem("expected a 3-element vector");
    return {a.at(0).get<double>(), a.at(1).get<double>(), a.at(2).get<double>()};
}

} // namespace

json pose_to_json(const RigPose& pose) {
    return json{{"R", mat3_to_json(pose.R)}, {"t", vec3_to_json(pose.t)}};
}

RigPose pose_from_json(const json& j) {
    RigPose pose;
    pose.R = mat3_from_json(j.at("R"));
    pose.t = vec3_from_json(j.at("t"));
    return pose;
}

json problem_to_json(const ProblemFile& pf) {
    json rig = json::array();
    for (const auto& cam : pf.rig)
        rig.push_back(json{{"Q", mat3_to_json(cam.Q)}, {"s", vec3_to_json(cam.s)}});
    json pcs = json::array();
    for (const auto& pc : pf.pcs)
        pcs.push_back(json{{"x", vec3_to_json(pc.x)},
                           {"xp", vec3_to_json(pc.xp)},
                           {"i", pc.i},
                           {"ip", pc.ip}});
    json out{{"rig", rig}, {"correspondences", pcs}};
    if (pf.ground_truth)
        out["ground_truth"] = pose_to_json(*pf.ground_truth);
    return out;
}

ProblemFile problem_from_json(const json& j) {
    ProblemFile pf;
    try {
        for (const auto& cam_j : j.at("rig")) {
            CameraExtrinsic cam;
            cam.Q = mat3_from_json(cam_j.at("Q"));
            cam.s = vec3_from_json(cam_j.at("s"));
            cam.id = static_cast<int>(pf.rig.size());
            pf.rig.push_back(cam);
        }
        for (const auto& pc_j : j.at("correspondences")) {
            RayCorrespondence pc;
            pc.x = vec3_from_json(pc_j.at("x"));
            pc.xp = vec3_from_json(pc_j.at("xp"));
            pc.i = pc_j.at("i").get<int>();
            pc.ip = pc_j.at("ip").get<int>();
            pf.pcs.push_back(pc);
        }
        if (j.contains("ground_truth"))
            pf.ground_truth = pose_from_json(j.at("ground_truth"));
    } catch (const json::exception& e) {
        throw InvalidProblem(std::string("malformed problem document: ") + e.what());
    }
    const int n = static_cast<int>(pf.rig.size());
    for (const auto& pc : pf.pcs)
        if (pc.i < 0 || pc.i >= n || pc.ip < 0 || pc.ip >= n)
            throw InvalidProblem("camera index out of range (indices are 0-based)");
    return pf;
}

ProblemFile read_problem(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidProblem("cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw InvalidProblem(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return problem_from_json(j);
}

void write_problem(const std::string& path, const ProblemFile& pf) {
    write_json(path, problem_to_json(pf));
}

json poses_to_json(const std::vector<RigPose>& poses, const std::vector<double>& residuals) {
    json arr = json::array();
    for (size_t k = 0; k < poses.size(); ++k) {
        json p = pose_to_json(poses[k]);
        if (k < residuals.size())
            p["residual"] = residuals[k];
        arr.push_back(p);
    }
    return json{{"poses", arr}, {"count", poses.size()}};
}

json ransac_result_to_json(const RansacResult& result) {
    json mask = json::array();
    for (char c : result.inlier_mask) mask.push_back(c != 0);
    return json{{"pose", pose_to_json(result.pose)},
                {"inlier_mask", mask},
                {"inlier_count", result.inlier_count},
                {"iterations", result.iterations},
                {"outlier_ratio", result.outlier_ratio}};
}

json graphs_to_json(const std::vector<DirectedMultigraph>& graphs) {
    json arr = json::array();
    std::map<std::string, int> by_type;
    for (const auto& g : graphs) {
        json edges = json::array();
        for (const auto& [u, v] : g.edges) edges.push_back(json::array({u, v}));
        arr.push_back(json{{"edges", edges},
                           {"cameras", g.vertex_count()},
                           {"match_type", to_string(classify_match_type(g))}});
        ++by_type[to_string(classify_match_type(g))];
    }
    json hist = json::object();
    for (const auto& [cams, count] : count_by_cameras(graphs))
        hist[std::to_string(cams)] = count;
    return json{{"total", graphs.size()},
                {"by_cameras", hist},
                {"by_match_type", by_type},
                {"graphs", arr}};
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out)
        throw Error("cannot write " + path);
    out << j.dump(2) << "\n";
}

} // namespace rigpose
