#pragma once

#include "rigpose/equations.hpp"
#include "rigpose/geometry.hpp"
#include "rigpose/synthetic.hpp"

namespace rigpose::testing {

struct TestInstance {
    SyntheticInstance instance;
    SixPointProblem problem;
    Eigen::Vector3d q_gt;
};

/// Noise-free minimal six-correspondence instance from the omnidirectional
/// generator (generic: 12 cameras, inter/intra: 2 cameras).
inline TestInstance make_minimal_instance(CaseType match_case, uint64_t seed) {
    SceneConfig cfg;
    cfg.scenario = Scenario::GeneralizedCamera;
    cfg.match_case = match_case;
    cfg.pc_count = 6;
    cfg.seed = seed;
    TestInstance t;
    t.instance = make_generalized_camera(cfg);
    t.problem.rig = t.instance.rig;
    t.problem.pcs = t.instance.correspondences();
    t.q_gt = rotation_to_cayley(t.instance.gt.R);
    return t;
}

} // namespace rigpose::testing
