#include "rigpose/minimal_solvers.hpp"

#include "rigpose/equations.hpp"

#include <map>

namespace rigpose {

namespace {

std::vector<int> pair_multiplicities(const std::vector<RayCorrespondence>& pcs) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& pc : pcs) ++count[{pc.i, pc.ip}];
    std::vector<int> mult;
    mult.reserve(count.size());
    for (const auto& [pair, n] : count) mult.push_back(n);
    return mult;
}

struct BundleShape {
    int inter_triples = 0; // groups of >= 3 with i != ip
    int intra_triples = 0; // groups of >= 3 with i == ip
};

BundleShape bundle_shape(const std::vector<RayCorrespondence>& pcs) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& pc : pcs) ++count[{pc.i, pc.ip}];
    BundleShape shape;
    for (const auto& [pair, n] : count) {
        if (n < 3) continue;
        if (pair.first == pair.second)
            ++shape.intra_triples;
        else
            ++shape.inter_triples;
    }
    return shape;
}

} // namespace

std::string to_string(SolverKind k) {
    switch (k) {
    case SolverKind::Generic64: return "generic";
    case SolverKind::Inter56: return "inter56";
    case SolverKind::Inter48: return "inter48";
    case SolverKind::Intra48: return "intra";
    }
    return "?";
}

MatchType classify_configuration(const std::vector<RayCorrespondence>& pcs) {
    if (pcs.size() != 6)
        throw InvalidProblem("classify_configuration: expected 6 correspondences");
    return match_type_from_multiplicities(pair_multiplicities(pcs));
}

bool kind_accepts(SolverKind kind, const std::vector<RayCorrespondence>& pcs) {
    const MatchType type = classify_configuration(pcs);
    if (type == MatchType::AllSame || type == MatchType::MaxFive)
        return false;
    if (kind == SolverKind::Generic64)
        return true;
    if (type != MatchType::TwoTriples)
        return false;
    const BundleShape shape = bundle_shape(pcs);
    if (kind == SolverKind::Intra48)
        return shape.intra_triples == 2;
    return shape.inter_triples == 2; // Inter56 / Inter48
}

SolverKind auto_select(const std::vector<RayCorrespondence>& pcs) {
    const BundleShape shape = bundle_shape(pcs);
    if (classify_configuration(pcs) == MatchType::TwoTriples) {
        if (shape.intra_triples == 2) return SolverKind::Intra48;
        if (shape.inter_triples == 2) return SolverKind::Inter56;
    }
    return SolverKind::Generic64;
}

SolverConfig tuned_config(SolverKind kind, SolverConfig cfg) {
    switch (kind) {
    case SolverKind::Generic64:
        cfg.expansion_degree = 8;
        cfg.saturation_rounds = 0;
        cfg.expected_solutions = 64;
        break;
    case SolverKind::Inter56:
        // e1 alone carries a curve at infinity; saturate it away.
        cfg.expansion_degree = 7;
        cfg.saturation_rounds = 1;
        cfg.expected_solutions = 56;
        break;
    case SolverKind::Inter48:
    case SolverKind::Intra48:
        cfg.expansion_degree = 8;
        cfg.saturation_rounds = 0;
        cfg.expected_solutions = 48;
        break;
    }
    return cfg;
}

std::vector<RigPose> solve(const std::vector<RayCorrespondence>& pcs,
                           const std::vector<CameraExtrinsic>& rig, SolverKind kind,
                           SolverConfig cfg) {
    if (!kind_accepts(kind, pcs))
        throw ConfigurationMismatch("configuration " + to_string(classify_configuration(pcs)) +
                                    " does not fit solver " + to_string(kind));
    SixPointProblem problem{rig, pcs, Parametrization::Cayley};
    const EquationSystem sys = build_equations(problem);
    cfg = tuned_config(kind, cfg);
    SolutionSet sols;
    if (kind == SolverKind::Generic64 || kind == SolverKind::Inter56) {
        if (kind == SolverKind::Generic64 && !sys.e2.empty() &&
            classify_configuration(pcs) != MatchType::NoTriple) {
            // Routed bundle configurations: solution counts differ from 64
            // and are not checked against the expansion corank.
            cfg.expected_solutions = 0;
            cfg.saturation_rounds = 1;
        }
        sols = solve_polys(sys.e1, cfg);
    } else {
        sols = solve_system(sys, cfg);
    }
    return assemble_poses(sys, sols);
}

} // namespace rigpose
