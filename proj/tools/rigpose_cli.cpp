#include "rigpose/io_json.hpp"
#include "rigpose/minimal_solvers.hpp"
#include "rigpose/ransac.hpp"
#include "rigpose/synthetic.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

using namespace rigpose;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNoSolution = 2;

SolverKind parse_kind(const std::string& name, const std::vector<RayCorrespondence>& pcs) {
    if (name == "auto") return auto_select(pcs);
    if (name == "generic") return SolverKind::Generic64;
    if (name == "inter56") return SolverKind::Inter56;
    if (name == "inter48") return SolverKind::Inter48;
    if (name == "intra") return SolverKind::Intra48;
    throw InvalidProblem("unknown solver '" + name + "'");
}

void emit(const json& j, const std::string& out_path) {
    if (out_path.empty())
        std::cout << j.dump(2) << "\n";
    else
        write_json(out_path, j);
}

SceneConfig scene_from_flags(const std::string& scenario, const std::string& match_case,
                             const std::string& motion, double noise, double outliers, int pcs,
                             uint64_t seed) {
    SceneConfig cfg;
    if (scenario == "rig2")
        cfg.scenario = Scenario::TwoCameraRig;
    else if (scenario == "gcam")
        cfg.scenario = Scenario::GeneralizedCamera;
    else
        throw InvalidProblem("unknown scenario '" + scenario + "' (rig2 | gcam)");
    if (match_case == "generic")
        cfg.match_case = CaseType::Generic;
    else if (match_case == "inter")
        cfg.match_case = CaseType::Inter;
    else if (match_case == "intra")
        cfg.match_case = CaseType::Intra;
    else
        throw InvalidProblem("unknown case '" + match_case + "' (generic | inter | intra)");
    if (motion == "forward")
        cfg.motion = MotionType::Forward;
    else if (motion == "sideways")
        cfg.motion = MotionType::Sideways;
    else if (motion == "random")
        cfg.motion = MotionType::Random;
    else
        throw InvalidProblem("unknown motion '" + motion + "' (forward | sideways | random)");
    cfg.noise_px = noise;
    cfg.outlier_ratio = outliers;
    cfg.pc_count = pcs;
    cfg.seed = seed;
    return cfg;
}

SolverKind kind_for_case(CaseType c) {
    switch (c) {
    case CaseType::Generic: return SolverKind::Generic64;
    case CaseType::Inter: return SolverKind::Inter56;
    case CaseType::Intra: return SolverKind::Intra48;
    }
    return SolverKind::Generic64;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Relative pose of a multi-camera system from six ray correspondences"};
    app.require_subcommand(1);

    // ---- solve ----
    auto* solve_cmd = app.add_subcommand("solve", "run a minimal solver on a problem file");
    std::string solve_input, solve_out, solve_solver = "auto";
    solve_cmd->add_option("--input", solve_input, "problem JSON")->required();
    solve_cmd->add_option("--solver", solve_solver, "auto|generic|inter56|inter48|intra");
    solve_cmd->add_option("--out", solve_out, "output JSON (stdout if omitted)");

    // ---- ransac ----
    auto* ransac_cmd = app.add_subcommand("ransac", "robust estimation over a correspondence set");
    std::string ransac_input, ransac_out, ransac_solver = "auto";
    RansacConfig rcfg;
    ransac_cmd->add_option("--input", ransac_input, "problem JSON")->required();
    ransac_cmd->add_option("--solver", ransac_solver, "auto|generic|inter56|inter48|intra");
    ransac_cmd->add_option("--threshold-deg", rcfg.threshold_deg, "angular inlier threshold");
    ransac_cmd->add_option("--confidence", rcfg.confidence, "success probability (< 1)");
    ransac_cmd->add_option("--max-iters", rcfg.max_iterations, "iteration cap");
    ransac_cmd->add_option("--seed", rcfg.seed, "random seed");
    ransac_cmd->add_option("--out", ransac_out, "output JSON (stdout if omitted)");

    // ---- synth ----
    auto* synth_cmd = app.add_subcommand("synth", "generate a synthetic problem");
    std::string sy_scenario = "rig2", sy_case = "intra", sy_motion = "random", sy_out;
    double sy_noise = 0.0, sy_outliers = 0.0;
    int sy_pcs = 100;
    uint64_t sy_seed = 0;
    bool sy_minimal = false;
    synth_cmd->add_option("--scenario", sy_scenario, "rig2 | gcam");
    synth_cmd->add_option("--case", sy_case, "generic | inter | intra");
    synth_cmd->add_option("--motion", sy_motion, "forward | sideways | random");
    synth_cmd->add_option("--noise-px", sy_noise, "pixel noise sigma");
    synth_cmd->add_option("--outlier-ratio", sy_outliers, "fraction of injected outliers");
    synth_cmd->add_option("--pcs", sy_pcs, "number of correspondences");
    synth_cmd->add_option("--seed", sy_seed, "random seed");
    synth_cmd->add_flag("--minimal", sy_minimal, "emit a six-correspondence problem");
    synth_cmd->add_option("--out", sy_out, "output JSON (stdout if omitted)");

    // ---- enum ----
    auto* enum_cmd = app.add_subcommand("enum", "enumerate distinct configurations");
    int en_edges = 6;
    std::string en_out;
    enum_cmd->add_option("--edges", en_edges, "number of correspondences (1..7)");
    enum_cmd->add_option("--out", en_out, "output JSON (stdout if omitted)");

    // ---- stability ----
    auto* stab_cmd = app.add_subcommand("stability", "noise-free minimal-solver stability run");
    std::string st_scenario = "rig2", st_case = "intra", st_solver = "intra", st_out;
    int st_trials = 1000, st_threads = 1;
    uint64_t st_seed = 0;
    stab_cmd->add_option("--scenario", st_scenario, "rig2 | gcam");
    stab_cmd->add_option("--case", st_case, "generic | inter | intra (defaults to solver's)");
    stab_cmd->add_option("--solver", st_solver, "generic|inter56|inter48|intra");
    stab_cmd->add_option("--trials", st_trials, "number of trials");
    stab_cmd->add_option("--seed", st_seed, "random seed");
    stab_cmd->add_option("--threads", st_threads, "worker threads");
    stab_cmd->add_option("--out", st_out, "output CSV (stdout if omitted)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*solve_cmd) {
            const ProblemFile pf = read_problem(solve_input);
            if (pf.pcs.size() != 6) {
                std::cerr << "error: expected 6 correspondences, got " << pf.pcs.size() << "\n";
                return kExitUsage;
            }
            const SolverKind kind = parse_kind(solve_solver, pf.pcs);
            const std::vector<RigPose> poses = solve(pf.pcs, pf.rig, kind);
            emit(poses_to_json(poses), solve_out);
            return poses.empty() ? kExitNoSolution : kExitOk;
        }

        if (*ransac_cmd) {
            const ProblemFile pf = read_problem(ransac_input);
            SolverKind kind;
            if (ransac_solver == "auto")
                kind = auto_select_pool(pf.pcs);
            else
                kind = parse_kind(ransac_solver, pf.pcs);
            if (rcfg.confidence >= 1.0) {
                std::cerr << "error: confidence must be < 1\n";
                return kExitUsage;
            }
            try {
                const RansacResult result = run_ransac(pf.pcs, pf.rig, kind, rcfg);
                emit(ransac_result_to_json(result), ransac_out);
                return kExitOk;
            } catch (const NoModelFound& e) {
                std::cerr << "no model: " << e.what() << "\n";
                return kExitNoSolution;
            }
        }

        if (*synth_cmd) {
            const SceneConfig cfg = scene_from_flags(sy_scenario, sy_case, sy_motion, sy_noise,
                                                     sy_outliers, sy_pcs, sy_seed);
            const SyntheticInstance inst = make_instance(cfg);
            ProblemFile pf;
            pf.rig = inst.rig;
            pf.ground_truth = inst.gt;
            if (sy_minimal) {
                Rng rng = Rng(cfg.seed).fork(0xABCDEF);
                pf.pcs = select_minimal_sample(inst, kind_for_case(cfg.match_case), rng);
            } else {
                pf.pcs = inst.correspondences();
            }
            emit(problem_to_json(pf), sy_out);
            return kExitOk;
        }

        if (*enum_cmd) {
            const auto graphs = enumerate_configs(en_edges);
            emit(graphs_to_json(graphs), en_out);
            return kExitOk;
        }

        if (*stab_cmd) {
            SceneConfig cfg = scene_from_flags(st_scenario, st_case, "random", 0.0, 0.0, 100,
                                               st_seed);
            std::vector<RayCorrespondence> dummy;
            SolverKind kind;
            if (st_solver == "generic") kind = SolverKind::Generic64;
            else if (st_solver == "inter56") kind = SolverKind::Inter56;
            else if (st_solver == "inter48") kind = SolverKind::Inter48;
            else if (st_solver == "intra") kind = SolverKind::Intra48;
            else throw InvalidProblem("unknown solver '" + st_solver + "'");
            if (!stab_cmd->count("--case")) {
                cfg.match_case = kind == SolverKind::Generic64 ? CaseType::Generic
                                 : kind == SolverKind::Intra48 ? CaseType::Intra
                                                               : CaseType::Inter;
            }
            const StabilityStats stats =
                run_stability_experiment(kind, cfg, st_trials, SolverConfig{}, st_threads);
            std::ostringstream csv;
            csv << "trial_id,eps_R_log10,eps_t_log10,eps_tdir_log10\n";
            for (size_t k = 0; k < stats.trial_ids.size(); ++k)
                csv << stats.trial_ids[k] << "," << stats.log10_rot_err[k] << ","
                    << stats.log10_trans_err[k] << "," << stats.log10_tdir_err[k] << "\n";
            if (st_out.empty()) {
                std::cout << csv.str();
            } else {
                std::ofstream out(st_out);
                if (!out)
                    throw Error("cannot write " + st_out);
                out << csv.str();
            }
            std::cerr << "trials " << stats.trials << ", failures " << stats.failures << ", p2 "
                      << stats.p2 << "\n";
            return kExitOk;
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
