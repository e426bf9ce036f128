#pragma once

#include "rigpose/core.hpp"
#include "rigpose/match_type.hpp"
#include "rigpose/solver.hpp"

#include <string>
#include <vector>

namespace rigpose {

/// Solver frontends. Generic64 solves e1 alone (64 solutions over C).
/// Inter56 solves e1 alone on a two-bundle inter configuration (56),
/// Inter48 and Intra48 solve e1 union e2 (48 each).
enum class SolverKind { Generic64, Inter56, Inter48, Intra48 };

std::string to_string(SolverKind k);

/// Match type of six correspondences from the multiset of (i, ip)
/// multiplicities. Throws InvalidProblem unless exactly six are given.
MatchType classify_configuration(const std::vector<RayCorrespondence>& pcs);

/// True when `kind` structurally accepts the configuration: inter variants
/// need two bundles of three with i != ip, intra needs two with i == ip,
/// and the generic frontend takes anything except AllSame and MaxFive.
bool kind_accepts(SolverKind kind, const std::vector<RayCorrespondence>& pcs);

/// Preferred solver for a configuration: the specific two-bundle solvers
/// take priority over the generic one.
SolverKind auto_select(const std::vector<RayCorrespondence>& pcs);

/// Solve the minimal problem with the requested frontend. Throws
/// ConfigurationMismatch when the configuration does not fit `kind`.
std::vector<RigPose> solve(const std::vector<RayCorrespondence>& pcs,
                           const std::vector<CameraExtrinsic>& rig, SolverKind kind,
                           SolverConfig cfg = {});

/// Per-kind default expansion settings applied on top of `cfg`.
SolverConfig tuned_config(SolverKind kind, SolverConfig cfg = {});

} // namespace rigpose
