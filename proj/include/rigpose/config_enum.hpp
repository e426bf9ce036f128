#pragma once

#include "rigpose/match_type.hpp"

#include <map>
#include <utility>
#include <vector>

namespace rigpose {

/// Directed multigraph encoding a correspondence configuration: vertex u is
/// a camera, an edge (u, v) a correspondence seen by camera u in view 1 and
/// camera v in view 2. Loops and repeated edges are allowed; vertex labels
/// are 1-based and contiguous in canonical storage.
struct DirectedMultigraph {
    std::vector<std::pair<int, int>> edges;

    int vertex_count() const;
    DirectedMultigraph reversed() const;

    bool operator==(const DirectedMultigraph& o) const { return edges == o.edges; }
};

/// Canonical representative of the equivalence class of g under vertex
/// relabeling and global edge reversal: the lexicographically smallest
/// sorted edge list over both orientations.
DirectedMultigraph canonical_form(const DirectedMultigraph& g);

/// True iff the graphs are isomorphic as directed multigraphs, or become
/// isomorphic after reversing every edge of one of them.
bool graphs_equivalent(const DirectedMultigraph& g, const DirectedMultigraph& h);

/// All distinct configurations with n correspondences, generated by
/// recursive edge extension and deduplicated up to equivalence.
std::vector<DirectedMultigraph> enumerate_configs(int n);

std::vector<int> edge_multiplicities(const DirectedMultigraph& g);

MatchType classify_match_type(const DirectedMultigraph& g);

/// Histogram: number of graphs per vertex (camera) count.
std::map<int, int> count_by_cameras(const std::vector<DirectedMultigraph>& graphs);

} // namespace rigpose
