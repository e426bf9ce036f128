#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "rigpose/config_enum.hpp"
#include "rigpose/core.hpp"
#include "rigpose/random.hpp"

#include <algorithm>

using namespace rigpose;

namespace {

DirectedMultigraph graph(std::vector<std::pair<int, int>> edges) {
    return DirectedMultigraph{std::move(edges)};
}

DirectedMultigraph random_graph(Rng& rng, int n_edges) {
    DirectedMultigraph g;
    int vmax = 1;
    for (int k = 0; k < n_edges; ++k) {
        const int u = 1 + rng.uniform_int(vmax + 1);
        const int v = 1 + rng.uniform_int(vmax + 1);
        g.edges.push_back({u, v});
        vmax = std::max({vmax, u, v});
    }
    return g;
}

DirectedMultigraph relabeled(const DirectedMultigraph& g, Rng& rng) {
    int vmax = 0;
    for (const auto& [u, v] : g.edges) vmax = std::max({vmax, u, v});
    std::vector<int> perm(vmax + 1);
    for (int k = 0; k <= vmax; ++k) perm[k] = k;
    for (int k = 1; k <= vmax; ++k) std::swap(perm[k], perm[1 + rng.uniform_int(vmax)]);
    DirectedMultigraph out;
    for (const auto& [u, v] : g.edges) out.edges.push_back({perm[u], perm[v]});
    // shuffle edge order too; column order never matters
    for (size_t k = 1; k < out.edges.size(); ++k)
        std::swap(out.edges[k], out.edges[rng.uniform_int(static_cast<int>(k) + 1)]);
    return out;
}

} // namespace

TEST_CASE("worked three-edge example") {
    // first row (1,2,3), second row a permutation of (1,2,3)
    const auto e1 = graph({{1, 1}, {2, 2}, {3, 3}});
    const auto e2 = graph({{1, 1}, {2, 3}, {3, 2}});
    const auto e3 = graph({{1, 2}, {2, 1}, {3, 3}});
    const auto e4 = graph({{1, 2}, {2, 3}, {3, 1}});
    const auto e5 = graph({{1, 3}, {2, 1}, {3, 2}});
    const auto e6 = graph({{1, 3}, {2, 2}, {3, 1}});

    CHECK(graphs_equivalent(e2, e3));
    CHECK(graphs_equivalent(e2, e6));
    CHECK(graphs_equivalent(e4, e5)); // edge reversal
    CHECK(!graphs_equivalent(e1, e2));
    CHECK(!graphs_equivalent(e1, e4));
    CHECK(!graphs_equivalent(e2, e4));

    // exactly three distinct classes among the six
    std::vector<DirectedMultigraph> canon;
    for (const auto& g : {e1, e2, e3, e4, e5, e6}) {
        const auto c = canonical_form(g);
        if (std::find(canon.begin(), canon.end(), c) == canon.end()) canon.push_back(c);
    }
    CHECK(canon.size() == 3);
}

TEST_CASE("enumeration counts for small edge numbers") {
    CHECK(enumerate_configs(1).size() == 2);
    CHECK(enumerate_configs(2).size() == 9);
    CHECK(enumerate_configs(3).size() == 37);
    CHECK(enumerate_configs(4).size() == 186);
    CHECK(enumerate_configs(5).size() == 985);
    CHECK_THROWS_AS(enumerate_configs(0), InvalidProblem);
}

TEST_CASE("equivalence under relabeling and reversal") {
    Rng rng(61);
    for (int k = 0; k < 100; ++k) {
        const DirectedMultigraph g = random_graph(rng, 1 + rng.uniform_int(6));
        CHECK(graphs_equivalent(g, relabeled(g, rng)));
        CHECK(graphs_equivalent(g, g.reversed()));
        CHECK(graphs_equivalent(g.reversed().reversed(), g));
        CHECK(canonical_form(g) == canonical_form(relabeled(g, rng).reversed()));
    }
}

TEST_CASE("equivalence is transitive on random triples") {
    Rng rng(62);
    for (int k = 0; k < 50; ++k) {
        const DirectedMultigraph a = random_graph(rng, 4);
        const DirectedMultigraph b = relabeled(a, rng);
        const DirectedMultigraph c = relabeled(b, rng).reversed();
        CHECK(graphs_equivalent(a, b));
        CHECK(graphs_equivalent(b, c));
        CHECK(graphs_equivalent(a, c));
    }
}

TEST_CASE("match type classification") {
    CHECK(classify_match_type(graph({{1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}, {1, 1}})) ==
          MatchType::AllSame);
    CHECK(classify_match_type(graph({{1, 2}, {1, 2}, {1, 2}, {2, 1}, {2, 1}, {2, 1}})) ==
          MatchType::TwoTriples);
    // perfect matching on 12 vertices
    DirectedMultigraph matching;
    for (int k = 0; k < 6; ++k) matching.edges.push_back({2 * k + 1, 2 * k + 2});
    CHECK(classify_match_type(matching) == MatchType::NoTriple);
    CHECK(edge_multiplicities(matching) == std::vector<int>(6, 1));
}

TEST_CASE("canonical storage uses contiguous one-based labels") {
    const auto c = canonical_form(graph({{7, 9}, {9, 7}, {4, 4}}));
    int vmax = 0;
    std::set<int> seen;
    for (const auto& [u, v] : c.edges) {
        CHECK(u >= 1);
        CHECK(v >= 1);
        vmax = std::max({vmax, u, v});
        seen.insert(u);
        seen.insert(v);
    }
    CHECK(static_cast<int>(seen.size()) == vmax);
    CHECK(c.vertex_count() == 3);
}

TEST_CASE("camera histogram shape") {
    const auto graphs = enumerate_configs(2);
    const auto hist = count_by_cameras(graphs);
    int total = 0;
    for (const auto& [cams, count] : hist) {
        CHECK(cams >= 1);
        CHECK(cams <= 4);
        total += count;
    }
    CHECK(total == 9);
}
