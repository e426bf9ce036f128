#include "rigpose/config_enum.hpp"

#include "rigpose/core.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <unordered_set>

namespace rigpose {

namespace {

using EdgeList = std::vector<std::pair<int, int>>;

// Relabel vertices to contiguous 0-based indices (order of appearance).
EdgeList compacted(const EdgeList& edges, int* n_vertices) {
    std::map<int, int> remap;
    EdgeList out;
    out.reserve(edges.size());
    for (const auto& [u, v] : edges) {
        if (!remap.count(u)) remap[u] = static_cast<int>(remap.size());
        if (!remap.count(v)) remap[v] = static_cast<int>(remap.size());
        out.push_back({remap[u], remap[v]});
    }
    *n_vertices = static_cast<int>(remap.size());
    return out;
}

std::vector<EdgeList> connected_components(const EdgeList& edges, int n_vertices) {
    std::vector<int> parent(n_vertices);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    };
    for (const auto& [u, v] : edges) parent[find(u)] = find(v);
    std::map<int, EdgeList> byroot;
    for (const auto& e : edges) byroot[find(e.first)].push_back(e);
    std::vector<EdgeList> comps;
    for (auto& [root, list] : byroot) comps.push_back(std::move(list));
    return comps;
}

// Canonical color refinement: colors are ranks of sorted invariant keys, so
// equal colors mean equal refinement signatures across different graphs.
std::vector<int> refine_colors(const EdgeList& edges, int n) {
    std::vector<std::array<int, 3>> deg(n, {0, 0, 0}); // out, in, loops
    for (const auto& [u, v] : edges) {
        if (u == v) {
            ++deg[u][2];
        } else {
            ++deg[u][0];
            ++deg[v][1];
        }
    }
    std::vector<std::array<int, 3>> keys0 = deg;
    std::vector<std::array<int, 3>> sorted0 = keys0;
    std::sort(sorted0.begin(), sorted0.end());
    sorted0.erase(std::unique(sorted0.begin(), sorted0.end()), sorted0.end());
    std::vector<int> color(n);
    for (int v = 0; v < n; ++v)
        color[v] = static_cast<int>(
            std::lower_bound(sorted0.begin(), sorted0.end(), keys0[v]) - sorted0.begin());

    for (int round = 0; round < n; ++round) {
        std::vector<std::vector<int>> key(n);
        for (int v = 0; v < n; ++v) key[v].push_back(color[v]);
        for (const auto& [u, v] : edges) {
            if (u == v) continue;
            key[u].push_back(2 * color[v]);     // outgoing neighbor
            key[v].push_back(2 * color[u] + 1); // incoming neighbor
        }
        for (int v = 0; v < n; ++v)
            std::sort(key[v].begin() + 1, key[v].end());
        std::vector<std::vector<int>> sorted = key;
        std::sort(sorted.begin(), sorted.end());
        sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
        std::vector<int> next(n);
        for (int v = 0; v < n; ++v)
            next[v] = static_cast<int>(
                std::lower_bound(sorted.begin(), sorted.end(), key[v]) - sorted.begin());
        if (next == color) break;
        color = next;
    }
    return color;
}

// Minimum sorted edge list over all vertex labelings compatible with the
// color classes (classes in color order, permutations within a class).
EdgeList canonical_component(const EdgeList& edges) {
    int n = 0;
    const EdgeList local = compacted(edges, &n);
    const std::vector<int> color = refine_colors(local, n);

    std::vector<std::vector<int>> classes;
    {
        std::map<int, std::vector<int>> byc;
        for (int v = 0; v < n; ++v) byc[color[v]].push_back(v);
        for (auto& [c, members] : byc) classes.push_back(std::move(members));
    }

    std::vector<int> label(n, -1);
    EdgeList best;
    bool have_best = false;
    auto try_assignment = [&]() {
        EdgeList cand;
        cand.reserve(local.size());
        for (const auto& [u, v] : local) cand.push_back({label[u], label[v]});
        std::sort(cand.begin(), cand.end());
        if (!have_best || cand < best) {
            best = std::move(cand);
            have_best = true;
        }
    };
    // Nested within-class permutations; class sizes are tiny (<= 7 vertices
    // total per component for n <= 6 edges).
    auto rec = [&](auto&& self, size_t ci, int next_label) -> void {
        if (ci == classes.size()) {
            try_assignment();
            return;
        }
        std::vector<int> perm = classes[ci];
        std::sort(perm.begin(), perm.end());
        do {
            for (size_t k = 0; k < perm.size(); ++k) label[perm[k]] = next_label + static_cast<int>(k);
            self(self, ci + 1, next_label + static_cast<int>(perm.size()));
        } while (std::next_permutation(perm.begin(), perm.end()));
    };
    rec(rec, 0, 0);
    return best;
}

EdgeList canonical_oriented(const EdgeList& edges, int n_vertices) {
    std::vector<EdgeList> comps = connected_components(edges, n_vertices);
    std::vector<std::pair<std::pair<int, EdgeList>, EdgeList>> canon; // (sort key, canonical)
    for (const auto& comp : comps) {
        EdgeList c = canonical_component(comp);
        int nv = 0;
        for (const auto& [u, v] : c) nv = std::max({nv, u + 1, v + 1});
        canon.push_back({{nv, c}, c});
    }
    std::sort(canon.begin(), canon.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    EdgeList merged;
    int offset = 0;
    for (const auto& [key, c] : canon) {
        for (const auto& [u, v] : c) merged.push_back({u + offset, v + offset});
        offset += key.first;
    }
    std::sort(merged.begin(), merged.end());
    return merged;
}

std::string edge_key(const EdgeList& edges) {
    std::string s;
    s.reserve(edges.size() * 4);
    for (const auto& [u, v] : edges) {
        s.push_back(static_cast<char>(u));
        s.push_back(static_cast<char>(v));
    }
    return s;
}

} // namespace

int DirectedMultigraph::vertex_count() const {
    std::unordered_set<int> verts;
    for (const auto& [u, v] : edges) {
        verts.insert(u);
        verts.insert(v);
    }
    return static_cast<int>(verts.size());
}

DirectedMultigraph DirectedMultigraph::reversed() const {
    DirectedMultigraph g;
    g.edges.reserve(edges.size());
    for (const auto& [u, v] : edges) g.edges.push_back({v, u});
    return g;
}

DirectedMultigraph canonical_form(const DirectedMultigraph& g) {
    int n = 0;
    const EdgeList fwd = compacted(g.edges, &n);
    EdgeList rev;
    rev.reserve(fwd.size());
    for (const auto& [u, v] : fwd) rev.push_back({v, u});
    const EdgeList a = canonical_oriented(fwd, n);
    const EdgeList b = canonical_oriented(rev, n);
    const EdgeList& best = (b < a) ? b : a;
    DirectedMultigraph out;
    out.edges.reserve(best.size());
    for (const auto& [u, v] : best) out.edges.push_back({u + 1, v + 1}); // 1-based labels
    return out;
}

bool graphs_equivalent(const DirectedMultigraph& g, const DirectedMultigraph& h) {
    if (g.edges.size() != h.edges.size())
        return false;
    return canonical_form(g) == canonical_form(h);
}

std::vector<DirectedMultigraph> enumerate_configs(int n) {
    if (n < 1 || n > 7)
        throw InvalidProblem("enumerate_configs: supported edge counts are 1..7");
    std::vector<DirectedMultigraph> current = {canonical_form({{{1, 1}}}),
                                               canonical_form({{{1, 2}}})};
    for (int k = 2; k <= n; ++k) {
        std::vector<DirectedMultigraph> next;
        std::unordered_set<std::string> seen;
        for (const auto& g : current) {
            const int vmax = g.vertex_count();
            EdgeList extensions;
            for (int u = 1; u <= vmax + 1; ++u)
                for (int v = 1; v <= vmax + 1; ++v) extensions.push_back({u, v});
            extensions.push_back({vmax + 1, vmax + 2});
            for (const auto& e : extensions) {
                DirectedMultigraph h = g;
                h.edges.push_back(e);
                DirectedMultigraph c = canonical_form(h);
                std::string key = edge_key(c.edges);
                if (seen.insert(std::move(key)).second)
                    next.push_back(std::move(c));
            }
        }
        current = std::move(next);
    }
    return current;
}

std::vector<int> edge_multiplicities(const DirectedMultigraph& g) {
    std::map<std::pair<int, int>, int> count;
    for (const auto& e : g.edges) ++count[e];
    std::vector<int> mult;
    mult.reserve(count.size());
    for (const auto& [e, c] : count) mult.push_back(c);
    std::sort(mult.rbegin(), mult.rend());
    return mult;
}

MatchType classify_match_type(const DirectedMultigraph& g) {
    return match_type_from_multiplicities(edge_multiplicities(g));
}

std::map<int, int> count_by_cameras(const std::vector<DirectedMultigraph>& graphs) {
    std::map<int, int> hist;
    for (const auto& g : graphs) ++hist[g.vertex_count()];
    return hist;
}

} // namespace rigpose
