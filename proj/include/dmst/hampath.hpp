#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dmst/core.hpp"
#include "dmst/matching.hpp"
#include "dmst/mst.hpp"

namespace dmst {

/// Edge multiset over vertices 0..n-1.
struct MultiGraph {
    std::size_t n = 0;
    std::vector<Edge> edges;

    std::vector<int> degrees() const {
        std::vector<int> deg(n, 0);
        for (const auto& e : edges) {
            ++deg[e.u];
            ++deg[e.v];
        }
        return deg;
    }
};

inline MultiGraph doubled(const Tree& t) {
    MultiGraph g{t.size(), {}};
    for (const auto& e : t.edges()) {
        g.edges.push_back(e);
        g.edges.push_back(e);
    }
    return g;
}

/// Hierholzer's algorithm. Starts at the lowest-index odd vertex, or at
/// vertex 0 when every degree is even; edges are taken in index order.
inline std::vector<Vertex> euler_trail(const MultiGraph& g) {
    if (g.n == 0) throw std::invalid_argument("euler_trail: empty graph");
    const auto deg = g.degrees();
    std::vector<Vertex> odd;
    for (Vertex v = 0; v < g.n; ++v)
        if (deg[v] % 2) odd.push_back(v);
    if (odd.size() != 0 && odd.size() != 2) throw std::invalid_argument("euler_trail: needs 0 or 2 odd vertices");

    std::vector<std::vector<std::pair<Vertex, std::size_t>>> adj(g.n);
    for (std::size_t i = 0; i < g.edges.size(); ++i) {
        adj[g.edges[i].u].emplace_back(g.edges[i].v, i);
        adj[g.edges[i].v].emplace_back(g.edges[i].u, i);
    }
    for (auto& a : adj) std::sort(a.begin(), a.end());
    std::vector<char> used(g.edges.size(), 0);
    std::vector<std::size_t> cursor(g.n, 0);

    const Vertex start = odd.empty() ? 0 : odd.front();
    std::vector<Vertex> stack{start}, trail;
    while (!stack.empty()) {
        const Vertex v = stack.back();
        auto& c = cursor[v];
        while (c < adj[v].size() && used[adj[v][c].second]) ++c;
        if (c == adj[v].size()) {
            trail.push_back(v);
            stack.pop_back();
        } else {
            used[adj[v][c].second] = 1;
            stack.push_back(adj[v][c].first);
        }
    }
    if (trail.size() != g.edges.size() + 1) throw std::invalid_argument("euler_trail: graph is not connected");
    std::reverse(trail.begin(), trail.end());
    return trail;
}

/// Keeps the first occurrence of every vertex.
inline std::vector<Vertex> shortcut(std::span<const Vertex> seq) {
    std::vector<Vertex> out;
    if (seq.empty()) return out;
    std::vector<char> seen(*std::max_element(seq.begin(), seq.end()) + std::size_t{1}, 0);
    for (Vertex v : seq) {
        if (seen[v]) continue;
        seen[v] = 1;
        out.push_back(v);
    }
    return out;
}

/// Double-tree heuristic: Euler circuit of the doubled MST, short-cut to a
/// Hamiltonian cycle, minus the cycle's longest edge.
inline Tree double_tree(const PointSet& ps) {
    const DistanceTable dist(ps);
    const std::size_t n = ps.size();
    const auto cycle = shortcut(euler_trail(doubled(mst_tree(dist))));
    if (n == 2) return path_tree(cycle);
    std::size_t cut = 0;  // edge (cycle[cut], cycle[cut+1 mod n]) is dropped
    for (std::size_t i = 1; i < n; ++i) {
        if (edge_less(dist, Edge(cycle[cut], cycle[(cut + 1) % n]), Edge(cycle[i], cycle[(i + 1) % n]))) cut = i;
    }
    std::vector<Vertex> order;
    order.reserve(n);
    for (std::size_t i = 1; i <= n; ++i) order.push_back(cycle[(cut + i) % n]);
    return path_tree(order);
}

using Matching = std::vector<std::pair<Vertex, Vertex>>;

/// Distances are matched in units of 1e-6.
inline constexpr double matching_scale = 1e6;

/// Exact minimum-weight perfect matching of `vertices` plus two zero-cost
/// dummies adjacent to every real vertex (never to each other). Returns the
/// real-real pairs only.
inline Matching min_weight_perfect_matching(std::span<const Vertex> vertices, const DistanceTable& dist) {
    const int m = static_cast<int>(vertices.size());
    if (m % 2) throw std::invalid_argument("matching: odd vertex count");
    if (m == 0) return {};
    const int d1 = m, d2 = m + 1;
    std::vector<matching::WeightedEdge> edges;
    for (int a = 0; a < m; ++a)
        for (int b = a + 1; b < m; ++b)
            edges.push_back({a, b, std::llround(dist(vertices[a], vertices[b]) * matching_scale)});
    std::int64_t big = 1;
    for (const auto& e : edges) big = std::max(big, e.w + 1);
    for (auto& e : edges) e.w = 2 * (big - e.w);
    for (int a = 0; a < m; ++a) {
        edges.push_back({a, d1, 2 * big});
        edges.push_back({a, d2, 2 * big});
    }
    const auto mate = matching::max_weight_matching(edges, true);
    Matching out;
    for (int a = 0; a < m; ++a) {
        if (mate[a] < 0) throw std::logic_error("matching: not perfect");
        if (mate[a] > a && mate[a] < m) out.emplace_back(vertices[a], vertices[mate[a]]);
    }
    if (mate[d1] < 0 || mate[d2] < 0) throw std::logic_error("matching: dummy left unmatched");
    return out;
}

inline Matching min_weight_perfect_matching(std::span<const Vertex> vertices, const PointSet& ps) {
    return min_weight_perfect_matching(vertices, DistanceTable(ps));
}

/// Path variant of Christofides: the MST plus a dummy-augmented matching of
/// its odd vertices leaves exactly two odd vertices; the Euler trail between
/// them is short-cut to a Hamiltonian path.
inline Tree christofides_path(const PointSet& ps) {
    const DistanceTable dist(ps);
    const Tree t = mst_tree(dist);
    std::vector<Vertex> odd;
    for (Vertex v = 0; v < t.size(); ++v)
        if (t.degree(v) % 2) odd.push_back(v);
    MultiGraph g{t.size(), {t.edges().begin(), t.edges().end()}};
    for (const auto& [a, b] : min_weight_perfect_matching(odd, dist)) g.edges.emplace_back(a, b);
    return path_tree(shortcut(euler_trail(g)));
}

namespace detail {

// Hamiltonian path of the cube of the part of the tree reachable from `a`
// through `allowed`, starting at a and ending at a or a neighbour of a.
inline void cube_walk(const Tree& t, Vertex a, std::vector<Vertex> allowed, std::vector<Vertex>& out) {
    if (allowed.empty()) {
        out.push_back(a);
        return;
    }
    const Vertex last = allowed.back();
    allowed.pop_back();
    cube_walk(t, a, std::move(allowed), out);
    std::vector<Vertex> below;
    for (Vertex y : t.neighbours(last))
        if (y != a) below.push_back(y);
    const std::size_t mark = out.size();
    cube_walk(t, last, std::move(below), out);
    std::reverse(out.begin() + static_cast<std::ptrdiff_t>(mark), out.end());
}

}  // namespace detail

/// Hamiltonian path in the cube of the MST: consecutive vertices are at
/// most three tree edges apart. Subtrees are visited in index order.
inline Tree cube2(const PointSet& ps) {
    const Tree t = mst_tree(DistanceTable(ps));
    std::vector<Vertex> order;
    order.reserve(t.size());
    detail::cube_walk(t, 0, {t.neighbours(0).begin(), t.neighbours(0).end()}, order);
    return path_tree(order);
}

}  // namespace dmst
