#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dmst/core.hpp"

namespace dmst {

struct MstResult {
    Tree tree;
    int max_degree = 0;
};

/// Prim's algorithm with a full O(n^2) scan. Edges are totally ordered by
/// (length, u, v), so the result is the unique MST under that order.
inline Tree mst_tree(const DistanceTable& dist) {
    const std::size_t n = dist.size();
    if (n < 2) throw std::invalid_argument("mst needs at least 2 points");
    constexpr Vertex none = std::numeric_limits<Vertex>::max();
    std::vector<char> in_tree(n, 0);
    std::vector<Vertex> link(n, none);
    std::vector<Edge> edges;
    edges.reserve(n - 1);

    in_tree[0] = 1;
    for (Vertex v = 1; v < n; ++v) link[v] = 0;

    for (std::size_t step = 1; step < n; ++step) {
        Vertex best = none;
        for (Vertex v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            if (best == none || edge_less(dist, Edge(v, link[v]), Edge(best, link[best]))) best = v;
        }
        in_tree[best] = 1;
        edges.emplace_back(best, link[best]);
        for (Vertex v = 0; v < n; ++v) {
            if (!in_tree[v] && edge_less(dist, Edge(v, best), Edge(v, link[v]))) link[v] = best;
        }
    }
    return Tree(n, std::move(edges));
}

inline MstResult mst(const PointSet& ps) {
    Tree t = mst_tree(DistanceTable(ps));
    const int md = t.max_degree();
    return {std::move(t), md};
}

struct OracleCaps {
    std::size_t tree = 8;
    std::size_t path = 12;
};

namespace detail {

// Decodes a Prüfer sequence; `degree` must hold 1 + multiplicity per label.
inline std::vector<Edge> prufer_decode(std::span<const Vertex> seq, std::vector<int> degree) {
    const std::size_t n = seq.size() + 2;
    std::vector<Edge> edges;
    edges.reserve(n - 1);
    for (Vertex x : seq) {
        Vertex leaf = 0;
        while (degree[leaf] != 1) ++leaf;
        edges.emplace_back(leaf, x);
        --degree[leaf];
        --degree[x];
    }
    Vertex a = 0;
    while (degree[a] != 1) ++a;
    Vertex b = a + 1;
    while (degree[b] != 1) ++b;
    edges.emplace_back(a, b);
    std::sort(edges.begin(), edges.end());
    return edges;
}

}  // namespace detail

/// Exhaustive optimum over every labelled spanning tree with max degree
/// <= delta, enumerated through Prüfer sequences. Ties go to the secondary
/// objective and then to the lexicographically smallest edge set.
inline Tree exact_dmst(const PointSet& ps, DegreeBound d, Objective objective, OracleCaps caps = {}) {
    const std::size_t n = ps.size();
    if (n > caps.tree) throw std::invalid_argument("exact_dmst: instance exceeds oracle cap");
    const DistanceTable dist(ps);
    if (n == 2) return Tree(2, {Edge(0, 1)});

    const std::size_t len = n - 2;
    std::vector<Vertex> seq(len, 0);
    std::vector<Edge> best_edges;
    double best_primary = std::numeric_limits<double>::infinity();
    double best_secondary = std::numeric_limits<double>::infinity();

    while (true) {
        std::vector<int> degree(n, 1);
        for (Vertex x : seq) ++degree[x];
        if (std::all_of(degree.begin(), degree.end(), [&](int g) { return g <= d.delta; })) {
            auto edges = detail::prufer_decode(seq, std::move(degree));
            double w = 0.0, b = 0.0;
            for (const auto& e : edges) {
                w += dist(e);
                b = std::max(b, dist(e));
            }
            const double primary = objective == Objective::weight ? w : b;
            const double secondary = objective == Objective::weight ? b : w;
            if (primary < best_primary || (primary == best_primary && secondary < best_secondary) ||
                (primary == best_primary && secondary == best_secondary && edges < best_edges)) {
                best_primary = primary;
                best_secondary = secondary;
                best_edges = std::move(edges);
            }
        }
        std::size_t i = 0;
        while (i < len && ++seq[i] == n) seq[i++] = 0;
        if (i == len) break;
    }
    if (best_edges.empty()) throw std::logic_error("exact_dmst: no feasible tree");
    return Tree(n, std::move(best_edges));
}

namespace detail {

// Held-Karp over subsets restricted to edges of length <= limit. Returns the
// minimum-weight Hamiltonian path order, or nullopt if none exists.
inline std::optional<std::vector<Vertex>> held_karp_path(const DistanceTable& dist, double limit) {
    const std::size_t n = dist.size();
    const std::size_t full = (std::size_t{1} << n) - 1;
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<double> cost((full + 1) * n, inf);
    std::vector<std::int8_t> prev((full + 1) * n, -1);
    for (std::size_t v = 0; v < n; ++v) cost[(std::size_t{1} << v) * n + v] = 0.0;

    for (std::size_t mask = 1; mask <= full; ++mask) {
        for (std::size_t v = 0; v < n; ++v) {
            const double c = cost[mask * n + v];
            if (c == inf) continue;
            for (std::size_t w = 0; w < n; ++w) {
                if (mask & (std::size_t{1} << w)) continue;
                const double len = dist(static_cast<Vertex>(v), static_cast<Vertex>(w));
                if (len > limit) continue;
                const std::size_t next = mask | (std::size_t{1} << w);
                const double nc = c + len;
                auto& slot = cost[next * n + w];
                if (nc < slot) {
                    slot = nc;
                    prev[next * n + w] = static_cast<std::int8_t>(v);
                }
            }
        }
    }
    std::size_t end = n;
    for (std::size_t v = 0; v < n; ++v) {
        if (cost[full * n + v] < inf && (end == n || cost[full * n + v] < cost[full * n + end])) end = v;
    }
    if (end == n) return std::nullopt;
    std::vector<Vertex> order;
    std::size_t mask = full, v = end;
    while (true) {
        order.push_back(static_cast<Vertex>(v));
        const int p = prev[mask * n + v];
        if (p < 0) break;
        mask &= ~(std::size_t{1} << v);
        v = static_cast<std::size_t>(p);
    }
    std::reverse(order.begin(), order.end());
    return order;
}

}  // namespace detail

/// Optimal Hamiltonian path by subset dynamic programming. For the
/// bottleneck objective the smallest feasible edge-length threshold is found
/// by binary search, then the lightest path under that threshold is returned.
inline Tree exact_hampath(const PointSet& ps, Objective objective, OracleCaps caps = {}) {
    const std::size_t n = ps.size();
    if (n > caps.path) throw std::invalid_argument("exact_hampath: instance exceeds oracle cap");
    const DistanceTable dist(ps);
    double limit = std::numeric_limits<double>::infinity();
    if (objective == Objective::bottleneck) {
        std::vector<double> lengths;
        for (Vertex a = 0; a < n; ++a)
            for (Vertex b = a + 1; b < n; ++b) lengths.push_back(dist(a, b));
        std::sort(lengths.begin(), lengths.end());
        lengths.erase(std::unique(lengths.begin(), lengths.end()), lengths.end());
        std::size_t lo = 0, hi = lengths.size() - 1;
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (detail::held_karp_path(dist, lengths[mid])) hi = mid;
            else lo = mid + 1;
        }
        limit = lengths[lo];
    }
    auto order = detail::held_karp_path(dist, limit);
    if (!order) throw std::logic_error("exact_hampath: no path found");
    return path_tree(*order);
}

}  // namespace dmst
