#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

#include "dmst/core.hpp"
#include "dmst/mst.hpp"

namespace dmst {

/// A Tree oriented away from `root`; child lists are in index order.
class RootedTree {
public:
    static constexpr Vertex none = std::numeric_limits<Vertex>::max();

    RootedTree(const Tree& t, Vertex root) : tree_(t), root_(root), parent_(t.size(), none), children_(t.size()) {
        if (root >= t.size()) throw std::invalid_argument("root out of range");
        std::vector<Vertex> queue{root};
        parent_[root] = root;
        for (std::size_t head = 0; head < queue.size(); ++head) {
            const Vertex x = queue[head];
            for (Vertex y : t.neighbours(x)) {
                if (y == parent_[x] && x != root) continue;
                parent_[y] = x;
                children_[x].push_back(y);
                queue.push_back(y);
            }
        }
        parent_[root] = none;
        order_ = std::move(queue);
    }

    const Tree& tree() const { return tree_; }
    Vertex root() const { return root_; }
    Vertex parent(Vertex v) const { return parent_[v]; }
    std::span<const Vertex> children(Vertex v) const { return children_[v]; }
    /// Vertices in breadth-first order from the root.
    std::span<const Vertex> order() const { return order_; }

private:
    Tree tree_;
    Vertex root_;
    std::vector<Vertex> parent_;
    std::vector<std::vector<Vertex>> children_;
    std::vector<Vertex> order_;
};

namespace detail {

struct PathCost {
    double primary = std::numeric_limits<double>::infinity();
    double secondary = std::numeric_limits<double>::infinity();
    double kept = std::numeric_limits<double>::infinity();
    std::vector<Vertex> order;

    bool operator<(const PathCost& o) const {
        if (primary != o.primary) return primary < o.primary;
        if (secondary != o.secondary) return secondary < o.secondary;
        if (kept != o.kept) return kept < o.kept;
        return order < o.order;
    }
};

// Best ordering v1..vk of `kids` for the replacement path under the
// objective; ties go to the shorter kept edge (v, v1), then lexicographic.
inline std::vector<Vertex> best_child_path(const DistanceTable& dist, Vertex v, std::vector<Vertex> kids,
                                           Objective objective) {
    std::sort(kids.begin(), kids.end());
    PathCost best;
    do {
        double w = 0.0, b = 0.0;
        for (std::size_t i = 1; i < kids.size(); ++i) {
            const double len = dist(kids[i - 1], kids[i]);
            w += len;
            b = std::max(b, len);
        }
        PathCost c;
        c.primary = objective == Objective::weight ? w : b;
        c.secondary = objective == Objective::weight ? 0.0 : w;
        c.kept = dist(v, kids.front());
        c.order = kids;
        if (c < best) best = std::move(c);
    } while (std::next_permutation(kids.begin(), kids.end()));
    return best.order;
}

}  // namespace detail

/// Recursive local swaps for degree 3: at every vertex v with children
/// v1..vk, keep (v, v1) and replace the other child edges by the path
/// v1 - v2 - ... - vk of least weight (or least bottleneck for KRY-B).
inline Tree kry(const PointSet& ps, Objective objective = Objective::weight, Vertex root = 0) {
    const DistanceTable dist(ps);
    const RootedTree rt(mst_tree(dist), root);
    std::vector<Edge> edges;
    edges.reserve(ps.size() - 1);
    for (Vertex v : rt.order()) {
        const auto kids = rt.children(v);
        if (kids.empty()) continue;
        if (kids.size() == 1) {
            edges.emplace_back(v, kids[0]);
            continue;
        }
        const auto path = detail::best_child_path(dist, v, {kids.begin(), kids.end()}, objective);
        edges.emplace_back(v, path[0]);
        for (std::size_t i = 1; i < path.size(); ++i) edges.emplace_back(path[i - 1], path[i]);
    }
    return Tree(ps.size(), std::move(edges));
}

namespace detail {

struct ChainPlan {
    double added = std::numeric_limits<double>::infinity();
    double bottleneck = std::numeric_limits<double>::infinity();
    // each chain listed from the child that stays attached to v
    std::vector<std::vector<Vertex>> chains;

    bool operator<(const ChainPlan& o) const {
        if (added != o.added) return added < o.added;
        if (bottleneck != o.bottleneck) return bottleneck < o.bottleneck;
        return chains < o.chains;
    }
};

// Splits the children of v into `cap` chains v -> s1 -> s2 -> ...,
// exhaustively over child orders and chain lengths.
inline ChainPlan best_chains(const DistanceTable& dist, Vertex v, std::vector<Vertex> kids, std::size_t cap) {
    std::sort(kids.begin(), kids.end());
    const std::size_t k = kids.size();
    ChainPlan best;
    do {
        // cut mask over the k-1 gaps; exactly cap-1 cuts
        for (unsigned mask = 0; mask < (1u << (k - 1)); ++mask) {
            if (static_cast<std::size_t>(std::popcount(mask)) != cap - 1) continue;
            ChainPlan p;
            p.added = 0.0;
            p.bottleneck = 0.0;
            for (std::size_t i = 0; i < k; ++i) {
                if (i == 0 || (mask >> (i - 1)) & 1u) {
                    p.chains.push_back({kids[i]});
                    continue;
                }
                const double len = dist(kids[i - 1], kids[i]);
                p.added += len - dist(v, kids[i]);
                p.bottleneck = std::max(p.bottleneck, len);
                p.chains.back().push_back(kids[i]);
            }
            std::sort(p.chains.begin(), p.chains.end());
            if (p < best) best = std::move(p);
        }
    } while (std::next_permutation(kids.begin(), kids.end()));
    return best;
}

}  // namespace detail

/// Degree-4 restructuring of the rooted MST. A vertex whose child count
/// exceeds its spare degree (4, less one for a parent) hangs the surplus
/// children in chains below other children, choosing the arrangement that
/// adds the least weight. Vertices within the bound are left untouched.
inline Tree chan4(const PointSet& ps, Vertex root = 0) {
    const DistanceTable dist(ps);
    const RootedTree rt(mst_tree(dist), root);
    const std::size_t n = ps.size();
    std::vector<std::vector<Vertex>> children(n);
    for (Vertex v = 0; v < n; ++v) children[v].assign(rt.children(v).begin(), rt.children(v).end());

    std::vector<Edge> edges;
    edges.reserve(n - 1);
    std::vector<Vertex> queue{root};
    for (std::size_t head = 0; head < queue.size(); ++head) {
        const Vertex v = queue[head];
        const std::size_t cap = v == root ? 4 : 3;
        if (children[v].size() > cap) {
            const auto plan = detail::best_chains(dist, v, children[v], cap);
            children[v].clear();
            for (const auto& chain : plan.chains) {
                children[v].push_back(chain.front());
                for (std::size_t i = 1; i < chain.size(); ++i) children[chain[i - 1]].push_back(chain[i]);
            }
        }
        for (Vertex c : children[v]) {
            edges.emplace_back(v, c);
            queue.push_back(c);
        }
    }
    return Tree(n, std::move(edges));
}

}  // namespace dmst
