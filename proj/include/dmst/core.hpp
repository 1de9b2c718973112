#pragma once

#include <algorithm>
#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dmst {

using Vertex = std::uint32_t;

enum class Objective { weight, bottleneck };

inline const char* to_string(Objective o) { return o == Objective::weight ? "weight" : "bottleneck"; }

inline Objective objective_from_string(const std::string& s) {
    if (s == "weight") return Objective::weight;
    if (s == "bottleneck") return Objective::bottleneck;
    throw std::invalid_argument("unknown objective: " + s);
}

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point&, const Point&) = default;
};

inline double distance(const Point& p, const Point& q) { return std::hypot(p.x - q.x, p.y - q.y); }

/// An instance: distinct points in the plane, at least two of them.
class PointSet {
public:
    PointSet() = default;

    explicit PointSet(std::vector<Point> points, std::string id = {}) : points_(std::move(points)), id_(std::move(id)) {
        if (points_.size() < 2) throw std::invalid_argument("point set needs at least 2 points");
        for (const auto& p : points_) {
            if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw std::invalid_argument("non-finite coordinate");
        }
        std::vector<Point> sorted = points_;
        std::sort(sorted.begin(), sorted.end(),
                  [](const Point& a, const Point& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
        if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
            throw std::invalid_argument("point set contains duplicate points");
        }
    }

    std::size_t size() const { return points_.size(); }
    const Point& operator[](std::size_t i) const { return points_[i]; }
    std::span<const Point> points() const { return points_; }
    const std::string& id() const { return id_; }
    void set_id(std::string id) { id_ = std::move(id); }

    auto begin() const { return points_.begin(); }
    auto end() const { return points_.end(); }

private:
    std::vector<Point> points_;
    std::string id_;
};

/// Undirected edge stored with u < v.
struct Edge {
    Vertex u = 0;
    Vertex v = 0;

    Edge() = default;
    Edge(Vertex a, Vertex b) : u(std::min(a, b)), v(std::max(a, b)) {
        if (a == b) throw std::invalid_argument("self-loop edge");
    }

    bool touches(Vertex w) const { return u == w || v == w; }
    Vertex other(Vertex w) const { return w == u ? v : u; }

    friend auto operator<=>(const Edge&, const Edge&) = default;
    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Dense symmetric table of pairwise distances for one PointSet.
class DistanceTable {
public:
    explicit DistanceTable(const PointSet& ps) : n_(ps.size()), d_(n_ * n_, 0.0) {
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = i + 1; j < n_; ++j) {
                const double dij = distance(ps[i], ps[j]);
                d_[i * n_ + j] = dij;
                d_[j * n_ + i] = dij;
            }
        }
    }

    std::size_t size() const { return n_; }
    double operator()(Vertex a, Vertex b) const { return d_[std::size_t{a} * n_ + b]; }
    double operator()(const Edge& e) const { return (*this)(e.u, e.v); }

private:
    std::size_t n_;
    std::vector<double> d_;
};

/// Strict total order on edges: length first, then (u, v).
inline bool edge_less(const DistanceTable& dist, const Edge& a, const Edge& b) {
    const double la = dist(a), lb = dist(b);
    if (la != lb) return la < lb;
    return a < b;
}

struct DegreeBound {
    int delta;

    explicit DegreeBound(int d) : delta(d) {
        if (d < 2 || d > 4) throw std::invalid_argument("degree bound must be in {2,3,4}");
    }
};

/// A spanning tree over vertices 0..n-1. Construction validates connectivity
/// and acyclicity; the degree and adjacency caches are kept in step with the
/// edge set by every mutation.
class Tree {
public:
    Tree() = default;

    Tree(std::size_t n, std::vector<Edge> edges) : n_(n), edges_(std::move(edges)), degree_(n, 0), adj_(n) {
        if (n < 1) throw std::invalid_argument("tree needs at least one vertex");
        if (edges_.size() + 1 != n) throw std::invalid_argument("tree must have n-1 edges");
        std::sort(edges_.begin(), edges_.end());
        if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
            throw std::invalid_argument("duplicate tree edge");
        }
        for (const auto& e : edges_) {
            if (e.u == e.v || e.v >= n) throw std::invalid_argument("edge endpoint out of range");
            ++degree_[e.u];
            ++degree_[e.v];
            adj_[e.u].push_back(e.v);
            adj_[e.v].push_back(e.u);
        }
        for (auto& a : adj_) std::sort(a.begin(), a.end());
        if (!connected()) throw std::invalid_argument("edge set is not a spanning tree");
    }

    std::size_t size() const { return n_; }
    std::span<const Edge> edges() const { return edges_; }
    int degree(Vertex v) const { return degree_[v]; }
    std::span<const int> degrees() const { return degree_; }
    std::span<const Vertex> neighbours(Vertex v) const { return adj_[v]; }

    int max_degree() const { return degree_.empty() ? 0 : *std::max_element(degree_.begin(), degree_.end()); }

    bool has_edge(const Edge& e) const {
        if (e.v >= n_) return false;
        const auto& a = adj_[e.u];
        return std::binary_search(a.begin(), a.end(), e.v);
    }

    /// Replaces `remove` by `add`. Callers guarantee the result is a tree;
    /// see swap.hpp for the checked entry point.
    void exchange(const Edge& remove, const Edge& add) {
        auto it = std::lower_bound(edges_.begin(), edges_.end(), remove);
        edges_.erase(it);
        edges_.insert(std::lower_bound(edges_.begin(), edges_.end(), add), add);
        --degree_[remove.u];
        --degree_[remove.v];
        ++degree_[add.u];
        ++degree_[add.v];
        erase_adj(remove.u, remove.v);
        erase_adj(remove.v, remove.u);
        insert_adj(add.u, add.v);
        insert_adj(add.v, add.u);
#ifndef NDEBUG
        check_invariants();
#endif
    }

    /// Traversal-based verification of every Tree invariant.
    void check_invariants() const {
        if (edges_.size() + 1 != n_) throw std::logic_error("tree edge count drifted");
        std::vector<int> deg(n_, 0);
        for (const auto& e : edges_) {
            ++deg[e.u];
            ++deg[e.v];
        }
        if (deg != degree_) throw std::logic_error("tree degree cache drifted");
        if (!connected()) throw std::logic_error("tree lost connectivity");
    }

    friend bool operator==(const Tree& a, const Tree& b) { return a.n_ == b.n_ && a.edges_ == b.edges_; }

private:
    bool connected() const {
        if (n_ == 0) return true;
        std::vector<char> seen(n_, 0);
        std::vector<Vertex> stack{0};
        seen[0] = 1;
        std::size_t visited = 1;
        while (!stack.empty()) {
            const Vertex x = stack.back();
            stack.pop_back();
            for (Vertex y : adj_[x]) {
                if (!seen[y]) {
                    seen[y] = 1;
                    ++visited;
                    stack.push_back(y);
                }
            }
        }
        return visited == n_;
    }

    void erase_adj(Vertex a, Vertex b) {
        auto& l = adj_[a];
        l.erase(std::lower_bound(l.begin(), l.end(), b));
    }
    void insert_adj(Vertex a, Vertex b) {
        auto& l = adj_[a];
        l.insert(std::lower_bound(l.begin(), l.end(), b), b);
    }

    std::size_t n_ = 0;
    std::vector<Edge> edges_;
    std::vector<int> degree_;
    std::vector<std::vector<Vertex>> adj_;
};

inline void require_spans(const Tree& t, const PointSet& ps) {
    if (t.size() != ps.size()) throw std::invalid_argument("tree and point set sizes differ");
}

inline double total_weight(const Tree& t, const PointSet& ps) {
    require_spans(t, ps);
    double w = 0.0;
    for (const auto& e : t.edges()) w += distance(ps[e.u], ps[e.v]);
    return w;
}

inline double bottleneck(const Tree& t, const PointSet& ps) {
    require_spans(t, ps);
    double b = 0.0;
    for (const auto& e : t.edges()) b = std::max(b, distance(ps[e.u], ps[e.v]));
    return b;
}

inline double total_weight(const Tree& t, const DistanceTable& dist) {
    double w = 0.0;
    for (const auto& e : t.edges()) w += dist(e);
    return w;
}

inline double bottleneck(const Tree& t, const DistanceTable& dist) {
    double b = 0.0;
    for (const auto& e : t.edges()) b = std::max(b, dist(e));
    return b;
}

inline int feasibility_error(std::span<const int> degrees, DegreeBound d) {
    int f = 0;
    for (int g : degrees) f += std::max(g - d.delta, 0);
    return f;
}

/// Sum over vertices of max(degree - delta, 0).
inline int feasibility_error(const Tree& t, DegreeBound d) { return feasibility_error(t.degrees(), d); }

/// Builds the path tree visiting `order` left to right.
inline Tree path_tree(std::span<const Vertex> order) {
    std::vector<Edge> edges;
    edges.reserve(order.size());
    for (std::size_t i = 1; i < order.size(); ++i) edges.emplace_back(order[i - 1], order[i]);
    return Tree(order.size(), std::move(edges));
}

}  // namespace dmst
