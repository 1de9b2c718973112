#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

#include "dmst/dmst.hpp"

namespace dmst::testing {

inline PointSet random_points(std::size_t n, std::uint64_t seed, double grid = 10000.0) {
    GenConfig cfg;
    cfg.n = n;
    cfg.grid = grid;
    cfg.seed = seed;
    return generate_uniform(cfg);
}

inline PointSet points(std::initializer_list<Point> pts) { return PointSet(std::vector<Point>(pts)); }

inline Tree star_tree(std::size_t n, Vertex centre = 0) {
    std::vector<Edge> e;
    for (Vertex v = 0; v < n; ++v)
        if (v != centre) e.emplace_back(centre, v);
    return Tree(n, std::move(e));
}

inline Tree make_tree(std::size_t n, std::initializer_list<std::pair<Vertex, Vertex>> es) {
    std::vector<Edge> e;
    for (auto [a, b] : es) e.emplace_back(a, b);
    return Tree(n, std::move(e));
}

// Every spanning tree of K_n by brute force over (n-1)-edge subsets with a
// union-find cycle test. Independent of the library's enumeration.
inline void for_each_spanning_tree(std::size_t n, const std::function<void(const std::vector<Edge>&)>& f) {
    std::vector<Edge> all;
    for (Vertex a = 0; a < n; ++a)
        for (Vertex b = a + 1; b < n; ++b) all.emplace_back(a, b);
    std::vector<char> pick(all.size(), 0);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(n - 1), 1);
    std::vector<Vertex> parent(n);
    std::function<Vertex(Vertex)> find = [&](Vertex x) { return parent[x] == x ? x : parent[x] = find(parent[x]); };
    do {
        std::iota(parent.begin(), parent.end(), Vertex{0});
        std::vector<Edge> chosen;
        bool acyclic = true;
        for (std::size_t i = 0; i < all.size() && acyclic; ++i) {
            if (!pick[i]) continue;
            const Vertex ru = find(all[i].u), rv = find(all[i].v);
            if (ru == rv) acyclic = false;
            parent[ru] = rv;
            chosen.push_back(all[i]);
        }
        if (acyclic) f(chosen);
    } while (std::prev_permutation(pick.begin(), pick.end()));
}

inline double weight_of(const std::vector<Edge>& es, const PointSet& ps) {
    double w = 0.0;
    for (const auto& e : es) w += distance(ps[e.u], ps[e.v]);
    return w;
}

inline double bottleneck_of(const std::vector<Edge>& es, const PointSet& ps) {
    double b = 0.0;
    for (const auto& e : es) b = std::max(b, distance(ps[e.u], ps[e.v]));
    return b;
}

inline int max_degree_of(const std::vector<Edge>& es, std::size_t n) {
    std::vector<int> deg(n, 0);
    for (const auto& e : es) {
        ++deg[e.u];
        ++deg[e.v];
    }
    return *std::max_element(deg.begin(), deg.end());
}

}  // namespace dmst::testing
