#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <random>
#include <stdexcept>
#include <vector>

#include "dmst/core.hpp"
#include "dmst/gen.hpp"

namespace dmst {

/// delta-Prim's: Prim growth where only tree vertices with degree < delta
/// may receive the next edge. Ties follow the (length, u, v) edge order.
inline Tree delta_prim(const DistanceTable& dist, DegreeBound d, Vertex start = 0) {
    const std::size_t n = dist.size();
    if (n < 2) throw std::invalid_argument("delta_prim needs at least 2 points");
    if (start >= n) throw std::invalid_argument("start vertex out of range");
    std::vector<char> in_tree(n, 0);
    std::vector<int> degree(n, 0);
    std::vector<Vertex> members{start};
    std::vector<Edge> edges;
    in_tree[start] = 1;

    while (edges.size() + 1 < n) {
        bool found = false;
        Edge best;
        Vertex best_out = 0;
        for (Vertex u : members) {
            if (degree[u] >= d.delta) continue;
            for (Vertex v = 0; v < n; ++v) {
                if (in_tree[v]) continue;
                const Edge e(u, v);
                if (!found || edge_less(dist, e, best)) {
                    best = e;
                    best_out = v;
                    found = true;
                }
            }
        }
        if (!found) throw std::logic_error("delta_prim: no admissible edge");
        in_tree[best_out] = 1;
        members.push_back(best_out);
        ++degree[best.u];
        ++degree[best.v];
        edges.push_back(best);
    }
    return Tree(n, std::move(edges));
}

inline Tree delta_prim(const PointSet& ps, DegreeBound d, Vertex start = 0) {
    return delta_prim(DistanceTable(ps), d, start);
}

/// Tabular chromosome: n rows by delta columns of 1-based allele ranks.
class Chromosome {
public:
    Chromosome(std::size_t n, int delta, int fill = 1) : n_(n), delta_(delta), a_(n * delta, fill) {
        if (fill < 1 || static_cast<std::size_t>(fill) > n) throw std::invalid_argument("allele out of range");
    }

    std::size_t rows() const { return n_; }
    int cols() const { return delta_; }

    int operator()(std::size_t row, int col) const { return a_[row * delta_ + col]; }

    void set(std::size_t row, int col, int allele) {
        if (allele < 1 || static_cast<std::size_t>(allele) > n_) throw std::invalid_argument("allele out of range");
        a_[row * delta_ + col] = allele;
    }

    friend bool operator==(const Chromosome&, const Chromosome&) = default;

private:
    std::size_t n_;
    int delta_;
    std::vector<int> a_;
};

/// Geometric allele law P(k) proportional to (1 - p) p^(k - 1), truncated to
/// [1, n] by rejection.
class AlleleSampler {
public:
    explicit AlleleSampler(std::size_t n, double p = 0.5) : n_(n), geo_(1.0 - p) {
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("allele parameter must lie in (0,1)");
    }

    int operator()(Rng& rng) {
        while (true) {
            const auto k = static_cast<std::size_t>(geo_(rng)) + 1;
            if (k <= n_) return static_cast<int>(k);
        }
    }

private:
    std::size_t n_;
    std::geometric_distribution<long long> geo_;
};

inline Chromosome chromosome_init(std::size_t n, DegreeBound d, Rng& rng, double p = 0.5) {
    AlleleSampler draw(n, p);
    Chromosome c(n, d.delta);
    for (std::size_t i = 0; i < n; ++i)
        for (int j = 0; j < d.delta; ++j) c.set(i, j, draw(rng));
    return c;
}

/// Copy of `c` with one uniformly chosen cell redrawn.
inline Chromosome chromosome_neighbour(const Chromosome& c, Rng& rng, double p = 0.5) {
    AlleleSampler draw(c.rows(), p);
    Chromosome out = c;
    const auto cell = std::uniform_int_distribution<std::size_t>(0, c.rows() * c.cols() - 1)(rng);
    out.set(cell / c.cols(), static_cast<int>(cell % c.cols()), draw(rng));
    return out;
}

/// Per-vertex neighbour lists sorted by (distance, index), shared by every
/// RPM evaluation on one instance.
class RankedNeighbours {
public:
    explicit RankedNeighbours(const DistanceTable& dist) : n_(dist.size()), order_(n_ * (n_ - 1)) {
        for (Vertex i = 0; i < n_; ++i) {
            Vertex* row = &order_[std::size_t{i} * (n_ - 1)];
            std::size_t k = 0;
            for (Vertex j = 0; j < n_; ++j)
                if (j != i) row[k++] = j;
            std::sort(row, row + (n_ - 1), [&](Vertex a, Vertex b) {
                const double da = dist(i, a), db = dist(i, b);
                return da != db ? da < db : a < b;
            });
        }
    }

    std::size_t size() const { return n_; }
    std::span<const Vertex> of(Vertex i) const { return {&order_[std::size_t{i} * (n_ - 1)], n_ - 1}; }

private:
    std::size_t n_;
    std::vector<Vertex> order_;
};

/// Randomised primal method: each tree vertex i with spare degree nominates
/// the a(i, deg(i))-th shortest edge to a vertex outside the tree (the last
/// one if the list is shorter), and the shortest nominee is added.
inline Tree rpm(const DistanceTable& dist, const RankedNeighbours& ranked, DegreeBound d, const Chromosome& c,
                Vertex start = 0) {
    const std::size_t n = dist.size();
    if (c.rows() != n || c.cols() != d.delta) throw std::invalid_argument("chromosome dimensions do not match");
    if (start >= n) throw std::invalid_argument("start vertex out of range");
    std::vector<char> in_tree(n, 0);
    std::vector<int> degree(n, 0);
    // front/back cursors skip list entries already absorbed into the tree
    std::vector<std::size_t> front(n, 0), back(n, n - 2);
    std::vector<Vertex> members{start};
    std::vector<Edge> edges;
    in_tree[start] = 1;

    while (edges.size() + 1 < n) {
        const std::size_t outside = n - members.size();
        bool found = false;
        Edge best;
        Vertex best_out = 0;
        for (Vertex i : members) {
            if (degree[i] >= d.delta) continue;
            const auto list = ranked.of(i);
            const auto want = static_cast<std::size_t>(c(i, degree[i]));
            Vertex pick;
            if (want >= outside) {
                while (in_tree[list[back[i]]]) --back[i];
                pick = list[back[i]];
            } else {
                while (in_tree[list[front[i]]]) ++front[i];
                std::size_t seen = 0, k = front[i];
                for (;; ++k) {
                    if (!in_tree[list[k]] && ++seen == want) break;
                }
                pick = list[k];
            }
            const Edge e(i, pick);
            if (!found || edge_less(dist, e, best)) {
                best = e;
                best_out = pick;
                found = true;
            }
        }
        if (!found) throw std::logic_error("rpm: no admissible edge");
        in_tree[best_out] = 1;
        members.push_back(best_out);
        ++degree[best.u];
        ++degree[best.v];
        edges.push_back(best);
    }
    return Tree(n, std::move(edges));
}

inline Tree rpm(const PointSet& ps, DegreeBound d, const Chromosome& c, Vertex start = 0) {
    const DistanceTable dist(ps);
    return rpm(dist, RankedNeighbours(dist), d, c, start);
}

struct MhcParams {
    std::size_t m = 5000;
    std::size_t r = 250;
    std::uint64_t seed = 0;
    double allele_p = 0.5;
    Vertex start = 0;
};

struct MhcResult {
    Tree tree;
    double weight = 0.0;
    std::size_t evaluations = 0;
    std::size_t resets = 0;
    /// weight of every RPM evaluation in order
    std::vector<double> evaluated;
};

/// Multistart hill climbing over RPM chromosomes. `r` consecutive failures
/// to improve the incumbent trigger a restart from a fresh chromosome; the
/// best tree over all evaluations is returned.
inline MhcResult mhc(const DistanceTable& dist, DegreeBound d, const MhcParams& p) {
    if (p.m < 1 || p.r < 1) throw std::invalid_argument("mhc parameters must be positive");
    const std::size_t n = dist.size();
    const RankedNeighbours ranked(dist);
    Rng rng(p.seed);
    MhcResult res;

    auto evaluate = [&](const Chromosome& c) {
        Tree t = rpm(dist, ranked, d, c, p.start);
        const double w = total_weight(t, dist);
        ++res.evaluations;
        res.evaluated.push_back(w);
        if (res.evaluations == 1 || w < res.weight) {
            res.tree = t;
            res.weight = w;
        }
        return std::pair{std::move(t), w};
    };

    Chromosome a = chromosome_init(n, d, rng, p.allele_p);
    double incumbent = evaluate(a).second;
    std::size_t failures = 1;
    for (std::size_t iter = 1; iter <= p.m; ++iter) {
        Chromosome next = chromosome_neighbour(a, rng, p.allele_p);
        const double w = evaluate(next).second;
        if (w < incumbent) {
            incumbent = w;
            a = std::move(next);
            failures = 1;
        } else if (++failures > p.r) {
            a = chromosome_init(n, d, rng, p.allele_p);
            incumbent = evaluate(a).second;
            failures = 1;
            ++res.resets;
        }
    }
    return res;
}

inline MhcResult mhc(const PointSet& ps, DegreeBound d, const MhcParams& p = {}) { return mhc(DistanceTable(ps), d, p); }

}  // namespace dmst
