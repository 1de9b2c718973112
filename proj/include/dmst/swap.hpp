#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <vector>

#include "dmst/core.hpp"
#include "dmst/mst.hpp"

namespace dmst {

/// Replace tree edge `remove` by non-tree edge `add`.
struct EdgeSwap {
    Edge remove;
    Edge add;

    friend auto operator<=>(const EdgeSwap&, const EdgeSwap&) = default;
    friend bool operator==(const EdgeSwap&, const EdgeSwap&) = default;
};

/// All-roots parent table of a tree, used to walk the unique tree path
/// between the endpoints of a candidate edge.
class PathIndex {
public:
    explicit PathIndex(const Tree& t) : n_(t.size()), parent_(n_ * n_, 0) {
        std::vector<Vertex> queue(n_);
        for (Vertex r = 0; r < n_; ++r) {
            Vertex* par = &parent_[std::size_t{r} * n_];
            par[r] = r;
            std::size_t head = 0, tail = 0;
            queue[tail++] = r;
            while (head < tail) {
                const Vertex x = queue[head++];
                for (Vertex y : t.neighbours(x)) {
                    if (y != par[x]) {
                        par[y] = x;
                        queue[tail++] = y;
                    }
                }
            }
        }
    }

    /// Calls f(Edge) for every tree edge on the path from b to a.
    template <class F>
    void for_each_path_edge(Vertex a, Vertex b, F&& f) const {
        const Vertex* par = &parent_[std::size_t{a} * n_];
        for (Vertex v = b; v != a; v = par[v]) f(Edge(v, par[v]));
    }

    bool on_path(Vertex a, Vertex b, const Edge& e) const {
        bool found = false;
        for_each_path_edge(a, b, [&](const Edge& x) { found = found || x == e; });
        return found;
    }

private:
    std::size_t n_;
    std::vector<Vertex> parent_;
};

/// Visits every neighbour of `t` as an EdgeSwap: each non-tree edge paired
/// with each tree edge on the cycle it closes.
template <class F>
void for_each_swap(const Tree& t, const PathIndex& paths, F&& f) {
    const auto n = static_cast<Vertex>(t.size());
    for (Vertex a = 0; a < n; ++a) {
        for (Vertex b = a + 1; b < n; ++b) {
            const Edge add(a, b);
            if (t.has_edge(add)) continue;
            paths.for_each_path_edge(a, b, [&](const Edge& rem) { f(EdgeSwap{rem, add}); });
        }
    }
}

template <class F>
void for_each_swap(const Tree& t, F&& f) {
    for_each_swap(t, PathIndex(t), std::forward<F>(f));
}

inline std::vector<EdgeSwap> neighbourhood(const Tree& t) {
    std::vector<EdgeSwap> out;
    for_each_swap(t, [&](const EdgeSwap& s) { out.push_back(s); });
    return out;
}

inline std::vector<EdgeSwap> neighbourhood(const Tree& t, const PointSet& ps) {
    require_spans(t, ps);
    return neighbourhood(t);
}

/// Checked swap: `add` must be absent and `remove` must lie on its cycle.
inline Tree apply_swap(const Tree& t, const EdgeSwap& s) {
    if (s.add.v >= t.size() || s.remove.v >= t.size()) throw std::invalid_argument("swap endpoint out of range");
    if (t.has_edge(s.add)) throw std::invalid_argument("swap adds an edge already in the tree");
    if (!t.has_edge(s.remove)) throw std::invalid_argument("swap removes an edge not in the tree");
    if (!PathIndex(t).on_path(s.add.u, s.add.v, s.remove)) {
        throw std::invalid_argument("removed edge is not on the cycle closed by the added edge");
    }
    Tree out = t;
    out.exchange(s.remove, s.add);
    return out;
}

/// Net degree change of a swap: at most four touched vertices.
struct DegreeDelta {
    std::array<Vertex, 4> vertex{};
    std::array<int, 4> change{};
    int count = 0;

    explicit DegreeDelta(const EdgeSwap& s) {
        bump(s.add.u, +1);
        bump(s.add.v, +1);
        bump(s.remove.u, -1);
        bump(s.remove.v, -1);
    }

private:
    void bump(Vertex v, int c) {
        for (int i = 0; i < count; ++i) {
            if (vertex[i] == v) {
                change[i] += c;
                return;
            }
        }
        vertex[count] = v;
        change[count] = c;
        ++count;
    }
};

/// Objective values of a neighbour, computed in O(1) from the current tree.
struct SwapEval {
    EdgeSwap swap;
    double weight_delta = 0.0;
    double bottleneck = 0.0;
    int feasibility_error = 0;
};

class SwapEvaluator {
public:
    SwapEvaluator(const Tree& t, const DistanceTable& dist, DegreeBound d)
        : tree_(t), dist_(dist), delta_(d), f_(dmst::feasibility_error(t, d)) {
        for (const auto& e : t.edges()) {
            if (!have_max_ || edge_less(dist, max_edge_, e)) {
                second_len_ = have_max_ ? dist(max_edge_) : 0.0;
                max_edge_ = e;
                have_max_ = true;
            } else {
                second_len_ = std::max(second_len_, dist(e));
            }
        }
    }

    int feasibility_error() const { return f_; }

    SwapEval operator()(const EdgeSwap& s) const {
        const double add_len = dist_(s.add);
        const double rem_len = dist_(s.remove);
        const double rest = s.remove == max_edge_ ? second_len_ : dist_(max_edge_);
        const DegreeDelta dd(s);
        int f = f_;
        for (int i = 0; i < dd.count; ++i) {
            const int g = tree_.degree(dd.vertex[i]);
            f += std::max(g + dd.change[i] - delta_.delta, 0) - std::max(g - delta_.delta, 0);
        }
        return {s, add_len - rem_len, std::max(rest, add_len), f};
    }

private:
    const Tree& tree_;
    const DistanceTable& dist_;
    DegreeBound delta_;
    int f_;
    Edge max_edge_{};
    bool have_max_ = false;
    double second_len_ = 0.0;
};

/// One accepted move of a local search, recorded after the move.
struct SearchStep {
    EdgeSwap swap;
    int feasibility_error = 0;
    double weight = 0.0;
    double bottleneck = 0.0;
    // lock bookkeeping; only filled in by dnls
    std::size_t unlocked = 0;
    long locked_degree_sum = 0;
};

struct SearchResult {
    Tree tree;
    std::vector<SearchStep> steps;

    std::size_t iterations() const { return steps.size(); }
};

namespace detail {

template <class Accept, class Less>
std::optional<SwapEval> best_swap(const Tree& t, const SwapEvaluator& eval, Accept&& accept, Less&& less) {
    std::optional<SwapEval> best;
    for_each_swap(t, [&](const EdgeSwap& s) {
        const SwapEval e = eval(s);
        if (!accept(e)) return;
        if (!best || less(e, *best)) best = e;
    });
    return best;
}

inline bool by_weight(const SwapEval& a, const SwapEval& b) {
    if (a.weight_delta != b.weight_delta) return a.weight_delta < b.weight_delta;
    if (a.bottleneck != b.bottleneck) return a.bottleneck < b.bottleneck;
    return a.swap < b.swap;
}

inline bool by_bottleneck(const SwapEval& a, const SwapEval& b) {
    if (a.bottleneck != b.bottleneck) return a.bottleneck < b.bottleneck;
    if (a.weight_delta != b.weight_delta) return a.weight_delta < b.weight_delta;
    return a.swap < b.swap;
}

inline bool by_feasibility(const SwapEval& a, const SwapEval& b) {
    if (a.feasibility_error != b.feasibility_error) return a.feasibility_error < b.feasibility_error;
    return by_weight(a, b);
}

inline SearchStep record(const Tree& t, const DistanceTable& dist, DegreeBound d, const EdgeSwap& s) {
    return {s, feasibility_error(t, d), total_weight(t, dist), bottleneck(t, dist)};
}

inline std::logic_error no_move() { return std::logic_error("local search found no admissible swap"); }

}  // namespace detail

/// Feasibility local search: always move to the neighbour with the smallest
/// feasibility error (then weight, then lexicographic swap).
inline SearchResult fls(const DistanceTable& dist, Tree t, DegreeBound d) {
    SearchResult res;
    while (feasibility_error(t, d) > 0) {
        const SwapEvaluator eval(t, dist, d);
        auto best = detail::best_swap(t, eval, [](const SwapEval&) { return true; }, detail::by_feasibility);
        if (!best || best->feasibility_error >= eval.feasibility_error()) throw detail::no_move();
        t.exchange(best->swap.remove, best->swap.add);
        res.steps.push_back(detail::record(t, dist, d, best->swap));
    }
    res.tree = std::move(t);
    return res;
}

inline SearchResult fls(const PointSet& ps, DegreeBound d) {
    const DistanceTable dist(ps);
    return fls(dist, mst_tree(dist), d);
}

/// Feasibility-weight local search: among neighbours with strictly smaller
/// feasibility error pick the lightest (or the smallest bottleneck).
inline SearchResult fwls(const DistanceTable& dist, Tree t, DegreeBound d, Objective objective) {
    SearchResult res;
    while (feasibility_error(t, d) > 0) {
        const SwapEvaluator eval(t, dist, d);
        const int f = eval.feasibility_error();
        auto strict = [f](const SwapEval& e) { return e.feasibility_error < f; };
        auto best = objective == Objective::weight ? detail::best_swap(t, eval, strict, detail::by_weight)
                                                   : detail::best_swap(t, eval, strict, detail::by_bottleneck);
        if (!best) throw detail::no_move();
        t.exchange(best->swap.remove, best->swap.add);
        res.steps.push_back(detail::record(t, dist, d, best->swap));
    }
    res.tree = std::move(t);
    return res;
}

inline SearchResult fwls(const PointSet& ps, DegreeBound d, Objective objective = Objective::weight) {
    const DistanceTable dist(ps);
    return fwls(dist, mst_tree(dist), d, objective);
}

/// Relative tolerance under which a BCLS move counts as "no lighter".
inline constexpr double bcls_stall_tolerance = 1e-12;

/// Bi-criteria local search. Moves to the lightest neighbour whose
/// feasibility error does not grow, as long as that neighbour is strictly
/// lighter than the current tree; otherwise (stall) takes one strictly
/// feasibility-improving FWLS step.
inline SearchResult bcls(const DistanceTable& dist, Tree t, DegreeBound d) {
    SearchResult res;
    while (feasibility_error(t, d) > 0) {
        const SwapEvaluator eval(t, dist, d);
        const int f = eval.feasibility_error();
        const double w = total_weight(t, dist);
        auto relaxed = [f](const SwapEval& e) { return e.feasibility_error <= f; };
        auto best = detail::best_swap(t, eval, relaxed, detail::by_weight);
        const bool stalled = !best || best->weight_delta >= -bcls_stall_tolerance * w;
        if (stalled) {
            auto strict = [f](const SwapEval& e) { return e.feasibility_error < f; };
            best = detail::best_swap(t, eval, strict, detail::by_weight);
        }
        if (!best) throw detail::no_move();
        t.exchange(best->swap.remove, best->swap.add);
        res.steps.push_back(detail::record(t, dist, d, best->swap));
    }
    res.tree = std::move(t);
    return res;
}

inline SearchResult bcls(const PointSet& ps, DegreeBound d) {
    const DistanceTable dist(ps);
    return bcls(dist, mst_tree(dist), d);
}

enum class Lock : unsigned char { unlocked, locked, semi_locked };

/// Partition of the vertices used by the diminishing-neighbourhood search.
class LockState {
public:
    explicit LockState(std::size_t n) : state_(n, Lock::unlocked), unlocked_(n) {}

    Lock operator[](Vertex v) const { return state_[v]; }
    std::size_t unlocked_count() const { return unlocked_; }

    long locked_degree_sum(const Tree& t) const {
        long s = 0;
        for (Vertex v = 0; v < state_.size(); ++v)
            if (state_[v] == Lock::locked) s += t.degree(v);
        return s;
    }

    /// Candidate filter: the swap lowers the degree of some overloaded vertex
    /// and raises neither a locked vertex nor a semi-locked one at delta.
    bool admits(const Tree& t, const DegreeDelta& dd, DegreeBound d) const {
        bool relieves = false;
        for (int i = 0; i < dd.count; ++i) {
            const Vertex v = dd.vertex[i];
            const int g = t.degree(v);
            if (dd.change[i] < 0 && g > d.delta) relieves = true;
            if (dd.change[i] > 0) {
                if (state_[v] == Lock::locked) return false;
                if (state_[v] == Lock::semi_locked && g >= d.delta) return false;
            }
        }
        return relieves;
    }

    /// Transition rules applied to every vertex whose degree dropped;
    /// `degree_after` is read from the post-swap tree.
    void update(const DegreeDelta& dd, const Tree& after, DegreeBound d) {
        for (int i = 0; i < dd.count; ++i) {
            if (dd.change[i] >= 0) continue;
            const Vertex v = dd.vertex[i];
            const int g = after.degree(v);
            if (state_[v] == Lock::unlocked) {
                --unlocked_;
                state_[v] = g > d.delta ? Lock::locked : Lock::semi_locked;
            } else if (state_[v] == Lock::locked && g == d.delta) {
                state_[v] = Lock::semi_locked;
            }
        }
    }

    void check(const Tree& t, DegreeBound d) const {
        for (Vertex v = 0; v < state_.size(); ++v) {
            if (state_[v] == Lock::locked && t.degree(v) <= d.delta) throw std::logic_error("locked vertex not overloaded");
            if (state_[v] == Lock::semi_locked && t.degree(v) > d.delta) throw std::logic_error("semi-locked vertex overloaded");
        }
    }

private:
    std::vector<Lock> state_;
    std::size_t unlocked_;
};

/// Diminishing neighbourhood local search.
inline SearchResult dnls(const DistanceTable& dist, Tree t, DegreeBound d) {
    SearchResult res;
    LockState locks(t.size());
    while (feasibility_error(t, d) > 0) {
        const SwapEvaluator eval(t, dist, d);
        auto admissible = [&](const SwapEval& e) { return locks.admits(t, DegreeDelta(e.swap), d); };
        auto best = detail::best_swap(t, eval, admissible, detail::by_weight);
        if (!best) throw detail::no_move();
        t.exchange(best->swap.remove, best->swap.add);
        locks.update(DegreeDelta(best->swap), t, d);
#ifndef NDEBUG
        locks.check(t, d);
#endif
        SearchStep step = detail::record(t, dist, d, best->swap);
        step.unlocked = locks.unlocked_count();
        step.locked_degree_sum = locks.locked_degree_sum(t);
        res.steps.push_back(step);
    }
    res.tree = std::move(t);
    return res;
}

inline SearchResult dnls(const PointSet& ps, DegreeBound d) {
    const DistanceTable dist(ps);
    return dnls(dist, mst_tree(dist), d);
}

}  // namespace dmst
