#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "support.hpp"

using namespace dmst;
using namespace dmst::testing;

namespace {

PointSet regular_star(int D) {
    std::vector<Point> pts{{0, 0}};
    for (int i = 0; i < D; ++i) {
        const double a = 2 * std::numbers::pi * i / D;
        pts.push_back({std::cos(a), std::sin(a)});
    }
    return PointSet(pts);
}

// Brute force: every (tree edge, non-tree edge) pair whose exchange leaves a tree.
std::set<EdgeSwap> brute_neighbourhood(const Tree& t) {
    std::set<EdgeSwap> out;
    const auto n = static_cast<Vertex>(t.size());
    for (const Edge rem : t.edges()) {
        for (Vertex a = 0; a < n; ++a) {
            for (Vertex b = a + 1; b < n; ++b) {
                const Edge add(a, b);
                if (t.has_edge(add)) continue;
                std::vector<Edge> es;
                for (const Edge e : t.edges())
                    if (!(e == rem)) es.push_back(e);
                es.push_back(add);
                try {
                    Tree(t.size(), es);
                    out.insert({rem, add});
                } catch (const std::invalid_argument&) {
                }
            }
        }
    }
    return out;
}

}  // namespace

TEST(Neighbourhood, PathOfFourHasSevenSwaps) {
    const Tree t = make_tree(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_EQ(neighbourhood(t).size(), 7u);
}

TEST(Neighbourhood, ThreeVerticesHaveTwoSwaps) {
    EXPECT_EQ(neighbourhood(make_tree(3, {{0, 1}, {1, 2}})).size(), 2u);
    EXPECT_EQ(neighbourhood(star_tree(3)).size(), 2u);
}

TEST(Neighbourhood, MatchesBruteForce) {
    for (std::uint64_t s = 0; s < 20; ++s) {
        const PointSet ps = random_points(4 + s % 6, s);
        const Tree t = mst(ps).tree;
        const auto swaps = neighbourhood(t, ps);
        const std::set<EdgeSwap> got(swaps.begin(), swaps.end());
        EXPECT_EQ(got.size(), swaps.size()) << "duplicates";
        EXPECT_EQ(got, brute_neighbourhood(t));
        const std::size_t n = ps.size();
        EXPECT_LE(swaps.size(), (n * (n - 1) / 2 - (n - 1)) * (n - 1));
    }
}

TEST(ApplySwap, HandTrace) {
    const Tree t = make_tree(4, {{0, 1}, {1, 2}, {2, 3}});
    const Tree u = apply_swap(t, {Edge(1, 2), Edge(0, 2)});
    EXPECT_EQ(u, make_tree(4, {{0, 1}, {0, 2}, {2, 3}}));
    EXPECT_EQ(apply_swap(u, {Edge(0, 2), Edge(1, 2)}), t);
}

TEST(ApplySwap, RejectsInvalidSwaps) {
    const Tree t = make_tree(4, {{0, 1}, {1, 2}, {2, 3}});
    EXPECT_THROW(apply_swap(t, {Edge(1, 2), Edge(0, 1)}), std::invalid_argument);  // add present
    EXPECT_THROW(apply_swap(t, {Edge(2, 3), Edge(0, 2)}), std::invalid_argument);  // off the cycle
    EXPECT_THROW(apply_swap(t, {Edge(0, 3), Edge(0, 2)}), std::invalid_argument);  // remove absent
}

TEST(ApplySwap, EveryNeighbourIsATreeWithPredictedWeight) {
    const PointSet ps = random_points(9, 42);
    const DistanceTable dist(ps);
    const Tree t = mst(ps).tree;
    const SwapEvaluator eval(t, dist, DegreeBound(2));
    for (const auto& s : neighbourhood(t)) {
        const Tree u = apply_swap(t, s);
        EXPECT_NO_THROW(u.check_invariants());
        const SwapEval e = eval(s);
        EXPECT_NEAR(total_weight(u, dist), total_weight(t, dist) + e.weight_delta, 1e-9);
        EXPECT_DOUBLE_EQ(bottleneck(u, dist), e.bottleneck);
        EXPECT_EQ(feasibility_error(u, DegreeBound(2)), e.feasibility_error);
    }
}

TEST(Fls, FeasibleMstUnchanged) {
    const PointSet ps = points({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
    const auto r = fls(ps, DegreeBound(2));
    EXPECT_EQ(r.iterations(), 0u);
    EXPECT_EQ(r.tree, mst(ps).tree);
    EXPECT_EQ(fwls(ps, DegreeBound(2)).tree, mst(ps).tree);
    EXPECT_EQ(bcls(ps, DegreeBound(2)).tree, mst(ps).tree);
    EXPECT_EQ(dnls(ps, DegreeBound(2)).iterations(), 0u);
}

TEST(Fls, SymmetricStarNeedsOneSwap) {
    const auto r = fls(regular_star(4), DegreeBound(3));
    EXPECT_EQ(r.iterations(), 1u);
    EXPECT_EQ(r.steps[0].feasibility_error, 0);
}

TEST(Fwls, SymmetricStarCheapestSwap) {
    const PointSet ps = regular_star(4);
    const auto r = fwls(ps, DegreeBound(3), Objective::weight);
    EXPECT_EQ(r.iterations(), 1u);
    EXPECT_NEAR(total_weight(r.tree, ps), 4 - 1 + std::sqrt(2.0), 1e-12);
}

TEST(Dnls, LockTransitionsOnFiveStar) {
    const auto r = dnls(regular_star(5), DegreeBound(3));
    ASSERT_EQ(r.iterations(), 2u);
    // first swap: centre 5 -> 4, locked; second: 4 -> 3, semi-locked
    EXPECT_EQ(r.steps[0].locked_degree_sum, 4);
    EXPECT_EQ(r.steps[0].unlocked, 5u);
    EXPECT_EQ(r.steps[1].locked_degree_sum, 0);
    EXPECT_EQ(r.steps[1].feasibility_error, 0);
    EXPECT_EQ(r.tree.degree(0), 3);
}

TEST(LockState, Transitions) {
    const Tree before = star_tree(6);
    LockState locks(6);
    const EdgeSwap s{Edge(0, 1), Edge(1, 2)};
    const DegreeDelta dd(s);
    EXPECT_TRUE(locks.admits(before, dd, DegreeBound(3)));
    const Tree after = apply_swap(before, s);
    locks.update(dd, after, DegreeBound(3));
    EXPECT_EQ(locks[0], Lock::locked);
    EXPECT_EQ(locks.unlocked_count(), 5u);
    EXPECT_EQ(locks.locked_degree_sum(after), 4);
    EXPECT_NO_THROW(locks.check(after, DegreeBound(3)));
    // raising the locked centre is refused
    EXPECT_FALSE(locks.admits(after, DegreeDelta({Edge(1, 2), Edge(0, 1)}), DegreeBound(3)));
}

TEST(Searches, PropertiesOnRandomInstances) {
    for (std::uint64_t s = 0; s < 30; ++s) {
        const PointSet ps = random_points(10 + s % 25, 500 + s);
        const DistanceTable dist(ps);
        const Tree base = mst(ps).tree;
        const double w0 = total_weight(base, dist), b0 = bottleneck(base, dist);
        for (int delta = 2; delta <= 4; ++delta) {
            const DegreeBound d(delta);
            const int f0 = feasibility_error(base, d);
            const SearchResult rs[] = {fls(ps, d), fwls(ps, d, Objective::weight), fwls(ps, d, Objective::bottleneck),
                                       bcls(ps, d), dnls(ps, d)};
            for (int k = 0; k < 5; ++k) {
                const auto& r = rs[k];
                EXPECT_EQ(feasibility_error(r.tree, d), 0);
                EXPECT_NO_THROW(r.tree.check_invariants());
                EXPECT_GE(total_weight(r.tree, dist), w0 - 1e-9);
                EXPECT_GE(bottleneck(r.tree, dist), b0 - 1e-9);
                if (k < 3) {
                    EXPECT_LE(r.iterations(), static_cast<std::size_t>(f0));
                    int prev = f0;
                    for (const auto& st : r.steps) {
                        EXPECT_LT(st.feasibility_error, prev);
                        prev = st.feasibility_error;
                    }
                }
            }
            std::pair<std::size_t, long> prev{ps.size(), 0};
            for (const auto& st : rs[4].steps) {
                const std::pair<std::size_t, long> cur{st.unlocked, st.locked_degree_sum};
                EXPECT_LT(cur, prev);
                prev = cur;
            }
            EXPECT_EQ(fwls(ps, d).tree, rs[1].tree) << "deterministic";
        }
    }
}

TEST(Searches, NeverBeatExactOptimum) {
    for (std::uint64_t s = 0; s < 15; ++s) {
        const PointSet ps = random_points(5 + s % 4, 900 + s);
        for (int delta = 2; delta <= 3; ++delta) {
            const DegreeBound d(delta);
            const double ow = total_weight(exact_dmst(ps, d, Objective::weight), ps);
            const double ob = bottleneck(exact_dmst(ps, d, Objective::bottleneck), ps);
            for (const auto& r : {fls(ps, d), fwls(ps, d), fwls(ps, d, Objective::bottleneck), bcls(ps, d), dnls(ps, d)}) {
                EXPECT_GE(total_weight(r.tree, ps), ow - 1e-9);
                EXPECT_GE(bottleneck(r.tree, ps), ob - 1e-9);
            }
        }
    }
}
