// Acceptance suite: one PASS/FAIL line per criterion. Exit status is
// nonzero when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "dmst/dmst.hpp"

using namespace dmst;
using bench::RunRecord;

namespace {

constexpr std::uint64_t master_seed = 1;

struct Outcome {
    bool pass = true;
    std::string detail;
};

// every record produced anywhere in the suite, for the bound criterion
std::vector<RunRecord> all_records;

std::vector<std::uint64_t> seed_range(std::uint64_t first, std::size_t count) {
    std::vector<std::uint64_t> s(count);
    std::iota(s.begin(), s.end(), first);
    return s;
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

double mean_ratio(const std::vector<RunRecord>& rs, const std::string& algo, Objective o) {
    double s = 0.0;
    std::size_t c = 0;
    for (const auto& r : rs) {
        if (r.algorithm != algo) continue;
        s += o == Objective::weight ? r.weight / r.mst_weight : r.bottleneck / r.mst_bottleneck;
        ++c;
    }
    return c ? s / static_cast<double>(c) : std::nan("");
}

std::vector<RunRecord> run_cell(const std::vector<PointSet>& instances, int delta, const std::vector<std::string>& algos) {
    bench::RunOptions opt;
    opt.seed = master_seed;
    auto rs = bench::run_instances(instances, delta, algos, opt);
    all_records.insert(all_records.end(), rs.begin(), rs.end());
    return rs;
}

// ---------------------------------------------------------------------------

Outcome feasibility() {
    std::size_t runs = 0, failures = 0;
    std::string first;
    for (int delta = 2; delta <= 4; ++delta) {
        Rng rng(derive_seed(master_seed, 100, static_cast<std::uint64_t>(delta)));
        std::uniform_int_distribution<std::size_t> size(5, 60);
        bench::RunOptions opt;
        opt.seed = master_seed;
        for (std::size_t i = 0; i < 200; ++i) {
            const std::size_t n = size(rng);
            const bool special = special_supported(n) && std::bernoulli_distribution(0.5)(rng);
            const PointSet ps = bench::make_instance(special ? InstanceKind::special : InstanceKind::uniform, n, 10000 + i);
            for (const auto& name : bench::algorithms_for(delta)) {
                ++runs;
                try {
                    // run_one re-validates spanning, f = 0 and the MST ratio guards
                    all_records.push_back(bench::run_one(name, ps, delta, master_seed, i, opt));
                } catch (const std::exception& e) {
                    if (failures++ == 0) first = name + " on " + ps.id() + ": " + e.what();
                }
            }
        }
    }
    return {failures == 0, std::to_string(runs) + " runs, " + std::to_string(failures) + " infeasible" +
                               (first.empty() ? "" : " (first: " + first + ")")};
}

// Independent Pruefer decoding: minimum weight over all n^(n-2) labelled
// trees, each summed over its sorted edge list as Tree does.
double pruefer_minimum(const PointSet& ps) {
    const std::size_t n = ps.size();
    if (n == 2) return distance(ps[0], ps[1]);
    std::vector<Vertex> seq(n - 2, 0);
    double best = std::numeric_limits<double>::infinity();
    while (true) {
        std::vector<int> deg(n, 1);
        for (Vertex x : seq) ++deg[x];
        std::vector<Edge> edges;
        for (Vertex x : seq) {
            Vertex leaf = 0;
            while (deg[leaf] != 1) ++leaf;
            edges.emplace_back(leaf, x);
            --deg[leaf];
            --deg[x];
        }
        Vertex a = 0;
        while (deg[a] != 1) ++a;
        Vertex b = a + 1;
        while (deg[b] != 1) ++b;
        edges.emplace_back(a, b);
        std::sort(edges.begin(), edges.end());
        double w = 0.0;
        for (const auto& e : edges) w += distance(ps[e.u], ps[e.v]);
        best = std::min(best, w);
        std::size_t k = 0;
        while (k < seq.size() && ++seq[k] == n) seq[k++] = 0;
        if (k == seq.size()) break;
    }
    return best;
}

Outcome oracle_equivalence() {
    constexpr double eps = 1e-9;
    std::size_t checks = 0, violations = 0, mst_mismatch = 0, christofides_bad = 0;
    std::string first;
    bench::RunOptions opt;
    opt.seed = master_seed;
    for (std::size_t i = 0; i < 100; ++i) {
        const PointSet ps = bench::make_instance(InstanceKind::uniform, 4 + i % 5, 20000 + i);
        if (total_weight(mst(ps).tree, ps) != pruefer_minimum(ps)) ++mst_mismatch;
        for (int delta = 2; delta <= 4; ++delta) {
            const DegreeBound d(delta);
            const double ow = total_weight(exact_dmst(ps, d, Objective::weight), ps);
            const double ob = bottleneck(exact_dmst(ps, d, Objective::bottleneck), ps);
            for (const auto& name : bench::algorithms_for(delta)) {
                const RunRecord r = bench::run_one(name, ps, delta, master_seed, i, opt);
                all_records.push_back(r);
                ++checks;
                if (r.weight < ow * (1 - eps) || r.bottleneck < ob * (1 - eps)) {
                    if (violations++ == 0) first = name + " on " + ps.id();
                }
            }
        }
    }
    for (std::size_t i = 0; i < 100; ++i) {
        const PointSet ps = bench::make_instance(InstanceKind::uniform, 4 + i % 9, 30000 + i);
        const double opt_w = total_weight(exact_hampath(ps, Objective::weight), ps);
        if (total_weight(christofides_path(ps), ps) > 1.5 * opt_w * (1 + eps)) ++christofides_bad;
    }
    const bool pass = violations == 0 && mst_mismatch == 0 && christofides_bad == 0;
    return {pass, std::to_string(checks) + " heuristic-vs-exact checks, " + std::to_string(violations) +
                      " below optimum" + (first.empty() ? "" : " (first: " + first + ")") + "; mst != Pruefer min on " +
                      std::to_string(mst_mismatch) + "/100; Christofides > 1.5 x opt on " +
                      std::to_string(christofides_bad) + "/100"};
}

Outcome generator_soundness() {
    Rng rng(derive_seed(master_seed, 400));
    std::uniform_real_distribution<double> length(10.0, 1000.0);
    std::size_t bad_star = 0, bad_special = 0;
    for (int i = 0; i < 500; ++i) {
        const int D = 4 + i % 2;
        const double L = length(rng);
        const PointSet ps(generate_star_spec(D, L, rng).points());
        const Tree t = mst(ps).tree;
        const bool star = t.degree(0) == D;
        if (!star || std::abs(bottleneck(t, ps) - L) > 1e-6 * L) ++bad_star;
    }
    for (std::uint64_t s = 0; s < 50; ++s) {
        GenConfig cfg;
        cfg.n = 100;
        cfg.seed = derive_seed(master_seed, 401, s);
        const Tree t = mst(generate_special(cfg)).tree;
        int d4 = 0, d5 = 0;
        for (Vertex v = 0; v < t.size(); ++v) {
            d4 += t.degree(v) == 4;
            d5 += t.degree(v) == 5;
        }
        if (d4 < 10 || d5 < 5) ++bad_special;
    }
    return {bad_star == 0 && bad_special == 0, std::to_string(bad_star) + "/500 bad stars, " +
                                                   std::to_string(bad_special) + "/50 special instances short of stars"};
}

Outcome termination_measures() {
    std::size_t runs = 0, bad = 0;
    std::string first;
    for (int delta = 2; delta <= 4; ++delta) {
        const DegreeBound d(delta);
        for (std::size_t i = 0; i < 60; ++i) {
            const std::size_t n = 11 + (i * 7) % 50;
            const bool special = i % 2 && special_supported(n);
            const PointSet ps = bench::make_instance(special ? InstanceKind::special : InstanceKind::uniform, n, 40000 + i);
            const DistanceTable dist(ps);
            const Tree base = mst_tree(dist);
            const auto f0 = static_cast<std::size_t>(feasibility_error(base, d));
            for (const auto& r : {fls(dist, base, d), fwls(dist, base, d, Objective::weight),
                                  fwls(dist, base, d, Objective::bottleneck)}) {
                ++runs;
                if (r.iterations() > f0) {
                    if (bad++ == 0) first = "iterations > f(MST) on " + ps.id();
                }
            }
            const auto r = dnls(dist, base, d);
            ++runs;
            std::pair<std::size_t, long> prev{n, 0};
            for (const auto& st : r.steps) {
                const std::pair<std::size_t, long> cur{st.unlocked, st.locked_degree_sum};
                if (!(cur < prev)) {
                    if (bad++ == 0) first = "DNLS measure did not decrease on " + ps.id();
                    break;
                }
                prev = cur;
            }
        }
    }
    return {bad == 0, std::to_string(runs) + " searches, " + std::to_string(bad) + " violations" +
                          (first.empty() ? "" : " (first: " + first + ")")};
}

Outcome rpm_coherence() {
    std::size_t bad = 0;
    for (std::size_t i = 0; i < 100; ++i) {
        const PointSet ps = bench::make_instance(InstanceKind::uniform, 5 + i % 56, 50000 + i);
        for (int delta = 2; delta <= 4; ++delta) {
            const DegreeBound d(delta);
            if (!(rpm(ps, d, Chromosome(ps.size(), delta)) == delta_prim(ps, d))) ++bad;
        }
    }
    return {bad == 0, std::to_string(bad) + "/300 all-ones chromosomes differ from delta-Prim"};
}

Outcome delta2_statistics() {
    const auto inst = bench::make_suite(bench::SuiteKind::uniform, 100, seed_range(1, 30));
    const std::vector<std::string> swaps{"FLS", "FWLS", "FWLS-B", "BCLS", "DNLS"};
    std::vector<std::string> algos = swaps;
    algos.insert(algos.end(), {"DT", "Cube2"});
    const auto rs = run_cell(inst, 2, algos);
    const double cube = mean_ratio(rs, "Cube2", Objective::bottleneck);
    const double dt = mean_ratio(rs, "DT", Objective::bottleneck);
    const double bcls = mean_ratio(rs, "BCLS", Objective::weight);
    double swap_min = std::numeric_limits<double>::infinity();
    for (const auto& s : swaps) swap_min = std::min(swap_min, mean_ratio(rs, s, Objective::bottleneck));
    const bool cube_ok = std::abs(cube - 1.67) <= 0.12;
    const bool bcls_ok = std::abs(bcls - 1.24) <= 0.06;
    const bool order_ok = cube < dt && dt < swap_min;
    std::string d = "Cube2 b=" + fmt("%.4f", cube) + (cube_ok ? " ok" : " OUT") + "; BCLS w=" + fmt("%.4f", bcls) +
                    (bcls_ok ? " ok" : " OUT") + "; order Cube2 " + fmt("%.3f", cube) + " < DT " + fmt("%.3f", dt) +
                    " < min swap b " + fmt("%.3f", swap_min) + (order_ok ? " ok" : " VIOLATED");
    return {cube_ok && bcls_ok && order_ok, d};
}

Outcome delta3_statistics() {
    const auto inst = bench::make_suite(bench::SuiteKind::uniform_filtered, 100, seed_range(1, 100));
    const auto rs = run_cell(inst, 3, {"Prim", "KRY", "KRY-B"});
    const double w = mean_ratio(rs, "Prim", Objective::weight);
    const double b = mean_ratio(rs, "Prim", Objective::bottleneck);
    return {w <= 1.01 && b <= 1.01, std::to_string(inst.size()) + "/100 instances kept; 3-Prim w=" + fmt("%.5f", w) +
                                        " b=" + fmt("%.5f", b)};
}

Outcome delta4_statistics() {
    const auto inst = bench::make_suite(bench::SuiteKind::special, 100, seed_range(1, 30));
    const auto rs = run_cell(inst, 4, {"Chan4", "DNLS"});
    std::size_t exact = 0, chan = 0;
    for (const auto& r : rs) {
        if (r.algorithm != "Chan4") continue;
        ++chan;
        exact += r.bottleneck / r.mst_bottleneck == 1.0;
    }
    const double share = static_cast<double>(exact) / static_cast<double>(chan);
    const double dnls_w = mean_ratio(rs, "DNLS", Objective::weight);
    return {share >= 0.95 && dnls_w <= 1.002, "Chan4 b = MST b on " + std::to_string(exact) + "/" +
                                                  std::to_string(chan) + "; DNLS w=" + fmt("%.6f", dnls_w)};
}

Outcome generator_parity() {
    double s = 0.0;
    for (const auto& ps : bench::make_suite(bench::SuiteKind::uniform, 100, seed_range(1, 30)))
        s += total_weight(mst(ps).tree, ps);
    const double mean = s / 30.0;
    return {std::abs(mean - 67466.0) <= 0.05 * 67466.0, "mean MST weight " + fmt("%.1f", mean) + " vs 67466 +- 5%"};
}

// Evaluated last so that it sees every record produced above.
Outcome worst_case_bounds() {
    struct Bound {
        const char* algo;
        double weight, bottleneck;
    };
    const Bound bounds[] = {{"KRY", 1.5, 2.0}, {"KRY-B", 1.5, 2.0}, {"Chan4", 1.1381, 1.7321},
                            {"DT", 2.0, std::numeric_limits<double>::infinity()}, {"Cube2", 3.0, 3.0}};
    std::size_t checked = 0, bad = 0;
    std::string first;
    for (const auto& r : all_records) {
        for (const auto& b : bounds) {
            if (r.algorithm != b.algo) continue;
            ++checked;
            if (r.weight / r.mst_weight > b.weight || r.bottleneck / r.mst_bottleneck > b.bottleneck) {
                if (bad++ == 0) first = r.algorithm + " on " + r.instance_id;
            }
        }
    }
    return {bad == 0 && checked > 0, std::to_string(checked) + " bounded runs, " + std::to_string(bad) +
                                         " violations" + (first.empty() ? "" : " (first: " + first + ")")};
}

}  // namespace

int main() {
    using clock = std::chrono::steady_clock;
    struct Criterion {
        int id;
        const char* name;
        std::function<Outcome()> check;
    };
    const std::vector<Criterion> order = {
        {1, "feasibility", feasibility},
        {3, "oracle equivalence", oracle_equivalence},
        {4, "generator soundness", generator_soundness},
        {5, "termination measures", termination_measures},
        {6, "rpm / delta-Prim coherence", rpm_coherence},
        {7, "delta=2 n=100 uniform statistics", delta2_statistics},
        {8, "delta=3 n=100 filtered statistics", delta3_statistics},
        {9, "delta=4 n=100 special statistics", delta4_statistics},
        {10, "generator parity", generator_parity},
        {2, "worst-case bounds", worst_case_bounds},
    };
    std::map<int, std::string> lines;
    bool all = true;
    for (const auto& c : order) {
        const auto t0 = clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(clock::now() - t0).count();
        all = all && o.pass;
        std::ostringstream line;
        line << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << " ("
             << fmt("%.1f", secs) << " s)";
        lines[c.id] = line.str();
    }
    for (const auto& [id, line] : lines) std::puts(line.c_str());
    return all ? 0 : 1;
}
