#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cctype>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include "dmst/approx.hpp"
#include "dmst/construct.hpp"
#include "dmst/core.hpp"
#include "dmst/gen.hpp"
#include "dmst/hampath.hpp"
#include "dmst/mst.hpp"
#include "dmst/swap.hpp"

namespace dmst::bench {

struct AlgoOutput {
    Tree tree;
    std::size_t iterations = 0;
};

struct RunOptions {
    std::uint64_t seed = 0;
    std::size_t mhc_m = 5000;
    std::size_t mhc_r = 250;
    unsigned threads = 1;
};

struct Algorithm {
    std::string name;
    std::vector<int> deltas;
    std::function<AlgoOutput(const PointSet&, const DistanceTable&, DegreeBound, std::uint64_t seed, const RunOptions&)> run;

    bool supports(int delta) const { return std::find(deltas.begin(), deltas.end(), delta) != deltas.end(); }
};

namespace detail {

inline AlgoOutput from_search(SearchResult r) { return {std::move(r.tree), r.iterations()}; }

inline std::vector<Algorithm> make_registry() {
    const std::vector<int> any{2, 3, 4};
    std::vector<Algorithm> a;
    a.push_back({"FLS", any, [](const PointSet&, const DistanceTable& d, DegreeBound b, std::uint64_t, const RunOptions&) {
                     return from_search(fls(d, mst_tree(d), b));
                 }});
    a.push_back({"FWLS", any, [](const PointSet&, const DistanceTable& d, DegreeBound b, std::uint64_t, const RunOptions&) {
                     return from_search(fwls(d, mst_tree(d), b, Objective::weight));
                 }});
    a.push_back({"FWLS-B", any,
                 [](const PointSet&, const DistanceTable& d, DegreeBound b, std::uint64_t, const RunOptions&) {
                     return from_search(fwls(d, mst_tree(d), b, Objective::bottleneck));
                 }});
    a.push_back({"BCLS", any, [](const PointSet&, const DistanceTable& d, DegreeBound b, std::uint64_t, const RunOptions&) {
                     return from_search(bcls(d, mst_tree(d), b));
                 }});
    a.push_back({"DNLS", any, [](const PointSet&, const DistanceTable& d, DegreeBound b, std::uint64_t, const RunOptions&) {
                     return from_search(dnls(d, mst_tree(d), b));
                 }});
    a.push_back({"Prim", any, [](const PointSet&, const DistanceTable& d, DegreeBound b, std::uint64_t, const RunOptions&) {
                     return AlgoOutput{delta_prim(d, b), 0};
                 }});
    a.push_back({"MHC", any,
                 [](const PointSet&, const DistanceTable& d, DegreeBound b, std::uint64_t seed, const RunOptions& o) {
                     MhcParams p;
                     p.m = o.mhc_m;
                     p.r = o.mhc_r;
                     p.seed = seed;
                     auto r = mhc(d, b, p);
                     return AlgoOutput{std::move(r.tree), r.evaluations};
                 }});
    a.push_back({"DT", {2}, [](const PointSet& ps, const DistanceTable&, DegreeBound, std::uint64_t, const RunOptions&) {
                     return AlgoOutput{double_tree(ps), 0};
                 }});
    a.push_back({"Christofides", {2},
                 [](const PointSet& ps, const DistanceTable&, DegreeBound, std::uint64_t, const RunOptions&) {
                     return AlgoOutput{christofides_path(ps), 0};
                 }});
    a.push_back({"Cube2", {2}, [](const PointSet& ps, const DistanceTable&, DegreeBound, std::uint64_t, const RunOptions&) {
                     return AlgoOutput{cube2(ps), 0};
                 }});
    a.push_back({"KRY", {3}, [](const PointSet& ps, const DistanceTable&, DegreeBound, std::uint64_t, const RunOptions&) {
                     return AlgoOutput{kry(ps, Objective::weight), 0};
                 }});
    a.push_back({"KRY-B", {3}, [](const PointSet& ps, const DistanceTable&, DegreeBound, std::uint64_t, const RunOptions&) {
                     return AlgoOutput{kry(ps, Objective::bottleneck), 0};
                 }});
    a.push_back({"Chan4", {4}, [](const PointSet& ps, const DistanceTable&, DegreeBound, std::uint64_t, const RunOptions&) {
                     return AlgoOutput{chan4(ps), 0};
                 }});
    return a;
}

inline std::string lower(std::string s) {
    for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return s;
}

}  // namespace detail

/// Every benchmarked algorithm, in a fixed order; the position is the
/// algorithm index used for seeding.
inline const std::vector<Algorithm>& registry() {
    static const std::vector<Algorithm> r = detail::make_registry();
    return r;
}

inline std::size_t algorithm_index(const std::string& name) {
    const auto& r = registry();
    for (std::size_t i = 0; i < r.size(); ++i)
        if (detail::lower(r[i].name) == detail::lower(name)) return i;
    throw std::invalid_argument("unknown algorithm: " + name);
}

inline std::vector<std::string> algorithms_for(int delta) {
    std::vector<std::string> out;
    for (const auto& a : registry())
        if (a.supports(delta)) out.push_back(a.name);
    return out;
}

/// Parses "all" or a comma-separated list, rejecting names that do not run
/// at this degree bound.
inline std::vector<std::string> parse_algorithms(const std::string& spec, int delta) {
    if (detail::lower(spec) == "all") return algorithms_for(delta);
    std::vector<std::string> out;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        const auto& a = registry()[algorithm_index(item)];
        if (!a.supports(delta)) {
            throw std::invalid_argument(a.name + " does not run with delta=" + std::to_string(delta));
        }
        out.push_back(a.name);
    }
    if (out.empty()) throw std::invalid_argument("no algorithms selected");
    return out;
}

struct RunRecord {
    std::string algorithm;
    std::string instance_id;
    std::size_t n = 0;
    int delta = 0;
    std::uint64_t seed = 0;
    double weight = 0.0;
    double bottleneck = 0.0;
    double mst_weight = 0.0;
    double mst_bottleneck = 0.0;
    std::size_t iterations = 0;
    double elapsed_ms = 0.0;

    friend bool operator==(const RunRecord&, const RunRecord&) = default;
};

inline constexpr double ratio_guard = 1e-9;

/// Runs one algorithm and re-validates its output: spanning, degree
/// feasible, never lighter (or narrower) than the MST.
inline RunRecord run_one(const std::string& algorithm, const PointSet& ps, int delta, std::uint64_t master_seed,
                         std::size_t instance_index, const RunOptions& opt = {}) {
    const std::size_t ai = algorithm_index(algorithm);
    const Algorithm& algo = registry()[ai];
    if (!algo.supports(delta)) throw std::invalid_argument(algo.name + " does not run with delta=" + std::to_string(delta));
    const DegreeBound d(delta);
    const DistanceTable dist(ps);
    const Tree base = mst_tree(dist);

    RunRecord r;
    r.algorithm = algo.name;
    r.instance_id = ps.id();
    r.n = ps.size();
    r.delta = delta;
    r.seed = derive_seed(master_seed, instance_index, ai);
    r.mst_weight = total_weight(base, dist);
    r.mst_bottleneck = bottleneck(base, dist);

    const auto t0 = std::chrono::steady_clock::now();
    AlgoOutput out = algo.run(ps, dist, d, r.seed, opt);
    r.elapsed_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();

    if (out.tree.size() != ps.size()) throw std::logic_error(algo.name + ": output does not span the instance");
    if (feasibility_error(out.tree, d) != 0) throw std::logic_error(algo.name + ": output violates the degree bound");
    r.weight = total_weight(out.tree, dist);
    r.bottleneck = bottleneck(out.tree, dist);
    r.iterations = out.iterations;
    if (r.weight < r.mst_weight - ratio_guard || r.bottleneck < r.mst_bottleneck - ratio_guard) {
        throw std::logic_error(algo.name + ": output beats the MST on " + ps.id());
    }
    return r;
}

/// One record per (instance, algorithm), instance-major. Cells may run on
/// several threads; results land in fixed slots so the order is stable.
inline std::vector<RunRecord> run_instances(const std::vector<PointSet>& instances, int delta,
                                            const std::vector<std::string>& algorithms, const RunOptions& opt = {}) {
    const std::size_t cells = instances.size() * algorithms.size();
    std::vector<RunRecord> out(cells);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t c = next++; c < cells; c = next++) {
            const std::size_t i = c / algorithms.size();
            try {
                out[c] = run_one(algorithms[c % algorithms.size()], instances[i], delta, opt.seed, i, opt);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = cells;
            }
        }
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(opt.threads, static_cast<unsigned>(std::max<std::size_t>(cells, 1))));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return out;
}

enum class SuiteKind { uniform, special, uniform_filtered };

inline const char* to_string(SuiteKind k) {
    switch (k) {
        case SuiteKind::uniform: return "uniform";
        case SuiteKind::special: return "special";
        case SuiteKind::uniform_filtered: return "uniform-filtered";
    }
    return "?";
}

inline SuiteKind suite_kind_from_string(const std::string& s) {
    if (s == "uniform") return SuiteKind::uniform;
    if (s == "special") return SuiteKind::special;
    if (s == "uniform-filtered") return SuiteKind::uniform_filtered;
    throw std::invalid_argument("unknown suite kind: " + s);
}

/// The instance generated for (kind, n, seed); ids are "<kind>-n<n>-s<seed>".
inline PointSet make_instance(InstanceKind kind, std::size_t n, std::uint64_t seed) {
    GenConfig cfg;
    cfg.n = n;
    cfg.seed = derive_seed(seed, n);
    PointSet ps = kind == InstanceKind::uniform ? generate_uniform(cfg) : generate_special(cfg);
    ps.set_id(std::string(to_string(kind)) + "-n" + std::to_string(n) + "-s" + std::to_string(seed));
    return ps;
}

/// Instances of one suite cell. For uniform-filtered the seeds form the
/// candidate pool and only instances whose MST has a degree-4 vertex stay.
inline std::vector<PointSet> make_suite(SuiteKind kind, std::size_t n, const std::vector<std::uint64_t>& seeds) {
    std::vector<PointSet> out;
    const InstanceKind ik = kind == SuiteKind::special ? InstanceKind::special : InstanceKind::uniform;
    for (auto s : seeds) out.push_back(make_instance(ik, n, s));
    if (kind == SuiteKind::uniform_filtered) out = filter_degree4(std::move(out));
    return out;
}

inline std::vector<RunRecord> run_suite(SuiteKind kind, const std::vector<int>& deltas,
                                        const std::vector<std::size_t>& n_values, const std::vector<std::uint64_t>& seeds,
                                        const std::vector<std::string>& algorithms, const RunOptions& opt = {}) {
    for (int d : deltas)
        for (const auto& a : algorithms)
            if (!registry()[algorithm_index(a)].supports(d))
                throw std::invalid_argument(a + " does not run with delta=" + std::to_string(d));
    std::vector<RunRecord> out;
    for (auto n : n_values) {
        const auto instances = make_suite(kind, n, seeds);
        for (int d : deltas) {
            auto recs = run_instances(instances, d, algorithms, opt);
            out.insert(out.end(), recs.begin(), recs.end());
        }
    }
    return out;
}

struct AggregateRow {
    std::string algorithm;
    std::size_t n = 0;
    int delta = 0;
    double mean_weight_ratio = 0.0;
    double mean_bottleneck_ratio = 0.0;
    std::size_t count = 0;

    friend bool operator==(const AggregateRow&, const AggregateRow&) = default;
};

/// Mean ratios grouped by (algorithm, n, delta), sorted by that key.
inline std::vector<AggregateRow> aggregate(const std::vector<RunRecord>& records) {
    std::map<std::tuple<std::string, std::size_t, int>, AggregateRow> groups;
    for (const auto& r : records) {
        auto& g = groups[{r.algorithm, r.n, r.delta}];
        g.algorithm = r.algorithm;
        g.n = r.n;
        g.delta = r.delta;
        g.mean_weight_ratio += r.weight / r.mst_weight;
        g.mean_bottleneck_ratio += r.bottleneck / r.mst_bottleneck;
        ++g.count;
    }
    std::vector<AggregateRow> out;
    for (auto& [key, g] : groups) {
        g.mean_weight_ratio /= static_cast<double>(g.count);
        g.mean_bottleneck_ratio /= static_cast<double>(g.count);
        out.push_back(g);
    }
    return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* record_header =
    "algorithm,instance_id,n,delta,seed,weight,bottleneck,mst_weight,mst_bottleneck,iterations,elapsed_ms";
inline constexpr const char* aggregate_header = "algorithm,n,delta,mean_weight_ratio,mean_bottleneck_ratio,count";

namespace detail {

inline std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string f;
    while (std::getline(ss, f, ',')) out.push_back(f);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

inline void check_field(const std::string& s) {
    if (s.find_first_of(",\n\r") != std::string::npos) throw std::invalid_argument("csv field contains a separator: " + s);
}

template <class T>
T parse_number(const std::string& s, std::size_t lineno) {
    std::istringstream is(s);
    T v{};
    if (!(is >> v) || !is.eof()) throw std::runtime_error("csv: bad number '" + s + "' on line " + std::to_string(lineno));
    return v;
}

template <class F>
void read_rows(std::istream& is, const char* header, std::size_t fields, F&& on_row) {
    std::string line;
    if (!std::getline(is, line) || line != header) throw std::runtime_error("csv: unexpected header");
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split_csv(line);
        if (f.size() != fields) throw std::runtime_error("csv: wrong field count on line " + std::to_string(lineno));
        on_row(f, lineno);
    }
}

}  // namespace detail

inline void write_records(std::ostream& os, const std::vector<RunRecord>& records) {
    os << record_header << '\n';
    for (const auto& r : records) {
        detail::check_field(r.algorithm);
        detail::check_field(r.instance_id);
        os << r.algorithm << ',' << r.instance_id << ',' << r.n << ',' << r.delta << ',' << r.seed << ','
           << std::setprecision(17) << r.weight << ',' << r.bottleneck << ',' << r.mst_weight << ','
           << r.mst_bottleneck << ',' << r.iterations << ',' << r.elapsed_ms << '\n';
    }
}

inline std::vector<RunRecord> read_records(std::istream& is) {
    std::vector<RunRecord> out;
    detail::read_rows(is, record_header, 11, [&](const std::vector<std::string>& f, std::size_t ln) {
        RunRecord r;
        r.algorithm = f[0];
        r.instance_id = f[1];
        r.n = detail::parse_number<std::size_t>(f[2], ln);
        r.delta = detail::parse_number<int>(f[3], ln);
        r.seed = detail::parse_number<std::uint64_t>(f[4], ln);
        r.weight = detail::parse_number<double>(f[5], ln);
        r.bottleneck = detail::parse_number<double>(f[6], ln);
        r.mst_weight = detail::parse_number<double>(f[7], ln);
        r.mst_bottleneck = detail::parse_number<double>(f[8], ln);
        r.iterations = detail::parse_number<std::size_t>(f[9], ln);
        r.elapsed_ms = detail::parse_number<double>(f[10], ln);
        out.push_back(std::move(r));
    });
    return out;
}

inline void write_rows(std::ostream& os, const std::vector<AggregateRow>& rows) {
    os << aggregate_header << '\n';
    for (const auto& r : rows) {
        detail::check_field(r.algorithm);
        os << r.algorithm << ',' << r.n << ',' << r.delta << ',' << std::setprecision(17) << r.mean_weight_ratio << ','
           << r.mean_bottleneck_ratio << ',' << r.count << '\n';
    }
}

inline std::vector<AggregateRow> read_aggregate(std::istream& is) {
    std::vector<AggregateRow> out;
    detail::read_rows(is, aggregate_header, 6, [&](const std::vector<std::string>& f, std::size_t ln) {
        AggregateRow r;
        r.algorithm = f[0];
        r.n = detail::parse_number<std::size_t>(f[1], ln);
        r.delta = detail::parse_number<int>(f[2], ln);
        r.mean_weight_ratio = detail::parse_number<double>(f[3], ln);
        r.mean_bottleneck_ratio = detail::parse_number<double>(f[4], ln);
        r.count = detail::parse_number<std::size_t>(f[5], ln);
        out.push_back(std::move(r));
    });
    return out;
}

/// "n ratio" lines for one algorithm and degree bound, in increasing n.
inline std::string plot_data(const std::vector<AggregateRow>& rows, const std::string& algorithm, int delta,
                             Objective objective) {
    std::vector<std::pair<std::size_t, double>> pts;
    for (const auto& r : rows)
        if (r.algorithm == algorithm && r.delta == delta)
            pts.emplace_back(r.n, objective == Objective::weight ? r.mean_weight_ratio : r.mean_bottleneck_ratio);
    std::sort(pts.begin(), pts.end());
    std::ostringstream os;
    os << std::setprecision(10);
    for (const auto& [n, ratio] : pts) os << n << ' ' << ratio << '\n';
    return os.str();
}

/// Writes <algorithm>_d<delta>_<objective>.dat files into `dir`; returns
/// the paths written.
inline std::vector<std::filesystem::path> write_plot_data(const std::vector<AggregateRow>& rows,
                                                          const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    std::vector<std::pair<std::string, int>> keys;
    for (const auto& r : rows) keys.emplace_back(r.algorithm, r.delta);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    std::vector<std::filesystem::path> written;
    for (const auto& [algo, delta] : keys) {
        for (Objective o : {Objective::weight, Objective::bottleneck}) {
            const auto path = dir / (algo + "_d" + std::to_string(delta) + "_" + to_string(o) + ".dat");
            std::ofstream os(path);
            os << plot_data(rows, algo, delta, o);
            if (!os) throw std::runtime_error("cannot write " + path.string());
            written.push_back(path);
        }
    }
    return written;
}

}  // namespace dmst::bench
