#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "dmst/dmst.hpp"

namespace fs = std::filesystem;
using namespace dmst;

namespace {

// Instance files in a directory (sorted by name) or a single file.
std::vector<fs::path> instance_paths(const fs::path& p) {
    if (!fs::exists(p)) throw std::runtime_error("no such path: " + p.string());
    if (!fs::is_directory(p)) return {p};
    std::vector<fs::path> out;
    for (const auto& e : fs::directory_iterator(p))
        if (e.is_regular_file() && e.path().extension() == ".txt") out.push_back(e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw std::runtime_error("no .txt instances in " + p.string());
    return out;
}

std::vector<PointSet> load_instances(const fs::path& p) {
    std::vector<PointSet> out;
    for (const auto& f : instance_paths(p)) out.push_back(read_instance(f.string(), f.stem().string()).points);
    return out;
}

std::ofstream open_out(const fs::path& p) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream os(p);
    if (!os) throw std::runtime_error("cannot open for writing: " + p.string());
    return os;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Degree-bounded Euclidean spanning tree heuristics"};
    app.require_subcommand(1);

    std::string kind = "uniform", out_dir;
    std::size_t gen_n = 100, count = 1;
    std::uint64_t gen_seed = 0;
    auto* gen = app.add_subcommand("gen", "generate instance files");
    gen->add_option("--kind", kind, "uniform or special")->check(CLI::IsMember({"uniform", "special"}));
    gen->add_option("--n", gen_n, "points per instance")->required();
    gen->add_option("--count", count, "number of instances");
    gen->add_option("--seed", gen_seed, "first seed; instance i uses seed+i");
    gen->add_option("--out", out_dir, "output directory")->required();

    std::string instances, algos = "all", run_out;
    int delta = 2;
    bench::RunOptions opt;
    auto* run = app.add_subcommand("run", "run algorithms over instances");
    run->add_option("--instances", instances, "instance directory or file")->required();
    run->add_option("--delta", delta, "degree bound")->check(CLI::Range(2, 4))->required();
    run->add_option("--algos", algos, "comma-separated names or 'all'");
    run->add_option("--seed", opt.seed, "master seed");
    run->add_option("--out", run_out, "records CSV")->required();
    run->add_option("--threads", opt.threads, "worker threads")->check(CLI::PositiveNumber);
    run->add_option("--mhc-m", opt.mhc_m, "MHC iterations")->check(CLI::PositiveNumber);
    run->add_option("--mhc-r", opt.mhc_r, "MHC restart threshold")->check(CLI::PositiveNumber);

    std::string agg_in, agg_out, plot_dir;
    auto* agg = app.add_subcommand("aggregate", "mean ratios per algorithm, n and delta");
    agg->add_option("--in", agg_in, "records CSV")->required();
    agg->add_option("--out", agg_out, "summary CSV")->required();
    agg->add_option("--plot-data", plot_dir, "directory for gnuplot data files");

    std::string objective = "weight";
    auto* oracle = app.add_subcommand("oracle", "exact solutions on small instances");
    oracle->add_option("--instances", instances, "instance directory or file")->required();
    oracle->add_option("--delta", delta, "degree bound")->check(CLI::Range(2, 4))->required();
    oracle->add_option("--objective", objective, "weight or bottleneck")
        ->check(CLI::IsMember({"weight", "bottleneck"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (*gen) {
            fs::create_directories(out_dir);
            const InstanceKind k = instance_kind_from_string(kind);
            for (std::size_t i = 0; i < count; ++i) {
                const std::uint64_t seed = gen_seed + i;
                GenConfig cfg;
                cfg.n = gen_n;
                cfg.seed = seed;
                const PointSet ps = k == InstanceKind::uniform ? generate_uniform(cfg) : generate_special(cfg);
                const fs::path path = fs::path(out_dir) / (kind + "_n" + std::to_string(gen_n) + "_" + std::to_string(i) + ".txt");
                write_instance(path.string(), ps, {gen_n, seed, k});
            }
            std::cout << "wrote " << count << " instances to " << out_dir << '\n';
        } else if (*run) {
            const auto names = bench::parse_algorithms(algos, delta);
            const auto records = bench::run_instances(load_instances(instances), delta, names, opt);
            auto os = open_out(run_out);
            bench::write_records(os, records);
            if (!os) throw std::runtime_error("write failed: " + run_out);
            std::cout << "wrote " << records.size() << " records to " << run_out << '\n';
        } else if (*agg) {
            std::ifstream is(agg_in);
            if (!is) throw std::runtime_error("cannot open: " + agg_in);
            const auto rows = bench::aggregate(bench::read_records(is));
            auto os = open_out(agg_out);
            bench::write_rows(os, rows);
            if (!os) throw std::runtime_error("write failed: " + agg_out);
            if (!plot_dir.empty()) bench::write_plot_data(rows, plot_dir);
            std::cout << "wrote " << rows.size() << " rows to " << agg_out << '\n';
        } else if (*oracle) {
            const DegreeBound d(delta);
            const Objective obj = objective_from_string(objective);
            std::cout << "instance,n,weight,bottleneck\n" << std::setprecision(17);
            for (const auto& f : instance_paths(instances)) {
                const PointSet ps = read_instance(f.string(), f.stem().string()).points;
                const Tree t = delta == 2 ? exact_hampath(ps, obj) : exact_dmst(ps, d, obj);
                std::cout << ps.id() << ',' << ps.size() << ',' << total_weight(t, ps) << ',' << bottleneck(t, ps)
                          << '\n';
            }
        }
    } catch (const std::exception& e) {
        std::cerr << "dmst_cli: error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
