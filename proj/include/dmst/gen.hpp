#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "dmst/core.hpp"
#include "dmst/mst.hpp"

namespace dmst {

using Rng = std::mt19937_64;

/// SplitMix64 finaliser; used to derive independent per-stream seeds.
inline std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0) {
    return mix_seed(mix_seed(mix_seed(master) ^ a) ^ (b * 0x2545f4914f6cdd1dULL));
}

inline double deg2rad(double deg) { return deg * std::numbers::pi / 180.0; }

/// Closed interval of radial lengths; `hi` may be +inf.
struct Interval {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();

    bool contains(double x) const { return x >= lo && x <= hi; }
    bool bounded() const { return std::isfinite(hi); }
};

namespace detail {

// Ratio range admitted against one neighbouring arm separated by `theta`.
inline Interval side_range(double theta_deg, double neighbour_len) {
    if (theta_deg >= 90.0) return {};
    const double c = 2.0 * std::cos(deg2rad(theta_deg));
    return {c * neighbour_len, neighbour_len / c};
}

}  // namespace detail

/// Radial distances arm i may take with both neighbouring arms and all angles
/// fixed, keeping every adjacent triangle's opposite side the longest.
inline Interval allowable_range(double theta_prev, double theta_next, double d_prev, double d_next) {
    if (theta_prev < 60.0 || theta_next < 60.0) throw std::invalid_argument("star angles must be >= 60 degrees");
    if (!(d_prev > 0.0) || !(d_next > 0.0)) throw std::invalid_argument("arm lengths must be positive");
    const Interval left = detail::side_range(theta_prev, d_prev);
    const Interval right = detail::side_range(theta_next, d_next);
    Interval r{std::max(left.lo, right.lo), std::min(left.hi, right.hi)};
    // at exactly 60 degrees both sides pin the same length; absorb rounding
    if (r.lo > r.hi && r.lo - r.hi <= 1e-12 * r.lo) r.lo = r.hi;
    if (r.lo > r.hi) throw std::logic_error("allowable range is empty");
    return r;
}

/// Star S_D around `center`: arm i sits at `orientation + sum(angles[0..i))`
/// degrees, and angles[i] separates arm i from arm i+1 (cyclically).
struct StarSpec {
    int D = 4;
    std::vector<double> angles;
    std::vector<double> radii;
    Point center{};
    double orientation = 0.0;

    std::vector<Point> points() const {
        std::vector<Point> pts;
        pts.reserve(D + 1);
        pts.push_back(center);
        double phi = orientation;
        for (int i = 0; i < D; ++i) {
            const double a = deg2rad(phi);
            pts.push_back({center.x + radii[i] * std::cos(a), center.y + radii[i] * std::sin(a)});
            phi += angles[i];
        }
        return pts;
    }

    double max_radius() const { return *std::max_element(radii.begin(), radii.end()); }

    /// Invariant check; `tol` absorbs rounding in the angle sum.
    bool valid(double tol = 1e-9) const {
        if (D != 4 && D != 5) return false;
        if (static_cast<int>(angles.size()) != D || static_cast<int>(radii.size()) != D) return false;
        double sum = 0.0;
        for (int i = 0; i < D; ++i) {
            if (angles[i] < 60.0 - tol || !(radii[i] > 0.0)) return false;
            sum += angles[i];
        }
        if (std::abs(sum - 360.0) > tol) return false;
        for (int i = 0; i < D; ++i) {
            const int j = (i + 1) % D;
            const double a = radii[i], b = radii[j];
            const double opp = std::sqrt(std::max(0.0, a * a + b * b - 2 * a * b * std::cos(deg2rad(angles[i]))));
            if (opp < std::max(a, b) * (1.0 - tol)) return false;
        }
        return true;
    }
};

/// Angle stage: 60 degrees each plus a uniform point of the simplex scaled
/// to the remaining 360 - 60 D. Arms start at unit length.
inline StarSpec sample_star_angles(int D, Rng& rng) {
    if (D != 4 && D != 5) throw std::invalid_argument("star degree must be 4 or 5");
    std::exponential_distribution<double> expo(1.0);
    std::vector<double> s(D);
    double total = 0.0;
    for (auto& x : s) total += (x = expo(rng));
    StarSpec spec;
    spec.D = D;
    spec.angles.resize(D);
    const double slack = 360.0 - 60.0 * D;
    double acc = 0.0;
    for (int i = 0; i + 1 < D; ++i) acc += (spec.angles[i] = 60.0 + slack * s[i] / total);
    spec.angles[D - 1] = 360.0 - acc;
    spec.radii.assign(D, 1.0);
    return spec;
}

inline Interval arm_range(const StarSpec& spec, int i) {
    const int D = spec.D;
    const int prev = (i + D - 1) % D;
    const int next = (i + 1) % D;
    return allowable_range(spec.angles[prev], spec.angles[i], spec.radii[prev], spec.radii[next]);
}

/// Augmentation stage: `rounds` passes over the arms in order, each arm
/// moved to a uniform length inside its allowable range. Unbounded sides
/// are truncated to [r/2, 2r] around the current length r.
inline void augment_star(StarSpec& spec, int rounds, Rng& rng) {
    for (int round = 0; round < rounds; ++round) {
        for (int i = 0; i < spec.D; ++i) {
            const Interval r = arm_range(spec, i);
            const double cur = spec.radii[i];
            const double lo = r.lo > 0.0 ? r.lo : cur / 2.0;
            const double hi = r.bounded() ? r.hi : 2.0 * cur;
            spec.radii[i] = std::uniform_real_distribution<double>(std::min(lo, cur), std::max(hi, cur))(rng);
        }
    }
}

inline void scale_star(StarSpec& spec, double L) {
    const double f = L / spec.max_radius();
    for (auto& r : spec.radii) r *= f;
    // pin the longest arm to exactly L
    *std::max_element(spec.radii.begin(), spec.radii.end()) = L;
}

/// True when the tie-broken MST of `pts` is the star centred on pts[0].
inline bool is_star_mst(std::span<const Point> pts) {
    const Tree t = mst(PointSet(std::vector<Point>(pts.begin(), pts.end()))).tree;
    return t.degree(0) == static_cast<int>(pts.size()) - 1;
}

/// Full four-stage star generation, centred at the origin.
inline StarSpec generate_star_spec(int D, double L, Rng& rng) {
    if (!(L > 0.0)) throw std::invalid_argument("star length must be positive");
    while (true) {
        StarSpec spec = sample_star_angles(D, rng);
        augment_star(spec, D - 2, rng);
        scale_star(spec, L);
        spec.orientation = std::uniform_real_distribution<double>(0.0, 360.0)(rng);
        // measure-zero boundary draws can round into a non-star; redraw
        if (spec.valid() && is_star_mst(spec.points())) return spec;
    }
}

inline std::vector<Point> generate_star(int D, double L, Rng& rng) { return generate_star_spec(D, L, rng).points(); }

struct GenConfig {
    std::size_t n = 100;
    double grid = 10000.0;
    std::uint64_t seed = 0;
    /// Lower bound on a planted star's longest edge, as a fraction of grid.
    double star_edge_floor = 0.01;
    int max_retries = 200;
};

/// Uniform integer coordinates on [0, grid]^2 without duplicates.
inline PointSet generate_uniform(const GenConfig& cfg, Rng& rng) {
    if (cfg.n < 2 || !(cfg.grid > 0.0)) throw std::invalid_argument("bad uniform config");
    const auto side = static_cast<std::int64_t>(cfg.grid);
    if (static_cast<double>(side + 1) * static_cast<double>(side + 1) < static_cast<double>(cfg.n)) {
        throw std::invalid_argument("grid has fewer lattice points than n");
    }
    std::uniform_int_distribution<std::int64_t> coord(0, side);
    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    std::vector<Point> pts;
    pts.reserve(cfg.n);
    while (pts.size() < cfg.n) {
        const auto x = coord(rng);
        const auto y = coord(rng);
        if (seen.emplace(x, y).second) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
    }
    return PointSet(std::move(pts));
}

inline PointSet generate_uniform(const GenConfig& cfg) {
    Rng rng(cfg.seed);
    return generate_uniform(cfg, rng);
}

struct Square {
    double x0, y0, side;

    bool contains(const Point& p) const { return p.x >= x0 && p.x <= x0 + side && p.y >= y0 && p.y <= y0 + side; }
    bool overlaps(const Square& o) const {
        return x0 <= o.x0 + o.side && o.x0 <= x0 + side && y0 <= o.y0 + o.side && o.y0 <= y0 + side;
    }
    Point centre() const { return {x0 + side / 2, y0 + side / 2}; }
};

struct PlantedStar {
    int D;
    Vertex centre;           // index in the final point set
    std::vector<Vertex> arms;
    Square block;
};

struct SpecialLayout {
    PointSet points;
    std::vector<PlantedStar> stars;
};

struct StarCounts {
    std::size_t s4, s5, free;
};

/// round-half-up of 10% and 5% of n.
inline StarCounts special_counts(std::size_t n) {
    const auto s4 = static_cast<std::size_t>(std::floor(0.10 * static_cast<double>(n) + 0.5));
    const auto s5 = static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(n) + 0.5));
    const std::size_t used = 5 * s4 + 6 * s5;
    if (used > n) throw std::invalid_argument("special instance: star points exceed n");
    return {s4, s5, n - used};
}

/// Sizes for which a special instance exists (n = 15 is the only gap above 11).
inline bool special_supported(std::size_t n) {
    if (n < 11) return false;
    const auto s4 = static_cast<std::size_t>(std::floor(0.10 * static_cast<double>(n) + 0.5));
    const auto s5 = static_cast<std::size_t>(std::floor(0.05 * static_cast<double>(n) + 0.5));
    return 5 * s4 + 6 * s5 <= n;
}

namespace detail {

inline bool planted_stars_intact(const SpecialLayout& layout) {
    const Tree t = mst(layout.points).tree;
    for (const auto& s : layout.stars) {
        if (t.degree(s.centre) != s.D) return false;
        for (Vertex a : s.arms)
            if (!t.has_edge(Edge(s.centre, a))) return false;
    }
    return true;
}

inline std::optional<SpecialLayout> try_special(const GenConfig& cfg, const StarCounts& counts, Rng& rng) {
    std::vector<int> kinds(counts.s4, 4);
    kinds.insert(kinds.end(), counts.s5, 5);
    const double floor_len = cfg.star_edge_floor * cfg.grid;
    const double s_min = 4.0 * floor_len;
    const double s_cap = cfg.grid / (std::sqrt(static_cast<double>(kinds.size())) + 1.0);
    if (s_cap <= s_min) throw std::invalid_argument("grid too small for the requested stars");

    std::vector<Square> blocks;
    std::vector<std::pair<int, std::vector<Point>>> star_points;
    for (int D : kinds) {
        bool placed = false;
        for (int attempt = 0; attempt < cfg.max_retries && !placed; ++attempt) {
            const double side = std::uniform_real_distribution<double>(s_min, s_cap)(rng);
            std::uniform_real_distribution<double> corner(0.0, cfg.grid - side);
            const Square sq{corner(rng), corner(rng), side};
            if (std::any_of(blocks.begin(), blocks.end(), [&](const Square& b) { return b.overlaps(sq); })) continue;
            // longest edge below a quarter side keeps every outside point
            // farther from each arm than any star edge
            const double L = std::uniform_real_distribution<double>(floor_len, side / 4.0)(rng);
            StarSpec spec = generate_star_spec(D, L, rng);
            spec.center = sq.centre();
            blocks.push_back(sq);
            star_points.emplace_back(D, spec.points());
            placed = true;
        }
        if (!placed) return std::nullopt;
    }

    std::vector<Point> pts;
    for (const auto& [D, sp] : star_points) pts.insert(pts.end(), sp.begin(), sp.end());

    std::set<std::pair<std::int64_t, std::int64_t>> seen;
    const auto side = static_cast<std::int64_t>(cfg.grid);
    std::uniform_int_distribution<std::int64_t> coord(0, side);
    std::size_t placed_free = 0, rejects = 0;
    while (placed_free < counts.free) {
        const Point p{static_cast<double>(coord(rng)), static_cast<double>(coord(rng))};
        const bool blocked = std::any_of(blocks.begin(), blocks.end(), [&](const Square& b) { return b.contains(p); });
        if (blocked || !seen.emplace(static_cast<std::int64_t>(p.x), static_cast<std::int64_t>(p.y)).second) {
            if (++rejects > 1000000) return std::nullopt;
            continue;
        }
        pts.push_back(p);
        ++placed_free;
    }

    // shuffle so that vertex labels carry no information about the layout
    std::vector<Vertex> perm(pts.size());
    for (Vertex i = 0; i < perm.size(); ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Point> shuffled(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) shuffled[perm[i]] = pts[i];

    SpecialLayout layout{PointSet(std::move(shuffled)), {}};
    Vertex base = 0;
    for (std::size_t k = 0; k < star_points.size(); ++k) {
        const int D = star_points[k].first;
        PlantedStar s{D, perm[base], {}, blocks[k]};
        for (int a = 1; a <= D; ++a) s.arms.push_back(perm[base + a]);
        layout.stars.push_back(std::move(s));
        base += D + 1;
    }
    return layout;
}

}  // namespace detail

/// Instance with planted S_4 / S_5 stars in disjoint blocked squares plus
/// uniform free points. Layouts whose MST does not keep every planted star
/// intact are redrawn from the same stream.
inline SpecialLayout generate_special_layout(const GenConfig& cfg, Rng& rng) {
    if (cfg.n < 11) throw std::invalid_argument("special instances need n >= 11");
    const StarCounts counts = special_counts(cfg.n);
    for (int attempt = 0; attempt < cfg.max_retries; ++attempt) {
        auto layout = detail::try_special(cfg, counts, rng);
        if (layout && detail::planted_stars_intact(*layout)) return std::move(*layout);
    }
    throw std::runtime_error("special instance placement failed; retry with another seed");
}

inline PointSet generate_special(const GenConfig& cfg, Rng& rng) { return generate_special_layout(cfg, rng).points; }

inline PointSet generate_special(const GenConfig& cfg) {
    Rng rng(cfg.seed);
    return generate_special(cfg, rng);
}

inline bool has_degree4_vertex(const PointSet& ps) { return mst(ps).max_degree >= 4; }

inline std::vector<PointSet> filter_degree4(std::vector<PointSet> instances) {
    std::erase_if(instances, [](const PointSet& ps) { return !has_degree4_vertex(ps); });
    return instances;
}

// ---------------------------------------------------------------------------
// Instance files
// ---------------------------------------------------------------------------

enum class InstanceKind { uniform, special };

inline const char* to_string(InstanceKind k) { return k == InstanceKind::uniform ? "uniform" : "special"; }

inline InstanceKind instance_kind_from_string(const std::string& s) {
    if (s == "uniform") return InstanceKind::uniform;
    if (s == "special") return InstanceKind::special;
    throw std::invalid_argument("unknown instance kind: " + s);
}

struct InstanceHeader {
    std::size_t n = 0;
    std::uint64_t seed = 0;
    InstanceKind kind = InstanceKind::uniform;
};

inline void write_instance(std::ostream& os, const PointSet& ps, const InstanceHeader& h) {
    os << "# dmst-instance v1 n=" << ps.size() << " seed=" << h.seed << " kind=" << to_string(h.kind) << '\n';
    os << std::setprecision(17);
    for (const auto& p : ps) os << p.x << ' ' << p.y << '\n';
}

inline void write_instance(const std::string& path, const PointSet& ps, const InstanceHeader& h) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open for writing: " + path);
    write_instance(os, ps, h);
    if (!os) throw std::runtime_error("write failed: " + path);
}

struct Instance {
    PointSet points;
    InstanceHeader header;
};

inline Instance read_instance(std::istream& is, std::string id = {}) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("instance: missing header");
    std::istringstream hs(line);
    std::string hash, magic, version, nfield, sfield, kfield, extra;
    hs >> hash >> magic >> version >> nfield >> sfield >> kfield;
    if (hash != "#" || magic != "dmst-instance" || version != "v1" || nfield.rfind("n=", 0) != 0 ||
        sfield.rfind("seed=", 0) != 0 || kfield.rfind("kind=", 0) != 0 || (hs >> extra)) {
        throw std::runtime_error("instance: malformed header: " + line);
    }
    InstanceHeader h;
    try {
        std::size_t pos = 0;
        h.n = std::stoull(nfield.substr(2), &pos);
        if (pos != nfield.size() - 2) throw std::invalid_argument("n");
        h.seed = std::stoull(sfield.substr(5), &pos);
        if (pos != sfield.size() - 5) throw std::invalid_argument("seed");
        h.kind = instance_kind_from_string(kfield.substr(5));
    } catch (const std::exception&) {
        throw std::runtime_error("instance: malformed header: " + line);
    }

    std::vector<Point> pts;
    pts.reserve(h.n);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::istringstream ls(line);
        Point p;
        std::string rest;
        if (!(ls >> p.x >> p.y) || (ls >> rest)) {
            throw std::runtime_error("instance: malformed line " + std::to_string(lineno));
        }
        pts.push_back(p);
    }
    if (pts.size() != h.n) throw std::runtime_error("instance: header n does not match point count");
    try {
        return {PointSet(std::move(pts), std::move(id)), h};
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("instance: ") + e.what());
    }
}

inline Instance read_instance(const std::string& path, std::string id = {}) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open instance: " + path);
    return read_instance(is, std::move(id));
}

}  // namespace dmst
