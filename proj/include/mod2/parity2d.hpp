#pragma once

// Maze escape by crossing parity: a start point can reach the outside iff a
// generic path from it to the outside meets every wall an even number of
// times.

#include <mod2/core2d.hpp>

#include <cstdint>
#include <random>
#include <vector>

namespace mod2 {

inline constexpr double kOnWallBand = 1e-9;

/// Pairwise-disjoint simple closed walls.
class Maze {
public:
    explicit Maze(std::vector<ClosedCurve2D> walls, int n_samples = kDefaultSamples) : n_samples_(n_samples) {
        if (walls.empty()) throw Error("maze needs at least one wall");
        for (auto& w : walls) walls_.push_back(checked_simple(std::move(w), std::max(n_samples, 8)));
        for (const auto& w : walls_) polygons_.push_back(curve_polygon(w, n_samples));
        for (std::size_t i = 0; i < polygons_.size(); ++i) box_.extend(polygons_[i]);
        // a point this close to a sampled wall may lie on different sides of
        // the polygon and of the true curve
        double sagitta = 0.0;
        for (std::size_t w = 0; w < walls_.size(); ++w) {
            if (!walls_[w].is_fourier()) continue;
            const auto& poly = polygons_[w];
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const Point2 mid = walls_[w].at((static_cast<double>(i) + 1.0) / static_cast<double>(poly.size()));
                sagitta = std::max(sagitta, point_segment_distance(mid, poly[i], poly[(i + 1) % poly.size()]));
            }
        }
        band_ = std::max(kOnWallBand * box_.diameter(), 2.0 * sagitta);
        const double eps = kDegenerateBand * box_.diameter();
        for (std::size_t i = 0; i < polygons_.size(); ++i) {
            for (std::size_t j = i + 1; j < polygons_.size(); ++j) {
                const std::vector<std::vector<Point2>> other{polygons_[j]};
                const auto scan = detail::scan_crossings(polygons_[i], true, other, eps, true);
                if (scan.report.count != 0 || !scan.report.all_transverse) throw Error("maze walls intersect");
            }
        }
    }

    const std::vector<ClosedCurve2D>& walls() const { return walls_; }
    const std::vector<std::vector<Point2>>& polygons() const { return polygons_; }
    const BoundingBox2& bounds() const { return box_; }
    int n_samples() const { return n_samples_; }

    double distance_to_walls(Point2 p) const {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& poly : polygons_) {
            for (std::size_t i = 0; i < poly.size(); ++i)
                best = std::min(best, point_segment_distance(p, poly[i], poly[(i + 1) % poly.size()]));
        }
        return best;
    }

    /// Within the on-wall band: 1e-9 of the maze size, widened to twice the
    /// largest chord sagitta when walls are sampled Fourier curves.
    bool on_wall(Point2 p) const { return distance_to_walls(p) <= band_; }
    double wall_band() const { return band_; }

private:
    std::vector<ClosedCurve2D> walls_;
    std::vector<std::vector<Point2>> polygons_;
    BoundingBox2 box_;
    double band_ = 0.0;
    int n_samples_;
};

struct EscapeVerdict {
    bool escapable = false;
    std::vector<int> per_wall_parity;
    std::vector<std::size_t> per_wall_count;
    std::vector<Point2> crossings;
    PolyPath witness_path;
};

namespace detail {

inline std::vector<int> wall_parities(const Maze& maze, std::span<const Point2> chain, std::vector<std::size_t>* counts,
                                      std::vector<Point2>* crossings) {
    const double eps = kDegenerateBand * scene_scale(chain, maze.polygons());
    std::vector<int> parities;
    for (const auto& poly : maze.polygons()) {
        const std::vector<std::vector<Point2>> one{poly};
        const auto scan = scan_crossings(chain, false, one, eps, true);
        if (!scan.report.all_transverse) throw Error("non-transverse configuration; perturb first");
        parities.push_back(scan.report.parity);
        if (counts) counts->push_back(scan.report.count);
        if (crossings) crossings->insert(crossings->end(), scan.report.crossings.begin(), scan.report.crossings.end());
    }
    return parities;
}

} // namespace detail

/// Shoots a straight witness path in +x to beyond the maze, perturbs it into
/// generic position and reads off one crossing parity per wall. A point is
/// trapped iff some wall is crossed an odd number of times.
inline EscapeVerdict can_escape(const Maze& maze, Point2 start, std::uint64_t seed = 0) {
    if (!is_finite(start)) throw Error("start point is not finite");
    if (maze.on_wall(start)) throw Error("start lies on maze wall");
    const auto& box = maze.bounds();
    const Point2 exit{std::max(box.hi.x, start.x) + box.diameter(), start.y};
    auto chain = detail::perturb_chain({start, exit}, false, maze.polygons(), seed, kDefaultPerturbation);

    EscapeVerdict v;
    v.per_wall_parity = detail::wall_parities(maze, chain, &v.per_wall_count, &v.crossings);
    v.escapable = std::all_of(v.per_wall_parity.begin(), v.per_wall_parity.end(), [](int p) { return p == 0; });
    v.witness_path = PolyPath(std::move(chain));
    return v;
}

struct InvarianceReport {
    std::vector<int> parities;
    bool all_equal = true;
};

/// Total crossing parity of many random generic paths between two fixed
/// endpoints; deformation invariance says they all agree.
inline InvarianceReport parity_invariance_report(const Maze& maze, Point2 start, Point2 exit, int n_paths,
                                                 std::uint64_t seed) {
    if (n_paths < 1) throw Error("n_paths must be at least 1");
    if (maze.on_wall(start)) throw Error("start lies on maze wall");
    if (!can_escape(maze, exit, seed).escapable) throw Error("exit must lie outside every wall");

    BoundingBox2 box = maze.bounds();
    box.extend(start);
    box.extend(exit);
    const Point2 pad = 0.5 * (box.hi - box.lo);
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.lo.x - pad.x, box.hi.x + pad.x);
    std::uniform_real_distribution<double> uy(box.lo.y - pad.y, box.hi.y + pad.y);
    std::uniform_int_distribution<int> n_way(1, 4);

    InvarianceReport report;
    for (int i = 0; i < n_paths; ++i) {
        std::vector<Point2> chain{start};
        const int k = n_way(rng);
        for (int w = 0; w < k; ++w) chain.push_back({ux(rng), uy(rng)});
        chain.push_back(exit);
        const std::uint64_t path_seed = seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(i) + 1;
        chain = detail::perturb_chain(std::move(chain), false, maze.polygons(), path_seed, kDefaultPerturbation);
        int total = 0;
        for (int p : detail::wall_parities(maze, chain, nullptr, nullptr)) total ^= p;
        report.parities.push_back(total);
    }
    report.all_equal = std::all_of(report.parities.begin(), report.parities.end(),
                                   [&](int p) { return p == report.parities.front(); });
    return report;
}

} // namespace mod2
