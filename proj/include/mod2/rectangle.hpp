#pragma once

// Inscribed rectangles from collisions of the midpoint/half-distance map
// f(x, y) = ((x + y) / 2, |x - y| / 2) over unordered pairs of curve points.
// Two distinct pairs with the same value are the diagonals of a rectangle.

#include <mod2/core2d.hpp>

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <optional>
#include <tuple>
#include <unordered_map>
#include <vector>

namespace mod2 {

/// Unordered pair of curve parameters, stored wrapped with s <= t.
struct ParamPair {
    double s = 0.0;
    double t = 0.0;

    ParamPair() = default;
    ParamPair(double a, double b) {
        a = wrap_unit(a);
        b = wrap_unit(b);
        s = std::min(a, b);
        t = std::max(a, b);
    }
    friend bool operator==(const ParamPair&, const ParamPair&) = default;
};

struct VaughanValue {
    Point2 mid;
    double half_dist = 0.0;
};

using VaughanJacobian = Eigen::Matrix<double, 3, 2>;

inline VaughanValue vaughan_map(const ClosedCurve2D& curve, double s, double t) {
    if (t < s) std::swap(s, t);
    const Point2 a = curve.at(s), b = curve.at(t);
    return {0.5 * (a + b), 0.5 * distance(a, b)};
}

inline VaughanValue vaughan_map(const ClosedCurve2D& curve, const ParamPair& p) {
    return vaughan_map(curve, p.s, p.t);
}

/// Partial derivatives of (mid.x, mid.y, half_dist) with respect to the
/// ordered arguments (s, t).
inline VaughanJacobian vaughan_jacobian(const ClosedCurve2D& curve, double s, double t) {
    const Point2 a = curve.at(s), b = curve.at(t);
    const Point2 da = curve.velocity(s), db = curve.velocity(t);
    const Point2 diff = a - b;
    const double len = norm(diff);
    if (!(len > 0.0)) throw Error("Vaughan map not differentiable on the diagonal");
    const Point2 dir = (1.0 / len) * diff;
    VaughanJacobian j;
    j << 0.5 * da.x, 0.5 * db.x,  //
        0.5 * da.y, 0.5 * db.y,   //
        0.5 * dot(dir, da), -0.5 * dot(dir, db);
    return j;
}

inline VaughanJacobian vaughan_jacobian(const ClosedCurve2D& curve, const ParamPair& p) {
    return vaughan_jacobian(curve, p.s, p.t);
}

struct FinderConfig {
    int grid_n = 128;
    double refine_tol = 1e-10;
    int max_iterations = 50;
    double dedup_eps = 1e-6;
    std::uint64_t seed = 0;

    void validate() const {
        if (grid_n < 16) throw Error("grid_n must be at least 16");
        if (!(refine_tol > 0.0)) throw Error("refine_tol must be positive");
        if (max_iterations < 1) throw Error("max_iterations must be positive");
        if (!(dedup_eps > 0.0)) throw Error("dedup_eps must be positive");
    }
};

struct RectangleHit {
    ParamPair pair1;
    ParamPair pair2;
    std::array<Point2, 4> points{};  // cyclic order; diagonals are (0,2) and (1,3)
    double residual = 0.0;
    double aspect_ratio = 1.0;
    Point2 mid;
    double half_dist = 0.0;
};

struct RectangleCheck {
    bool is_rectangle = false;
    bool on_curve = false;
    double max_defect = 0.0;
};

/// Long side over short side of a rectangle given in cyclic order.
inline double rect_aspect_ratio(const std::array<Point2, 4>& pts) {
    const double a = distance(pts[0], pts[1]);
    const double b = distance(pts[1], pts[2]);
    const double big = std::max(a, b), small = std::min(a, b);
    if (!(small > kDegenerateBand * big) || !std::isfinite(big)) throw Error("degenerate rectangle");
    return big / small;
}

/// Distance from a point to the curve: exact for polylines; for Fourier
/// curves dense sampling followed by golden-section refinement.
inline double distance_to_curve(const ClosedCurve2D& curve, Point2 p) {
    if (!curve.is_fourier()) {
        const auto& v = curve.vertices();
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < v.size(); ++i)
            best = std::min(best, point_segment_distance(p, v[i], v[(i + 1) % v.size()]));
        return best;
    }
    constexpr int n = 4096;
    std::vector<std::pair<double, int>> samples;
    samples.reserve(n);
    for (int i = 0; i < n; ++i) samples.emplace_back(distance(curve.at(double(i) / n), p), i);
    std::partial_sort(samples.begin(), samples.begin() + 3, samples.end());
    double best = samples.front().first;
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    for (int k = 0; k < 3; ++k) {
        double lo = (samples[static_cast<std::size_t>(k)].second - 1.0) / n;
        double hi = (samples[static_cast<std::size_t>(k)].second + 1.0) / n;
        double x1 = hi - golden * (hi - lo), x2 = lo + golden * (hi - lo);
        double f1 = distance(curve.at(x1), p), f2 = distance(curve.at(x2), p);
        for (int it = 0; it < 100 && hi - lo > 1e-17; ++it) {
            if (f1 < f2) {
                hi = x2, x2 = x1, f2 = f1;
                x1 = hi - golden * (hi - lo);
                f1 = distance(curve.at(x1), p);
            } else {
                lo = x1, x1 = x2, f1 = f2;
                x2 = lo + golden * (hi - lo);
                f2 = distance(curve.at(x2), p);
            }
        }
        best = std::min({best, f1, f2});
    }
    return best;
}

/// Rectangle test for four points in cyclic order: the diagonals share a
/// midpoint and have equal, non-zero length.
inline RectangleCheck validate_rectangle(const std::array<Point2, 4>& pts, const ClosedCurve2D& curve, double tol) {
    if (!(tol > 0.0)) throw Error("tolerance must be positive");
    RectangleCheck r;
    const Point2 m1 = 0.5 * (pts[0] + pts[2]), m2 = 0.5 * (pts[1] + pts[3]);
    const double h1 = 0.5 * distance(pts[0], pts[2]), h2 = 0.5 * distance(pts[1], pts[3]);
    const double mid_gap = distance(m1, m2);
    const double len_gap = std::abs(h1 - h2);
    r.is_rectangle = mid_gap <= tol && len_gap <= tol && std::min(h1, h2) > tol;
    double off = 0.0;
    for (const auto& p : pts) off = std::max(off, distance_to_curve(curve, p));
    r.on_curve = off <= tol;
    r.max_defect = std::max({mid_gap, len_gap, off});
    return r;
}

namespace detail {

struct NormalizedCurve {
    ClosedCurve2D curve;
    Point2 center;
    double scale;
};

/// Translates the centroid to the origin and scales to unit bounding radius.
inline NormalizedCurve normalize_curve(const ClosedCurve2D& curve) {
    if (!curve.is_fourier()) throw Error("rectangle finder requires a smooth (Fourier) curve");
    const Point2 center{curve.fourier_x().a0, curve.fourier_y().a0};
    double radius = 0.0;
    for (const auto& p : curve_polygon(curve)) radius = std::max(radius, distance(p, center));
    FourierSeries x = curve.fourier_x(), y = curve.fourier_y();
    x.a0 = y.a0 = 0.0;
    for (auto* series : {&x, &y}) {
        for (auto& c : series->a) c /= radius;
        for (auto& c : series->b) c /= radius;
    }
    return {ClosedCurve2D::fourier(std::move(x), std::move(y)), center, radius};
}

struct UnionFindIndex {
    std::vector<std::size_t> parent;
    explicit UnionFindIndex(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a), b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

struct Candidate {
    std::array<double, 4> x;    // s1, t1, s2, t2
    std::array<int, 4> index;   // grid indices of x, each pair ascending
    double coarse = 0.0;        // max-norm of the grid-level map difference
};

inline double circular_gap(double a, double b) {
    const double d = std::abs(wrap_unit(a) - wrap_unit(b));
    return std::min(d, 1.0 - d);
}

/// Largest parameter gap between two quadruples, minimized over swapping
/// within each pair and swapping the pairs.
inline double symmetric_gap(const std::array<double, 4>& a, const std::array<double, 4>& b) {
    double best = std::numeric_limits<double>::infinity();
    for (int swap_pairs = 0; swap_pairs < 2; ++swap_pairs) {
        for (int swap1 = 0; swap1 < 2; ++swap1) {
            for (int swap2 = 0; swap2 < 2; ++swap2) {
                std::array<double, 4> c = b;
                if (swap_pairs) c = {b[2], b[3], b[0], b[1]};
                if (swap1) std::swap(c[0], c[1]);
                if (swap2) std::swap(c[2], c[3]);
                double g = 0.0;
                for (int k = 0; k < 4; ++k)
                    g = std::max(g, circular_gap(a[static_cast<std::size_t>(k)], c[static_cast<std::size_t>(k)]));
                best = std::min(best, g);
            }
        }
    }
    return best;
}

/// Coarse collisions of the map on a grid over unordered pairs, bucketed
/// in a uniform spatial hash.
inline std::vector<Candidate> collision_candidates(const ClosedCurve2D& curve, int n) {
    double speed = 0.0;
    for (int i = 0; i < n; ++i) speed = std::max(speed, norm(curve.velocity(double(i) / n)));
    const double radius = speed / n;

    struct Node {
        int i, j;
        VaughanValue v;
    };
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(n) * static_cast<std::size_t>(n - 1) / 2);
    std::vector<Point2> pts(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) pts[static_cast<std::size_t>(i)] = curve.at(double(i) / n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const Point2 a = pts[static_cast<std::size_t>(i)], b = pts[static_cast<std::size_t>(j)];
            const VaughanValue v{0.5 * (a + b), 0.5 * distance(a, b)};
            if (v.half_dist > radius) nodes.push_back({i, j, v});
        }
    }

    const double cell = 2.0 * radius;
    auto cell_of = [cell](double c) { return static_cast<std::int64_t>(std::floor(c / cell)); };
    auto key = [](std::int64_t a, std::int64_t b, std::int64_t c) {
        return (static_cast<std::uint64_t>(a & 0x1fffff) << 42) | (static_cast<std::uint64_t>(b & 0x1fffff) << 21) |
               static_cast<std::uint64_t>(c & 0x1fffff);
    };
    std::unordered_map<std::uint64_t, std::vector<std::size_t>> buckets;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& v = nodes[k].v;
        buckets[key(cell_of(v.mid.x), cell_of(v.mid.y), cell_of(v.half_dist))].push_back(k);
    }

    auto index_gap = [n](int a, int b) {
        const int d = std::abs(a - b) % n;
        return std::min(d, n - d);
    };
    std::vector<std::pair<std::size_t, std::size_t>> found;
    for (std::size_t k = 0; k < nodes.size(); ++k) {
        const auto& a = nodes[k];
        const auto cx = cell_of(a.v.mid.x), cy = cell_of(a.v.mid.y), cz = cell_of(a.v.half_dist);
        for (std::int64_t dx = -1; dx <= 1; ++dx) {
            for (std::int64_t dy = -1; dy <= 1; ++dy) {
                for (std::int64_t dz = -1; dz <= 1; ++dz) {
                    const auto it = buckets.find(key(cx + dx, cy + dy, cz + dz));
                    if (it == buckets.end()) continue;
                    for (std::size_t m : it->second) {
                        if (m <= k) continue;
                        const auto& b = nodes[m];
                        if (std::abs(a.v.mid.x - b.v.mid.x) >= radius || std::abs(a.v.mid.y - b.v.mid.y) >= radius ||
                            std::abs(a.v.half_dist - b.v.half_dist) >= radius)
                            continue;
                        const int sep = std::min(std::max(index_gap(a.i, b.i), index_gap(a.j, b.j)),
                                                 std::max(index_gap(a.i, b.j), index_gap(a.j, b.i)));
                        if (sep < 2) continue;
                        found.emplace_back(k, m);
                    }
                }
            }
        }
    }
    std::sort(found.begin(), found.end());
    std::vector<Candidate> out;
    out.reserve(found.size());
    for (const auto& [k, m] : found) {
        const auto& a = nodes[k];
        const auto& b = nodes[m];
        const double coarse = std::max({std::abs(a.v.mid.x - b.v.mid.x), std::abs(a.v.mid.y - b.v.mid.y),
                                        std::abs(a.v.half_dist - b.v.half_dist)});
        out.push_back({{double(a.i) / n, double(a.j) / n, double(b.i) / n, double(b.j) / n}, {a.i, a.j, b.i, b.j}, coarse});
    }
    return out;
}

inline Eigen::Vector3d collision_residual(const ClosedCurve2D& c, const std::array<double, 4>& x) {
    const auto f1 = vaughan_map(c, x[0], x[1]);
    const auto f2 = vaughan_map(c, x[2], x[3]);
    return {f1.mid.x - f2.mid.x, f1.mid.y - f2.mid.y, f1.half_dist - f2.half_dist};
}

inline Eigen::Matrix<double, 3, 4> collision_jacobian(const ClosedCurve2D& c, const std::array<double, 4>& x) {
    Eigen::Matrix<double, 3, 4> j;
    j.leftCols<2>() = vaughan_jacobian(c, x[0], x[1]);
    j.rightCols<2>() = -vaughan_jacobian(c, x[2], x[3]);
    return j;
}

/// Signed cosine of the angle between the two diagonals and its gradient.
inline double diagonal_cosine(const ClosedCurve2D& c, const std::array<double, 4>& x, Eigen::RowVector4d* grad) {
    const Point2 u1 = c.at(x[1]) - c.at(x[0]);
    const Point2 u2 = c.at(x[3]) - c.at(x[2]);
    const double n1 = norm(u1), n2 = norm(u2);
    const double d = dot(u1, u2);
    const double cosine = d / (n1 * n2);
    if (grad) {
        const Point2 g1 = (1.0 / (n1 * n2)) * u2 - (d / (n1 * n1 * n1 * n2)) * u1;
        const Point2 g2 = (1.0 / (n1 * n2)) * u1 - (d / (n1 * n2 * n2 * n2)) * u2;
        const Point2 v0 = c.velocity(x[0]), v1 = c.velocity(x[1]);
        const Point2 v2 = c.velocity(x[2]), v3 = c.velocity(x[3]);
        *grad << -dot(g1, v0), dot(g1, v1), -dot(g2, v2), dot(g2, v3);
    }
    return cosine;
}

/// |cos| of the diagonal angle that gives the requested side ratio.
inline double cosine_for_aspect(double ratio) { return (ratio * ratio - 1.0) / (ratio * ratio + 1.0); }

inline double aspect_from_cosine(double cosine) {
    const double c = std::min(std::abs(cosine), 1.0);
    return std::sqrt((1.0 + c) / (1.0 - c));
}

/// Gauss-Newton with least-norm steps and step halving. `residual_fn`
/// fills r and J; returns the final residual in max-norm.
template <int Rows, class ResidualFn>
double gauss_newton(std::array<double, 4>& x, int max_iterations, double tol, ResidualFn&& residual_fn) {
    Eigen::Matrix<double, Rows, 1> r;
    Eigen::Matrix<double, Rows, 4> j;
    residual_fn(x, r, &j);
    for (int it = 0; it < max_iterations; ++it) {
        if (!r.allFinite()) return std::numeric_limits<double>::infinity();
        if (r.template lpNorm<Eigen::Infinity>() < tol * 1e-3) break;
        const Eigen::Vector4d step = j.completeOrthogonalDecomposition().solve(-r);
        if (!step.allFinite()) break;
        bool improved = false;
        for (double lambda = 1.0; lambda > 1.0 / 1024; lambda *= 0.5) {
            std::array<double, 4> trial = x;
            for (int k = 0; k < 4; ++k) trial[static_cast<std::size_t>(k)] += lambda * step(k);
            Eigen::Matrix<double, Rows, 1> rt;
            try {
                residual_fn(trial, rt, nullptr);
            } catch (const Error&) {
                continue;
            }
            if (rt.allFinite() && rt.norm() < r.norm()) {
                x = trial;
                improved = true;
                break;
            }
        }
        if (!improved) break;
        try {
            residual_fn(x, r, &j);
        } catch (const Error&) {
            return std::numeric_limits<double>::infinity();
        }
    }
    for (auto& v : x) v = wrap_unit(v);
    return r.template lpNorm<Eigen::Infinity>();
}

/// Builds a hit in original coordinates from a converged quadruple, or
/// returns false if the rectangle is degenerate.
inline bool make_hit(const NormalizedCurve& nc, const std::array<double, 4>& x, double residual, double tol,
                     RectangleHit& hit) {
    const auto f = vaughan_map(nc.curve, x[0], x[1]);
    if (!(residual < tol) || !(f.half_dist > tol)) return false;
    std::array<Point2, 4> unit{nc.curve.at(x[0]), nc.curve.at(x[2]), nc.curve.at(x[1]), nc.curve.at(x[3])};
    const double side = std::min(distance(unit[0], unit[1]), distance(unit[1], unit[2]));
    if (!(side > std::sqrt(tol))) return false;
    ParamPair p1(x[0], x[1]), p2(x[2], x[3]);
    if (std::tie(p2.s, p2.t) < std::tie(p1.s, p1.t)) std::swap(p1, p2);
    hit.pair1 = p1;
    hit.pair2 = p2;
    // cyclic order from the canonical pairs
    const std::array<Point2, 4> local{nc.curve.at(p1.s), nc.curve.at(p2.s), nc.curve.at(p1.t), nc.curve.at(p2.t)};
    for (std::size_t k = 0; k < 4; ++k) hit.points[k] = nc.center + nc.scale * local[k];
    hit.residual = residual * nc.scale;
    hit.mid = nc.center + nc.scale * f.mid;
    hit.half_dist = nc.scale * f.half_dist;
    hit.aspect_ratio = rect_aspect_ratio(local);
    return true;
}

/// Groups candidates into connected clusters: two candidates are adjacent
/// when their grid quadruples differ by one step in one index, up to the
/// swaps within and between pairs. Clusters are listed by smallest member,
/// members by ascending coarse residual.
inline std::vector<std::vector<std::size_t>> candidate_clusters(const std::vector<Candidate>& cands, int n) {
    const auto un = static_cast<std::uint64_t>(n);
    auto key = [&](std::array<int, 4> q, std::uint64_t& out) {
        if (q[0] > q[1]) std::swap(q[0], q[1]);
        if (q[2] > q[3]) std::swap(q[2], q[3]);
        if (q[0] == q[1] || q[2] == q[3]) return false;
        if (std::tie(q[2], q[3]) < std::tie(q[0], q[1])) std::swap(q[0], q[2]), std::swap(q[1], q[3]);
        if (q[0] == q[2] && q[1] == q[3]) return false;
        std::uint64_t k = 0;
        for (int v : q) k = k * un + static_cast<std::uint64_t>(v);
        out = k;
        return true;
    };
    std::unordered_map<std::uint64_t, std::size_t> lookup;
    lookup.reserve(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c) {
        std::uint64_t k;
        if (key(cands[c].index, k)) lookup.emplace(k, c);
    }
    UnionFindIndex uf(cands.size());
    for (std::size_t c = 0; c < cands.size(); ++c) {
        for (std::size_t axis = 0; axis < 4; ++axis) {
            for (int step : {-1, 1}) {
                auto q = cands[c].index;
                q[axis] = (q[axis] + step + n) % n;
                std::uint64_t k;
                if (!key(q, k)) continue;
                const auto it = lookup.find(k);
                if (it != lookup.end()) uf.unite(c, it->second);
            }
        }
    }
    std::unordered_map<std::size_t, std::size_t> slot;
    std::vector<std::vector<std::size_t>> clusters;
    for (std::size_t c = 0; c < cands.size(); ++c) {
        const auto root = uf.find(c);
        const auto [it, fresh] = slot.emplace(root, clusters.size());
        if (fresh) clusters.emplace_back();
        clusters[it->second].push_back(c);
    }
    for (auto& members : clusters)
        std::stable_sort(members.begin(), members.end(),
                         [&](std::size_t l, std::size_t r) { return cands[l].coarse < cands[r].coarse; });
    return clusters;
}

inline std::array<double, 4> quad_of(const RectangleHit& h) { return {h.pair1.s, h.pair1.t, h.pair2.s, h.pair2.t}; }

} // namespace detail

/// Refinement attempts per cluster of coarse collisions.
inline constexpr std::size_t kClusterAttempts = 4;

/// Inscribed rectangles from grid collisions: one Gauss-Newton refined
/// representative per connected cluster of coarse collisions,
/// deduplicated and sorted by descending half-diagonal.
inline std::vector<RectangleHit> find_rectangle(const ClosedCurve2D& curve, const FinderConfig& config = {}) {
    config.validate();
    const auto nc = detail::normalize_curve(curve);
    const auto candidates = detail::collision_candidates(nc.curve, config.grid_n);
    auto residual_fn = [&](const std::array<double, 4>& x, Eigen::Vector3d& r, Eigen::Matrix<double, 3, 4>* j) {
        r = detail::collision_residual(nc.curve, x);
        if (j) *j = detail::collision_jacobian(nc.curve, x);
    };

    std::vector<RectangleHit> hits;
    for (const auto& members : detail::candidate_clusters(candidates, config.grid_n)) {
        // one representative per connected piece of the coarse collision set
        for (std::size_t a = 0; a < members.size() && a < kClusterAttempts; ++a) {
            std::array<double, 4> x = candidates[members[a]].x;
            double res;
            try {
                res = detail::gauss_newton<3>(x, config.max_iterations, config.refine_tol, residual_fn);
            } catch (const Error&) {
                continue;
            }
            RectangleHit hit;
            if (!detail::make_hit(nc, x, res, config.refine_tol, hit)) continue;
            const auto q = detail::quad_of(hit);
            const bool dup = std::any_of(hits.begin(), hits.end(), [&](const RectangleHit& o) {
                return detail::symmetric_gap(q, detail::quad_of(o)) < config.dedup_eps;
            });
            if (!dup) hits.push_back(hit);
            break;
        }
    }
    if (hits.empty()) throw Error("no rectangle found; increase grid_n");
    std::sort(hits.begin(), hits.end(), [](const RectangleHit& l, const RectangleHit& r) {
        if (l.half_dist != r.half_dist) return l.half_dist > r.half_dist;
        return detail::quad_of(l) < detail::quad_of(r);
    });
    return hits;
}

/// An inscribed rectangle with the given long/short side ratio. Adds the
/// diagonal-angle condition as a fourth equation and solves the square
/// system from the grid collisions closest to the target ratio.
inline RectangleHit find_rectangle_with_aspect(const ClosedCurve2D& curve, double ratio,
                                               const FinderConfig& config = {}) {
    if (!(ratio >= 1.0) || !std::isfinite(ratio)) throw Error("aspect ratio must be >= 1");
    config.validate();
    const auto nc = detail::normalize_curve(curve);
    auto candidates = detail::collision_candidates(nc.curve, config.grid_n);
    const double target = detail::cosine_for_aspect(ratio);

    std::vector<std::pair<double, std::size_t>> order;
    order.reserve(candidates.size());
    for (std::size_t k = 0; k < candidates.size(); ++k) {
        const double c = detail::diagonal_cosine(nc.curve, candidates[k].x, nullptr);
        order.emplace_back(std::abs(detail::aspect_from_cosine(c) - ratio), k);
    }
    std::sort(order.begin(), order.end());

    const double aspect_tol = std::sqrt(config.refine_tol);
    std::optional<RectangleHit> best;
    double best_err = std::numeric_limits<double>::infinity();
    int successes = 0;
    constexpr int kMaxAttempts = 400;
    for (std::size_t a = 0; a < order.size() && a < kMaxAttempts && successes < 8; ++a) {
        std::array<double, 4> x = candidates[order[a].second].x;
        const double sign = detail::diagonal_cosine(nc.curve, x, nullptr) < 0.0 ? -1.0 : 1.0;
        auto residual_fn = [&](const std::array<double, 4>& y, Eigen::Vector4d& r, Eigen::Matrix4d* j) {
            Eigen::RowVector4d grad;
            const double c = detail::diagonal_cosine(nc.curve, y, j ? &grad : nullptr);
            r.head<3>() = detail::collision_residual(nc.curve, y);
            r(3) = c - sign * target;
            if (j) {
                j->topRows<3>() = detail::collision_jacobian(nc.curve, y);
                j->row(3) = grad;
            }
        };
        double res;
        try {
            res = detail::gauss_newton<4>(x, config.max_iterations, config.refine_tol, residual_fn);
        } catch (const Error&) {
            continue;
        }
        const double vaughan_res = detail::collision_residual(nc.curve, x).lpNorm<Eigen::Infinity>();
        if (!(res < config.refine_tol)) continue;
        RectangleHit hit;
        if (!detail::make_hit(nc, x, vaughan_res, config.refine_tol, hit)) continue;
        const double err = std::abs(hit.aspect_ratio - ratio);
        if (!(err < aspect_tol)) continue;
        ++successes;
        if (err < best_err) best_err = err, best = hit;
    }
    if (!best) throw Error("no rectangle found; increase grid_n");
    return *best;
}

} // namespace mod2
