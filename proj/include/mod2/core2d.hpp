#pragma once

// Planar geometric kernel: closed curves (trigonometric polynomial or
// polyline), open polygonal paths, an epsilon-banded segment predicate and
// transverse crossing counts between paths and curves.

#include <mod2/error.hpp>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace mod2 {

inline constexpr int kDefaultSamples = 1024;
inline constexpr double kDegenerateBand = 1e-12;
inline constexpr double kDefaultPerturbation = 1e-9;
inline constexpr int kMaxPerturbRetries = 32;

struct Point2 {
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point2 operator+(Point2 a, Point2 b) { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point2 operator-(Point2 a, Point2 b) { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point2 operator*(double s, Point2 p) { return {s * p.x, s * p.y}; }
    friend constexpr Point2 operator*(Point2 p, double s) { return {s * p.x, s * p.y}; }
    friend constexpr bool operator==(Point2, Point2) = default;
};

constexpr double dot(Point2 a, Point2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Point2 a, Point2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point2 p) { return std::hypot(p.x, p.y); }
inline double distance(Point2 a, Point2 b) { return norm(a - b); }
inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

struct BoundingBox2 {
    Point2 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    Point2 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};

    void extend(Point2 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
    }
    void extend(std::span<const Point2> pts) {
        for (const auto& p : pts) extend(p);
    }
    bool empty() const { return lo.x > hi.x; }
    double diameter() const { return empty() ? 0.0 : distance(lo, hi); }
};

inline BoundingBox2 bounding_box(std::span<const Point2> pts) {
    BoundingBox2 box;
    box.extend(pts);
    return box;
}

/// One coordinate of a trigonometric polynomial curve:
/// c(t) = a0 + sum_k a[k-1] cos(2 pi k t) + b[k-1] sin(2 pi k t).
struct FourierSeries {
    double a0 = 0.0;
    std::vector<double> a;
    std::vector<double> b;

    std::size_t harmonics() const { return std::max(a.size(), b.size()); }

    double value(double t) const {
        double v = a0;
        for (std::size_t k = 1; k <= harmonics(); ++k) {
            const double w = 2.0 * std::numbers::pi * static_cast<double>(k) * t;
            if (k <= a.size()) v += a[k - 1] * std::cos(w);
            if (k <= b.size()) v += b[k - 1] * std::sin(w);
        }
        return v;
    }

    double derivative(double t) const {
        double v = 0.0;
        for (std::size_t k = 1; k <= harmonics(); ++k) {
            const double freq = 2.0 * std::numbers::pi * static_cast<double>(k);
            const double w = freq * t;
            if (k <= a.size()) v -= freq * a[k - 1] * std::sin(w);
            if (k <= b.size()) v += freq * b[k - 1] * std::cos(w);
        }
        return v;
    }

    bool finite() const {
        auto ok = [](double v) { return std::isfinite(v); };
        return std::isfinite(a0) && std::all_of(a.begin(), a.end(), ok) &&
               std::all_of(b.begin(), b.end(), ok);
    }
};

inline double wrap_unit(double t) {
    double w = t - std::floor(t);
    return w >= 1.0 ? 0.0 : w;
}

/// Closed plane curve parameterized over [0,1). Fourier curves are evaluated
/// analytically; polylines are implicitly closed and parameterized by
/// normalized arc length.
class ClosedCurve2D {
public:
    enum class Kind { fourier, polyline };

    static ClosedCurve2D fourier(FourierSeries x, FourierSeries y) {
        if (!x.finite() || !y.finite()) throw Error("fourier coefficients must be finite");
        ClosedCurve2D c;
        c.kind_ = Kind::fourier;
        c.x_ = std::move(x);
        c.y_ = std::move(y);
        double len = 0.0;
        Point2 prev = c.fourier_point(0.0);
        for (int i = 1; i <= kDefaultSamples; ++i) {
            const Point2 cur = c.fourier_point(static_cast<double>(i) / kDefaultSamples);
            len += distance(prev, cur);
            prev = cur;
        }
        c.length_ = len;
        if (!(len > 0.0)) throw Error("degenerate curve");
        return c;
    }

    static ClosedCurve2D polyline(std::vector<Point2> vertices) {
        if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
        if (vertices.size() < 3) throw Error("polyline curve needs at least 3 vertices");
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (!is_finite(vertices[i])) throw Error("polyline vertex is not finite");
            if (vertices[i] == vertices[(i + 1) % vertices.size()])
                throw Error("consecutive polyline vertices coincide");
        }
        ClosedCurve2D c;
        c.kind_ = Kind::polyline;
        c.cumulative_.reserve(vertices.size() + 1);
        c.cumulative_.push_back(0.0);
        for (std::size_t i = 0; i < vertices.size(); ++i)
            c.cumulative_.push_back(c.cumulative_.back() +
                                    distance(vertices[i], vertices[(i + 1) % vertices.size()]));
        c.length_ = c.cumulative_.back();
        c.vertices_ = std::move(vertices);
        if (!(c.length_ > 0.0)) throw Error("degenerate curve");
        return c;
    }

    Kind kind() const { return kind_; }
    bool is_fourier() const { return kind_ == Kind::fourier; }
    const FourierSeries& fourier_x() const { return x_; }
    const FourierSeries& fourier_y() const { return y_; }
    const std::vector<Point2>& vertices() const { return vertices_; }
    double length() const { return length_; }

    bool simple_checked() const { return simple_checked_; }
    /// Marks the curve as having passed is_simple. Set by checked_simple().
    ClosedCurve2D& mark_simple() {
        simple_checked_ = true;
        return *this;
    }

    Point2 at(double t) const {
        t = wrap_unit(t);
        if (kind_ == Kind::fourier) return fourier_point(t);
        const double target = t * length_;
        const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
        const std::size_t seg = std::min<std::size_t>(
            static_cast<std::size_t>(std::distance(cumulative_.begin(), it)) - 1, vertices_.size() - 1);
        const double seg_len = cumulative_[seg + 1] - cumulative_[seg];
        const double u = seg_len > 0.0 ? (target - cumulative_[seg]) / seg_len : 0.0;
        const Point2 a = vertices_[seg];
        const Point2 b = vertices_[(seg + 1) % vertices_.size()];
        return a + u * (b - a);
    }

    Point2 velocity(double t) const {
        if (kind_ != Kind::fourier) throw Error("derivative requires smooth representation");
        t = wrap_unit(t);
        return {x_.derivative(t), y_.derivative(t)};
    }

private:
    ClosedCurve2D() = default;
    Point2 fourier_point(double t) const { return {x_.value(t), y_.value(t)}; }

    Kind kind_ = Kind::polyline;
    FourierSeries x_;
    FourierSeries y_;
    std::vector<Point2> vertices_;
    std::vector<double> cumulative_;
    double length_ = 0.0;
    bool simple_checked_ = false;
};

inline Point2 eval_curve(const ClosedCurve2D& curve, double t) { return curve.at(t); }

inline Point2 eval_curve_derivative(const ClosedCurve2D& curve, double t) {
    return curve.velocity(t);
}

/// Polygon used for all discrete tests: parameter-uniform samples at
/// (i + 1/2) / n for Fourier curves, the vertices themselves for polylines.
/// The half-step offset keeps samples of symmetric curves off the axes.
inline std::vector<Point2> curve_polygon(const ClosedCurve2D& curve, int n_samples = kDefaultSamples) {
    if (!curve.is_fourier()) return curve.vertices();
    if (n_samples < 3) throw Error("n_samples must be at least 3");
    std::vector<Point2> pts;
    pts.reserve(static_cast<std::size_t>(n_samples));
    for (int i = 0; i < n_samples; ++i) pts.push_back(curve.at((i + 0.5) / n_samples));
    return pts;
}

/// Least-squares trigonometric fit with the given number of harmonics,
/// from samples taken uniformly in the curve parameter.
inline ClosedCurve2D fit_fourier(const ClosedCurve2D& curve, int harmonics, int samples = kDefaultSamples) {
    if (harmonics < 1 || 2 * harmonics >= samples) throw Error("harmonics must be in [1, samples/2)");
    const auto n = static_cast<std::size_t>(samples);
    std::vector<Point2> pts(n);
    for (std::size_t j = 0; j < n; ++j) pts[j] = curve.at(static_cast<double>(j) / samples);
    FourierSeries fx, fy;
    for (const auto& p : pts) {
        fx.a0 += p.x / samples;
        fy.a0 += p.y / samples;
    }
    for (int k = 1; k <= harmonics; ++k) {
        double ax = 0, bx = 0, ay = 0, by = 0;
        for (std::size_t j = 0; j < n; ++j) {
            const double w = 2.0 * std::numbers::pi * k * static_cast<double>(j) / samples;
            ax += pts[j].x * std::cos(w);
            bx += pts[j].x * std::sin(w);
            ay += pts[j].y * std::cos(w);
            by += pts[j].y * std::sin(w);
        }
        const double s = 2.0 / samples;
        fx.a.push_back(s * ax);
        fx.b.push_back(s * bx);
        fy.a.push_back(s * ay);
        fy.b.push_back(s * by);
    }
    return ClosedCurve2D::fourier(std::move(fx), std::move(fy));
}

/// Open polygonal path.
struct PolyPath {
    std::vector<Point2> vertices;

    PolyPath() = default;
    explicit PolyPath(std::vector<Point2> v) : vertices(std::move(v)) {
        if (vertices.size() < 2) throw Error("path needs at least 2 vertices");
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (!is_finite(vertices[i])) throw Error("path vertex is not finite");
            if (i + 1 < vertices.size() && vertices[i] == vertices[i + 1])
                throw Error("consecutive path vertices coincide");
        }
    }
};

template <class P>
struct BasicCrossingReport {
    std::size_t count = 0;
    int parity = 0;
    std::vector<P> crossings;
    bool all_transverse = true;
};

using CrossingReport = BasicCrossingReport<Point2>;

enum class Contact { none, transverse, degenerate };

struct SegmentHit {
    Contact kind = Contact::none;
    Point2 point{};  // valid for transverse hits
};

inline double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Point2 d = b - a;
    const double len2 = dot(d, d);
    double u = len2 > 0.0 ? dot(p - a, d) / len2 : 0.0;
    u = std::clamp(u, 0.0, 1.0);
    return distance(p, a + u * d);
}

/// Classifies the contact of segments p1p2 and q1q2. Points within `eps`
/// (a length) of the other segment's supporting line make the contact
/// degenerate unless the segments are separated by more than `eps`.
inline SegmentHit segment_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2, double eps) {
    if (p1 == p2 || q1 == q2) throw Error("segment endpoints must be distinct");
    const Point2 dp = p2 - p1;
    const Point2 dq = q2 - q1;
    const double lp = norm(dp);
    const double lq = norm(dq);
    // signed distances to the other segment's supporting line
    const double d1 = cross(dp, q1 - p1) / lp;
    const double d2 = cross(dp, q2 - p1) / lp;
    const double d3 = cross(dq, p1 - q1) / lq;
    const double d4 = cross(dq, p2 - q1) / lq;

    auto separated = [eps](double u, double v) { return (u > eps && v > eps) || (u < -eps && v < -eps); };
    if (separated(d1, d2) || separated(d3, d4)) return {};

    const bool clear = std::abs(d1) > eps && std::abs(d2) > eps && std::abs(d3) > eps && std::abs(d4) > eps;
    if (clear) {
        const double u = d3 / (d3 - d4);
        return {Contact::transverse, p1 + u * dp};
    }
    const double gap = std::min({point_segment_distance(q1, p1, p2), point_segment_distance(q2, p1, p2),
                                 point_segment_distance(p1, q1, q2), point_segment_distance(p2, q1, q2)});
    if (gap > eps) return {};
    return {Contact::degenerate, {}};
}

inline SegmentHit segment_intersect(Point2 p1, Point2 p2, Point2 q1, Point2 q2) {
    BoundingBox2 box;
    for (Point2 p : {p1, p2, q1, q2}) box.extend(p);
    return segment_intersect(p1, p2, q1, q2, kDegenerateBand * box.diameter());
}

namespace detail {

struct EdgeBox {
    double x0, x1, y0, y1;
    std::size_t index;
};

inline EdgeBox edge_box(Point2 a, Point2 b, std::size_t index, double pad) {
    return {std::min(a.x, b.x) - pad, std::max(a.x, b.x) + pad, std::min(a.y, b.y) - pad,
            std::max(a.y, b.y) + pad, index};
}

inline std::vector<EdgeBox> chain_boxes(std::span<const Point2> pts, bool closed, double pad) {
    std::vector<EdgeBox> boxes;
    const std::size_t n = pts.size();
    const std::size_t edges = closed ? n : n - 1;
    boxes.reserve(edges);
    for (std::size_t i = 0; i < edges; ++i) boxes.push_back(edge_box(pts[i], pts[(i + 1) % n], i, pad));
    return boxes;
}

/// Sweep over x for pairs of boxes (one from each set) that overlap.
/// `visit(ia, ib)` returns false to stop early.
template <class Visit>
void sweep_pairs(std::vector<EdgeBox> a, std::vector<EdgeBox> b, Visit&& visit) {
    auto by_x0 = [](const EdgeBox& l, const EdgeBox& r) { return l.x0 < r.x0; };
    std::sort(a.begin(), a.end(), by_x0);
    std::sort(b.begin(), b.end(), by_x0);
    std::vector<EdgeBox> active_a, active_b;
    std::size_t i = 0, j = 0;
    auto overlap_y = [](const EdgeBox& l, const EdgeBox& r) { return l.y0 <= r.y1 && r.y0 <= l.y1; };
    while (i < a.size() || j < b.size()) {
        const bool take_a = j >= b.size() || (i < a.size() && a[i].x0 <= b[j].x0);
        const EdgeBox cur = take_a ? a[i++] : b[j++];
        auto& others = take_a ? active_b : active_a;
        std::erase_if(others, [&](const EdgeBox& o) { return o.x1 < cur.x0; });
        for (const auto& o : others) {
            if (!overlap_y(cur, o)) continue;
            const bool go = take_a ? visit(cur.index, o.index) : visit(o.index, cur.index);
            if (!go) return;
        }
        (take_a ? active_a : active_b).push_back(cur);
    }
}

/// Single-set variant: every unordered overlapping pair once.
template <class Visit>
void sweep_self(std::vector<EdgeBox> boxes, Visit&& visit) {
    std::sort(boxes.begin(), boxes.end(), [](const EdgeBox& l, const EdgeBox& r) { return l.x0 < r.x0; });
    std::vector<EdgeBox> active;
    for (const auto& cur : boxes) {
        std::erase_if(active, [&](const EdgeBox& o) { return o.x1 < cur.x0; });
        for (const auto& o : active) {
            if (cur.y0 <= o.y1 && o.y0 <= cur.y1) {
                if (!visit(std::min(cur.index, o.index), std::max(cur.index, o.index))) return;
            }
        }
        active.push_back(cur);
    }
}

struct ScanResult {
    CrossingReport report;
    std::vector<Point2> degenerate_sites;  // approximate contact locations on the chain
};

/// Crossings of a chain (open or closed) against a set of closed polygons.
inline ScanResult scan_crossings(std::span<const Point2> chain, bool closed_chain,
                                 std::span<const std::vector<Point2>> polygons, double eps,
                                 bool stop_on_degenerate) {
    ScanResult out;
    struct Hit {
        std::size_t edge;
        double along;
        Point2 p;
    };
    std::vector<Hit> hits;
    const auto chain_edges = chain_boxes(chain, closed_chain, eps);
    const std::size_t n = chain.size();
    bool stop = false;
    for (const auto& poly : polygons) {
        if (stop) break;
        const std::size_t m = poly.size();
        sweep_pairs(chain_edges, chain_boxes(poly, true, eps), [&](std::size_t ia, std::size_t ib) {
            const Point2 p1 = chain[ia], p2 = chain[(ia + 1) % n];
            const Point2 q1 = poly[ib], q2 = poly[(ib + 1) % m];
            const auto hit = segment_intersect(p1, p2, q1, q2, eps);
            if (hit.kind == Contact::transverse) {
                hits.push_back({ia, distance(p1, hit.point), hit.point});
            } else if (hit.kind == Contact::degenerate) {
                out.report.all_transverse = false;
                // nearest point of the chain edge to the offending polygon edge
                const Point2 d = p2 - p1;
                Point2 site = p1;
                double best = std::numeric_limits<double>::infinity();
                for (Point2 q : {q1, q2}) {
                    const double u = std::clamp(dot(q - p1, d) / dot(d, d), 0.0, 1.0);
                    const Point2 c = p1 + u * d;
                    if (distance(c, q) < best) best = distance(c, q), site = c;
                }
                out.degenerate_sites.push_back(site);
                if (stop_on_degenerate) {
                    stop = true;
                    return false;
                }
            }
            return true;
        });
    }
    std::sort(hits.begin(), hits.end(),
              [](const Hit& l, const Hit& r) { return l.edge != r.edge ? l.edge < r.edge : l.along < r.along; });
    for (const auto& h : hits) out.report.crossings.push_back(h.p);
    out.report.count = out.report.crossings.size();
    out.report.parity = static_cast<int>(out.report.count % 2);
    return out;
}

inline double scene_scale(std::span<const Point2> chain, std::span<const std::vector<Point2>> polygons) {
    BoundingBox2 box;
    box.extend(chain);
    for (const auto& poly : polygons) box.extend(poly);
    return box.diameter();
}

inline Point2 random_disk_offset(std::mt19937_64& rng, double radius) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double r = radius * std::sqrt(unit(rng));
    const double a = 2.0 * std::numbers::pi * unit(rng);
    return {r * std::cos(a), r * std::sin(a)};
}

/// Seeded jitter of a chain until it meets every polygon transversely.
/// Open chains keep their endpoints; closed chains move every vertex.
inline std::vector<Point2> perturb_chain(std::vector<Point2> chain, bool closed,
                                         std::span<const std::vector<Point2>> polygons, std::uint64_t seed,
                                         double magnitude) {
    if (!(magnitude >= 0.0)) throw Error("perturbation magnitude must be non-negative");
    const double scale = scene_scale(chain, polygons);
    const double eps = kDegenerateBand * scale;
    auto first = scan_crossings(chain, closed, polygons, eps, false);
    if (first.report.all_transverse) return chain;

    // give the jitter a handle on every degenerate contact
    if (!closed) {
        std::vector<Point2> refined;
        for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
            const Point2 a = chain[i], b = chain[i + 1];
            refined.push_back(a);
            std::vector<double> cuts;
            const Point2 d = b - a;
            for (const Point2 s : first.degenerate_sites) {
                const double u = dot(s - a, d) / dot(d, d);
                if (u > 1e-6 && u < 1.0 - 1e-6 && point_segment_distance(s, a, b) <= 2.0 * eps) cuts.push_back(u);
            }
            if (chain.size() == 2) cuts.push_back(0.5);
            std::sort(cuts.begin(), cuts.end());
            double last = 0.0;
            for (double u : cuts) {
                if (u - last < 1e-6) continue;
                refined.push_back(a + u * d);
                last = u;
            }
        }
        refined.push_back(chain.back());
        chain = std::move(refined);
    }

    const double radius = magnitude * scale;
    std::mt19937_64 rng(seed);
    const std::size_t lo = closed ? 0 : 1;
    const std::size_t hi = closed ? chain.size() : chain.size() - 1;
    for (int attempt = 0; attempt < kMaxPerturbRetries; ++attempt) {
        std::vector<Point2> cand = chain;
        for (std::size_t i = lo; i < hi; ++i) cand[i] = chain[i] + random_disk_offset(rng, radius);
        bool distinct = true;
        for (std::size_t i = 0; i + 1 < cand.size(); ++i) distinct = distinct && !(cand[i] == cand[i + 1]);
        if (!distinct) continue;
        if (scan_crossings(cand, closed, polygons, eps, true).report.all_transverse) return cand;
    }
    throw Error("perturbation failed");
}

} // namespace detail

/// True iff the sampled polygon of the curve has no crossing or touching
/// between non-adjacent edges.
inline bool is_simple(const ClosedCurve2D& curve, int n_samples = kDefaultSamples) {
    if (n_samples < 8) throw Error("n_samples must be at least 8");
    if (!(curve.length() > 0.0)) throw Error("degenerate curve");
    const auto poly = curve_polygon(curve, n_samples);
    const std::size_t n = poly.size();
    const double eps = kDegenerateBand * bounding_box(poly).diameter();
    bool simple = true;
    detail::sweep_self(detail::chain_boxes(poly, true, eps), [&](std::size_t i, std::size_t j) {
        if (j == i + 1 || (i == 0 && j == n - 1)) return true;
        if (segment_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n], eps).kind != Contact::none) {
            simple = false;
            return false;
        }
        return true;
    });
    return simple;
}

/// Returns a copy flagged as simple, or throws if the check fails.
inline ClosedCurve2D checked_simple(ClosedCurve2D curve, int n_samples = kDefaultSamples) {
    if (!is_simple(curve, n_samples)) throw Error("curve is not simple");
    curve.mark_simple();
    return curve;
}

inline PolyPath perturb_generic(const PolyPath& path, std::span<const ClosedCurve2D> obstacles, std::uint64_t seed,
                                double magnitude = kDefaultPerturbation, int n_samples = kDefaultSamples) {
    std::vector<std::vector<Point2>> polys;
    for (const auto& c : obstacles) polys.push_back(curve_polygon(c, n_samples));
    return PolyPath(detail::perturb_chain(path.vertices, false, polys, seed, magnitude));
}

inline PolyPath perturb_generic(const PolyPath& path, const ClosedCurve2D& obstacle, std::uint64_t seed,
                                double magnitude = kDefaultPerturbation, int n_samples = kDefaultSamples) {
    return perturb_generic(path, std::span<const ClosedCurve2D>(&obstacle, 1), seed, magnitude, n_samples);
}

/// Transverse crossings of a path with the curve's sampled polygon, in
/// order along the path. Throws if any contact is degenerate.
inline CrossingReport crossing_report(const PolyPath& path, const ClosedCurve2D& curve,
                                      int n_samples = kDefaultSamples) {
    const std::vector<std::vector<Point2>> polys{curve_polygon(curve, n_samples)};
    const double eps = kDegenerateBand * detail::scene_scale(path.vertices, polys);
    auto scan = detail::scan_crossings(path.vertices, false, polys, eps, true);
    if (!scan.report.all_transverse) throw Error("non-transverse configuration; perturb first");
    return scan.report;
}

/// Crossings between two closed curves. Degenerate contacts are removed by
/// a seeded jitter of the first curve's polygon.
inline CrossingReport closed_closed_crossings(const ClosedCurve2D& a, const ClosedCurve2D& b, std::uint64_t seed = 0,
                                              int n_samples = kDefaultSamples) {
    const std::vector<std::vector<Point2>> polys{curve_polygon(b, n_samples)};
    auto chain = detail::perturb_chain(curve_polygon(a, n_samples), true, polys, seed, kDefaultPerturbation);
    const double eps = kDegenerateBand * detail::scene_scale(chain, polys);
    auto scan = detail::scan_crossings(chain, true, polys, eps, true);
    if (!scan.report.all_transverse) throw Error("non-transverse configuration; perturb first");
    if (scan.report.parity != 0) throw ConsistencyError("closed curves crossed an odd number of times");
    return scan.report;
}

} // namespace mod2
