#pragma once

// Triangle meshes in 3-space: closedness, orientability and Euler
// characteristic; curve-surface crossing parity; self-intersection scan.

#include <mod2/core2d.hpp>

#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <unordered_map>
#include <utility>
#include <vector>

namespace mod2 {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    friend constexpr Point3 operator+(Point3 a, Point3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Point3 operator-(Point3 a, Point3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Point3 operator*(double s, Point3 p) { return {s * p.x, s * p.y, s * p.z}; }
    friend constexpr Point3 operator*(Point3 p, double s) { return {s * p.x, s * p.y, s * p.z}; }
    friend constexpr bool operator==(Point3, Point3) = default;
};

constexpr double dot(Point3 a, Point3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }
constexpr Point3 cross(Point3 a, Point3 b) {
    return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}
inline double norm(Point3 p) { return std::sqrt(dot(p, p)); }
inline double distance(Point3 a, Point3 b) { return norm(a - b); }
inline bool is_finite(Point3 p) { return std::isfinite(p.x) && std::isfinite(p.y) && std::isfinite(p.z); }
inline Point3 normalized(Point3 p) { return (1.0 / norm(p)) * p; }

struct BoundingBox3 {
    Point3 lo{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
              std::numeric_limits<double>::infinity()};
    Point3 hi{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
              -std::numeric_limits<double>::infinity()};

    void extend(Point3 p) {
        lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
        hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
    }
    void extend(std::span<const Point3> pts) {
        for (const auto& p : pts) extend(p);
    }
    bool empty() const { return lo.x > hi.x; }
    double diameter() const { return empty() ? 0.0 : distance(lo, hi); }
};

using Triangle3 = std::array<Point3, 3>;
using Face = std::array<int, 3>;

class TriangleMesh {
public:
    TriangleMesh() = default;
    TriangleMesh(std::vector<Point3> vertices, std::vector<Face> faces)
        : vertices_(std::move(vertices)), faces_(std::move(faces)) {
        for (const auto& v : vertices_)
            if (!is_finite(v)) throw Error("mesh vertex is not finite");
        BoundingBox3 box;
        box.extend(vertices_);
        const double diam = box.diameter();
        const int n = static_cast<int>(vertices_.size());
        for (const auto& f : faces_) {
            for (int idx : f)
                if (idx < 0 || idx >= n) throw Error("face index out of range");
            if (f[0] == f[1] || f[1] == f[2] || f[0] == f[2]) throw Error("face repeats a vertex");
            const Point3 a = vertices_[static_cast<std::size_t>(f[0])];
            const Point3 nrm = cross(vertices_[static_cast<std::size_t>(f[1])] - a,
                                     vertices_[static_cast<std::size_t>(f[2])] - a);
            if (norm(nrm) <= kDegenerateBand * diam * diam) throw Error("degenerate face");
        }
    }

    const std::vector<Point3>& vertices() const { return vertices_; }
    const std::vector<Face>& faces() const { return faces_; }

    Triangle3 triangle(std::size_t f) const {
        const auto& idx = faces_[f];
        return {vertices_[static_cast<std::size_t>(idx[0])], vertices_[static_cast<std::size_t>(idx[1])],
                vertices_[static_cast<std::size_t>(idx[2])]};
    }

    BoundingBox3 bounds() const {
        BoundingBox3 box;
        box.extend(vertices_);
        return box;
    }

private:
    std::vector<Point3> vertices_;
    std::vector<Face> faces_;
};

/// Implicitly closed polyline in 3-space.
struct ClosedPolyline3 {
    std::vector<Point3> vertices;

    ClosedPolyline3() = default;
    explicit ClosedPolyline3(std::vector<Point3> v) : vertices(std::move(v)) {
        if (vertices.size() >= 2 && vertices.front() == vertices.back()) vertices.pop_back();
        if (vertices.size() < 3) throw Error("closed loop needs at least 3 vertices");
        for (std::size_t i = 0; i < vertices.size(); ++i) {
            if (!is_finite(vertices[i])) throw Error("loop vertex is not finite");
            if (vertices[i] == vertices[(i + 1) % vertices.size()]) throw Error("consecutive loop vertices coincide");
        }
    }
};

using CrossingReport3 = BasicCrossingReport<Point3>;

struct MeshReport {
    bool closed = false;
    bool orientable = false;
    int euler_characteristic = 0;
    int boundary_loops = 0;
    int vertices = 0;
    int edges = 0;
    int faces = 0;
};

namespace detail {

inline std::uint64_t edge_key(int a, int b) {
    const auto lo = static_cast<std::uint32_t>(std::min(a, b));
    const auto hi = static_cast<std::uint32_t>(std::max(a, b));
    return (static_cast<std::uint64_t>(lo) << 32) | hi;
}

struct EdgeUse {
    int face;
    bool forward;  // face traverses the edge from lower to higher index
};

inline std::unordered_map<std::uint64_t, std::vector<EdgeUse>> edge_uses(const TriangleMesh& mesh) {
    std::unordered_map<std::uint64_t, std::vector<EdgeUse>> uses;
    const auto& faces = mesh.faces();
    for (std::size_t f = 0; f < faces.size(); ++f) {
        for (int k = 0; k < 3; ++k) {
            const int a = faces[f][static_cast<std::size_t>(k)];
            const int b = faces[f][static_cast<std::size_t>((k + 1) % 3)];
            uses[edge_key(a, b)].push_back({static_cast<int>(f), a < b});
        }
    }
    return uses;
}

struct DisjointSets {
    std::vector<int> parent;
    explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) { parent[static_cast<std::size_t>(find(a))] = find(b); }
};

} // namespace detail

/// Closedness, orientability by winding propagation over edge-adjacent
/// faces, Euler characteristic and number of boundary cycles.
inline MeshReport mesh_validate(const TriangleMesh& mesh) {
    const auto uses = detail::edge_uses(mesh);
    const auto& faces = mesh.faces();
    MeshReport r;
    r.faces = static_cast<int>(faces.size());
    r.edges = static_cast<int>(uses.size());

    std::vector<char> referenced(mesh.vertices().size(), 0);
    for (const auto& f : faces)
        for (int v : f) referenced[static_cast<std::size_t>(v)] = 1;
    r.vertices = static_cast<int>(std::count(referenced.begin(), referenced.end(), 1));
    r.euler_characteristic = r.vertices - r.edges + r.faces;

    // face -> (neighbor, both traverse the shared edge the same way)
    std::vector<std::vector<std::pair<int, bool>>> adjacency(faces.size());
    detail::DisjointSets boundary(mesh.vertices().size());
    std::vector<char> on_boundary(mesh.vertices().size(), 0);
    bool closed = true;
    for (const auto& [key, list] : uses) {
        if (list.size() > 2) throw Error("non-manifold edge");
        if (list.size() == 1) {
            closed = false;
            const int a = static_cast<int>(key >> 32);
            const int b = static_cast<int>(key & 0xffffffffu);
            boundary.unite(a, b);
            on_boundary[static_cast<std::size_t>(a)] = on_boundary[static_cast<std::size_t>(b)] = 1;
            continue;
        }
        const bool same = list[0].forward == list[1].forward;
        adjacency[static_cast<std::size_t>(list[0].face)].emplace_back(list[1].face, same);
        adjacency[static_cast<std::size_t>(list[1].face)].emplace_back(list[0].face, same);
    }
    r.closed = closed;

    std::vector<int> flip(faces.size(), -1);
    bool orientable = true;
    std::vector<int> queue;
    for (std::size_t seed = 0; seed < faces.size() && orientable; ++seed) {
        if (flip[seed] >= 0) continue;
        flip[seed] = 0;
        queue.assign(1, static_cast<int>(seed));
        while (!queue.empty() && orientable) {
            const int f = queue.back();
            queue.pop_back();
            for (const auto& [g, same] : adjacency[static_cast<std::size_t>(f)]) {
                // a shared edge must be traversed in opposite directions
                const int want = flip[static_cast<std::size_t>(f)] ^ (same ? 1 : 0);
                auto& cur = flip[static_cast<std::size_t>(g)];
                if (cur < 0) {
                    cur = want;
                    queue.push_back(g);
                } else if (cur != want) {
                    orientable = false;
                    break;
                }
            }
        }
    }
    r.orientable = orientable;

    std::vector<char> root_seen(mesh.vertices().size(), 0);
    for (std::size_t v = 0; v < on_boundary.size(); ++v) {
        if (!on_boundary[v]) continue;
        auto& seen = root_seen[static_cast<std::size_t>(boundary.find(static_cast<int>(v)))];
        if (!seen) {
            seen = 1;
            ++r.boundary_loops;
        }
    }
    return r;
}

struct SegmentTriangleHit {
    Contact kind = Contact::none;
    Point3 point{};
};

inline double point_segment_distance(Point3 p, Point3 a, Point3 b) {
    const Point3 d = b - a;
    const double len2 = dot(d, d);
    const double u = len2 > 0.0 ? std::clamp(dot(p - a, d) / len2, 0.0, 1.0) : 0.0;
    return distance(p, a + u * d);
}

inline double segment_segment_distance(Point3 p1, Point3 q1, Point3 p2, Point3 q2) {
    // closest points of two segments, clamped parameterization
    const Point3 d1 = q1 - p1, d2 = q2 - p2, r = p1 - p2;
    const double a = dot(d1, d1), e = dot(d2, d2), f = dot(d2, r);
    const double c = dot(d1, r), b = dot(d1, d2);
    const double denom = a * e - b * b;
    double s = denom > 0.0 ? std::clamp((b * f - c * e) / denom, 0.0, 1.0) : 0.0;
    double t = (b * s + f) / e;
    if (t < 0.0) {
        t = 0.0;
        s = std::clamp(-c / a, 0.0, 1.0);
    } else if (t > 1.0) {
        t = 1.0;
        s = std::clamp((b - c) / a, 0.0, 1.0);
    }
    return distance(p1 + s * d1, p2 + t * d2);
}

inline double point_triangle_distance(Point3 p, const Triangle3& tri) {
    const Point3 nrm = normalized(cross(tri[1] - tri[0], tri[2] - tri[0]));
    const double h = dot(nrm, p - tri[0]);
    const Point3 proj = p - h * nrm;
    bool inside = true;
    for (int i = 0; i < 3; ++i) {
        const Point3 a = tri[static_cast<std::size_t>(i)], b = tri[static_cast<std::size_t>((i + 1) % 3)];
        if (dot(cross(b - a, proj - a), nrm) < 0.0) inside = false;
    }
    if (inside) return std::abs(h);
    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 3; ++i)
        best = std::min(best, point_segment_distance(p, tri[static_cast<std::size_t>(i)],
                                                     tri[static_cast<std::size_t>((i + 1) % 3)]));
    return best;
}

/// Classifies segment ab against a triangle: transverse iff the open
/// segment pierces the open triangle with margin `eps` (a length).
inline SegmentTriangleHit segment_triangle_intersect(Point3 a, Point3 b, const Triangle3& tri, double eps) {
    if (a == b) throw Error("segment endpoints must be distinct");
    const Point3 nrm = normalized(cross(tri[1] - tri[0], tri[2] - tri[0]));
    const double da = dot(nrm, a - tri[0]);
    const double db = dot(nrm, b - tri[0]);
    if ((da > eps && db > eps) || (da < -eps && db < -eps)) return {};

    if (std::abs(da) > eps && std::abs(db) > eps) {
        const Point3 p = a + (da / (da - db)) * (b - a);
        double margin = std::numeric_limits<double>::infinity();
        for (int i = 0; i < 3; ++i) {
            const Point3 u = tri[static_cast<std::size_t>(i)], v = tri[static_cast<std::size_t>((i + 1) % 3)];
            margin = std::min(margin, dot(cross(v - u, p - u), nrm) / norm(v - u));
        }
        if (margin > eps) return {Contact::transverse, p};
        if (margin < -eps) return {};
        return {Contact::degenerate, {}};
    }

    double gap = std::min(point_triangle_distance(a, tri), point_triangle_distance(b, tri));
    for (int i = 0; i < 3; ++i)
        gap = std::min(gap, segment_segment_distance(a, b, tri[static_cast<std::size_t>(i)],
                                                     tri[static_cast<std::size_t>((i + 1) % 3)]));
    if (gap > eps) return {};
    return {Contact::degenerate, {}};
}

inline SegmentTriangleHit segment_triangle_intersect(Point3 a, Point3 b, const Triangle3& tri) {
    BoundingBox3 box;
    for (Point3 p : {a, b, tri[0], tri[1], tri[2]}) box.extend(p);
    return segment_triangle_intersect(a, b, tri, kDegenerateBand * box.diameter());
}

/// Transverse (crossing), degenerate (touching or coplanar contact) or none.
inline Contact triangle_triangle_intersect(const Triangle3& t1, const Triangle3& t2, double eps) {
    bool touching = false;
    for (const auto* pair : {&t1, &t2}) {
        const Triangle3& edges = *pair;
        const Triangle3& other = pair == &t1 ? t2 : t1;
        for (int i = 0; i < 3; ++i) {
            const auto hit = segment_triangle_intersect(edges[static_cast<std::size_t>(i)],
                                                        edges[static_cast<std::size_t>((i + 1) % 3)], other, eps);
            if (hit.kind == Contact::transverse) return Contact::transverse;
            if (hit.kind == Contact::degenerate) touching = true;
        }
    }
    return touching ? Contact::degenerate : Contact::none;
}

namespace detail {

struct Box3 {
    Point3 lo, hi;
    std::size_t index;
};

inline Box3 padded_box(std::span<const Point3> pts, std::size_t index, double pad) {
    BoundingBox3 b;
    b.extend(pts);
    return {b.lo - Point3{pad, pad, pad}, b.hi + Point3{pad, pad, pad}, index};
}

inline bool overlaps(const Box3& a, const Box3& b) {
    return a.lo.x <= b.hi.x && b.lo.x <= a.hi.x && a.lo.y <= b.hi.y && b.lo.y <= a.hi.y && a.lo.z <= b.hi.z &&
           b.lo.z <= a.hi.z;
}

inline std::vector<Point3> jitter(std::vector<Point3> pts, std::mt19937_64& rng, double radius, bool keep_ends) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    const std::size_t lo = keep_ends ? 1 : 0;
    const std::size_t hi = keep_ends ? pts.size() - 1 : pts.size();
    for (std::size_t i = lo; i < hi; ++i) {
        Point3 d{gauss(rng), gauss(rng), gauss(rng)};
        const double len = norm(d);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        if (len > 0.0) pts[i] = pts[i] + (radius * std::cbrt(unit(rng)) / len) * d;
    }
    return pts;
}

inline CrossingReport3 scan_loop(std::span<const Point3> loop, const TriangleMesh& mesh,
                                 const std::vector<Box3>& face_boxes, double eps) {
    CrossingReport3 report;
    const std::size_t n = loop.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point3 a = loop[i], b = loop[(i + 1) % n];
        const Point3 seg[2] = {a, b};
        const Box3 sb = padded_box(seg, i, eps);
        std::vector<std::pair<double, Point3>> hits;
        for (const auto& fb : face_boxes) {
            if (!overlaps(sb, fb)) continue;
            const auto hit = segment_triangle_intersect(a, b, mesh.triangle(fb.index), eps);
            if (hit.kind == Contact::degenerate) {
                report.all_transverse = false;
                return report;
            }
            if (hit.kind == Contact::transverse) hits.emplace_back(distance(a, hit.point), hit.point);
        }
        std::sort(hits.begin(), hits.end(), [](const auto& l, const auto& r) { return l.first < r.first; });
        for (const auto& h : hits) report.crossings.push_back(h.second);
    }
    report.count = report.crossings.size();
    report.parity = static_cast<int>(report.count % 2);
    return report;
}

inline std::vector<Box3> face_boxes(const TriangleMesh& mesh, double pad) {
    std::vector<Box3> boxes;
    boxes.reserve(mesh.faces().size());
    for (std::size_t f = 0; f < mesh.faces().size(); ++f) {
        const auto tri = mesh.triangle(f);
        boxes.push_back(padded_box(tri, f, pad));
    }
    return boxes;
}

} // namespace detail

struct LoopParity {
    CrossingReport3 report;
    MeshReport mesh;
    ClosedPolyline3 loop;  // the generic loop actually counted
};

/// Crossing parity of a closed loop with a mesh. The loop is jittered
/// (seeded) until every crossing is transverse. A closed mesh crossed an
/// odd number of times raises ConsistencyError.
inline LoopParity curve_surface_parity(const ClosedPolyline3& loop, const TriangleMesh& mesh, std::uint64_t seed = 0) {
    LoopParity out;
    out.mesh = mesh_validate(mesh);
    BoundingBox3 box = mesh.bounds();
    box.extend(loop.vertices);
    const double scale = box.diameter();
    const double eps = kDegenerateBand * scale;
    const auto boxes = detail::face_boxes(mesh, eps);

    std::vector<Point3> pts = loop.vertices;
    auto report = detail::scan_loop(pts, mesh, boxes, eps);
    std::mt19937_64 rng(seed);
    for (int attempt = 0; !report.all_transverse; ++attempt) {
        if (attempt == kMaxPerturbRetries) throw Error("perturbation failed");
        pts = detail::jitter(loop.vertices, rng, kDefaultPerturbation * scale, false);
        report = detail::scan_loop(pts, mesh, boxes, eps);
    }
    if (out.mesh.closed && report.parity != 0)
        throw ConsistencyError("closed mesh crossed an odd number of times");
    out.report = std::move(report);
    out.loop = ClosedPolyline3(std::move(pts));
    return out;
}

/// Pairs (i < j) of faces sharing no vertex whose triangles meet, sorted.
/// Degenerate contacts are re-tested on seeded vertex jitters; a contact
/// that survives every jitter is reported.
inline std::vector<std::pair<int, int>> mesh_self_intersections(const TriangleMesh& mesh, std::uint64_t seed = 0) {
    const double scale = mesh.bounds().diameter();
    const double eps = kDegenerateBand * scale;
    auto boxes = detail::face_boxes(mesh, eps);
    std::sort(boxes.begin(), boxes.end(), [](const auto& l, const auto& r) { return l.lo.x < r.lo.x; });

    std::vector<std::vector<Point3>> jittered;
    std::mt19937_64 rng(seed);
    auto jittered_triangle = [&](std::size_t round, std::size_t f) {
        while (jittered.size() <= round)
            jittered.push_back(detail::jitter(mesh.vertices(), rng, kDefaultPerturbation * scale, false));
        const auto& v = jittered[round];
        const auto& idx = mesh.faces()[f];
        return Triangle3{v[static_cast<std::size_t>(idx[0])], v[static_cast<std::size_t>(idx[1])],
                         v[static_cast<std::size_t>(idx[2])]};
    };

    std::vector<std::pair<int, int>> result;
    std::vector<detail::Box3> active;
    for (const auto& cur : boxes) {
        std::erase_if(active, [&](const detail::Box3& o) { return o.hi.x < cur.lo.x; });
        const auto& fa = mesh.faces()[cur.index];
        for (const auto& other : active) {
            if (!detail::overlaps(cur, other)) continue;
            const auto& fb = mesh.faces()[other.index];
            bool shares = false;
            for (int u : fa)
                for (int w : fb) shares = shares || u == w;
            if (shares) continue;
            auto kind = triangle_triangle_intersect(mesh.triangle(cur.index), mesh.triangle(other.index), eps);
            for (std::size_t round = 0; kind == Contact::degenerate && round < 4; ++round) {
                const auto next = triangle_triangle_intersect(jittered_triangle(round, cur.index),
                                                              jittered_triangle(round, other.index), eps);
                if (next != Contact::degenerate) kind = next;
                if (next == Contact::degenerate && round == 3) kind = Contact::transverse;
            }
            if (kind == Contact::transverse) {
                result.emplace_back(static_cast<int>(std::min(cur.index, other.index)),
                                    static_cast<int>(std::max(cur.index, other.index)));
            }
        }
        active.push_back(cur);
    }
    std::sort(result.begin(), result.end());
    return result;
}

} // namespace mod2
