#pragma once

// Reference shapes: the bundled meshes and loops are generated from these.

#include <mod2/core2d.hpp>
#include <mod2/mesh3d.hpp>

#include <map>
#include <numbers>
#include <set>
#include <tuple>

namespace mod2::samples {

inline ClosedCurve2D ellipse(double rx, double ry, Point2 center = {}) {
    return ClosedCurve2D::fourier({center.x, {rx}, {0.0}}, {center.y, {0.0}, {ry}});
}

inline ClosedCurve2D circle(double radius = 1.0, Point2 center = {}) { return ellipse(radius, radius, center); }

inline TriangleMesh octahedron() {
    return TriangleMesh({{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}},
                        {{0, 2, 4}, {2, 1, 4}, {1, 3, 4}, {3, 0, 4}, {2, 0, 5}, {1, 2, 5}, {3, 1, 5}, {0, 3, 5}});
}

/// Torus of revolution sampled on an nu x nv grid.
inline TriangleMesh torus(int nu = 8, int nv = 8, double major = 2.0, double minor = 0.75) {
    std::vector<Point3> v;
    std::vector<Face> f;
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * std::numbers::pi * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double w = 2.0 * std::numbers::pi * j / nv;
            v.push_back({(major + minor * std::cos(w)) * std::cos(u), (major + minor * std::cos(w)) * std::sin(u),
                         minor * std::sin(w)});
        }
    }
    auto id = [&](int i, int j) { return ((i % nu) * nv) + (j % nv); };
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return TriangleMesh(std::move(v), std::move(f));
}

/// Möbius band with `segments` quads (2*segments vertices), center radius
/// `radius`, half-width `half_width`.
inline TriangleMesh mobius_band(int segments = 5, double radius = 2.0, double half_width = 0.5) {
    std::vector<Point3> v(static_cast<std::size_t>(2 * segments));
    auto at = [&](double u, double s) {
        const double r = radius + s * std::cos(u / 2.0);
        return Point3{r * std::cos(u), r * std::sin(u), s * std::sin(u / 2.0)};
    };
    for (int i = 0; i < segments; ++i) {
        const double u = 2.0 * std::numbers::pi * i / segments;
        v[static_cast<std::size_t>(i)] = at(u, half_width);
        v[static_cast<std::size_t>(segments + i)] = at(u, -half_width);
    }
    // the half twist swaps the rails when closing up
    auto top = [&](int i) { return i < segments ? i : segments; };
    auto bottom = [&](int i) { return i < segments ? segments + i : 0; };
    std::vector<Face> f;
    for (int i = 0; i < segments; ++i) {
        f.push_back({top(i), bottom(i), bottom(i + 1)});
        f.push_back({top(i), bottom(i + 1), top(i + 1)});
    }
    return TriangleMesh(std::move(v), std::move(f));
}

/// Loop that runs alongside a Möbius band (as built by mobius_band), offset
/// by `offset` along the propagated face normal, and closes up by piercing
/// the first face once.
inline ClosedPolyline3 mobius_threading_loop(const TriangleMesh& band, double offset = 0.1) {
    const auto& faces = band.faces();
    auto centroid = [&](std::size_t f) {
        const auto t = band.triangle(f);
        return (1.0 / 3.0) * (t[0] + t[1] + t[2]);
    };
    auto normal = [&](std::size_t f) {
        const auto t = band.triangle(f);
        return normalized(cross(t[1] - t[0], t[2] - t[0]));
    };
    auto shared_mid = [&](std::size_t f, std::size_t g) {
        Point3 sum{};
        int n = 0;
        for (int a : faces[f])
            for (int b : faces[g])
                if (a == b) sum = sum + band.vertices()[static_cast<std::size_t>(a)], ++n;
        return (1.0 / n) * sum;
    };
    const std::size_t nf = faces.size();
    std::vector<Point3> pts{centroid(0) + offset * normal(0)};
    for (std::size_t j = 0; j + 1 < nf; ++j) {
        pts.push_back(shared_mid(j, j + 1) + offset * normalized(normal(j) + normal(j + 1)));
        pts.push_back(centroid(j + 1) + offset * normal(j + 1));
    }
    // across the seam the winding flips, so the last face's side continues
    // onto the opposite side of the first face
    pts.push_back(shared_mid(nf - 1, 0) + offset * normalized(normal(nf - 1) - normal(0)));
    pts.push_back(centroid(0) - offset * normal(0));
    return ClosedPolyline3(std::move(pts));
}

/// Figure-8 immersion of the Klein bottle: (u + 2pi, v) is glued to (u, -v).
inline TriangleMesh klein_immersion(int nu = 24, int nv = 12, double radius = 3.0) {
    std::vector<Point3> v;
    for (int i = 0; i < nu; ++i) {
        const double u = 2.0 * std::numbers::pi * i / nu;
        for (int j = 0; j < nv; ++j) {
            const double w = 2.0 * std::numbers::pi * (j + 0.5) / nv;
            const double a = std::cos(u / 2) * std::sin(w) - std::sin(u / 2) * std::sin(2 * w);
            const double b = std::sin(u / 2) * std::sin(w) + std::cos(u / 2) * std::sin(2 * w);
            v.push_back({(radius + a) * std::cos(u), (radius + a) * std::sin(u), b});
        }
    }
    auto id = [&](int i, int j) {
        if (i >= nu) {
            i -= nu;
            j = nv - 1 - j;
        }
        j = ((j % nv) + nv) % nv;
        return i * nv + j;
    };
    std::vector<Face> f;
    for (int i = 0; i < nu; ++i) {
        for (int j = 0; j < nv; ++j) {
            f.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            f.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    return TriangleMesh(std::move(v), std::move(f));
}

/// Boundary of a unit-height slab of (2g+1) x 3 unit cubes with g square
/// holes: a closed orientable surface of genus g.
inline TriangleMesh holed_slab(int genus) {
    const int nx = 2 * genus + 1, ny = 3;
    auto filled = [&](int i, int j) {
        if (i < 0 || j < 0 || i >= nx || j >= ny) return false;
        return !(j == 1 && i % 2 == 1);
    };
    std::map<std::tuple<int, int, int>, int> ids;
    std::vector<Point3> v;
    auto vid = [&](int x, int y, int z) {
        auto [it, fresh] = ids.try_emplace({x, y, z}, static_cast<int>(v.size()));
        if (fresh) v.push_back({double(x), double(y), double(z)});
        return it->second;
    };
    std::vector<Face> f;
    // quad corners listed counter-clockwise seen from outside
    auto quad = [&](std::array<std::array<int, 3>, 4> c) {
        const int a = vid(c[0][0], c[0][1], c[0][2]), b = vid(c[1][0], c[1][1], c[1][2]);
        const int d = vid(c[2][0], c[2][1], c[2][2]), e = vid(c[3][0], c[3][1], c[3][2]);
        f.push_back({a, b, d});
        f.push_back({a, d, e});
    };
    for (int i = 0; i < nx; ++i) {
        for (int j = 0; j < ny; ++j) {
            if (!filled(i, j)) continue;
            quad({{{i, j, 1}, {i + 1, j, 1}, {i + 1, j + 1, 1}, {i, j + 1, 1}}});
            quad({{{i, j, 0}, {i, j + 1, 0}, {i + 1, j + 1, 0}, {i + 1, j, 0}}});
            if (!filled(i - 1, j)) quad({{{i, j, 0}, {i, j, 1}, {i, j + 1, 1}, {i, j + 1, 0}}});
            if (!filled(i + 1, j)) quad({{{i + 1, j, 0}, {i + 1, j + 1, 0}, {i + 1, j + 1, 1}, {i + 1, j, 1}}});
            if (!filled(i, j - 1)) quad({{{i, j, 0}, {i + 1, j, 0}, {i + 1, j, 1}, {i, j, 1}}});
            if (!filled(i, j + 1)) quad({{{i, j + 1, 0}, {i, j + 1, 1}, {i + 1, j + 1, 1}, {i + 1, j + 1, 0}}});
        }
    }
    return TriangleMesh(std::move(v), std::move(f));
}

/// The comb-shaped wall: two teeth rising from a base bar. From (1,5) a ray
/// in +x crosses it four times, from (2.5,5) three times.
inline ClosedCurve2D comb_wall() {
    return ClosedCurve2D::polyline({{0, 0}, {8, 0}, {8, 1}, {6, 1}, {6, 10}, {5, 10}, {5, 1},
                                    {3, 1}, {3, 10}, {2, 10}, {2, 1}, {0, 1}});
}

} // namespace mod2::samples
