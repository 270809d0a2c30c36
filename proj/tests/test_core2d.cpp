#include <mod2/core2d.hpp>
#include <mod2/samples.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace mod2;

namespace {

const double pi = std::numbers::pi;

ClosedCurve2D figure_eight() {
    // x = cos 2 pi t, y = sin 4 pi t
    return ClosedCurve2D::fourier({0.0, {1.0}, {0.0}}, {0.0, {0.0, 0.0}, {0.0, 1.0}});
}

std::vector<Point2> sample(const ClosedCurve2D& c, int n) {
    std::vector<Point2> out;
    for (int i = 0; i < n; ++i) out.push_back(c.at(static_cast<double>(i) / n));
    return out;
}

void expect_point(Point2 p, double x, double y, double tol = 1e-12) {
    EXPECT_NEAR(p.x, x, tol);
    EXPECT_NEAR(p.y, y, tol);
}

} // namespace

TEST(EvalCurve, UnitCircle) {
    const auto c = samples::circle();
    expect_point(eval_curve(c, 0.0), 1, 0);
    expect_point(eval_curve(c, 0.25), 0, 1);
}

TEST(EvalCurve, EllipseHalfway) { expect_point(eval_curve(samples::ellipse(2, 1), 0.5), -2, 0); }

TEST(EvalCurve, ParameterWraps) {
    const auto c = samples::ellipse(2, 1);
    expect_point(eval_curve(c, 1.25), c.at(0.25).x, c.at(0.25).y, 1e-12);
    expect_point(eval_curve(c, -0.75), c.at(0.25).x, c.at(0.25).y, 1e-12);
}

TEST(EvalCurve, PolylineIsArcLengthUniform) {
    const auto sq = ClosedCurve2D::polyline({{0, 0}, {2, 0}, {2, 1}, {0, 1}});
    EXPECT_DOUBLE_EQ(sq.length(), 6.0);
    expect_point(eval_curve(sq, 0.0), 0, 0);
    expect_point(eval_curve(sq, 1.0 / 6.0), 1, 0);
    expect_point(eval_curve(sq, 0.5), 2, 1);
    expect_point(eval_curve(sq, 0.75), 0.5, 1);
}

TEST(ClosedCurve, PolylineDropsRepeatedClosingVertex) {
    const auto c = ClosedCurve2D::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 0}});
    EXPECT_EQ(c.vertices().size(), 3u);
}

TEST(ClosedCurve, InvalidInputs) {
    EXPECT_THROW(ClosedCurve2D::polyline({{0, 0}, {1, 0}}), Error);
    EXPECT_THROW(ClosedCurve2D::polyline({{0, 0}, {1, 0}, {1, 0}, {0, 1}}), Error);
    EXPECT_THROW(ClosedCurve2D::fourier({1.0, {0.0}, {0.0}}, {2.0, {}, {}}), Error);
    EXPECT_THROW(ClosedCurve2D::fourier({NAN, {1.0}, {}}, {0.0, {}, {1.0}}), Error);
    try {
        ClosedCurve2D::fourier({1.0, {}, {}}, {2.0, {}, {}});
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "degenerate curve");
    }
}

TEST(EvalCurveDerivative, UnitCircle) {
    const auto c = samples::circle();
    expect_point(eval_curve_derivative(c, 0.0), 0, 2 * pi);
    expect_point(eval_curve_derivative(c, 0.25), -2 * pi, 0);
}

TEST(EvalCurveDerivative, PolylineIsRejected) {
    const auto sq = ClosedCurve2D::polyline({{0, 0}, {1, 0}, {1, 1}, {0, 1}});
    try {
        eval_curve_derivative(sq, 0.1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "derivative requires smooth representation");
    }
}

TEST(EvalCurveDerivative, MatchesCentralDifferences) {
    std::mt19937_64 rng(7);
    std::vector<ClosedCurve2D> curves{samples::circle(), samples::ellipse(2, 1), figure_eight()};
    for (int i = 0; i < 5; ++i) curves.push_back(gen::random_smooth_curve(rng, 5));
    const double h = 1e-6;
    for (const auto& c : curves) {
        for (int k = 0; k < 100; ++k) {
            const double t = gen::uniform(rng, 0, 1);
            const Point2 fd = (1.0 / (2 * h)) * (c.at(t + h) - c.at(t - h));
            const Point2 d = eval_curve_derivative(c, t);
            EXPECT_LT(norm(fd - d) / norm(d), 1e-6) << "t=" << t;
        }
    }
}

TEST(SegmentIntersect, Examples) {
    const auto x = segment_intersect({0, 0}, {1, 1}, {0, 1}, {1, 0});
    ASSERT_EQ(x.kind, Contact::transverse);
    expect_point(x.point, 0.5, 0.5);
    EXPECT_EQ(segment_intersect({0, 0}, {1, 0}, {0, 1}, {1, 1}).kind, Contact::none);
    EXPECT_EQ(segment_intersect({0, 0}, {2, 0}, {1, 0}, {3, 0}).kind, Contact::degenerate);
}

TEST(SegmentIntersect, TouchingCasesAreDegenerate) {
    // shared endpoint
    EXPECT_EQ(segment_intersect({0, 0}, {1, 0}, {1, 0}, {2, 1}).kind, Contact::degenerate);
    // T-junction: an endpoint on the other segment
    EXPECT_EQ(segment_intersect({0, 0}, {2, 0}, {1, 0}, {1, 1}).kind, Contact::degenerate);
    // collinear but apart
    EXPECT_EQ(segment_intersect({0, 0}, {1, 0}, {2, 0}, {3, 0}).kind, Contact::none);
}

TEST(SegmentIntersect, SymmetricInArguments) {
    std::mt19937_64 rng(3);
    for (int i = 0; i < 1000; ++i) {
        Point2 p[4];
        for (auto& q : p) q = {gen::uniform(rng, -1, 1), gen::uniform(rng, -1, 1)};
        const auto a = segment_intersect(p[0], p[1], p[2], p[3]);
        const auto b = segment_intersect(p[2], p[3], p[0], p[1]);
        const auto c = segment_intersect(p[1], p[0], p[3], p[2]);
        EXPECT_EQ(a.kind, b.kind);
        EXPECT_EQ(a.kind, c.kind);
        if (a.kind == Contact::transverse) {
            EXPECT_LT(distance(a.point, b.point), 1e-12);
        }
    }
}

TEST(IsSimple, Examples) {
    EXPECT_TRUE(is_simple(samples::circle(), 1024));
    EXPECT_TRUE(is_simple(samples::ellipse(2, 1), 1024));
    EXPECT_FALSE(is_simple(figure_eight(), 1024));
}

TEST(IsSimple, FigureEightAgreesWithBruteForce) {
    EXPECT_TRUE(oracle::brute_force_self_crossing(sample(figure_eight(), 1024)));
    EXPECT_FALSE(oracle::brute_force_self_crossing(sample(samples::circle(), 1024)));
}

TEST(IsSimple, StableAcrossResolutions) {
    for (int n : {64, 65, 100, 128, 257, 512, 1000, 2048}) {
        EXPECT_TRUE(is_simple(samples::circle(), n)) << n;
        EXPECT_FALSE(is_simple(figure_eight(), n)) << n;
    }
}

TEST(IsSimple, Preconditions) {
    EXPECT_THROW(is_simple(samples::circle(), 7), Error);
    EXPECT_TRUE(is_simple(samples::comb_wall()));
    EXPECT_FALSE(is_simple(ClosedCurve2D::polyline({{0, 0}, {1, 1}, {1, 0}, {0, 1}})));
}

TEST(IsSimple, RandomCurvesAgreeWithBruteForce) {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 40; ++i) {
        FourierSeries x, y;
        for (int k = 1; k <= 4; ++k) {
            x.a.push_back(gen::uniform(rng, -1, 1) / k);
            x.b.push_back(gen::uniform(rng, -1, 1) / k);
            y.a.push_back(gen::uniform(rng, -1, 1) / k);
            y.b.push_back(gen::uniform(rng, -1, 1) / k);
        }
        const auto c = ClosedCurve2D::fourier(x, y);
        EXPECT_EQ(is_simple(c, 256), !oracle::brute_force_self_crossing(sample(c, 256))) << i;
    }
}

TEST(CrossingReport, Examples) {
    const auto c = samples::circle();
    auto r = crossing_report(PolyPath({{0, 0}, {3, 0}}), c);
    EXPECT_EQ(r.count, 1u);
    EXPECT_EQ(r.parity, 1);
    r = crossing_report(PolyPath({{3, 0}, {5, 0}}), c);
    EXPECT_EQ(r.count, 0u);
    EXPECT_EQ(r.parity, 0);
    r = crossing_report(PolyPath({{-3, 0.01}, {3, 0.01}}), c);
    EXPECT_EQ(r.count, 2u);
    EXPECT_EQ(r.parity, 0);
    EXPECT_TRUE(r.all_transverse);
}

TEST(CrossingReport, AxisThroughSampleVertexNeedsPerturbation) {
    // a horizontal line through the first sample vertex of the 1024-gon
    const auto c = samples::circle();
    const Point2 v0 = curve_polygon(c)[0];
    const PolyPath axis({{-3, v0.y}, {3, v0.y}});
    try {
        crossing_report(axis, c);
        FAIL();
    } catch (const Error& e) {
        EXPECT_STREQ(e.what(), "non-transverse configuration; perturb first");
    }
    const auto r = crossing_report(perturb_generic(axis, c, 0), c);
    EXPECT_EQ(r.count, 2u);
    EXPECT_EQ(r.parity, 0);
}

TEST(CrossingReport, TangentPathIsDegenerate) {
    // runs along the top edge of the sampled circle, between samples 255 and 256
    const auto c = samples::circle();
    const double y = curve_polygon(c)[255].y;
    EXPECT_THROW(crossing_report(PolyPath({{-2, y}, {2, y}}), c), Error);
}

TEST(PerturbGeneric, IdentityAtZeroMagnitude) {
    const auto c = samples::circle();
    const PolyPath p({{0, 0.1}, {0.5, 0.3}, {3, 0.2}});
    const auto q = perturb_generic(p, c, 5, 0.0);
    ASSERT_EQ(q.vertices.size(), p.vertices.size());
    for (std::size_t i = 0; i < p.vertices.size(); ++i) EXPECT_EQ(q.vertices[i], p.vertices[i]);
}

TEST(PerturbGeneric, VertexOnObstacleBecomesTransverse) {
    const auto c = samples::circle();
    const PolyPath p({{0, 0.2}, curve_polygon(c)[0], {2, 0.3}});
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const auto q = perturb_generic(p, c, seed);
        EXPECT_EQ(q.vertices.front(), p.vertices.front());
        EXPECT_EQ(q.vertices.back(), p.vertices.back());
        // brute force: no degenerate segment pair remains
        const auto poly = curve_polygon(c);
        for (std::size_t i = 0; i + 1 < q.vertices.size(); ++i)
            for (std::size_t j = 0; j < poly.size(); ++j)
                EXPECT_NE(segment_intersect(q.vertices[i], q.vertices[i + 1], poly[j], poly[(j + 1) % poly.size()]).kind,
                          Contact::degenerate);
        EXPECT_TRUE(crossing_report(q, c).all_transverse);
    }
}

TEST(PerturbGeneric, SegmentEndingOnObstacle) {
    // a single segment through a sampled vertex: only interior points may
    // move, so a vertex is inserted next to the contact
    const auto c = samples::circle();
    const double y = curve_polygon(c)[0].y;
    const auto q = perturb_generic(PolyPath({{3, y}, {-3, y}}), c, 1);
    EXPECT_EQ(q.vertices.front(), (Point2{3, y}));
    EXPECT_EQ(q.vertices.back(), (Point2{-3, y}));
    EXPECT_GT(q.vertices.size(), 2u);
    EXPECT_EQ(crossing_report(q, c).count, 2u);
}

TEST(PerturbGeneric, DisplacementIsBounded) {
    const auto c = samples::circle();
    const PolyPath p({{0, 0}, {1, 0}, {0, 1}, {-1, 0}, {0, 5}});
    const double magnitude = 1e-9;
    const auto q = perturb_generic(p, c, 9, magnitude);
    BoundingBox2 box = bounding_box(curve_polygon(c));
    box.extend(p.vertices);
    for (const auto& v : q.vertices) {
        double best = 1e300;
        for (std::size_t i = 0; i + 1 < p.vertices.size(); ++i)
            best = std::min(best, point_segment_distance(v, p.vertices[i], p.vertices[i + 1]));
        EXPECT_LE(best, magnitude * box.diameter() * (1 + 1e-9));
    }
}

TEST(PerturbGeneric, DeterministicInSeed) {
    const auto c = samples::circle();
    const PolyPath p({{0, 0}, {1, 0}, {2, 0}});
    const auto a = perturb_generic(p, c, 17), b = perturb_generic(p, c, 17);
    ASSERT_EQ(a.vertices.size(), b.vertices.size());
    for (std::size_t i = 0; i < a.vertices.size(); ++i) EXPECT_EQ(a.vertices[i], b.vertices[i]);
}

TEST(PerturbGeneric, NegativeMagnitudeRejected) {
    EXPECT_THROW(perturb_generic(PolyPath({{0, 0}, {1, 0}}), samples::circle(), 0, -1.0), Error);
}

TEST(PerturbGeneric, SmallPerturbationKeepsParity) {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 100; ++i) {
        const auto c = gen::random_smooth_curve(rng);
        std::vector<Point2> pts;
        const int n = std::uniform_int_distribution<int>(2, 6)(rng);
        for (int k = 0; k < n; ++k) pts.push_back({gen::uniform(rng, -2, 2), gen::uniform(rng, -2, 2)});
        const PolyPath p(pts);
        const auto before = crossing_report(p, c);  // random paths are generic
        const auto after = crossing_report(perturb_generic(p, c, static_cast<std::uint64_t>(i), 1e-6), c);
        EXPECT_EQ(before.parity, after.parity) << i;
        EXPECT_EQ(before.parity, static_cast<int>(before.count % 2));
    }
}

TEST(ClosedClosedCrossings, DisjointCircles) {
    EXPECT_EQ(closed_closed_crossings(samples::circle(), samples::circle(1, {5, 0})).count, 0u);
}

TEST(ClosedClosedCrossings, OverlappingCirclesMeetAtAnalyticPoints) {
    const auto r = closed_closed_crossings(samples::circle(), samples::circle(1, {1, 0}));
    ASSERT_EQ(r.count, 2u);
    EXPECT_EQ(r.parity, 0);
    // circles x^2+y^2=1 and (x-1)^2+y^2=1 meet at (1/2, +-sqrt(3)/2)
    std::vector<Point2> want{{0.5, std::sqrt(3.0) / 2}, {0.5, -std::sqrt(3.0) / 2}};
    for (const auto& w : want) {
        double best = 1e300;
        for (const auto& p : r.crossings) best = std::min(best, distance(p, w));
        EXPECT_LT(best, 1e-4);
    }
}

TEST(ClosedClosedCrossings, EllipseThroughCircle) {
    // the 2 x 1 ellipse touches the unit circle at (0, +-1); how the tangency
    // resolves depends on the perturbation, but the parity cannot
    const auto r = closed_closed_crossings(samples::circle(), samples::ellipse(2, 1));
    EXPECT_EQ(r.parity, 0);
    EXPECT_TRUE(r.count == 0 || r.count == 2 || r.count == 4);
    // a flatter ellipse meets the circle transversally in four points
    const auto flat = samples::ellipse(2, 0.5);
    const auto t = closed_closed_crossings(samples::circle(), flat);
    EXPECT_EQ(t.count, 4u);
    EXPECT_EQ(oracle::brute_force_crossings(sample(samples::circle(), 1024), sample(flat, 1024)), 4);
}

TEST(ClosedClosedCrossings, RandomPairsAreEvenAndMatchBruteForce) {
    std::mt19937_64 rng(21);
    for (int i = 0; i < 100; ++i) {
        const auto a = gen::random_smooth_curve(rng);
        auto b = gen::random_smooth_curve(rng);
        const auto r = closed_closed_crossings(a, b, static_cast<std::uint64_t>(i));
        EXPECT_EQ(r.count % 2, 0u) << i;
        EXPECT_EQ(r.parity, 0);
        EXPECT_EQ(static_cast<int>(r.count), oracle::brute_force_crossings(sample(a, 1024), sample(b, 1024))) << i;
    }
}

TEST(ClosedClosedCrossings, NonSimpleCurvesAreAccepted) {
    const auto r = closed_closed_crossings(figure_eight(), samples::circle(0.5));
    EXPECT_EQ(r.parity, 0);
    EXPECT_GT(r.count, 0u);
}

TEST(FitFourier, ReproducesTrigonometricCurve) {
    const auto e = samples::ellipse(2, 1, {0.5, -1});
    const auto f = fit_fourier(e, 4);
    for (double t : {0.0, 0.1, 0.37, 0.5, 0.91}) EXPECT_LT(distance(e.at(t), f.at(t)), 1e-12);
}
