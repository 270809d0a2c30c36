// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <mod2/cobordism.hpp>
#include <mod2/io.hpp>
#include <mod2/mesh3d.hpp>
#include <mod2/parity2d.hpp>
#include <mod2/rectangle.hpp>
#include <mod2/samples.hpp>

#include "support/generators.hpp"
#include "support/oracles.hpp"

#include <json.hpp>

#include <array>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace mod2;

namespace {

std::string data(const std::string& name) { return std::string(MOD2_DATA_DIR) + "/" + name; }

struct Outcome {
    bool pass = true;
    std::string detail;
};

class Check {
public:
    void expect(bool ok, const std::string& what) {
        if (!ok && failures_.size() < 5) failures_.push_back(what);
        if (!ok) ++count_;
    }
    Outcome outcome(const std::string& summary) const {
        if (count_ == 0) return {true, summary};
        std::string d = summary + "; " + std::to_string(count_) + " failure(s):";
        for (const auto& f : failures_) d += " [" + f + "]";
        return {false, d};
    }

private:
    std::vector<std::string> failures_;
    int count_ = 0;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int precision = 3) {
    std::ostringstream s;
    s.precision(precision);
    s << v;
    return s.str();
}

Outcome maze_vs_flood_fill() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1001);
    int compared = 0, excluded = 0;
    for (int m = 0; m < 100; ++m) {
        const auto walls = gen::random_maze(rng);
        const Maze maze(walls);
        const oracle::FloodFill fill(walls, 512);
        auto box = maze.bounds();
        box.extend(box.lo - Point2{1, 1});
        box.extend(box.hi + Point2{1, 1});
        for (const auto& p : gen::random_points(rng, box, 20)) {
            // the raster cannot resolve points within a few cells of a wall
            if (maze.on_wall(p) || maze.distance_to_walls(p) < 4 * fill.cell_size()) {
                ++excluded;
                continue;
            }
            ++compared;
            const bool got = can_escape(maze, p, static_cast<std::uint64_t>(m)).escapable;
            c.expect(got == fill.escapable(p), "maze " + std::to_string(m) + " start (" + fmt(p.x) + "," + fmt(p.y) + ")");
        }
    }
    const double t = seconds_since(t0);
    c.expect(compared >= 1500, "too few comparable points: " + std::to_string(compared));
    c.expect(t < 30, "runtime " + fmt(t) + " s");
    return c.outcome(std::to_string(compared) + " starts compared, " + std::to_string(excluded) + " in the wall band excluded, " +
                     fmt(t) + " s");
}

Outcome deformation_invariance() {
    Check c;
    std::mt19937_64 rng(1002);
    int paths = 0;
    for (int k = 0; k < 20; ++k) {
        const Maze maze(gen::random_maze(rng));
        const auto box = maze.bounds();
        Point2 start;
        do {
            start = gen::random_points(rng, box, 1)[0];
        } while (maze.distance_to_walls(start) < 1e-3 * box.diameter());
        const Point2 exit{box.hi.x + gen::uniform(rng, 0.5, 2), gen::uniform(rng, box.lo.y - 1, box.hi.y + 1)};
        const auto r = parity_invariance_report(maze, start, exit, 100, static_cast<std::uint64_t>(k));
        paths += static_cast<int>(r.parities.size());
        c.expect(r.parities.size() == 100 && r.all_equal, "triple " + std::to_string(k));
        // the common parity is the one that decides escape
        if (!r.parities.empty())
            c.expect((r.parities[0] == 0) == can_escape(maze, start).escapable || maze.walls().size() > 1,
                     "triple " + std::to_string(k) + " parity vs verdict");
    }
    return c.outcome(std::to_string(paths) + " generic paths over 20 triples");
}

Outcome closed_closed_parity() {
    Check c;
    std::mt19937_64 rng(1003);
    int total = 0;
    for (int k = 0; k < 100; ++k) {
        const auto a = gen::random_smooth_curve(rng);
        auto b = gen::random_smooth_curve(rng);
        // shift and scale the second curve so that the pair usually overlaps
        auto x = b.fourier_x(), y = b.fourier_y();
        const double s = gen::uniform(rng, 0.5, 1.5);
        for (auto* f : {&x, &y}) {
            for (auto& v : f->a) v *= s;
            for (auto& v : f->b) v *= s;
        }
        x.a0 += gen::uniform(rng, -1, 1);
        y.a0 += gen::uniform(rng, -1, 1);
        b = ClosedCurve2D::fourier(x, y);
        try {
            const auto r = closed_closed_crossings(a, b, static_cast<std::uint64_t>(k));
            total += static_cast<int>(r.count);
            c.expect(r.count % 2 == 0 && r.parity == 0, "pair " + std::to_string(k) + " count " + std::to_string(r.count));
            const int brute = oracle::brute_force_crossings(curve_polygon(a), curve_polygon(b));
            c.expect(brute % 2 == 0, "pair " + std::to_string(k) + " brute-force count odd");
        } catch (const std::exception& e) {
            c.expect(false, "pair " + std::to_string(k) + " threw: " + e.what());
        }
    }
    return c.outcome("100 pairs, " + std::to_string(total) + " crossings in total, all counts even");
}

Outcome loops_against_closed_meshes() {
    Check c;
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(1004);
    for (const char* name : {"octahedron.off", "torus.off"}) {
        const auto mesh = parse_off_mesh(data(name));
        BoundingBox3 box;
        for (const auto& v : mesh.vertices()) box.extend(v);
        box.lo = box.lo - Point3{0.5, 0.5, 0.5};
        box.hi = box.hi + Point3{0.5, 0.5, 0.5};
        for (int k = 0; k < 50; ++k) {
            const auto loop = gen::random_loop(rng, box, 3 + k % 10);
            const auto r = curve_surface_parity(loop, mesh, static_cast<std::uint64_t>(k));
            c.expect(r.report.parity == 0, std::string(name) + " loop " + std::to_string(k));
        }
    }
    const auto mob = curve_surface_parity(parse_loop_file(data("mobius_loop.csv")), parse_off_mesh(data("mobius_band.off")));
    c.expect(mob.report.parity == 1, "Möbius loop parity " + std::to_string(mob.report.parity));
    const double t = seconds_since(t0);
    c.expect(t < 10, "runtime " + fmt(t) + " s");
    return c.outcome("100 loops parity 0, Möbius loop parity " + std::to_string(mob.report.parity) + ", " + fmt(t) + " s");
}

Outcome self_intersections() {
    Check c;
    const auto klein = parse_off_mesh(data("klein_immersion.off"));
    const auto kr = mesh_validate(klein);
    c.expect(kr.closed && !kr.orientable, "Klein immersion not closed and non-orientable");
    const auto kp = mesh_self_intersections(klein);
    c.expect(!kp.empty(), "Klein immersion reported embedded");
    std::size_t others = 0;
    for (const char* name : {"octahedron.off", "torus.off"}) {
        const auto pairs = mesh_self_intersections(parse_off_mesh(data(name)));
        others += pairs.size();
        c.expect(pairs.empty(), std::string(name) + " reported self-intersecting");
    }
    return c.outcome("Klein immersion: " + std::to_string(kp.size()) + " intersecting face pairs; octahedron and torus: " +
                     std::to_string(others));
}

Outcome inscribed_rectangles() {
    Check c;
    std::mt19937_64 rng(1006);
    struct Named {
        std::string name;
        ClosedCurve2D curve;
    };
    std::vector<Named> curves{{"circle", parse_curve_file(data("circle.json"))}, {"ellipse", parse_curve_file(data("ellipse.json"))}};
    for (int k = 0; k < 100; ++k) curves.push_back({"random " + std::to_string(k), gen::random_smooth_curve(rng, 5)});
    int random_ok = 0;
    std::size_t total_hits = 0;
    double slowest = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& [name, curve] = curves[i];
        const auto t0 = std::chrono::steady_clock::now();
        std::vector<RectangleHit> hits;
        try {
            FinderConfig cfg;
            cfg.grid_n = 128;
            hits = find_rectangle(curve, cfg);
        } catch (const Error& e) {
            c.expect(i >= 2, name + ": " + e.what());
        }
        const double t = seconds_since(t0);
        slowest = std::max(slowest, t);
        c.expect(t < 2.0, name + " took " + fmt(t) + " s");
        bool ok = !hits.empty();
        for (const auto& h : hits) {
            const auto v = validate_rectangle(h.points, curve, 1e-6);
            const bool good = h.residual < 1e-9 && v.is_rectangle && v.on_curve;
            c.expect(good, name + " hit residual " + fmt(h.residual) + " defect " + fmt(v.max_defect));
            if (name == "circle") c.expect(norm(h.mid) < 1e-8, "circle hit mid " + fmt(norm(h.mid)));
            ok = ok && good;
        }
        total_hits += hits.size();
        if (i < 2) c.expect(ok, name + " has no validated hit");
        else if (ok) ++random_ok;
    }
    c.expect(random_ok >= 95, "random curves succeeded: " + std::to_string(random_ok));
    return c.outcome("circle and ellipse ok, " + std::to_string(random_ok) + "/100 random curves, " + std::to_string(total_hits) +
                     " validated hits, slowest " + fmt(slowest) + " s");
}

Outcome aspect_sweep() {
    Check c;
    double worst = 0;
    for (const char* name : {"circle.json", "ellipse.json"}) {
        const auto curve = parse_curve_file(data(name));
        for (double target : {1.0, 1.25, 1.5, 2.0, 3.0}) {
            try {
                const auto h = find_rectangle_with_aspect(curve, target);
                const double err = std::abs(h.aspect_ratio - target);
                worst = std::max(worst, err);
                c.expect(err < 1e-6, std::string(name) + " ratio " + fmt(target) + " error " + fmt(err));
                const auto v = validate_rectangle(h.points, curve, 1e-6);
                c.expect(v.is_rectangle && v.on_curve, std::string(name) + " ratio " + fmt(target) + " not validated");
                c.expect(std::abs(rect_aspect_ratio(h.points) - target) < 1e-6, std::string(name) + " recomputed ratio");
            } catch (const Error& e) {
                c.expect(false, std::string(name) + " ratio " + fmt(target) + ": " + e.what());
            }
        }
    }
    return c.outcome("10 targets, worst |aspect - target| = " + fmt(worst));
}

Outcome jacobian_check() {
    Check c;
    std::mt19937_64 rng(1008);
    std::vector<ClosedCurve2D> curves{parse_curve_file(data("circle.json")), parse_curve_file(data("ellipse.json"))};
    for (int k = 0; k < 8; ++k) curves.push_back(gen::random_smooth_curve(rng));
    double worst = 0;
    for (std::size_t i = 0; i < curves.size(); ++i) {
        const auto& curve = curves[i];
        for (int k = 0; k < 100; ++k) {
            const double s = gen::uniform(rng, 0, 1), t = s + gen::uniform(rng, 0.05, 0.95);
            const double h = 1e-6;
            auto f = [&](double u, double v) {
                const Point2 a = curve.at(u), b = curve.at(v);
                return Eigen::Vector3d(0.5 * (a.x + b.x), 0.5 * (a.y + b.y), 0.5 * distance(a, b));
            };
            Eigen::Matrix<double, 3, 2> fd;
            fd.col(0) = (f(s + h, t) - f(s - h, t)) / (2 * h);
            fd.col(1) = (f(s, t + h) - f(s, t - h)) / (2 * h);
            const auto j = vaughan_jacobian(curve, s, t);
            const double err = (j - fd).norm() / fd.norm();
            worst = std::max(worst, err);
            c.expect(err < 1e-6, "curve " + std::to_string(i) + " pair " + std::to_string(k) + " error " + fmt(err));
        }
    }
    return c.outcome(std::to_string(curves.size()) + " curves x 100 pairs, worst relative error " + fmt(worst));
}

Outcome surface_classification() {
    Check c;
    auto inv = [](const char* w) { return surface_invariants(parse_gluing_word(w)); };
    const auto torus = inv("a b a- b-"), klein = inv("a b a b-"), rp2 = inv("a a"), sphere = inv("a a-");
    c.expect(torus.euler_characteristic == 0 && torus.orientable && torus.classification.genus == 1, "torus");
    c.expect(klein.euler_characteristic == 0 && !klein.orientable, "Klein bottle");
    c.expect(rp2.euler_characteristic == 1 && !rp2.orientable, "projective plane");
    c.expect(sphere.euler_characteristic == 2 && sphere.orientable && sphere.classification.kind == SurfaceKind::sphere,
             "sphere");
    // two tori make a genus-two surface; repeated sums with a torus give every genus
    const auto tt = connected_sum(torus, torus);
    c.expect(tt.classification.name() == "genus-2 surface", "torus # torus = " + tt.classification.name());
    c.expect(tt.classification == inv("a b a- b- c d c- d-").classification, "torus # torus vs its word");
    auto acc = sphere;
    for (int g = 1; g <= 6; ++g) {
        acc = connected_sum(acc, torus);
        c.expect(acc.orientable && acc.classification.genus == g && acc.euler_characteristic == 2 - 2 * g,
                 "sum of " + std::to_string(g) + " tori");
    }
    // Klein bottle = projective plane # projective plane
    const auto pp = connected_sum(rp2, rp2);
    c.expect(pp.classification == klein.classification, "RP2 # RP2 = " + pp.classification.name());
    c.expect(inv("a a b b").classification == klein.classification, "word a a b b");
    auto cc = rp2;
    for (int k = 2; k <= 6; ++k) {
        cc = connected_sum(cc, rp2);
        c.expect(!cc.orientable && cc.classification.crosscaps == k, std::to_string(k) + " projective planes");
    }
    c.expect(connected_sum(torus, rp2).classification == connected_sum(klein, rp2).classification, "T # RP2 = K # RP2");
    c.expect(connected_sum(sphere, klein).classification == klein.classification, "sphere is the unit");
    return c.outcome("4 words classified; torus sums to genus 6, projective plane sums to 6 crosscaps, Klein = RP2 # RP2");
}

Outcome cobordism_counts() {
    Check c;
    c.expect(count_classes(0) == 2, "dim 0");
    c.expect(count_classes(1) == 1, "dim 1");
    c.expect(count_classes(2) == 2, "dim 2");
    c.expect(count_classes(3) == 1, "dim 3");
    c.expect(count_classes(4) == 4, "dim 4");
    for (int d = 3; d <= 12; ++d) {
        const auto p = oracle::brute_force_partitions(d);
        c.expect(count_classes(d) == (std::uint64_t{1} << p), "dim " + std::to_string(d) + " vs partition oracle");
    }
    c.expect(generators_up_to(8) == std::vector<int>{2, 4, 5, 6, 8}, "generators up to 8");
    std::mt19937_64 rng(1010);
    const auto zero = CobordismElement::zero(), one = CobordismElement::one();
    int failures = 0;
    for (int k = 0; k < 1000; ++k) {
        const auto a = gen::random_element(rng), b = gen::random_element(rng), e = gen::random_element(rng);
        const bool ok = a + a == zero && a + b == b + a && (a + b) + e == a + (b + e) && a * b == b * a &&
                        (a * b) * e == a * (b * e) && a * (b + e) == a * b + a * e && a + zero == a && a * one == a &&
                        a * zero == zero;
        if (!ok) ++failures;
    }
    c.expect(failures == 0, std::to_string(failures) + " ring axiom failures");
    return c.outcome("dims 0-12 match, generators [2,4,5,6,8], 1000 ring axiom checks");
}

struct ProcessResult {
    int code;
    std::string out;
};

ProcessResult run_cli(const std::string& args) {
    const std::string cmd = std::string(MOD2_CLI_PATH) + " " + args + " 2>/dev/null";
    ProcessResult r{-1, {}};
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) r.out.append(buf.data(), n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

Outcome cli_goldens() {
    Check c;
    const std::string circle = "'" + data("circle.json") + "'";
    const std::vector<std::pair<std::string, std::function<bool(const nlohmann::json&)>>> cases{
        {"maze escape --curve " + circle + " --start 0,0",
         [](const nlohmann::json& j) {
             return j["result"]["escapable"] == false && j["result"]["parities"] == nlohmann::json::array({1});
         }},
        {"cobordism count --dim 2", [](const nlohmann::json& j) { return j["result"]["classes"] == 2; }},
        {"rect aspect --curve " + circle + " --ratio 2",
         [](const nlohmann::json& j) { return std::abs(j["result"]["hit"]["aspect_ratio"].get<double>() - 2.0) < 1e-6; }},
    };
    for (const auto& [args, verify] : cases) {
        const auto a = run_cli(args), b = run_cli(args);
        c.expect(a.code == 0 && b.code == 0, args + " exit codes " + std::to_string(a.code) + "/" + std::to_string(b.code));
        c.expect(!a.out.empty() && a.out == b.out, args + " output differs between runs");
        try {
            c.expect(verify(nlohmann::json::parse(a.out)), args + " unexpected result");
        } catch (const std::exception& e) {
            c.expect(false, args + " output is not JSON: " + e.what());
        }
    }
    return c.outcome("3 commands, identical bytes across two processes each");
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"maze parity vs flood-fill oracle", maze_vs_flood_fill},
        {"deformation invariance of path parity", deformation_invariance},
        {"closed-closed crossing parity", closed_closed_parity},
        {"loop-surface parity on closed meshes and the Möbius band", loops_against_closed_meshes},
        {"self-intersections of the bundled meshes", self_intersections},
        {"inscribed rectangles", inscribed_rectangles},
        {"aspect-ratio sweep", aspect_sweep},
        {"Vaughan Jacobian vs finite differences", jacobian_check},
        {"surface classification and connected sums", surface_classification},
        {"cobordism counts and ring axioms", cobordism_counts},
        {"CLI goldens", cli_goldens},
    };
    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s %2zu  %s: %s (%.2f s)\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), o.detail.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
    }
    std::printf("%zu/%zu criteria passed\n", criteria.size() - static_cast<std::size_t>(failed), criteria.size());
    return failed == 0 ? 0 : 1;
}
