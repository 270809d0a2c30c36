#pragma once

// Command-line front end: parses arguments, runs one library operation and
// prints a Verdict JSON object.

#include <mod2/cobordism.hpp>
#include <mod2/io.hpp>
#include <mod2/parity2d.hpp>
#include <mod2/rectangle.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <functional>
#include <ostream>
#include <string>
#include <vector>

namespace mod2 {

using OrderedJson = nlohmann::ordered_json;

struct Verdict {
    std::string command;
    std::string inputs_digest;
    OrderedJson result = OrderedJson::object();
    std::vector<std::string> diagnostics;

    OrderedJson to_json() const {
        OrderedJson j;
        j["command"] = command;
        j["inputs_digest"] = inputs_digest;
        j["result"] = result;
        j["diagnostics"] = diagnostics;
        return j;
    }
};

namespace cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitInput = 2;

/// Harmonics used when a polyline or SVG curve must be made smooth.
inline constexpr int kSmoothHarmonics = 32;

inline OrderedJson to_json(Point2 p) { return OrderedJson::array({p.x, p.y}); }
inline OrderedJson to_json(const Point3& p) { return OrderedJson::array({p.x, p.y, p.z}); }

template <class P>
OrderedJson to_json(const std::vector<P>& pts) {
    OrderedJson a = OrderedJson::array();
    for (const auto& p : pts) a.push_back(to_json(p));
    return a;
}

inline OrderedJson to_json(const RectangleHit& h) {
    OrderedJson j;
    j["pair1"] = {h.pair1.s, h.pair1.t};
    j["pair2"] = {h.pair2.s, h.pair2.t};
    j["points"] = to_json(std::vector<Point2>(h.points.begin(), h.points.end()));
    j["mid"] = to_json(h.mid);
    j["half_dist"] = h.half_dist;
    j["residual"] = h.residual;
    j["aspect_ratio"] = h.aspect_ratio;
    return j;
}

inline OrderedJson to_json(const MeshReport& r) {
    OrderedJson j;
    j["vertices"] = r.vertices;
    j["edges"] = r.edges;
    j["faces"] = r.faces;
    j["euler_characteristic"] = r.euler_characteristic;
    j["closed"] = r.closed;
    j["orientable"] = r.orientable;
    j["boundary_loops"] = r.boundary_loops;
    return j;
}

inline OrderedJson to_json(const SurfaceClass& c) {
    OrderedJson j;
    switch (c.kind) {
    case SurfaceKind::sphere: j["kind"] = "sphere"; break;
    case SurfaceKind::orientable_genus: j["kind"] = "orientable_genus"; break;
    case SurfaceKind::nonorientable_crosscaps: j["kind"] = "nonorientable_crosscaps"; break;
    }
    j["genus"] = c.genus;
    j["crosscaps"] = c.crosscaps;
    j["name"] = c.name();
    return j;
}

inline Point2 parse_point(const std::string& text, const std::string& flag) {
    const auto v = detail::parse_csv_numbers(text, 2, flag);
    return {v[0], v[1]};
}

/// Options shared by every subcommand, filled by CLI11.
struct Options {
    std::vector<std::string> curves;
    std::string format;
    std::string start;
    std::string mesh;
    std::string loop;
    std::string word;
    std::string expr;
    std::string plot;
    double ratio = 1.0;
    double tol = FinderConfig{}.refine_tol;
    int grid = FinderConfig{}.grid_n;
    int max_hits = 10;
    int dim = 0;
    std::uint64_t seed = 0;
};

class Runner {
public:
    Runner(std::string command, const Options& opt) : opt_(opt) {
        verdict_.command = std::move(command);
        digest_.add(verdict_.command);
    }

    Verdict finish() {
        verdict_.inputs_digest = digest_.hex();
        return std::move(verdict_);
    }

    void maze_escape() {
        std::vector<ClosedCurve2D> walls;
        for (const auto& path : opt_.curves) walls.push_back(load_curve(path));
        const Point2 start = parse_point(opt_.start, "--start");
        note("start", opt_.start);
        note("seed", std::to_string(opt_.seed));
        const Maze maze(std::move(walls));
        const auto v = can_escape(maze, start, opt_.seed);
        auto& r = verdict_.result;
        r["escapable"] = v.escapable;
        r["parities"] = v.per_wall_parity;
        r["counts"] = v.per_wall_count;
        r["start"] = to_json(start);
        r["crossings"] = to_json(v.crossings);
        r["witness_path"] = to_json(v.witness_path.vertices);
        if (!opt_.plot.empty()) {
            SvgScene scene;
            for (const auto& w : maze.walls()) scene.curves.push_back(plot_polygon(w));
            scene.paths.push_back(v.witness_path.vertices);
            scene.crosses = v.crossings;
            plot(scene);
        }
    }

    void intersect_2d() {
        if (opt_.curves.size() != 2) throw Error("intersect 2d needs exactly two --curve files");
        const auto a = load_curve(opt_.curves[0]);
        const auto b = load_curve(opt_.curves[1]);
        note("seed", std::to_string(opt_.seed));
        const auto rep = closed_closed_crossings(a, b, opt_.seed);
        auto& r = verdict_.result;
        r["count"] = rep.count;
        r["parity"] = rep.parity;
        r["all_transverse"] = rep.all_transverse;
        r["crossings"] = to_json(rep.crossings);
        r["simple"] = {is_simple(a), is_simple(b)};
        if (!opt_.plot.empty()) {
            SvgScene scene;
            scene.curves = {plot_polygon(a), plot_polygon(b)};
            scene.crosses = rep.crossings;
            plot(scene);
        }
    }

    void intersect_3d() {
        digest_.add(read_text_file(opt_.mesh));
        digest_.add(read_text_file(opt_.loop));
        const auto mesh = parse_off_mesh(opt_.mesh);
        const auto loop = parse_loop_file(opt_.loop);
        note("seed", std::to_string(opt_.seed));
        const auto lp = curve_surface_parity(loop, mesh, opt_.seed);
        auto& r = verdict_.result;
        r["count"] = lp.report.count;
        r["parity"] = lp.report.parity;
        r["all_transverse"] = lp.report.all_transverse;
        r["crossings"] = to_json(lp.report.crossings);
        r["mesh"] = to_json(lp.mesh);
        if (!lp.mesh.closed) verdict_.diagnostics.push_back("mesh has boundary; odd parity is possible");
    }

    void rect_find() {
        const auto curve = smooth_curve(load_curve(opt_.curves.at(0)));
        const auto config = finder_config();
        if (opt_.max_hits < 1) throw Error("--max-hits must be at least 1");
        note("max-hits", std::to_string(opt_.max_hits));
        const auto hits = find_rectangle(curve, config);
        const std::size_t shown = std::min(hits.size(), static_cast<std::size_t>(opt_.max_hits));
        auto& r = verdict_.result;
        r["hit_count"] = hits.size();
        r["hits"] = OrderedJson::array();
        for (std::size_t i = 0; i < shown; ++i) {
            auto j = to_json(hits[i]);
            j["valid"] = check(hits[i], curve);
            r["hits"].push_back(std::move(j));
        }
        if (shown < hits.size())
            verdict_.diagnostics.push_back("showing " + std::to_string(shown) + " of " + std::to_string(hits.size()) + " hits");
        if (!opt_.plot.empty()) {
            SvgScene scene;
            scene.curves.push_back(plot_polygon(curve));
            scene.dots.assign(hits.front().points.begin(), hits.front().points.end());
            plot(scene);
        }
    }

    void rect_aspect() {
        const auto curve = smooth_curve(load_curve(opt_.curves.at(0)));
        const auto config = finder_config();
        note("ratio", format_number(opt_.ratio));
        const auto hit = find_rectangle_with_aspect(curve, opt_.ratio, config);
        auto& r = verdict_.result;
        r["target"] = opt_.ratio;
        r["hit"] = to_json(hit);
        r["hit"]["valid"] = check(hit, curve);
        if (!opt_.plot.empty()) {
            SvgScene scene;
            scene.curves.push_back(plot_polygon(curve));
            scene.dots.assign(hit.points.begin(), hit.points.end());
            plot(scene);
        }
    }

    void surface_classify() {
        if (opt_.word.empty() == opt_.mesh.empty()) throw Error("surface classify needs exactly one of --word or --mesh");
        auto& r = verdict_.result;
        if (!opt_.word.empty()) {
            note("word", opt_.word);
            const auto word = parse_gluing_word(opt_.word);
            const auto inv = surface_invariants(word);
            const auto cls = class_surface(inv);
            r["source"] = "word";
            r["word"] = render_gluing_word(word);
            r["vertices"] = inv.vertices;
            r["edges"] = inv.edges;
            r["faces"] = inv.faces;
            r["euler_characteristic"] = inv.euler_characteristic;
            r["orientable"] = inv.orientable;
            r["classification"] = to_json(inv.classification);
            r["cobordism_class"] = to_string(cls);
            r["element"] = surface_to_element(cls).to_string();
            return;
        }
        digest_.add(read_text_file(opt_.mesh));
        note("seed", std::to_string(opt_.seed));
        const auto mesh = parse_off_mesh(opt_.mesh);
        const auto rep = mesh_validate(mesh);
        r["source"] = "mesh";
        r.update(to_json(rep));
        r["classification"] = nullptr;
        r["cobordism_class"] = nullptr;
        if (rep.closed) {
            try {
                const auto cls = classify(rep.orientable, rep.euler_characteristic);
                r["classification"] = to_json(cls);
                r["cobordism_class"] = rep.euler_characteristic % 2 == 0 ? "nullbordant" : "rp2_class";
            } catch (const Error& e) {
                verdict_.diagnostics.push_back(std::string("not a connected closed surface: ") + e.what());
            }
        } else {
            verdict_.diagnostics.push_back("mesh has boundary; closed-surface classification skipped");
        }
        const auto pairs = mesh_self_intersections(mesh, opt_.seed);
        r["self_intersections"] = pairs.size();
        r["embedded"] = pairs.empty();
        if (rep.closed && !rep.orientable && pairs.empty())
            throw ConsistencyError("closed non-orientable mesh reported without self-intersections");
    }

    void cobordism_calc() {
        note("expr", opt_.expr);
        const auto e = parse_element(opt_.expr);
        auto& r = verdict_.result;
        r["expr"] = opt_.expr;
        r["value"] = e.to_string();
        OrderedJson monos = OrderedJson::array();
        std::set<int> degrees;
        std::vector<Monomial> sorted(e.monomials().begin(), e.monomials().end());
        std::stable_sort(sorted.begin(), sorted.end(),
                         [](const Monomial& l, const Monomial& m) { return monomial_degree(l) < monomial_degree(m); });
        for (const auto& m : sorted) {
            monos.push_back({{"monomial", render_monomial(m)}, {"degree", monomial_degree(m)}});
            degrees.insert(monomial_degree(m));
        }
        r["monomials"] = monos;
        if (degrees.size() == 1)
            r["degree"] = *degrees.begin();
        else
            r["degree"] = nullptr;
    }

    void cobordism_count() {
        note("dim", std::to_string(opt_.dim));
        if (opt_.dim < 0) throw Error("--dim must be non-negative");
        if (opt_.dim > 1000) throw Error("--dim too large");
        auto& r = verdict_.result;
        r["dim"] = opt_.dim;
        r["classes"] = count_classes(opt_.dim);
        OrderedJson monos = OrderedJson::array();
        for (const auto& m : monomials_of_degree(opt_.dim)) monos.push_back(render_monomial(m));
        r["monomials"] = monos;
    }

private:
    void note(const std::string& key, const std::string& value) { digest_.add(key + "=" + value); }

    ClosedCurve2D load_curve(const std::string& path) {
        const auto format = opt_.format.empty() ? curve_format_for_path(path) : curve_format_from_name(opt_.format);
        const auto text = read_text_file(path);
        digest_.add(text);
        return parse_curve_text(text, format);
    }

    ClosedCurve2D smooth_curve(ClosedCurve2D curve) {
        if (!curve.is_fourier()) {
            curve = fit_fourier(curve, kSmoothHarmonics);
            verdict_.diagnostics.push_back("curve smoothed by a " + std::to_string(kSmoothHarmonics) +
                                           "-harmonic least-squares Fourier fit");
        }
        if (!is_simple(curve)) throw Error("curve is not simple");
        return curve;
    }

    FinderConfig finder_config() {
        FinderConfig c;
        c.grid_n = opt_.grid;
        c.refine_tol = opt_.tol;
        c.seed = opt_.seed;
        c.validate();
        note("grid", std::to_string(c.grid_n));
        note("tol", format_number(c.refine_tol));
        note("seed", std::to_string(c.seed));
        return c;
    }

    static bool check(const RectangleHit& h, const ClosedCurve2D& curve) {
        const auto v = validate_rectangle(h.points, curve, 1e-6);
        return v.is_rectangle && v.on_curve;
    }

    void plot(const SvgScene& scene) {
        render_svg(scene, opt_.plot);
        verdict_.diagnostics.push_back("plot written to " + opt_.plot);
    }

    const Options& opt_;
    Verdict verdict_;
    Fnv1a digest_;
};

} // namespace cli

/// Runs one command. `args` excludes the program name. Returns the process
/// exit code: 0 success, 2 bad input or usage, 1 internal error.
inline int dispatch(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    using namespace cli;
    Options opt;
    CLI::App app{"Mod-2 intersection tools: maze parity, curve/surface crossings, inscribed rectangles, surfaces "
                 "and cobordism.",
                 "mod2"};
    app.require_subcommand(1);

    auto curve_opts = [&](CLI::App* sub, bool many) {
        auto* o = sub->add_option("--curve", opt.curves, "curve file")->required();
        if (!many) o->expected(1);
        sub->add_option("--format", opt.format, "fourier-json, polyline-csv or svg-path (default: by extension)");
        sub->add_option("--seed", opt.seed, "random seed (default 0)");
    };
    auto finder_opts = [&](CLI::App* sub) {
        sub->add_option("--grid", opt.grid, "grid samples per parameter axis");
        sub->add_option("--tol", opt.tol, "refinement tolerance");
        sub->add_option("--plot", opt.plot, "write an SVG plot");
    };

    auto* maze = app.add_subcommand("maze", "maze parity")->require_subcommand(1);
    auto* maze_escape = maze->add_subcommand("escape", "can a start point reach the outside?");
    curve_opts(maze_escape, true);
    maze_escape->add_option("--start", opt.start, "start point \"x,y\"")->required();
    maze_escape->add_option("--plot", opt.plot, "write an SVG plot");

    auto* intersect = app.add_subcommand("intersect", "crossing parities")->require_subcommand(1);
    auto* i2 = intersect->add_subcommand("2d", "crossings of two closed curves");
    curve_opts(i2, true);
    i2->add_option("--plot", opt.plot, "write an SVG plot");
    auto* i3 = intersect->add_subcommand("3d", "crossings of a closed loop with a mesh");
    i3->add_option("--mesh", opt.mesh, "OFF mesh")->required();
    i3->add_option("--loop", opt.loop, "loop file with lines \"x,y,z\"")->required();
    i3->add_option("--seed", opt.seed, "random seed (default 0)");

    auto* rect = app.add_subcommand("rect", "inscribed rectangles")->require_subcommand(1);
    auto* rfind = rect->add_subcommand("find", "find inscribed rectangles");
    curve_opts(rfind, false);
    finder_opts(rfind);
    rfind->add_option("--max-hits", opt.max_hits, "number of hits to print (default 10)");
    auto* raspect = rect->add_subcommand("aspect", "find an inscribed rectangle of a given aspect ratio");
    curve_opts(raspect, false);
    finder_opts(raspect);
    raspect->add_option("--ratio", opt.ratio, "long/short side ratio, at least 1")->required();

    auto* surface = app.add_subcommand("surface", "closed surfaces")->require_subcommand(1);
    auto* classify_cmd = surface->add_subcommand("classify", "classify a gluing word or an OFF mesh");
    classify_cmd->add_option("--word", opt.word, "gluing word, e.g. \"a b a- b-\"");
    classify_cmd->add_option("--mesh", opt.mesh, "OFF mesh");
    classify_cmd->add_option("--seed", opt.seed, "random seed (default 0)");

    auto* cob = app.add_subcommand("cobordism", "unoriented cobordism ring")->require_subcommand(1);
    auto* calc = cob->add_subcommand("calc", "evaluate a ring expression");
    calc->add_option("--expr", opt.expr, "expression, e.g. \"x2^2 + x4\"")->required();
    auto* count = cob->add_subcommand("count", "number of cobordism classes in a dimension");
    count->add_option("--dim", opt.dim, "dimension")->required();

    std::reverse(args.begin(), args.end());
    try {
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            app.exit(e, out, err);
            return kExitOk;
        }
        err << "error: " << e.what() << "\n\n" << app.help();
        return kExitInput;
    }

    const std::vector<std::pair<CLI::App*, std::pair<std::string, void (Runner::*)()>>> table{
        {maze_escape, {"maze escape", &Runner::maze_escape}},
        {i2, {"intersect 2d", &Runner::intersect_2d}},
        {i3, {"intersect 3d", &Runner::intersect_3d}},
        {rfind, {"rect find", &Runner::rect_find}},
        {raspect, {"rect aspect", &Runner::rect_aspect}},
        {classify_cmd, {"surface classify", &Runner::surface_classify}},
        {calc, {"cobordism calc", &Runner::cobordism_calc}},
        {count, {"cobordism count", &Runner::cobordism_count}},
    };
    try {
        for (const auto& [sub, entry] : table) {
            if (!sub->parsed()) continue;
            Runner runner(entry.first, opt);
            (runner.*entry.second)();
            out << runner.finish().to_json().dump(2) << "\n";
            return kExitOk;
        }
        err << app.help();
        return kExitInput;
    } catch (const ConsistencyError& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInput;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
}

} // namespace mod2
