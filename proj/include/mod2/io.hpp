#pragma once

// File formats: curves (fourier-json, polyline-csv, svg-path), OFF meshes,
// "x,y,z" loop files, and SVG plots of 2-D scenes.

#include <mod2/core2d.hpp>
#include <mod2/mesh3d.hpp>

#include <json.hpp>

#include <cctype>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace mod2 {

enum class CurveFormat { fourier_json, polyline_csv, svg_path };

inline CurveFormat curve_format_from_name(std::string_view name) {
    if (name == "fourier-json") return CurveFormat::fourier_json;
    if (name == "polyline-csv") return CurveFormat::polyline_csv;
    if (name == "svg-path") return CurveFormat::svg_path;
    throw Error("unknown curve format '" + std::string(name) + "' (expected fourier-json, polyline-csv or svg-path)");
}

/// Guesses the format from the file extension.
inline CurveFormat curve_format_for_path(std::string_view path) {
    auto ends = [&](std::string_view ext) {
        return path.size() >= ext.size() && path.substr(path.size() - ext.size()) == ext;
    };
    if (ends(".json")) return CurveFormat::fourier_json;
    if (ends(".csv")) return CurveFormat::polyline_csv;
    if (ends(".svg") || ends(".path")) return CurveFormat::svg_path;
    throw Error("cannot infer curve format from '" + std::string(path) + "'; pass --format");
}

inline std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_text_file(const std::string& path, std::string_view text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file '" + path + "'");
    out << text;
    if (!out.flush()) throw Error("write failed for '" + path + "'");
}

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

inline double parse_double(std::string_view field, const std::string& context) {
    const std::string s(trim(field));
    if (s.empty()) throw Error(context + ": empty field");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw Error(context + ": not a number '" + s + "'");
    }
    if (used != s.size()) throw Error(context + ": not a number '" + s + "'");
    if (!std::isfinite(v)) throw Error(context + ": value is not finite");
    return v;
}

/// Splits "a,b,c" into exactly `n` numbers.
inline std::vector<double> parse_csv_numbers(std::string_view line, std::size_t n, const std::string& context) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(parse_double(line.substr(start, comma == line.npos ? line.npos : comma - start),
                                   context + ", field " + std::to_string(out.size() + 1)));
        if (comma == line.npos) break;
        start = comma + 1;
    }
    if (out.size() != n)
        throw Error(context + ": expected " + std::to_string(n) + " fields, got " + std::to_string(out.size()));
    return out;
}

/// Non-blank, non-comment lines with their 1-based line numbers.
inline std::vector<std::pair<int, std::string_view>> content_lines(std::string_view text) {
    std::vector<std::pair<int, std::string_view>> out;
    int number = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t stop = text.find('\n', start);
        std::string_view line = text.substr(start, stop == text.npos ? text.npos : stop - start);
        ++number;
        if (const auto hash = line.find('#'); hash != line.npos) line = line.substr(0, hash);
        line = trim(line);
        if (!line.empty()) out.emplace_back(number, line);
        if (stop == text.npos) break;
        start = stop + 1;
    }
    return out;
}

inline FourierSeries fourier_from_json(const nlohmann::json& j, const std::string& axis) {
    const std::string where = "fourier-json: fourier." + axis;
    if (!j.is_object()) throw Error(where + " must be an object");
    FourierSeries f;
    auto number = [&](const nlohmann::json& v, const std::string& name) {
        if (!v.is_number()) throw Error(where + "." + name + " must be a number");
        return v.get<double>();
    };
    auto list = [&](const char* key) {
        std::vector<double> out;
        if (!j.contains(key)) return out;
        const auto& arr = j.at(key);
        if (!arr.is_array()) throw Error(where + "." + key + " must be an array");
        for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(number(arr[i], std::string(key) + "[" + std::to_string(i) + "]"));
        return out;
    };
    if (j.contains("a0")) f.a0 = number(j.at("a0"), "a0");
    f.a = list("a");
    f.b = list("b");
    for (const auto& [key, value] : j.items())
        if (key != "a0" && key != "a" && key != "b") throw Error(where + ": unknown field '" + key + "'");
    return f;
}

} // namespace detail

inline ClosedCurve2D parse_fourier_json(std::string_view text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(std::string("fourier-json: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("fourier")) throw Error("fourier-json: missing top-level \"fourier\" object");
    const auto& f = doc.at("fourier");
    if (!f.is_object() || !f.contains("x") || !f.contains("y")) throw Error("fourier-json: \"fourier\" needs \"x\" and \"y\"");
    return ClosedCurve2D::fourier(detail::fourier_from_json(f.at("x"), "x"), detail::fourier_from_json(f.at("y"), "y"));
}

inline ClosedCurve2D parse_polyline_csv(std::string_view text) {
    std::vector<Point2> pts;
    for (const auto& [number, line] : detail::content_lines(text)) {
        const auto v = detail::parse_csv_numbers(line, 2, "polyline-csv line " + std::to_string(number));
        pts.push_back({v[0], v[1]});
    }
    if (pts.empty()) throw Error("polyline-csv: no vertices");
    return ClosedCurve2D::polyline(std::move(pts));
}

/// Samples an absolute M/L/C/Z path into a closed polyline. Cubic segments
/// are split into uniform parameter steps so that the path carries about
/// `samples` vertices in total. With `smooth`, the polyline is replaced by
/// a least-squares Fourier fit with samples/8 harmonics.
inline ClosedCurve2D parse_svg_path(std::string_view d, int samples = 256, bool smooth = false) {
    if (samples < 16) throw Error("svg-path: samples must be at least 16");
    struct Cmd {
        char op;
        std::vector<double> args;
    };
    std::vector<Cmd> cmds;
    std::size_t i = 0;
    auto skip = [&] {
        while (i < d.size() && (std::isspace(static_cast<unsigned char>(d[i])) || d[i] == ',')) ++i;
    };
    while (true) {
        skip();
        if (i >= d.size()) break;
        const char c = d[i];
        if (std::isalpha(static_cast<unsigned char>(c)) && c != 'e' && c != 'E') {
            if (c != 'M' && c != 'L' && c != 'C' && c != 'Z') throw Error(std::string("unsupported command: ") + c);
            cmds.push_back({c, {}});
            ++i;
            continue;
        }
        if (cmds.empty()) throw Error("svg-path: path must start with a command");
        const char* begin = d.data() + i;
        char* end = nullptr;
        const std::string rest(begin, d.size() - i);
        const double v = std::strtod(rest.c_str(), &end);
        if (end == rest.c_str()) throw Error("svg-path: unexpected character '" + std::string(1, c) + "'");
        if (!std::isfinite(v)) throw Error("svg-path: coordinate is not finite");
        cmds.back().args.push_back(v);
        i += static_cast<std::size_t>(end - rest.c_str());
    }
    if (cmds.empty() || cmds.front().op != 'M') throw Error("svg-path: path must start with M");
    if (cmds.back().op != 'Z') throw Error("svg-path: path is not closed (missing Z)");

    std::size_t cubics = 0;
    for (const auto& c : cmds) {
        const std::size_t arity = c.op == 'C' ? 6 : c.op == 'Z' ? 0 : 2;
        if (c.op == 'Z' && &c != &cmds.back()) throw Error("svg-path: only a single closed subpath is supported");
        if (c.op == 'M' && &c != &cmds.front()) throw Error("svg-path: only a single closed subpath is supported");
        if (arity == 0 ? !c.args.empty() : (c.args.empty() || c.args.size() % arity != 0))
            throw Error(std::string("svg-path: wrong number of coordinates for ") + c.op);
        if (c.op == 'C') cubics += c.args.size() / 6;
    }
    const int steps = cubics ? std::max(4, samples / static_cast<int>(cubics)) : 0;

    std::vector<Point2> pts;
    auto add = [&](Point2 p) {
        if (pts.empty() || !(pts.back() == p)) pts.push_back(p);
    };
    for (const auto& c : cmds) {
        if (c.op == 'M' || c.op == 'L') {
            // extra pairs after M are implicit line-tos
            for (std::size_t k = 0; k < c.args.size(); k += 2) add({c.args[k], c.args[k + 1]});
        } else if (c.op == 'C') {
            for (std::size_t k = 0; k < c.args.size(); k += 6) {
                if (pts.empty()) throw Error("svg-path: C without current point");
                const Point2 p0 = pts.back(), p1{c.args[k], c.args[k + 1]}, p2{c.args[k + 2], c.args[k + 3]},
                             p3{c.args[k + 4], c.args[k + 5]};
                for (int s = 1; s <= steps; ++s) {
                    const double u = static_cast<double>(s) / steps, w = 1.0 - u;
                    add(w * w * w * p0 + 3.0 * w * w * u * p1 + 3.0 * w * u * u * p2 + u * u * u * p3);
                }
            }
        }
    }
    auto curve = ClosedCurve2D::polyline(std::move(pts));
    if (!smooth) return curve;
    return fit_fourier(curve, samples / 8, std::max(samples, kDefaultSamples));
}

/// Accepts either a bare path string or an SVG document whose first
/// <path> element carries the d attribute.
inline ClosedCurve2D parse_svg_path_file(std::string_view text, int samples = 256, bool smooth = false) {
    const auto tag = text.find("<path");
    if (tag == text.npos) return parse_svg_path(text, samples, smooth);
    const auto attr = text.find(" d=", tag);
    if (attr == text.npos) throw Error("svg-path: <path> element without d attribute");
    const char quote = attr + 3 < text.size() ? text[attr + 3] : '\0';
    if (quote != '"' && quote != '\'') throw Error("svg-path: malformed d attribute");
    const auto close = text.find(quote, attr + 4);
    if (close == text.npos) throw Error("svg-path: unterminated d attribute");
    return parse_svg_path(text.substr(attr + 4, close - attr - 4), samples, smooth);
}

inline ClosedCurve2D parse_curve_text(std::string_view text, CurveFormat format) {
    switch (format) {
    case CurveFormat::fourier_json: return parse_fourier_json(text);
    case CurveFormat::polyline_csv: return parse_polyline_csv(text);
    case CurveFormat::svg_path: return parse_svg_path_file(text);
    }
    throw Error("unknown curve format");
}

inline ClosedCurve2D parse_curve_file(const std::string& path, CurveFormat format) {
    return parse_curve_text(read_text_file(path), format);
}

inline ClosedCurve2D parse_curve_file(const std::string& path) {
    return parse_curve_file(path, curve_format_for_path(path));
}

/// OFF: "OFF", then "V F E", V lines "x y z", F lines "3 i j k".
inline TriangleMesh parse_off(std::string_view text) {
    const auto lines = detail::content_lines(text);
    auto fields = [](std::string_view line) {
        std::vector<std::string> out;
        std::istringstream ss{std::string(line)};
        for (std::string f; ss >> f;) out.push_back(f);
        return out;
    };
    auto ctx = [](int number) { return "OFF line " + std::to_string(number); };
    std::size_t k = 0;
    if (lines.empty() || lines[0].second.substr(0, 3) != "OFF") throw Error("OFF: missing header");
    std::vector<std::string> counts = fields(lines[0].second.substr(3));
    int counts_line = lines[0].first;
    ++k;
    if (counts.empty()) {
        if (k >= lines.size()) throw Error("OFF: missing counts line");
        counts_line = lines[k].first;
        counts = fields(lines[k++].second);
    }
    if (counts.size() != 3) throw Error(ctx(counts_line) + ": expected \"V F E\"");
    auto count = [&](const std::string& s) {
        const double v = detail::parse_double(s, ctx(counts_line));
        if (v < 0 || v != std::floor(v) || v > 1e8) throw Error(ctx(counts_line) + ": bad count '" + s + "'");
        return static_cast<std::size_t>(v);
    };
    const std::size_t nv = count(counts[0]), nf = count(counts[1]);
    if (lines.size() - k != nv + nf)
        throw Error("OFF: count mismatch: header declares " + std::to_string(nv) + " vertices and " + std::to_string(nf) +
                    " faces, file has " + std::to_string(lines.size() - k) + " data lines");
    std::vector<Point3> verts;
    for (std::size_t v = 0; v < nv; ++v, ++k) {
        const auto f = fields(lines[k].second);
        if (f.size() != 3) throw Error(ctx(lines[k].first) + ": expected \"x y z\"");
        verts.push_back({detail::parse_double(f[0], ctx(lines[k].first)), detail::parse_double(f[1], ctx(lines[k].first)),
                         detail::parse_double(f[2], ctx(lines[k].first))});
    }
    std::vector<Face> faces;
    for (std::size_t i = 0; i < nf; ++i, ++k) {
        const auto f = fields(lines[k].second);
        if (f.empty() || f[0] != "3") throw Error(ctx(lines[k].first) + ": non-triangle face");
        if (f.size() != 4) throw Error(ctx(lines[k].first) + ": expected \"3 i j k\"");
        Face face{};
        for (int c = 0; c < 3; ++c) {
            const double idx = detail::parse_double(f[static_cast<std::size_t>(c) + 1], ctx(lines[k].first));
            if (idx != std::floor(idx) || idx < 0 || idx >= static_cast<double>(nv))
                throw Error(ctx(lines[k].first) + ": bad vertex index '" + f[static_cast<std::size_t>(c) + 1] + "'");
            face[static_cast<std::size_t>(c)] = static_cast<int>(idx);
        }
        faces.push_back(face);
    }
    return TriangleMesh(std::move(verts), std::move(faces));
}

inline TriangleMesh parse_off_mesh(const std::string& path) { return parse_off(read_text_file(path)); }

inline ClosedPolyline3 parse_loop_csv(std::string_view text) {
    std::vector<Point3> pts;
    for (const auto& [number, line] : detail::content_lines(text)) {
        const auto v = detail::parse_csv_numbers(line, 3, "loop line " + std::to_string(number));
        pts.push_back({v[0], v[1], v[2]});
    }
    return ClosedPolyline3(std::move(pts));
}

inline ClosedPolyline3 parse_loop_file(const std::string& path) { return parse_loop_csv(read_text_file(path)); }

/// Shortest decimal that reads back to the same double.
inline std::string format_number(double v) {
    char buf[32];
    for (int precision = 6; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

inline std::string write_off(const TriangleMesh& mesh) {
    std::string out = "OFF\n" + std::to_string(mesh.vertices().size()) + " " + std::to_string(mesh.faces().size()) + " 0\n";
    for (const auto& v : mesh.vertices())
        out += format_number(v.x) + " " + format_number(v.y) + " " + format_number(v.z) + "\n";
    for (const auto& f : mesh.faces())
        out += "3 " + std::to_string(f[0]) + " " + std::to_string(f[1]) + " " + std::to_string(f[2]) + "\n";
    return out;
}

inline std::string write_loop_csv(const ClosedPolyline3& loop) {
    std::string out;
    for (const auto& p : loop.vertices) out += format_number(p.x) + "," + format_number(p.y) + "," + format_number(p.z) + "\n";
    return out;
}

inline std::string write_polyline_csv(std::span<const Point2> pts) {
    std::string out;
    for (const auto& p : pts) out += format_number(p.x) + "," + format_number(p.y) + "\n";
    return out;
}

inline std::string write_fourier_json(const ClosedCurve2D& curve) {
    if (!curve.is_fourier()) throw Error("curve is not Fourier-represented");
    auto series = [](const FourierSeries& f) {
        nlohmann::ordered_json j;
        j["a0"] = f.a0;
        j["a"] = f.a;
        j["b"] = f.b;
        return j;
    };
    nlohmann::ordered_json doc;
    doc["fourier"]["x"] = series(curve.fourier_x());
    doc["fourier"]["y"] = series(curve.fourier_y());
    return doc.dump(2) + "\n";
}

/// 64-bit FNV-1a, as 16 lowercase hex digits.
class Fnv1a {
public:
    Fnv1a& add(std::string_view bytes) {
        for (unsigned char c : bytes) {
            state_ ^= c;
            state_ *= 0x100000001b3ull;
        }
        // separator so that ("ab","c") and ("a","bc") differ
        state_ ^= 0xff;
        state_ *= 0x100000001b3ull;
        return *this;
    }
    std::string hex() const {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(state_));
        return buf;
    }

private:
    std::uint64_t state_ = 0xcbf29ce484222325ull;
};

/// A 2-D picture: closed curves, open paths, dot markers and cross markers.
struct SvgScene {
    std::vector<std::vector<Point2>> curves;
    std::vector<std::vector<Point2>> paths;
    std::vector<Point2> dots;
    std::vector<Point2> crosses;

    bool empty() const { return curves.empty() && paths.empty() && dots.empty() && crosses.empty(); }
};

/// Polygon used to draw a curve.
inline std::vector<Point2> plot_polygon(const ClosedCurve2D& curve) {
    return curve.is_fourier() ? curve_polygon(curve, 512) : curve.vertices();
}

/// Standalone SVG 1.1 document. Coordinates are written unchanged and a
/// group transform turns y upwards, so path data reads back as the input.
/// Output depends only on the scene, so identical inputs give identical bytes.
inline std::string render_svg(const SvgScene& scene) {
    if (scene.empty()) throw Error("empty scene");
    BoundingBox2 box;
    for (const auto& c : scene.curves) box.extend(c);
    for (const auto& p : scene.paths) box.extend(p);
    box.extend(scene.dots);
    box.extend(scene.crosses);
    double span = std::max(box.hi.x - box.lo.x, box.hi.y - box.lo.y);
    if (!(span > 0.0)) span = 1.0;
    const double margin = 0.05 * span;
    const double x0 = box.lo.x - margin, y0 = -box.hi.y - margin;
    const double w = box.hi.x - box.lo.x + 2 * margin, h = box.hi.y - box.lo.y + 2 * margin;
    const double stroke = span / 400.0, mark = span / 80.0;
    auto num = [](double v) { return format_number(v == 0.0 ? 0.0 : v); };
    auto xy = [&](Point2 p) { return num(p.x) + "," + num(p.y); };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"640\" height=\"" +
           num(std::round(640.0 * h / w)) + "\" viewBox=\"" + num(x0) + " " + num(y0) + " " + num(w) + " " + num(h) +
           "\">\n";
    out += "<g transform=\"scale(1,-1)\" stroke-width=\"" + num(stroke) + "\">\n";
    for (const auto& c : scene.curves) {
        out += "<path fill=\"none\" stroke=\"black\" stroke-linejoin=\"round\" d=\"M";
        for (std::size_t i = 0; i < c.size(); ++i) out += (i ? " L " : " ") + xy(c[i]);
        out += " Z\"/>\n";
    }
    for (const auto& p : scene.paths) {
        out += "<polyline fill=\"none\" stroke=\"steelblue\" stroke-linejoin=\"round\" points=\"";
        for (std::size_t i = 0; i < p.size(); ++i) out += (i ? " " : "") + xy(p[i]);
        out += "\"/>\n";
    }
    for (const auto& p : scene.dots)
        out += "<circle cx=\"" + num(p.x) + "\" cy=\"" + num(p.y) + "\" r=\"" + num(mark) + "\" fill=\"crimson\"/>\n";
    for (const auto& p : scene.crosses) {
        out += "<g class=\"cross\" stroke=\"darkorange\">";
        out += "<line x1=\"" + num(p.x - mark) + "\" y1=\"" + num(p.y - mark) + "\" x2=\"" + num(p.x + mark) + "\" y2=\"" +
               num(p.y + mark) + "\"/>";
        out += "<line x1=\"" + num(p.x - mark) + "\" y1=\"" + num(p.y + mark) + "\" x2=\"" + num(p.x + mark) + "\" y2=\"" +
               num(p.y - mark) + "\"/>";
        out += "</g>\n";
    }
    out += "</g>\n</svg>\n";
    return out;
}

inline void render_svg(const SvgScene& scene, const std::string& out_path) { write_text_file(out_path, render_svg(scene)); }

} // namespace mod2
