#include <mod2/cli.hpp>

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace mod2;

namespace {

std::string data(const std::string& name) { return std::string(MOD2_DATA_DIR) + "/" + name; }

struct Run {
    int code;
    std::string out, err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
};

Run run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = dispatch(std::move(args), out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST(Cli, MazeEscapeCircle) {
    const auto r = run({"maze", "escape", "--curve", data("circle.json"), "--start", "0,0"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_EQ(j["command"], "maze escape");
    EXPECT_EQ(j["result"]["escapable"], false);
    EXPECT_EQ(j["result"]["parities"], nlohmann::json::array({1}));
}

TEST(Cli, CobordismCountDimTwo) {
    const auto r = run({"cobordism", "count", "--dim", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["result"]["classes"], 2);
}

TEST(Cli, RectAspectCircleRatioTwo) {
    const auto r = run({"rect", "aspect", "--curve", data("circle.json"), "--ratio", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const double ratio = r.json()["result"]["hit"]["aspect_ratio"];
    EXPECT_NEAR(ratio, 2.0, 1e-6);
    EXPECT_EQ(r.json()["result"]["hit"]["valid"], true);
}

TEST(Cli, VerdictFieldOrder) {
    const auto r = run({"cobordism", "calc", "--expr", "(x2 + x4)^2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto c = r.out.find("\"command\""), d = r.out.find("\"inputs_digest\""), res = r.out.find("\"result\""),
               diag = r.out.find("\"diagnostics\"");
    EXPECT_LT(c, d);
    EXPECT_LT(d, res);
    EXPECT_LT(res, diag);
    EXPECT_EQ(r.json()["result"]["value"], "x2^2 + x4^2");
    EXPECT_TRUE(r.json()["result"]["degree"].is_null());  // x2^2 and x4^2 differ in degree
    EXPECT_EQ(run({"cobordism", "calc", "--expr", "x2^2 + x4"}).json()["result"]["degree"], 4);
}

TEST(Cli, ByteStableAcrossRuns) {
    const std::vector<std::vector<std::string>> commands{
        {"maze", "escape", "--curve", data("comb.csv"), "--start", "2.5,5", "--seed", "3"},
        {"intersect", "2d", "--curve", data("circle.json"), "--curve", data("shifted_circle.json")},
        {"intersect", "3d", "--mesh", data("mobius_band.off"), "--loop", data("mobius_loop.csv")},
        {"rect", "find", "--curve", data("ellipse.json"), "--grid", "48"},
        {"surface", "classify", "--word", "a b a b-"},
        {"surface", "classify", "--mesh", data("torus.off")},
    };
    for (const auto& c : commands) {
        const auto a = run(c), b = run(c);
        ASSERT_EQ(a.code, 0) << a.err;
        EXPECT_EQ(a.out, b.out);
        EXPECT_TRUE(nlohmann::json::accept(a.out));
    }
}

TEST(Cli, DigestDependsOnInputs) {
    const auto a = run({"cobordism", "count", "--dim", "4"}).json(), b = run({"cobordism", "count", "--dim", "5"}).json();
    EXPECT_NE(a["inputs_digest"], b["inputs_digest"]);
    EXPECT_EQ(a["inputs_digest"].get<std::string>().size(), 16u);
}

TEST(Cli, CommandResults) {
    const auto i2 = run({"intersect", "2d", "--curve", data("circle.json"), "--curve", data("shifted_circle.json")}).json();
    EXPECT_EQ(i2["result"]["count"], 2);
    EXPECT_EQ(i2["result"]["parity"], 0);
    const auto i3 = run({"intersect", "3d", "--mesh", data("mobius_band.off"), "--loop", data("mobius_loop.csv")}).json();
    EXPECT_EQ(i3["result"]["parity"], 1);
    const auto klein = run({"surface", "classify", "--word", "a b a b-"}).json();
    EXPECT_EQ(klein["result"]["classification"]["name"], "Klein bottle");
    EXPECT_EQ(klein["result"]["cobordism_class"], "nullbordant");
    const auto kmesh = run({"surface", "classify", "--mesh", data("klein_immersion.off")}).json();
    EXPECT_EQ(kmesh["result"]["embedded"], false);
    EXPECT_EQ(kmesh["result"]["orientable"], false);
    const auto comb = run({"maze", "escape", "--curve", data("comb.csv"), "--start", "1,5"}).json();
    EXPECT_EQ(comb["result"]["escapable"], true);
    EXPECT_EQ(comb["result"]["counts"], nlohmann::json::array({4}));
}

TEST(Cli, PolylineCurveIsSmoothedForTheFinder) {
    const auto r = run({"rect", "find", "--curve", data("square.csv"), "--grid", "32", "--max-hits", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = r.json();
    EXPECT_FALSE(j["diagnostics"].empty());
    EXPECT_LE(j["result"]["hits"].size(), 2u);
    EXPECT_GT(j["result"]["hit_count"].get<int>(), 0);
}

TEST(Cli, InputErrorsExitTwo) {
    for (const auto& args : std::vector<std::vector<std::string>>{
             {},
             {"frobnicate"},
             {"maze", "escape", "--curve", data("circle.json")},
             {"maze", "escape", "--curve", data("circle.json"), "--start", "0,0", "--bogus"},
             {"maze", "escape", "--curve", data("circle.json"), "--start", "1,0"},
             {"maze", "escape", "--curve", data("nope.json"), "--start", "0,0"},
             {"rect", "aspect", "--curve", data("circle.json"), "--ratio", "0.5"},
             {"surface", "classify", "--word", "a b a"},
             {"surface", "classify"},
             {"cobordism", "calc", "--expr", "x3"},
             {"cobordism", "count", "--dim", "-1"},
             {"intersect", "2d", "--curve", data("circle.json")},
         }) {
        const auto r = run(args);
        EXPECT_EQ(r.code, 2) << (args.empty() ? "" : args[0]) << " " << r.err;
        EXPECT_TRUE(r.out.empty());
        EXPECT_FALSE(r.err.empty());
    }
}

TEST(Cli, UsageOnUnknownSubcommand) {
    const auto r = run({"frobnicate"});
    EXPECT_NE(r.err.find("maze"), std::string::npos);
    EXPECT_NE(r.err.find("cobordism"), std::string::npos);
}

TEST(Cli, HelpExitsZero) {
    const auto r = run({"--help"});
    EXPECT_EQ(r.code, 0);
    EXPECT_NE(r.out.find("Usage"), std::string::npos);
}

TEST(Cli, PlotIsWritten) {
    const auto path = (std::filesystem::temp_directory_path() / "mod2_cli_plot.svg").string();
    std::filesystem::remove(path);
    const auto r = run({"maze", "escape", "--curve", data("comb.csv"), "--start", "2.5,5", "--plot", path});
    ASSERT_EQ(r.code, 0) << r.err;
    ASSERT_TRUE(std::filesystem::exists(path));
    const auto svg = read_text_file(path);
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_EQ(std::count(svg.begin(), svg.end(), '\n') > 3, true);
    const auto again = run({"maze", "escape", "--curve", data("comb.csv"), "--start", "2.5,5", "--plot", path});
    EXPECT_EQ(read_text_file(path), svg);
    std::filesystem::remove(path);
}

TEST(Cli, JsonRoundTripsThroughStrictParser) {
    const auto r = run({"rect", "find", "--curve", data("circle.json"), "--grid", "32"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto j = nlohmann::ordered_json::parse(r.out);
    EXPECT_EQ(j.dump(2) + "\n", r.out);
}
