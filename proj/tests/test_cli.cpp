#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "coevo/io.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "coevo");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = coevo::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

fs::path scratch(const std::string& name) {
    const auto dir = fs::temp_directory_path() / ("coevo_cli_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
    const auto p = dir / "config.json";
    std::ofstream(p) << text;
    return p;
}

bool same_tree(const fs::path& a, const fs::path& b) {
    std::vector<fs::path> fa, fb;
    for (const auto& e : fs::recursive_directory_iterator(a))
        if (e.is_regular_file()) fa.push_back(fs::relative(e.path(), a));
    for (const auto& e : fs::recursive_directory_iterator(b))
        if (e.is_regular_file()) fb.push_back(fs::relative(e.path(), b));
    std::sort(fa.begin(), fa.end());
    std::sort(fb.begin(), fb.end());
    if (fa != fb || fa.empty()) return false;
    for (const auto& f : fa)
        if (slurp(a / f) != slurp(b / f)) return false;
    return true;
}

const char* kSmall = R"({
  // small but non-trivial
  "n": 40, "influence": {"family": "rr", "d": 6}, "communication": {"family": "ws", "d": 4, "p": 0.2},
  "horizon": 3000, "replicates": 4, "lambda": 0.3, "mu": 0.002,
  "lambda_grid": [0.0, 0.2, 0.4], "mu_grid": [0.0, 0.004]
})";

}  // namespace

TEST_CASE("generate") {
    const auto dir = scratch("generate");
    auto r = invoke({"generate", "--family", "rr", "--n", "200", "--d", "8", "--seed", "7", "--out",
                     (dir / "a.edges").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("edges=800") != std::string::npos);
    CHECK(r.out.find("connected=") != std::string::npos);
    CHECK(r.out.find("degree_min=8") != std::string::npos);
    std::ifstream in(dir / "a.edges");
    CHECK(coevo::read_edge_list(in).edge_count() == 800);

    r = invoke({"--seed", "7", "generate", "--family", "rr", "--n", "200", "--d", "8", "--out",
                (dir / "b.edges").string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "a.edges") == slurp(dir / "b.edges"));

    r = invoke({"--out-dir", dir.string(), "generate", "--family", "ws", "--n", "10", "--d", "4", "--p", "0", "--weights"});
    REQUIRE(r.code == 0);
    std::ifstream ring(dir / "network.edges");
    const auto g = coevo::read_edge_list(ring);
    for (coevo::NodeId i = 0; i < 10; ++i) CHECK(g.adjacent(i, (i + 1) % 10));
    CHECK(fs::exists(dir / "network.weights"));

    CHECK(invoke({"generate", "--family", "rr", "--n", "5", "--d", "3"}).code == 1);
    CHECK(invoke({"generate", "--family", "hex", "--n", "5", "--d", "2"}).code == 1);
    CHECK(invoke({"generate", "--n", "5"}).code == 1);
}

TEST_CASE("usage errors") {
    CHECK(invoke({}).code == 1);
    CHECK(invoke({"frobnicate"}).code == 1);
    CHECK(invoke({"--help"}).code == 0);
    const auto dir = scratch("errors");
    CHECK(invoke({"simulate", (dir / "missing.json").string()}).code == 1);
    const auto cfg = write_config(dir, R"({"n": 40, "gamma": 1})");
    const auto r = invoke({"simulate", cfg.string()});
    CHECK(r.code == 1);
    CHECK(r.err.find("gamma") != std::string::npos);
    const auto bad = write_config(dir, R"({"n": 40, "influence": {"d": 6}, "communication": {"d": 4}})");
    CHECK(invoke({"simulate", bad.string(), "--lambda", "1.5"}).code == 1);
}

TEST_CASE("runtime errors exit with 2") {
    const auto dir = scratch("runtime");
    // A one-attempt budget for a communication layer that is almost never connected.
    const auto cfg = write_config(dir, R"({"n": 200, "communication": {"family": "er", "d": 2},
        "max_network_attempts": 1, "horizon": 10})");
    CHECK(invoke({"--out-dir", (dir / "o").string(), "simulate", cfg.string()}).code == 2);
}

TEST_CASE("simulate") {
    const auto dir = scratch("simulate");
    const auto cfg = write_config(dir, kSmall);
    const auto out = dir / "o";
    auto r = invoke({"--out-dir", out.string(), "simulate", cfg.string()});
    REQUIRE(r.code == 0);
    for (const char* f : {"trajectory.csv", "final_state.csv", "theory.json", "summary.json", "resolved_config.json"})
        CHECK(fs::exists(out / f));
    CHECK(slurp(out / "trajectory.csv").rfind("t,avg_x,avg_y\n0,-0.95,-0.95\n", 0) == 0);
    const auto theory = json::parse(slurp(out / "theory.json"));
    CHECK(theory["d_star"] == 6);
    const auto summary = json::parse(slurp(out / "summary.json"));
    CHECK(summary.contains("regime"));
    const auto echo = json::parse(slurp(out / "resolved_config.json"));
    CHECK(echo["derived"]["replicate_seed"] == summary["seed"]);

    SUBCASE("echo reproduces the run") {
        const auto again = dir / "again";
        std::ofstream(dir / "echo.json") << echo.dump();
        REQUIRE(invoke({"--out-dir", again.string(), "simulate", (dir / "echo.json").string()}).code == 0);
        CHECK(same_tree(out, again));
    }
    SUBCASE("flags override the file") {
        const auto o2 = dir / "o2";
        REQUIRE(invoke({"--out-dir", o2.string(), "--seed", "5", "simulate", cfg.string(), "--horizon", "0",
                        "--lambda", "0.1"})
                    .code == 0);
        CHECK(slurp(o2 / "trajectory.csv") == "t,avg_x,avg_y\n0,-0.95,-0.95\n");
        const auto e2 = json::parse(slurp(o2 / "resolved_config.json"));
        CHECK(e2["seed"] == 5);
        CHECK(e2["lambda"] == 0.1);
        CHECK(e2["horizon"] == 0);
    }
    SUBCASE("verbose writes the network") {
        const auto o3 = dir / "o3";
        REQUIRE(invoke({"--out-dir", o3.string(), "--verbose", "simulate", cfg.string()}).code == 0);
        CHECK(fs::exists(o3 / "influence.edges"));
        CHECK(fs::exists(o3 / "communication.weights"));
    }
}

TEST_CASE("full rationality below the bound keeps a flat trajectory") {
    const auto dir = scratch("flat");
    const auto cfg = write_config(dir, R"({"n": 30, "influence": {"family": "rr", "d": 8},
        "communication": {"family": "rr", "d": 4}, "beta": "inf", "lambda": 0.2, "mu": 0.01,
        "horizon": 30000, "snapshot_every": 1})");
    REQUIRE(invoke({"--out-dir", (dir / "o").string(), "simulate", cfg.string()}).code == 0);
    std::istringstream csv(slurp(dir / "o" / "trajectory.csv"));
    std::string line;
    std::getline(csv, line);
    std::size_t rows = 0, bad = 0;
    const std::string expected = coevo::format_number(-1.0 + 2.0 / 30.0);
    while (std::getline(csv, line)) {
        ++rows;
        const auto a = line.find(','), b = line.find(',', a + 1);
        if (line.substr(a + 1, b - a - 1) != expected) ++bad;
    }
    CHECK(rows == 30001);
    CHECK(bad == 0);
    const auto theory = json::parse(slurp(dir / "o" / "theory.json"));
    CHECK(theory["paradigm_shift_excluded"] == true);
}

TEST_CASE("estimate-threshold") {
    const auto dir = scratch("threshold");
    const auto cfg = write_config(dir, kSmall);
    auto r = invoke({"--out-dir", (dir / "a").string(), "estimate-threshold", cfg.string()});
    REQUIRE(r.code == 0);
    CHECK(slurp(dir / "a" / "variance.csv").rfind("lambda,variance,mean_fraction\n", 0) == 0);
    const auto summary = json::parse(slurp(dir / "a" / "summary.json"));
    const double lh = summary["threshold"]["lambda_hat"];
    CHECK((lh == 0.0 || lh == 0.2 || lh == 0.4));

    std::ofstream(dir / "point.json") << R"({"n": 40, "influence": {"d": 6}, "communication": {"d": 4},
        "horizon": 100, "replicates": 2, "lambda_grid": 0.26})";
    REQUIRE(invoke({"--out-dir", (dir / "p").string(), "estimate-threshold", (dir / "point.json").string()}).code == 0);
    CHECK(json::parse(slurp(dir / "p" / "summary.json"))["threshold"]["lambda_hat"] == 0.26);

    REQUIRE(invoke({"--out-dir", (dir / "v").string(), "--verbose", "estimate-threshold", cfg.string()}).code == 0);
    std::size_t traj = 0;
    for (const auto& e : fs::directory_iterator(dir / "v" / "trajectories")) traj += e.is_regular_file();
    CHECK(traj == 3 * 4);
}

TEST_CASE("sweep2d") {
    const auto dir = scratch("sweep");
    const auto cfg = write_config(dir, kSmall);
    REQUIRE(invoke({"--out-dir", (dir / "a").string(), "sweep2d", cfg.string()}).code == 0);
    const auto summary = json::parse(slurp(dir / "a" / "summary.json"));
    CHECK(summary["modal_regime_grid"].size() == 3);
    CHECK(summary["modal_regime_grid"][0].size() == 2);
    std::istringstream csv(slurp(dir / "a" / "sweep.csv"));
    std::string line;
    std::size_t rows = 0;
    while (std::getline(csv, line)) ++rows;
    CHECK(rows == 1 + 3 * 2 * 4);

    SUBCASE("1x1 grid with one replicate equals simulate") {
        std::ofstream(dir / "one.json") << R"({"n": 40, "influence": {"d": 6}, "communication": {"d": 4},
            "horizon": 2000, "replicates": 1, "lambda": 0.3, "mu": 0.002, "lambda_grid": [0.3], "mu_grid": [0.002]})";
        REQUIRE(invoke({"--out-dir", (dir / "s").string(), "sweep2d", (dir / "one.json").string()}).code == 0);
        REQUIRE(invoke({"--out-dir", (dir / "m").string(), "simulate", (dir / "one.json").string()}).code == 0);
        const auto sw = json::parse(slurp(dir / "s" / "summary.json"));
        const auto sm = json::parse(slurp(dir / "m" / "summary.json"));
        CHECK(sw["cells"][0]["mean_x"] == sm["avg_x"]);
        CHECK(sw["cells"][0]["mean_y"] == sm["avg_y"]);
    }
}

TEST_CASE("theory-check") {
    const auto dir = scratch("theory");
    const auto cfg = write_config(dir, R"({"n": 200, "influence": {"family": "rr", "d": 8}, "lambda": 0.2})");
    auto r = invoke({"--out-dir", dir.string(), "theory-check", cfg.string()});
    REQUIRE(r.code == 0);
    auto j = json::parse(slurp(dir / "theory.json"));
    CHECK(j["d_star"] == 8);
    CHECK(j["paradigm_shift_excluded"] == true);
    r = invoke({"--out-dir", dir.string(), "theory-check", cfg.string(), "--realizations", "10"});
    REQUIRE(r.code == 0);
    j = json::parse(slurp(dir / "theory.json"));
    CHECK(j["mean_d_star"] == 8.0);
    const auto none = write_config(dir, R"({"n": 50, "innovator": null})");
    CHECK(invoke({"theory-check", none.string()}).code == 1);
}

TEST_CASE("outputs are identical across reruns and worker counts") {
    const auto dir = scratch("determinism");
    const auto cfg = write_config(dir, kSmall);
    for (const std::string cmd : {"simulate", "estimate-threshold", "sweep2d", "theory-check"}) {
        const auto a = dir / (cmd + "_1"), b = dir / (cmd + "_8"), c = dir / (cmd + "_1b");
        REQUIRE(invoke({"--out-dir", a.string(), "--threads", "1", "--verbose", cmd, cfg.string()}).code == 0);
        REQUIRE(invoke({"--out-dir", b.string(), "--threads", "8", "--verbose", cmd, cfg.string()}).code == 0);
        REQUIRE(invoke({"--out-dir", c.string(), "--threads", "1", "--verbose", cmd, cfg.string()}).code == 0);
        CHECK_MESSAGE(same_tree(a, b), cmd);
        CHECK_MESSAGE(same_tree(a, c), cmd);
    }
}
