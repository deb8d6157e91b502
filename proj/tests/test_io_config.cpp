#include "doctest.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "coevo/config.hpp"
#include "coevo/io.hpp"

using namespace coevo;
using json = nlohmann::json;

TEST_CASE("number formatting") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-1.0) == "-1");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(9.357622968839299e-14) == "9.35762297e-14");
    CHECK_THROWS_AS(format_number(std::nan("")), std::domain_error);
    CHECK_THROWS_AS(format_number(std::numeric_limits<double>::infinity()), std::domain_error);
}

TEST_CASE("edge list round trip") {
    const auto g = generate({Family::WattsStrogatz, 50, 4, 0.3}, 8);
    std::stringstream ss;
    write_edge_list(ss, g);
    CHECK(ss.str().rfind("n=50\n", 0) == 0);
    const auto back = read_edge_list(ss);
    CHECK(back.size() == 50);
    CHECK(back.edges() == g.edges());

    std::istringstream commented("# comment\nn=3\n0 1\n\n1 2 # tail\n");
    CHECK(read_edge_list(commented).edge_count() == 2);
    std::istringstream bad("n=3\n0 5\n");
    CHECK_THROWS(read_edge_list(bad));
    std::istringstream no_header("0 1\n");
    CHECK_THROWS(read_edge_list(no_header));
}

TEST_CASE("weights round trip exactly") {
    const auto g = generate({Family::ErdosRenyi, 60, 6, 0}, 2);
    if (g.min_degree() == 0) return;
    const auto w = make_stubborn(build_random_walk_weights(g), 0);
    std::stringstream ss;
    write_weights(ss, w);
    const auto back = read_weights(ss);
    REQUIRE(back.size() == 60);
    for (NodeId i = 0; i < 60; ++i) {
        const auto a = w.row(i), b = back.row(i);
        REQUIRE(a.size() == b.size());
        for (std::size_t k = 0; k < a.size(); ++k) {
            CHECK(a[k].column == b[k].column);
            CHECK(a[k].weight == b[k].weight);
        }
    }
}

TEST_CASE("csv writers") {
    std::ostringstream traj;
    write_trajectory_csv(traj, {{0, -0.99, -0.99}, {200, 1.0 / 3.0, 0.5}});
    CHECK(traj.str() == "t,avg_x,avg_y\n0,-0.99,-0.99\n200,0.333333333,0.5\n");

    std::ostringstream fin;
    write_final_state_csv(fin, PopulationState{{1, -1}, {1.0, -0.25}, 9});
    CHECK(fin.str() == "node,x,y\n0,1,1\n1,-1,-0.25\n");

    SweepResult s;
    s.lambda_grid = {0.1};
    s.mu_grid = {0.001};
    SweepCell c;
    c.lambda = 0.1;
    c.mu = 0.001;
    c.replicates = {{-0.98, 0.5, RegimeLabel::UnpopularNorm, 42}};
    s.cells = {c};
    std::ostringstream sw;
    write_sweep_csv(sw, s);
    CHECK(sw.str() == "lambda,mu,replicate,seed,avg_x,avg_y,regime\n0.1,0.001,0,42,-0.98,0.5,unpopular_norm\n");

    const auto est = estimate_lambda_hat({0.0, 0.02}, {{0, 0}, {0, 1}});
    std::ostringstream var;
    write_variance_csv(var, est);
    CHECK(var.str() == "lambda,variance,mean_fraction\n0,0,0\n0.02,0.5,0.5\n");
    const auto j = to_json(est);
    CHECK(j["lambda_hat"] == 0.02);
    CHECK(j["replicates"] == 2);
}

TEST_CASE("theory report json") {
    TheoryReport r{3, std::nullopt, false, false};
    auto j = to_json(r);
    CHECK(j["lambda_star"] == "not-applicable");
    r = {8, 0.4, true, true};
    j = to_json(r);
    CHECK(j["d_star"] == 8);
    CHECK(j["lambda_star"] == 0.4);
    CHECK(j["paradigm_shift_excluded"] == true);
}

TEST_CASE("config parsing") {
    SUBCASE("defaults") {
        const auto c = parse_run_config(json::object());
        CHECK(c.scenario.n() == 200);
        CHECK(c.scenario.alpha == 0.5);
        CHECK(c.scenario.beta == Rationality::finite(20));
        CHECK(c.lambda_grid.size() == 31);
        CHECK(c.mu_grid == std::vector<double>{0.001});
        CHECK(c.out_dir == "out");
    }
    SUBCASE("full document") {
        const auto c = parse_run_config(json::parse(R"({
            "n": 100, "influence": {"family": "ws", "d": 6, "p": 0.1},
            "communication": {"family": "ba", "d": 4}, "innovator": null,
            "beta": "inf", "lambda_grid": {"start": 0.1, "stop": 0.3, "step": 0.1},
            "mu_grid": [0.0, 0.01], "horizon": 5, "seed": 9, "snapshot_every": 2
        })"));
        CHECK(c.scenario.influence.family == Family::WattsStrogatz);
        CHECK(c.scenario.communication.n == 100);
        CHECK(c.scenario.communication.p == 0.2);
        CHECK_FALSE(c.scenario.innovator.has_value());
        CHECK(c.scenario.beta.is_infinite());
        CHECK(c.lambda_grid == std::vector<double>{0.1, 0.2, 0.3});
        CHECK(c.mu_grid.size() == 2);
        CHECK(*c.scenario.horizon == 5);
        CHECK(c.scenario.master_seed == 9);
    }
    SUBCASE("errors name the key") {
        auto message = [](const char* doc) {
            try {
                parse_run_config(json::parse(doc));
            } catch (const ConfigError& e) {
                return std::string(e.what());
            }
            return std::string("no error");
        };
        CHECK(message(R"({"lamda": 0.1})").rfind("lamda", 0) == 0);
        CHECK(message(R"({"influence": {"degree": 8}})").rfind("influence.degree", 0) == 0);
        CHECK(message(R"({"beta": "big"})").rfind("beta", 0) == 0);
        CHECK(message(R"({"beta": -2})").rfind("beta", 0) == 0);
        CHECK(message(R"({"mu": "x"})").rfind("mu", 0) == 0);
        CHECK(message(R"({"replicates": -3})").rfind("replicates", 0) == 0);
        CHECK(message(R"({"lambda": 2})").rfind("lambda", 0) == 0);
        CHECK(message(R"({"influence": {"family": "grid"}})").rfind("influence.family", 0) == 0);
        CHECK(message(R"({"lambda_grid": []})").rfind("lambda_grid", 0) == 0);
        CHECK(message(R"([1])").rfind("config", 0) == 0);
    }
    SUBCASE("echo round-trips") {
        auto c = parse_run_config(json::parse(R"({"n": 60, "influence": {"family": "er", "d": 6},
            "beta": "inf", "mu_grid": [0.0, 0.005], "innovator": 3})"));
        const auto echo = to_json(c);
        CHECK(echo["beta"] == "inf");
        CHECK(echo["horizon"] == 4 * 60 * 60);
        CHECK(echo["snapshot_every"] == 60);
        CHECK_FALSE(echo.contains("out_dir"));
        const auto again = parse_run_config(json::parse(echo.dump()));
        CHECK(to_json(again) == echo);
    }
}
