#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "coevo/analysis.hpp"
#include "coevo/config.hpp"
#include "coevo/harness.hpp"
#include "coevo/io.hpp"
#include "coevo/netgen.hpp"

namespace coevo::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct GlobalFlags {
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out_dir;
    std::optional<std::size_t> threads;
    bool verbose = false;
};

struct ScenarioOverrides {
    std::optional<double> lambda;
    std::optional<double> mu;
    std::optional<std::uint64_t> horizon;
    std::optional<std::size_t> replicates;
};

void write_file(const fs::path& path, const std::function<void(std::ostream&)>& body) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("cannot write '" + path.string() + "'");
    body(os);
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

void write_json(const fs::path& path, const ojson& j) {
    write_file(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

// flag > file > default
RunConfig resolve(const std::string& config_path, const GlobalFlags& g, const ScenarioOverrides& o) {
    RunConfig cfg = load_run_config(config_path);
    if (g.seed) cfg.scenario.master_seed = *g.seed;
    if (g.out_dir) cfg.out_dir = *g.out_dir;
    if (g.threads) cfg.threads = *g.threads;
    if (g.verbose) cfg.verbose = true;
    if (o.lambda) cfg.scenario.lambda = *o.lambda;
    if (o.mu) {
        if (cfg.mu_grid == std::vector<double>{cfg.scenario.mu}) cfg.mu_grid = {*o.mu};
        cfg.scenario.mu = *o.mu;
    }
    if (o.horizon) cfg.scenario.horizon = *o.horizon;
    if (o.replicates) cfg.scenario.replicates = *o.replicates;
    cfg.scenario.validate();
    return cfg;
}

ExecutionOptions execution(const RunConfig& cfg, std::ostream& err) {
    ExecutionOptions exec;
    exec.threads = cfg.threads;
    exec.snapshot_every = cfg.snapshot_every;
    if (cfg.verbose) {
        exec.progress = [&err](std::size_t done, std::size_t total) {
            if (done == total || done % 100 == 0) err << "  " << done << "/" << total << " runs\n";
        };
        const fs::path dir = fs::path(cfg.out_dir) / "trajectories";
        exec.on_run = [dir](double lambda, double mu, std::size_t r, const ReplicateRun& run) {
            const std::string name = "traj_lambda" + format_number(lambda) + "_mu" + format_number(mu) + "_r" +
                                     std::to_string(r) + ".csv";
            write_file(dir / name, [&](std::ostream& os) { write_trajectory_csv(os, run.run.series); });
        };
    }
    return exec;
}

ojson seeds_json(const RunConfig& cfg) {
    auto cells = ojson::array();
    const auto& sc = cfg.scenario;
    for (double l : cfg.lambda_grid)
        for (double m : cfg.mu_grid) {
            ojson c;
            c["lambda"] = l;
            c["mu"] = m;
            auto seeds = ojson::array();
            for (std::size_t r = 0; r < sc.replicates; ++r) seeds.push_back(replicate_seed(sc.master_seed, l, m, r));
            c["replicate_seeds"] = std::move(seeds);
            cells.push_back(std::move(c));
        }
    return cells;
}

void add_scenario_overrides(CLI::App* cmd, ScenarioOverrides& o) {
    cmd->add_option("--lambda", o.lambda, "Commitment (overrides the config file)");
    cmd->add_option("--mu", o.mu, "Susceptibility (overrides the config file)");
    cmd->add_option("--horizon", o.horizon, "Steps per run (overrides the config file)");
    cmd->add_option("--replicates", o.replicates, "Replicates per cell (overrides the config file)");
}

int cmd_generate(const std::string& family, std::size_t n, std::size_t d, double p, const std::optional<std::string>& out,
                 bool weights, const GlobalFlags& g, std::ostream& os) {
    TopologySpec spec;
    try {
        spec = {parse_family(family), n, d, p};
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const std::uint64_t seed = g.seed.value_or(1);
    const auto layer = generate(spec, seed);
    const fs::path path = out ? fs::path(*out) : fs::path(g.out_dir.value_or("out")) / "network.edges";
    write_file(path, [&](std::ostream& f) { write_edge_list(f, layer); });
    if (weights) {
        auto w_path = path;
        w_path.replace_extension(".weights");
        const auto comm = build_random_walk_weights(layer);
        write_file(w_path, [&](std::ostream& f) { write_weights(f, comm); });
    }
    const auto deg = layer.degrees();
    std::size_t mx = 0, total = 0;
    for (auto v : deg) {
        mx = std::max(mx, v);
        total += v;
    }
    os << "n=" << layer.size() << " edges=" << layer.edge_count() << " connected=" << (is_connected(layer) ? "true" : "false")
       << " degree_min=" << layer.min_degree() << " degree_mean=" << format_number(static_cast<double>(total) / static_cast<double>(n))
       << " degree_max=" << mx << '\n';
    os << "wrote " << path.string() << '\n';
    return kSuccess;
}

int cmd_simulate(const RunConfig& cfg, std::ostream& os) {
    const auto& sc = cfg.scenario;
    const fs::path dir(cfg.out_dir);
    const Scenario scenario = build_scenario(sc);
    std::optional<TwoLayerNetwork> frozen;
    if (sc.freeze_network) frozen = scenario.network;
    const auto rr = run_replicate(sc, sc.lambda, sc.mu, 0, frozen ? &*frozen : nullptr, cfg.snapshot_every);

    write_file(dir / "trajectory.csv", [&](std::ostream& f) { write_trajectory_csv(f, rr.run.series); });
    write_file(dir / "final_state.csv", [&](std::ostream& f) { write_final_state_csv(f, rr.run.final_state); });

    ojson theory;
    if (sc.innovator) {
        theory = to_json(theorem_check(scenario.network, *sc.innovator, sc.alpha, sc.lambda));
    } else {
        theory["note"] = "no innovator configured";
    }
    write_json(dir / "theory.json", theory);

    ojson summary;
    summary["avg_x"] = rr.outcome.avg_x;
    summary["avg_y"] = rr.outcome.avg_y;
    summary["regime"] = std::string(to_string(rr.outcome.regime));
    summary["seed"] = rr.outcome.seed;
    summary["horizon"] = sc.resolved_horizon();
    write_json(dir / "summary.json", summary);

    auto echo = to_json(cfg);
    echo["derived"]["replicate_seed"] = rr.outcome.seed;
    echo["derived"]["dynamics_seed"] = dynamics_seed(rr.outcome.seed);
    echo["derived"]["influence_seed"] = scenario.build_info.influence_seed;
    echo["derived"]["communication_seed"] = scenario.build_info.communication_seed;
    echo["derived"]["influence_attempts"] = scenario.build_info.influence_attempts;
    echo["derived"]["communication_attempts"] = scenario.build_info.communication_attempts;
    write_json(dir / "resolved_config.json", echo);

    if (cfg.verbose) {
        write_file(dir / "influence.edges", [&](std::ostream& f) { write_edge_list(f, scenario.network.influence); });
        write_file(dir / "communication.weights",
                   [&](std::ostream& f) { write_weights(f, scenario.network.communication); });
    }
    os << "regime=" << to_string(rr.outcome.regime) << " avg_x=" << format_number(rr.outcome.avg_x)
       << " avg_y=" << format_number(rr.outcome.avg_y) << '\n';
    return kSuccess;
}

int cmd_estimate_threshold(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const fs::path dir(cfg.out_dir);
    const auto sweep = grid_sweep_2d(cfg.scenario, cfg.lambda_grid, {cfg.scenario.mu}, execution(cfg, err));
    const auto est = threshold_from_sweep(sweep);
    write_file(dir / "variance.csv", [&](std::ostream& f) { write_variance_csv(f, est); });
    write_file(dir / "sweep.csv", [&](std::ostream& f) { write_sweep_csv(f, sweep); });
    ojson summary;
    summary["threshold"] = to_json(est);
    summary["sweep"] = sweep_summary_json(sweep);
    write_json(dir / "summary.json", summary);
    auto cfg1 = cfg;
    cfg1.mu_grid = {cfg.scenario.mu};
    auto echo = to_json(cfg1);
    echo["derived"]["seeds"] = seeds_json(cfg1);
    write_json(dir / "resolved_config.json", echo);
    os << "lambda_hat=" << format_number(est.lambda_hat) << '\n';
    return kSuccess;
}

int cmd_sweep2d(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
    const fs::path dir(cfg.out_dir);
    const auto sweep = grid_sweep_2d(cfg.scenario, cfg.lambda_grid, cfg.mu_grid, execution(cfg, err));
    write_file(dir / "sweep.csv", [&](std::ostream& f) { write_sweep_csv(f, sweep); });
    ojson summary = sweep_summary_json(sweep);
    if (sweep.mu_grid.size() == 1 && cfg.scenario.replicates >= 2) summary["threshold"] = to_json(threshold_from_sweep(sweep));
    write_json(dir / "summary.json", summary);
    auto echo = to_json(cfg);
    echo["derived"]["seeds"] = seeds_json(cfg);
    write_json(dir / "resolved_config.json", echo);
    os << "cells=" << sweep.cells.size() << " replicates=" << cfg.scenario.replicates << '\n';
    return kSuccess;
}

int cmd_theory_check(const RunConfig& cfg, std::size_t realizations, std::ostream& os) {
    const auto& sc = cfg.scenario;
    if (!sc.innovator) throw ConfigError("innovator: theory-check needs an innovator");
    ojson out;
    if (realizations <= 1) {
        const Scenario scenario = build_scenario(sc);
        out = to_json(theorem_check(scenario.network, *sc.innovator, sc.alpha, sc.lambda));
        out["alpha"] = sc.alpha;
        out["lambda"] = sc.lambda;
    } else {
        const auto sample = expected_lambda_star(sc.influence, sc.alpha, realizations, sc.master_seed, *sc.innovator);
        out["realizations"] = sample.realizations;
        out["not_applicable"] = sample.not_applicable;
        out["mean_d_star"] = sample.mean_d_star;
        out["mean_lambda_star"] = sample.mean_lambda_star;
        out["alpha"] = sc.alpha;
    }
    write_json(fs::path(cfg.out_dir) / "theory.json", out);
    os << out.dump(2) << '\n';
    return kSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Two-layer coevolutionary opinion/decision dynamics: simulation and analysis", "coevo"};
    app.require_subcommand(1);
    app.fallthrough();

    GlobalFlags g;
    app.add_option("--seed", g.seed, "Master seed (overrides the config file)");
    app.add_option("--out-dir", g.out_dir, "Output directory (overrides the config file)");
    app.add_option("--threads", g.threads, "Worker threads, 0 = all cores (overrides the config file)");
    app.add_flag("--verbose", g.verbose, "Progress on stderr and per-run trajectory files");

    std::string family;
    std::size_t n = 0, d = 0;
    double p = 0.2;
    std::optional<std::string> out_path;
    bool with_weights = false;
    auto* gen = app.add_subcommand("generate", "Generate one network layer as an edge list");
    gen->add_option("--family", family, "rr | er | ws | ba")->required();
    gen->add_option("--n", n, "Node count")->required();
    gen->add_option("--d", d, "Average degree")->required();
    gen->add_option("--p", p, "Rewiring probability (ws)")->capture_default_str();
    gen->add_option("--out", out_path, "Output file (default <out-dir>/network.edges)");
    gen->add_flag("--weights", with_weights, "Also write random-walk weights next to the edge list");

    std::string config_path;
    ScenarioOverrides overrides;
    auto* sim = app.add_subcommand("simulate", "Run one realization and write its trajectory");
    sim->add_option("config", config_path, "JSON config file")->required();
    add_scenario_overrides(sim, overrides);

    auto* est = app.add_subcommand("estimate-threshold", "Variance-peak commitment threshold over a lambda grid");
    est->add_option("config", config_path, "JSON config file")->required();
    add_scenario_overrides(est, overrides);

    auto* sweep = app.add_subcommand("sweep2d", "Replicated (lambda, mu) grid sweep");
    sweep->add_option("config", config_path, "JSON config file")->required();
    add_scenario_overrides(sweep, overrides);

    std::size_t realizations = 1;
    auto* theory = app.add_subcommand("theory-check", "d*, lambda* and the no-shift condition for a realized network");
    theory->add_option("config", config_path, "JSON config file")->required();
    theory->add_option("--realizations", realizations, "Average lambda* over this many influence-layer draws")
        ->capture_default_str();
    add_scenario_overrides(theory, overrides);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kConfigError;
    }

    try {
        if (*gen) return cmd_generate(family, n, d, p, out_path, with_weights, g, out);
        const auto cfg = resolve(config_path, g, overrides);
        if (*sim) return cmd_simulate(cfg, out);
        if (*est) return cmd_estimate_threshold(cfg, out, err);
        if (*sweep) return cmd_sweep2d(cfg, out, err);
        if (*theory) return cmd_theory_check(cfg, realizations, out);
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kRuntimeError;
    }
    return kConfigError;
}

}  // namespace coevo::cli
