#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "coevo/harness.hpp"

namespace coevo {

/// Everything a CLI run needs: the scenario, the sweep grids and execution
/// settings. Parsed from a JSON document; unknown keys are rejected.
struct RunConfig {
    ScenarioConfig scenario;
    std::vector<double> lambda_grid;  // default 0, 0.02, ..., 0.6
    std::vector<double> mu_grid;      // default {scenario.mu}
    std::uint64_t snapshot_every = 0; // 0 means every n steps
    std::string out_dir = "out";
    std::size_t threads = 1;
    bool verbose = false;
};

/// Throws ConfigError naming the offending key.
RunConfig parse_run_config(const nlohmann::json& doc);
RunConfig load_run_config(const std::string& path);

/// Fully resolved, re-parseable form. Execution-only settings (out_dir,
/// threads, verbose) are left out so the echo is identical across them.
nlohmann::ordered_json to_json(const RunConfig& config);

/// Accepts a number or the string "inf".
Rationality parse_rationality(const nlohmann::json& value);
nlohmann::ordered_json rationality_json(Rationality beta);

}  // namespace coevo
