#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "coevo/analysis.hpp"
#include "coevo/dynamics.hpp"
#include "coevo/netgen.hpp"

namespace coevo {

class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Innovation-adoption experiment: one stubborn innovator at +1 in a
/// population that starts on the status quo. All other agents share mu,
/// lambda and beta.
struct ScenarioConfig {
    TopologySpec influence{Family::RegularRandom, 200, 8, 0.2};
    TopologySpec communication{Family::RegularRandom, 200, 4, 0.2};
    /// Empty disables the innovator (all agents ordinary).
    std::optional<NodeId> innovator = 0;
    double alpha = 0.5;
    Rationality beta = Rationality::finite(20.0);
    double lambda = 0.1;
    double mu = 0.001;
    /// Steps to simulate; empty means 4 n^2.
    std::optional<std::uint64_t> horizon;
    std::uint64_t master_seed = 1;
    std::size_t replicates = 100;
    /// y_i(0) for every non-innovator.
    double initial_opinion = -1.0;
    /// Reuse one network realization for every replicate and cell.
    bool freeze_network = false;
    double plateau_band = kDefaultPlateauBand;
    std::size_t max_network_attempts = 1000;

    std::size_t n() const noexcept { return influence.n; }
    std::uint64_t resolved_horizon() const noexcept;
    /// Throws ConfigError naming the offending field.
    void validate() const;
};

struct NetworkBuildInfo {
    std::uint64_t influence_seed = 0;
    std::uint64_t communication_seed = 0;
    std::size_t influence_attempts = 1;
    std::size_t communication_attempts = 1;
};

struct Scenario {
    TwoLayerNetwork network;
    AgentParams params;
    PopulationState initial;
    NetworkBuildInfo build_info;
};

/// Both layers from independent sub-seeds of base_seed. The influence layer
/// is redrawn until every node has a neighbor and the communication layer
/// until it is connected; the innovator row is made stubborn.
TwoLayerNetwork build_network(const ScenarioConfig& config, std::uint64_t base_seed, NetworkBuildInfo* info = nullptr);

AgentParams build_params(const ScenarioConfig& config, double lambda, double mu);
PopulationState build_initial_state(const ScenarioConfig& config);

/// Network from the master seed plus parameters and initial state for
/// config.lambda and config.mu.
Scenario build_scenario(const ScenarioConfig& config);

/// Seed of replicate r in the (lambda, mu) cell; keyed on the parameter
/// values so that grids can grow without shifting other cells' streams.
std::uint64_t replicate_seed(std::uint64_t master_seed, double lambda, double mu, std::size_t replicate) noexcept;
std::uint64_t frozen_network_seed(std::uint64_t master_seed) noexcept;
std::uint64_t dynamics_seed(std::uint64_t replicate_seed) noexcept;

struct ReplicateOutcome {
    double avg_x = 0.0;
    double avg_y = 0.0;
    RegimeLabel regime = RegimeLabel::Undetermined;
    std::uint64_t seed = 0;

    double adoption_fraction() const noexcept { return (avg_x + 1.0) / 2.0; }
};

struct ReplicateRun {
    ReplicateOutcome outcome;
    RunResult run;
};

struct ExecutionOptions {
    /// Worker threads; 0 means hardware concurrency.
    std::size_t threads = 1;
    /// Snapshot cadence forwarded to run(); 0 means every n steps.
    std::uint64_t snapshot_every = 0;
    /// Called with (lambda, mu, replicate, run) after each replicate, from
    /// the worker thread. Used to persist per-run trajectories.
    std::function<void(double, double, std::size_t, const ReplicateRun&)> on_run;
    std::function<void(std::size_t, std::size_t)> progress;
};

/// Single replicate r of the (lambda, mu) cell, including its trajectory.
ReplicateRun run_replicate(const ScenarioConfig& config, double lambda, double mu, std::size_t replicate,
                           const TwoLayerNetwork* frozen = nullptr, std::uint64_t snapshot_every = 0);

std::vector<ReplicateOutcome> run_replicates(const ScenarioConfig& config, std::size_t count,
                                             const ExecutionOptions& exec = {});

struct SweepCell {
    double lambda = 0.0;
    double mu = 0.0;
    std::vector<ReplicateOutcome> replicates;
    double mean_x = 0.0;
    double mean_y = 0.0;
    double mean_fraction = 0.0;
    double variance_fraction = 0.0;
    RegimeLabel modal_regime = RegimeLabel::Undetermined;
};

struct SweepResult {
    std::vector<double> lambda_grid;
    std::vector<double> mu_grid;
    /// Lambda-major: cell (l, m) is at l * mu_grid.size() + m.
    std::vector<SweepCell> cells;

    const SweepCell& at(std::size_t l, std::size_t m) const { return cells.at(l * mu_grid.size() + m); }
};

/// Most frequent label; ties go to the earlier enumerator.
RegimeLabel modal_regime(const std::vector<ReplicateOutcome>& outcomes) noexcept;

SweepResult grid_sweep_2d(const ScenarioConfig& config, const std::vector<double>& lambda_grid,
                          const std::vector<double>& mu_grid, const ExecutionOptions& exec = {});

/// Variance-peak estimate over the lambda axis of a sweep with one mu value.
ThresholdEstimate threshold_from_sweep(const SweepResult& sweep);

ThresholdEstimate lambda_sweep(const ScenarioConfig& config, const std::vector<double>& lambda_grid,
                               const ExecutionOptions& exec = {});

struct LambdaStarSample {
    std::size_t realizations = 0;
    /// Realizations where alpha >= d* - 2; they enter the mean as 0.
    std::size_t not_applicable = 0;
    double mean_d_star = 0.0;
    double mean_lambda_star = 0.0;
};

/// Monte Carlo mean of lambda*(d*) over independent influence-layer
/// realizations. Realizations leaving the innovator isolated are redrawn.
LambdaStarSample expected_lambda_star(const TopologySpec& influence, double alpha, std::size_t realizations,
                                      std::uint64_t master_seed, NodeId innovator = 0);

/// Inclusive arithmetic grid start, start+step, ..., stop (values rounded to
/// 12 decimals so that e.g. 0.1 + 0.02*k prints cleanly).
std::vector<double> make_grid(double start, double stop, double step);

/// Runs task(k) for k in [0, count) on `threads` workers. The first
/// exception thrown by any task is rethrown after all workers stop.
void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task);

}  // namespace coevo
