#include "coevo/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <string>
#include <thread>

namespace coevo {

std::uint64_t ScenarioConfig::resolved_horizon() const noexcept {
    const std::uint64_t nn = n();
    return horizon.value_or(4 * nn * nn);
}

void ScenarioConfig::validate() const {
    auto check_layer = [](const TopologySpec& spec, const char* name) {
        try {
            spec.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string(name) + ": " + e.what());
        }
    };
    check_layer(influence, "influence");
    check_layer(communication, "communication");
    if (influence.n != communication.n) throw ConfigError("n: both layers must have the same node count");
    if (innovator && *innovator >= n()) throw ConfigError("innovator: node id out of range");
    if (!(alpha >= 0.0) || std::isinf(alpha)) throw ConfigError("alpha: must be finite and >= 0");
    if (!(lambda >= 0.0 && lambda <= 1.0)) throw ConfigError("lambda: must lie in [0,1]");
    if (!(mu >= 0.0 && mu <= 1.0)) throw ConfigError("mu: must lie in [0,1]");
    if (!(initial_opinion >= -1.0 && initial_opinion <= 1.0))
        throw ConfigError("initial_opinion: must lie in [-1,1]");
    if (replicates < 1) throw ConfigError("replicates: must be >= 1");
    if (!(plateau_band > 0.0 && plateau_band < 1.0)) throw ConfigError("plateau_band: must lie in (0,1)");
    if (max_network_attempts < 1) throw ConfigError("max_network_attempts: must be >= 1");
}

namespace {

constexpr std::uint64_t kInfluenceTag = 0x1F;
constexpr std::uint64_t kCommunicationTag = 0x2C;
constexpr std::uint64_t kDynamicsTag = 0x3D;
constexpr std::uint64_t kFrozenTag = 0x4E;

}  // namespace

std::uint64_t replicate_seed(std::uint64_t master_seed, double lambda, double mu, std::size_t replicate) noexcept {
    return derive_seed({master_seed, double_bits(lambda), double_bits(mu), replicate});
}

std::uint64_t frozen_network_seed(std::uint64_t master_seed) noexcept {
    return derive_seed({master_seed, kFrozenTag});
}

std::uint64_t dynamics_seed(std::uint64_t rep_seed) noexcept { return derive_seed({rep_seed, kDynamicsTag}); }

TwoLayerNetwork build_network(const ScenarioConfig& config, std::uint64_t base_seed, NetworkBuildInfo* info) {
    NetworkBuildInfo local;
    TwoLayerNetwork net;

    bool have_influence = false;
    for (std::size_t attempt = 0; attempt < config.max_network_attempts; ++attempt) {
        const auto seed = derive_seed({base_seed, kInfluenceTag, attempt});
        auto layer = generate(config.influence, seed);
        if (layer.min_degree() >= 1) {
            net.influence = std::move(layer);
            local.influence_seed = seed;
            local.influence_attempts = attempt + 1;
            have_influence = true;
            break;
        }
    }
    if (!have_influence)
        throw GenerationError("influence layer kept isolated nodes after " +
                              std::to_string(config.max_network_attempts) + " attempts");

    bool have_comm = false;
    for (std::size_t attempt = 0; attempt < config.max_network_attempts; ++attempt) {
        const auto seed = derive_seed({base_seed, kCommunicationTag, attempt});
        auto layer = generate(config.communication, seed);
        if (is_connected(layer)) {
            auto weights = build_random_walk_weights(layer);
            if (config.innovator) weights = make_stubborn(weights, *config.innovator);
            net.communication = std::move(weights);
            local.communication_seed = seed;
            local.communication_attempts = attempt + 1;
            have_comm = true;
            break;
        }
    }
    if (!have_comm)
        throw GenerationError("communication layer still disconnected after " +
                              std::to_string(config.max_network_attempts) + " attempts");
    if (info) *info = local;
    return net;
}

AgentParams build_params(const ScenarioConfig& config, double lambda, double mu) {
    auto params = AgentParams::homogeneous(config.n(), mu, lambda, config.beta, config.alpha);
    if (config.innovator) {
        const auto s = *config.innovator;
        params.mu[s] = 0.0;
        params.lambda[s] = 1.0;
        params.beta[s] = Rationality::infinite();
    }
    return params;
}

PopulationState build_initial_state(const ScenarioConfig& config) {
    PopulationState st;
    st.x.assign(config.n(), -1);
    st.y.assign(config.n(), config.initial_opinion);
    if (config.innovator) {
        st.x[*config.innovator] = 1;
        st.y[*config.innovator] = 1.0;
    }
    return st;
}

Scenario build_scenario(const ScenarioConfig& config) {
    config.validate();
    Scenario sc;
    const auto base = config.freeze_network ? frozen_network_seed(config.master_seed)
                                            : replicate_seed(config.master_seed, config.lambda, config.mu, 0);
    sc.network = build_network(config, base, &sc.build_info);
    sc.params = build_params(config, config.lambda, config.mu);
    sc.initial = build_initial_state(config);
    return sc;
}

ReplicateRun run_replicate(const ScenarioConfig& config, double lambda, double mu, std::size_t replicate,
                           const TwoLayerNetwork* frozen, std::uint64_t snapshot_every) {
    const auto seed = replicate_seed(config.master_seed, lambda, mu, replicate);
    TwoLayerNetwork owned;
    if (!frozen) owned = build_network(config, seed);
    const TwoLayerNetwork& net = frozen ? *frozen : owned;

    const auto params = build_params(config, lambda, mu);
    Rng rng(dynamics_seed(seed));
    RunOptions opts;
    opts.snapshot_every = snapshot_every;

    ReplicateRun out;
    out.run = run(build_initial_state(config), net, params, config.resolved_horizon(), rng, opts);
    const auto avg = averages(out.run.final_state);
    out.outcome = {avg.avg_x, avg.avg_y, classify_regime(avg.avg_x, avg.avg_y, config.plateau_band), seed};
    return out;
}

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& task) {
    if (threads == 0) threads = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    threads = std::min(threads, count);
    if (threads <= 1) {
        for (std::size_t k = 0; k < count; ++k) task(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= count || failed.load()) return;
            try {
                task(k);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
                failed = true;
            }
        }
    };
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (std::size_t w = 0; w < threads; ++w) pool.emplace_back(worker);
    pool.clear();
    if (first_error) std::rethrow_exception(first_error);
}

RegimeLabel modal_regime(const std::vector<ReplicateOutcome>& outcomes) noexcept {
    std::array<std::size_t, 4> counts{};
    for (const auto& o : outcomes) ++counts[static_cast<std::size_t>(o.regime)];
    const auto it = std::max_element(counts.begin(), counts.end());
    return static_cast<RegimeLabel>(it - counts.begin());
}

namespace {

void summarize(SweepCell& cell) {
    const double k = static_cast<double>(cell.replicates.size());
    std::vector<double> fractions;
    fractions.reserve(cell.replicates.size());
    double sx = 0.0, sy = 0.0;
    for (const auto& o : cell.replicates) {
        sx += o.avg_x;
        sy += o.avg_y;
        fractions.push_back(o.adoption_fraction());
    }
    cell.mean_x = sx / k;
    cell.mean_y = sy / k;
    double sf = 0.0;
    for (double f : fractions) sf += f;
    cell.mean_fraction = sf / k;
    cell.variance_fraction = sample_variance(fractions);
    cell.modal_regime = modal_regime(cell.replicates);
}

}  // namespace

SweepResult grid_sweep_2d(const ScenarioConfig& config, const std::vector<double>& lambda_grid,
                          const std::vector<double>& mu_grid, const ExecutionOptions& exec) {
    config.validate();
    if (lambda_grid.empty() || mu_grid.empty()) throw ConfigError("lambda_grid/mu_grid: grids must be nonempty");
    for (double l : lambda_grid)
        if (!(l >= 0.0 && l <= 1.0)) throw ConfigError("lambda_grid: values must lie in [0,1]");
    for (double m : mu_grid)
        if (!(m >= 0.0 && m <= 1.0)) throw ConfigError("mu_grid: values must lie in [0,1]");

    SweepResult result;
    result.lambda_grid = lambda_grid;
    result.mu_grid = mu_grid;
    result.cells.resize(lambda_grid.size() * mu_grid.size());
    const std::size_t reps = config.replicates;
    for (std::size_t l = 0; l < lambda_grid.size(); ++l)
        for (std::size_t m = 0; m < mu_grid.size(); ++m) {
            auto& cell = result.cells[l * mu_grid.size() + m];
            cell.lambda = lambda_grid[l];
            cell.mu = mu_grid[m];
            cell.replicates.resize(reps);
        }

    std::optional<TwoLayerNetwork> frozen;
    if (config.freeze_network) frozen = build_network(config, frozen_network_seed(config.master_seed));

    const std::size_t total = result.cells.size() * reps;
    std::atomic<std::size_t> done{0};
    std::mutex progress_mutex;
    parallel_for(total, exec.threads, [&](std::size_t task) {
        auto& cell = result.cells[task / reps];
        const std::size_t r = task % reps;
        auto rr = run_replicate(config, cell.lambda, cell.mu, r, frozen ? &*frozen : nullptr, exec.snapshot_every);
        cell.replicates[r] = rr.outcome;
        if (exec.on_run) exec.on_run(cell.lambda, cell.mu, r, rr);
        if (exec.progress) {
            const auto k = ++done;
            std::lock_guard lock(progress_mutex);
            exec.progress(k, total);
        }
    });
    for (auto& cell : result.cells) summarize(cell);
    return result;
}

std::vector<ReplicateOutcome> run_replicates(const ScenarioConfig& config, std::size_t count,
                                             const ExecutionOptions& exec) {
    if (count < 1) throw ConfigError("replicates: must be >= 1");
    auto cfg = config;
    cfg.replicates = count;
    auto sweep = grid_sweep_2d(cfg, {config.lambda}, {config.mu}, exec);
    return std::move(sweep.cells.front().replicates);
}

ThresholdEstimate threshold_from_sweep(const SweepResult& sweep) {
    if (sweep.mu_grid.size() != 1) throw std::invalid_argument("threshold estimation needs a single mu value");
    std::vector<std::vector<double>> fractions;
    for (const auto& cell : sweep.cells) {
        std::vector<double> f;
        for (const auto& o : cell.replicates) f.push_back(o.adoption_fraction());
        fractions.push_back(std::move(f));
    }
    return estimate_lambda_hat(sweep.lambda_grid, std::move(fractions));
}

ThresholdEstimate lambda_sweep(const ScenarioConfig& config, const std::vector<double>& lambda_grid,
                               const ExecutionOptions& exec) {
    return threshold_from_sweep(grid_sweep_2d(config, lambda_grid, {config.mu}, exec));
}

LambdaStarSample expected_lambda_star(const TopologySpec& influence, double alpha, std::size_t realizations,
                                      std::uint64_t master_seed, NodeId innovator) {
    if (realizations < 1) throw ConfigError("realizations: must be >= 1");
    influence.validate();
    if (innovator >= influence.n) throw ConfigError("innovator: node id out of range");
    constexpr std::uint64_t kTheoryTag = 0x5A;
    constexpr std::size_t kMaxAttempts = 1000;
    LambdaStarSample out;
    out.realizations = realizations;
    double sum_d = 0.0, sum_l = 0.0;
    for (std::size_t k = 0; k < realizations; ++k) {
        std::size_t d_star = 0;
        for (std::size_t attempt = 0; attempt < kMaxAttempts && d_star == 0; ++attempt) {
            const auto layer = generate(influence, derive_seed({master_seed, kTheoryTag, k, attempt}));
            if (layer.degree(innovator) > 0) d_star = compute_d_star(layer, innovator);
        }
        if (d_star == 0) throw GenerationError("innovator stayed isolated in every influence-layer draw");
        sum_d += static_cast<double>(d_star);
        if (const auto ls = lambda_star(d_star, alpha))
            sum_l += *ls;
        else
            ++out.not_applicable;
    }
    out.mean_d_star = sum_d / static_cast<double>(realizations);
    out.mean_lambda_star = sum_l / static_cast<double>(realizations);
    return out;
}

std::vector<double> make_grid(double start, double stop, double step) {
    if (!(step > 0.0) || !(stop >= start)) throw ConfigError("grid: need step > 0 and stop >= start");
    std::vector<double> grid;
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t k = 0; k < count; ++k)
        grid.push_back(std::round((start + step * static_cast<double>(k)) * 1e12) / 1e12);
    return grid;
}

}  // namespace coevo
