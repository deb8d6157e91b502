#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <vector>

#include "coevo/netgen.hpp"
#include "coevo/random.hpp"

namespace coevo {

enum class Action : std::int8_t { StatusQuo = -1, Innovation = 1 };

/// Inverse temperature of the log-linear choice rule. Infinity is a distinct
/// state (deterministic best response), not a large float.
class Rationality {
public:
    constexpr Rationality() = default;

    static constexpr Rationality infinite() noexcept { return Rationality(0.0, true); }
    static Rationality finite(double beta);

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr double value() const noexcept {
        return infinite_ ? std::numeric_limits<double>::infinity() : beta_;
    }

    friend constexpr bool operator==(const Rationality&, const Rationality&) = default;

private:
    constexpr Rationality(double beta, bool inf) : beta_(beta), infinite_(inf) {}
    double beta_ = 0.0;
    bool infinite_ = false;
};

struct AgentParams {
    std::vector<double> mu;      // susceptibility to observed actions, [0,1]
    std::vector<double> lambda;  // commitment to own opinion, [0,1]
    std::vector<Rationality> beta;
    double alpha = 0.0;          // advantage of the innovation, >= 0

    static AgentParams homogeneous(std::size_t n, double mu, double lambda, Rationality beta, double alpha);

    std::size_t size() const noexcept { return mu.size(); }
    /// Throws std::invalid_argument on any out-of-range entry or size mismatch.
    void validate(std::size_t n) const;
};

struct PopulationState {
    std::vector<std::int8_t> x;  // actions, each -1 or +1
    std::vector<double> y;       // opinions in [-1,1]
    std::uint64_t t = 0;

    std::size_t size() const noexcept { return x.size(); }
    void validate() const;
};

struct StepTrace {
    NodeId activated = 0;
    double y_before = 0.0;
    double y_after = 0.0;
    std::int8_t x_before = 0;
    std::int8_t x_after = 0;
    double p_plus = 0.0;
};

/// Payoff differences within this band are ties under best response.
inline constexpr double kTieTolerance = 1e-12;

/// (1-mu_i) sum_j w_ij y_j + mu_i/d_i sum_k a_ik x_k, read at time t.
/// Throws std::domain_error if d_i = 0 while mu_i > 0.
double opinion_update(NodeId i, const PopulationState& state, const TwoLayerNetwork& net,
                      const AgentParams& params);

/// Coordination payoff plus opinion term for the given action. Throws
/// std::domain_error if d_i = 0 while lambda_i < 1.
double payoff(NodeId i, Action action, const PopulationState& state, const TwoLayerNetwork& net,
              const AgentParams& params);

double logistic(double z) noexcept;

/// Probability of choosing +1 given both payoffs. Finite beta uses the
/// overflow-free logistic of beta*(pi_plus - pi_minus); infinite beta is the
/// best-response indicator with ties at kTieTolerance.
double action_prob_plus(Rationality beta, double pi_plus, double pi_minus) noexcept;
/// Probability of choosing -1, computed directly so that tiny deviation
/// probabilities keep full relative precision.
double action_prob_minus(Rationality beta, double pi_plus, double pi_minus) noexcept;

double action_prob_plus(NodeId i, const PopulationState& state, const TwoLayerNetwork& net,
                        const AgentParams& params);

/// One asynchronous update: a uniformly drawn agent revises opinion and
/// action, both computed from the time-t state. Consumes exactly two draws.
StepTrace step(PopulationState& state, const TwoLayerNetwork& net, const AgentParams& params, Rng& rng);

struct Snapshot {
    std::uint64_t t = 0;
    double avg_x = 0.0;
    double avg_y = 0.0;
};

struct RunOptions {
    /// Snapshot cadence in steps; 0 means once per n steps.
    std::uint64_t snapshot_every = 0;
    /// Optional per-step observer, called after each update.
    std::function<void(const PopulationState&, const StepTrace&)> on_step;
};

struct RunResult {
    PopulationState final_state;
    /// t = 0, every snapshot_every steps, and the horizon.
    std::vector<Snapshot> series;
};

RunResult run(PopulationState initial, const TwoLayerNetwork& net, const AgentParams& params,
              std::uint64_t horizon, Rng& rng, const RunOptions& options = {});

}  // namespace coevo
