#include "coevo/dynamics.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "coevo/analysis.hpp"

namespace coevo {

Rationality Rationality::finite(double beta) {
    if (!(beta >= 0.0) || std::isinf(beta))
        throw std::invalid_argument("rationality must be a finite non-negative number (use infinite())");
    return Rationality(beta, false);
}

AgentParams AgentParams::homogeneous(std::size_t n, double mu, double lambda, Rationality beta, double alpha) {
    AgentParams p;
    p.mu.assign(n, mu);
    p.lambda.assign(n, lambda);
    p.beta.assign(n, beta);
    p.alpha = alpha;
    return p;
}

void AgentParams::validate(std::size_t n) const {
    if (mu.size() != n || lambda.size() != n || beta.size() != n)
        throw std::invalid_argument("agent parameter vectors must have one entry per node");
    for (std::size_t i = 0; i < n; ++i) {
        if (!(mu[i] >= 0.0 && mu[i] <= 1.0))
            throw std::invalid_argument("mu[" + std::to_string(i) + "] outside [0,1]");
        if (!(lambda[i] >= 0.0 && lambda[i] <= 1.0))
            throw std::invalid_argument("lambda[" + std::to_string(i) + "] outside [0,1]");
    }
    if (!(alpha >= 0.0) || std::isinf(alpha)) throw std::invalid_argument("alpha must be finite and >= 0");
}

void PopulationState::validate() const {
    if (x.size() != y.size()) throw std::invalid_argument("action and opinion vectors differ in length");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != 1 && x[i] != -1)
            throw std::invalid_argument("action x[" + std::to_string(i) + "] is not +1 or -1");
        if (!(y[i] >= -1.0 && y[i] <= 1.0))
            throw std::invalid_argument("opinion y[" + std::to_string(i) + "] outside [-1,1]");
    }
}

namespace {

long neighbor_action_sum(NodeId i, const PopulationState& state, const InfluenceLayer& layer) {
    long s = 0;
    for (NodeId j : layer.neighbors(i)) s += state.x[j];
    return s;
}

double shared_opinion(NodeId i, const PopulationState& state, const CommunicationLayer& comm) {
    double acc = 0.0;
    for (const auto& e : comm.row(i)) acc += e.weight * state.y[e.column];
    return acc;
}

double combine_opinion(double mu, double shared, long action_sum, std::size_t degree, NodeId i) {
    if (mu == 0.0) return shared;
    if (degree == 0)
        throw std::domain_error("node " + std::to_string(i) + " has no influence neighbors but mu > 0");
    return (1.0 - mu) * shared + mu * static_cast<double>(action_sum) / static_cast<double>(degree);
}

struct PayoffPair {
    double plus;
    double minus;
};

PayoffPair payoffs_from_sum(double lambda, double y, double alpha, long action_sum, std::size_t degree,
                            NodeId i) {
    const double own = 0.5 * lambda * y;
    if (lambda == 1.0) return {own, -own};
    if (degree == 0)
        throw std::domain_error("node " + std::to_string(i) + " has no influence neighbors but lambda < 1");
    const double d = static_cast<double>(degree);
    const double s = static_cast<double>(action_sum);
    // sum_j a_ij (1 + x_j) = d + s and sum_j a_ij (1 - x_j) = d - s.
    const double social = (1.0 - lambda) / (2.0 * d);
    return {own + social * (1.0 + alpha) * (d + s), -own + social * (d - s)};
}

}  // namespace

double opinion_update(NodeId i, const PopulationState& state, const TwoLayerNetwork& net,
                      const AgentParams& params) {
    const double mu = params.mu[i];
    const double shared = shared_opinion(i, state, net.communication);
    if (mu == 0.0) return shared;
    return combine_opinion(mu, shared, neighbor_action_sum(i, state, net.influence), net.influence.degree(i), i);
}

double payoff(NodeId i, Action action, const PopulationState& state, const TwoLayerNetwork& net,
              const AgentParams& params) {
    const long s = params.lambda[i] == 1.0 ? 0 : neighbor_action_sum(i, state, net.influence);
    const auto p = payoffs_from_sum(params.lambda[i], state.y[i], params.alpha, s, net.influence.degree(i), i);
    return action == Action::Innovation ? p.plus : p.minus;
}

double logistic(double z) noexcept {
    if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

double action_prob_plus(Rationality beta, double pi_plus, double pi_minus) noexcept {
    const double diff = pi_plus - pi_minus;
    if (beta.is_infinite()) {
        if (std::abs(diff) <= kTieTolerance) return 0.5;
        return diff > 0.0 ? 1.0 : 0.0;
    }
    return logistic(beta.value() * diff);
}

double action_prob_minus(Rationality beta, double pi_plus, double pi_minus) noexcept {
    return action_prob_plus(beta, pi_minus, pi_plus);
}

double action_prob_plus(NodeId i, const PopulationState& state, const TwoLayerNetwork& net,
                        const AgentParams& params) {
    return action_prob_plus(params.beta[i], payoff(i, Action::Innovation, state, net, params),
                            payoff(i, Action::StatusQuo, state, net, params));
}

StepTrace step(PopulationState& state, const TwoLayerNetwork& net, const AgentParams& params, Rng& rng) {
    const auto i = static_cast<NodeId>(uniform_below(rng, state.size()));
    const double u = uniform01(rng);

    const double mu = params.mu[i];
    const double lambda = params.lambda[i];
    const bool needs_actions = mu != 0.0 || lambda != 1.0;
    const long s = needs_actions ? neighbor_action_sum(i, state, net.influence) : 0;
    const std::size_t degree = net.influence.degree(i);

    const double y_next = combine_opinion(mu, shared_opinion(i, state, net.communication), s, degree, i);
    const auto pay = payoffs_from_sum(lambda, state.y[i], params.alpha, s, degree, i);
    const double p_plus = action_prob_plus(params.beta[i], pay.plus, pay.minus);

    StepTrace trace;
    trace.activated = i;
    trace.y_before = state.y[i];
    trace.x_before = state.x[i];
    trace.p_plus = p_plus;

    state.y[i] = y_next;
    state.x[i] = u < p_plus ? 1 : -1;
    ++state.t;

    trace.y_after = state.y[i];
    trace.x_after = state.x[i];
    return trace;
}

RunResult run(PopulationState initial, const TwoLayerNetwork& net, const AgentParams& params,
              std::uint64_t horizon, Rng& rng, const RunOptions& options) {
    const std::size_t n = initial.size();
    if (net.size() != n || net.communication.size() != n)
        throw std::invalid_argument("network size does not match population size");
    params.validate(n);
    initial.validate();
    const std::uint64_t every = options.snapshot_every == 0 ? n : options.snapshot_every;

    RunResult result;
    result.final_state = std::move(initial);
    auto& state = result.final_state;
    auto record = [&] {
        const auto [ax, ay] = averages(state);
        result.series.push_back({state.t, ax, ay});
    };

    record();
    for (std::uint64_t k = 1; k <= horizon; ++k) {
        const auto trace = step(state, net, params, rng);
        if (options.on_step) options.on_step(state, trace);
        if (k % every == 0 || k == horizon) record();
    }
    return result;
}

}  // namespace coevo
