#include "coevo/analysis.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <string>

namespace coevo {

Averages averages(const PopulationState& state) noexcept {
    const std::size_t n = state.size();
    if (n == 0) return {};
    long sx = 0;
    for (auto v : state.x) sx += v;
    const double sy = std::accumulate(state.y.begin(), state.y.end(), 0.0);
    return {static_cast<double>(sx) / static_cast<double>(n), sy / static_cast<double>(n)};
}

double best_response_threshold(double lambda, double y, double alpha) {
    if (!(lambda >= 0.0 && lambda < 1.0))
        throw std::domain_error("best-response threshold needs lambda in [0,1)");
    return -(alpha + 2.0 * lambda / (1.0 - lambda) * y) / (2.0 + alpha);
}

std::size_t compute_d_star(const InfluenceLayer& influence, NodeId s) {
    if (s >= influence.size()) throw std::invalid_argument("innovator id out of range");
    const auto nb = influence.neighbors(s);
    if (nb.empty()) throw std::invalid_argument("innovator has no influence-layer neighbors");
    std::size_t best = influence.degree(nb.front());
    for (NodeId j : nb) best = std::min(best, influence.degree(j));
    return best;
}

std::size_t compute_d_star(const TwoLayerNetwork& net, NodeId s) { return compute_d_star(net.influence, s); }

std::optional<double> lambda_star(std::size_t d_star, double alpha) noexcept {
    const double d = static_cast<double>(d_star);
    if (!(alpha < d - 2.0)) return std::nullopt;
    return 0.5 - (2.0 + alpha) / (4.0 * d - 4.0 - 2.0 * alpha);
}

TheoryReport theorem_check(const TwoLayerNetwork& net, NodeId s, double alpha, double lambda) {
    TheoryReport r;
    r.d_star = compute_d_star(net, s);
    r.lambda_star = lambda_star(r.d_star, alpha);
    r.condition_alpha_ok = r.lambda_star.has_value();
    r.paradigm_shift_excluded = r.condition_alpha_ok && lambda < *r.lambda_star;
    return r;
}

std::string_view to_string(RegimeLabel r) noexcept {
    switch (r) {
        case RegimeLabel::ParadigmShift: return "paradigm_shift";
        case RegimeLabel::UnpopularNorm: return "unpopular_norm";
        case RegimeLabel::PopularDisadvantageousNorm: return "popular_disadvantageous_norm";
        case RegimeLabel::Undetermined: return "undetermined";
    }
    return "undetermined";
}

RegimeLabel parse_regime(std::string_view name) {
    for (auto r : {RegimeLabel::ParadigmShift, RegimeLabel::UnpopularNorm,
                   RegimeLabel::PopularDisadvantageousNorm, RegimeLabel::Undetermined})
        if (to_string(r) == name) return r;
    throw std::invalid_argument("unknown regime label '" + std::string(name) + "'");
}

RegimeLabel classify_regime(double avg_x, double avg_y, double plateau_band) {
    if (!(plateau_band > 0.0 && plateau_band < 1.0))
        throw std::invalid_argument("plateau band must lie in (0,1)");
    if (avg_x >= 1.0 - plateau_band && avg_y > 0.0) return RegimeLabel::ParadigmShift;
    if (avg_x <= -1.0 + plateau_band) {
        if (avg_y > 0.0) return RegimeLabel::UnpopularNorm;
        if (avg_y < 0.0) return RegimeLabel::PopularDisadvantageousNorm;
    }
    return RegimeLabel::Undetermined;
}

double sample_variance(const std::vector<double>& values) noexcept {
    const std::size_t k = values.size();
    if (k < 2) return 0.0;
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(k);
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(k - 1);
}

ThresholdEstimate estimate_lambda_hat(std::vector<double> grid, std::vector<std::vector<double>> adoption_fraction) {
    if (grid.empty()) throw std::invalid_argument("threshold estimation needs a nonempty grid");
    if (adoption_fraction.size() != grid.size())
        throw std::invalid_argument("one replicate list per grid point required");
    ThresholdEstimate est;
    est.grid = std::move(grid);
    est.adoption_fraction = std::move(adoption_fraction);
    for (const auto& reps : est.adoption_fraction) {
        if (reps.size() < 2) throw std::invalid_argument("threshold estimation needs >= 2 replicates per grid point");
        est.mean_fraction.push_back(std::accumulate(reps.begin(), reps.end(), 0.0) / static_cast<double>(reps.size()));
        est.variance.push_back(sample_variance(reps));
    }
    std::size_t best = 0;
    for (std::size_t g = 1; g < est.grid.size(); ++g) {
        const bool higher = est.variance[g] > est.variance[best];
        const bool tie_smaller = est.variance[g] == est.variance[best] && est.grid[g] < est.grid[best];
        if (higher || tie_smaller) best = g;
    }
    est.lambda_hat = est.grid[best];
    return est;
}

}  // namespace coevo
