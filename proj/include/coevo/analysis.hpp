#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "coevo/dynamics.hpp"
#include "coevo/netgen.hpp"

namespace coevo {

struct Averages {
    double avg_x = 0.0;
    double avg_y = 0.0;
};

/// Population means of actions and opinions (innovator included).
Averages averages(const PopulationState& state) noexcept;

/// Neighbor-average action level above which +1 is the strict best
/// response. Requires lambda in [0,1); lambda == 1 throws std::domain_error.
double best_response_threshold(double lambda, double y, double alpha);

/// Minimum influence degree among the innovator's influence neighbors.
/// Throws std::invalid_argument if s has none.
std::size_t compute_d_star(const TwoLayerNetwork& net, NodeId s);
std::size_t compute_d_star(const InfluenceLayer& influence, NodeId s);

/// Commitment bound below which a fully rational population cannot leave
/// the status quo. Empty when alpha >= d_star - 2.
std::optional<double> lambda_star(std::size_t d_star, double alpha) noexcept;

struct TheoryReport {
    std::size_t d_star = 0;
    std::optional<double> lambda_star;
    bool condition_alpha_ok = false;
    bool paradigm_shift_excluded = false;
};

TheoryReport theorem_check(const TwoLayerNetwork& net, NodeId s, double alpha, double lambda);

enum class RegimeLabel { ParadigmShift, UnpopularNorm, PopularDisadvantageousNorm, Undetermined };

std::string_view to_string(RegimeLabel r) noexcept;
RegimeLabel parse_regime(std::string_view name);

inline constexpr double kDefaultPlateauBand = 0.2;

RegimeLabel classify_regime(double avg_x, double avg_y, double plateau_band = kDefaultPlateauBand);

struct ThresholdEstimate {
    std::vector<double> grid;
    /// adoption_fraction[g][r]: fraction of +1 actions at the horizon in
    /// replicate r of grid point g.
    std::vector<std::vector<double>> adoption_fraction;
    std::vector<double> mean_fraction;
    std::vector<double> variance;  // unbiased, across replicates
    double lambda_hat = 0.0;
};

/// Sample variance per grid point and its argmax (ties to the smallest
/// grid value). Needs a nonempty grid and >= 2 replicates per point.
ThresholdEstimate estimate_lambda_hat(std::vector<double> grid, std::vector<std::vector<double>> adoption_fraction);

/// Unbiased sample variance; 0 for fewer than two samples.
double sample_variance(const std::vector<double>& values) noexcept;

}  // namespace coevo
