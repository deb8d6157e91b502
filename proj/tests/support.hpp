#pragma once

#include <cmath>
#include <vector>

#include "coevo/dynamics.hpp"
#include "coevo/netgen.hpp"
#include "coevo/random.hpp"

namespace coevo::testing {

inline TwoLayerNetwork make_network(std::size_t n, const std::vector<Edge>& influence,
                                    std::vector<std::vector<WeightEntry>> rows) {
    return {InfluenceLayer(n, influence), CommunicationLayer(std::move(rows))};
}

/// Random signed row over `width` distinct columns with sum |w| = 1.
inline std::vector<WeightEntry> random_signed_row(std::size_t n, std::size_t width, Rng& rng) {
    std::vector<WeightEntry> row;
    std::vector<bool> used(n, false);
    double total = 0.0;
    while (row.size() < width) {
        const auto c = static_cast<NodeId>(uniform_below(rng, n));
        if (used[c]) continue;
        used[c] = true;
        const double w = uniform01(rng) + 1e-3;
        row.push_back({c, uniform01(rng) < 0.3 ? -w : w});
        total += w;
    }
    for (auto& e : row) e.weight /= total;
    return row;
}

/// Payoff in the bilinear coordination form plus the opinion bonus,
/// evaluated term by term for one neighbor profile.
inline double reference_payoff(int x, double lambda, double y, double alpha, const std::vector<int>& neighbor_x) {
    const double d = static_cast<double>(neighbor_x.size());
    double social = 0.0;
    for (int xj : neighbor_x) {
        const double u0 = 1.0 + x, u1 = 1.0 - x;
        const double v0 = 1.0 + xj, v1 = 1.0 - xj;
        social += u0 * (1.0 + alpha) * v0 + u1 * 1.0 * v1;
    }
    return 0.5 * lambda * x * y + (1.0 - lambda) / (4.0 * d) * social;
}

}  // namespace coevo::testing
