#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "coevo/random.hpp"

namespace coevo {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

class GenerationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Undirected, unweighted, simple graph over nodes 0..n-1 stored as sorted
/// adjacency lists. Holds the action-observation (influence) layer, and is
/// also the skeleton from which communication weights are built.
class InfluenceLayer {
public:
    InfluenceLayer() = default;

    /// Builds from an edge list. Throws std::invalid_argument on self-loops,
    /// duplicate edges or out-of-range endpoints.
    InfluenceLayer(std::size_t n, std::span<const Edge> edges);

    std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId i) const noexcept {
        return {neighbors_.data() + offsets_[i], neighbors_.data() + offsets_[i + 1]};
    }
    std::size_t degree(NodeId i) const noexcept { return offsets_[i + 1] - offsets_[i]; }
    bool adjacent(NodeId i, NodeId j) const noexcept;

    /// Edges as (i, j) with i < j, lexicographically sorted.
    std::vector<Edge> edges() const;
    std::vector<std::size_t> degrees() const;
    std::size_t min_degree() const noexcept;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
};

struct WeightEntry {
    NodeId column;
    double weight;
};

/// Row-sparse weight matrix of the opinion-sharing (communication) layer.
/// Every row satisfies sum_j |w_ij| = 1; self-weights are allowed and
/// weights may be negative.
class CommunicationLayer {
public:
    static constexpr double kRowTolerance = 1e-12;

    CommunicationLayer() = default;

    /// rows[i] lists the nonzero entries of row i. Throws
    /// std::invalid_argument if a row's absolute sum differs from 1.
    explicit CommunicationLayer(std::vector<std::vector<WeightEntry>> rows);

    std::size_t size() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::span<const WeightEntry> row(NodeId i) const noexcept {
        return {entries_.data() + offsets_[i], entries_.data() + offsets_[i + 1]};
    }
    double weight(NodeId i, NodeId j) const noexcept;
    std::size_t entry_count() const noexcept { return entries_.size(); }

    /// Undirected skeleton (self-weights dropped).
    InfluenceLayer skeleton() const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<WeightEntry> entries_;
};

struct TwoLayerNetwork {
    InfluenceLayer influence;
    CommunicationLayer communication;

    std::size_t size() const noexcept { return influence.size(); }
};

enum class Family { RegularRandom, ErdosRenyi, WattsStrogatz, BarabasiAlbert };

std::string_view to_string(Family f) noexcept;
/// Accepts short names ("rr", "er", "ws", "ba") and full names, case-insensitive.
Family parse_family(std::string_view name);

struct TopologySpec {
    Family family = Family::RegularRandom;
    std::size_t n = 0;
    std::size_t d = 0;  // target average degree
    double p = 0.0;     // rewiring probability, Watts-Strogatz only

    void validate() const;
};

inline constexpr std::size_t kMaxRrRestarts = 1000;

/// Configuration model with restart on stall. The number of restarts taken is
/// written to *restarts when given; throws GenerationError after
/// kMaxRrRestarts.
InfluenceLayer generate_rr(const TopologySpec& spec, Rng& rng, std::size_t* restarts = nullptr);
/// Fixed edge count dn/2 with uniform pair sampling and duplicate rejection.
InfluenceLayer generate_er(const TopologySpec& spec, Rng& rng);
/// Ring lattice plus per-edge endpoint rewiring.
InfluenceLayer generate_ws(const TopologySpec& spec, Rng& rng);
/// Preferential attachment grown from a complete graph on d+1 nodes.
InfluenceLayer generate_ba(const TopologySpec& spec, Rng& rng);

/// Dispatches on spec.family.
InfluenceLayer generate(const TopologySpec& spec, Rng& rng);
InfluenceLayer generate(const TopologySpec& spec, std::uint64_t seed);

/// w_ij = 1/deg(i) on each neighbor. Throws std::invalid_argument on an
/// isolated node.
CommunicationLayer build_random_walk_weights(const InfluenceLayer& graph);

/// Replaces row s by the unit self-weight {s: 1}.
CommunicationLayer make_stubborn(const CommunicationLayer& comm, NodeId s);

bool is_connected(const InfluenceLayer& graph);
bool is_connected(const CommunicationLayer& comm);

}  // namespace coevo
