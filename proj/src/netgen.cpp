#include "coevo/netgen.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <queue>
#include <unordered_set>

namespace coevo {

namespace {

std::uint64_t edge_key(NodeId a, NodeId b) noexcept {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Edge set with O(1) membership, kept in insertion order.
class EdgeSet {
public:
    explicit EdgeSet(std::size_t reserve) { keys_.reserve(reserve * 2); edges_.reserve(reserve); }

    bool contains(NodeId a, NodeId b) const { return keys_.count(edge_key(a, b)) != 0; }
    bool insert(NodeId a, NodeId b) {
        if (!keys_.insert(edge_key(a, b)).second) return false;
        edges_.emplace_back(a, b);
        return true;
    }
    void replace(std::size_t idx, NodeId a, NodeId b) {
        keys_.erase(edge_key(edges_[idx].first, edges_[idx].second));
        keys_.insert(edge_key(a, b));
        edges_[idx] = {a, b};
    }
    std::vector<Edge>& edges() { return edges_; }

private:
    std::unordered_set<std::uint64_t> keys_;
    std::vector<Edge> edges_;
};

}  // namespace

InfluenceLayer::InfluenceLayer(std::size_t n, std::span<const Edge> edges) {
    std::vector<std::size_t> deg(n, 0);
    for (auto [a, b] : edges) {
        if (a >= n || b >= n) throw std::invalid_argument("edge endpoint out of range");
        if (a == b) throw std::invalid_argument("self-loop in influence layer");
        ++deg[a];
        ++deg[b];
    }
    offsets_.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] = offsets_[i] + deg[i];
    neighbors_.resize(offsets_[n]);
    std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
    for (auto [a, b] : edges) {
        neighbors_[fill[a]++] = b;
        neighbors_[fill[b]++] = a;
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto first = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i]);
        auto last = neighbors_.begin() + static_cast<std::ptrdiff_t>(offsets_[i + 1]);
        std::sort(first, last);
        if (std::adjacent_find(first, last) != last)
            throw std::invalid_argument("duplicate edge in influence layer");
    }
}

bool InfluenceLayer::adjacent(NodeId i, NodeId j) const noexcept {
    auto nb = neighbors(i);
    return std::binary_search(nb.begin(), nb.end(), j);
}

std::vector<Edge> InfluenceLayer::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId i = 0; i < size(); ++i)
        for (NodeId j : neighbors(i))
            if (i < j) out.emplace_back(i, j);
    return out;
}

std::vector<std::size_t> InfluenceLayer::degrees() const {
    std::vector<std::size_t> out(size());
    for (NodeId i = 0; i < size(); ++i) out[i] = degree(i);
    return out;
}

std::size_t InfluenceLayer::min_degree() const noexcept {
    std::size_t m = size() == 0 ? 0 : degree(0);
    for (NodeId i = 1; i < size(); ++i) m = std::min(m, degree(i));
    return m;
}

CommunicationLayer::CommunicationLayer(std::vector<std::vector<WeightEntry>> rows) {
    offsets_.assign(rows.size() + 1, 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        auto& r = rows[i];
        std::sort(r.begin(), r.end(), [](const auto& a, const auto& b) { return a.column < b.column; });
        double abs_sum = 0.0;
        for (std::size_t k = 0; k < r.size(); ++k) {
            if (r[k].column >= rows.size())
                throw std::invalid_argument("weight column out of range in row " + std::to_string(i));
            if (k > 0 && r[k].column == r[k - 1].column)
                throw std::invalid_argument("duplicate weight entry in row " + std::to_string(i));
            abs_sum += std::abs(r[k].weight);
        }
        if (std::abs(abs_sum - 1.0) > kRowTolerance)
            throw std::invalid_argument("row " + std::to_string(i) + " absolute weights do not sum to 1");
    }
    // Explicit zeros are dropped: the edge set is the nonzero pattern.
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (const auto& e : rows[i])
            if (e.weight != 0.0) entries_.push_back(e);
        offsets_[i + 1] = entries_.size();
    }
}

double CommunicationLayer::weight(NodeId i, NodeId j) const noexcept {
    for (const auto& e : row(i))
        if (e.column == j) return e.weight;
    return 0.0;
}

InfluenceLayer CommunicationLayer::skeleton() const {
    std::unordered_set<std::uint64_t> seen;
    std::vector<Edge> edges;
    for (NodeId i = 0; i < size(); ++i)
        for (const auto& e : row(i))
            if (e.column != i && seen.insert(edge_key(i, e.column)).second)
                edges.emplace_back(std::min(i, e.column), std::max(i, e.column));
    return InfluenceLayer(size(), edges);
}

std::string_view to_string(Family f) noexcept {
    switch (f) {
        case Family::RegularRandom: return "rr";
        case Family::ErdosRenyi: return "er";
        case Family::WattsStrogatz: return "ws";
        case Family::BarabasiAlbert: return "ba";
    }
    return "?";
}

Family parse_family(std::string_view name) {
    std::string s(name);
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return c == '-' || c == ' ' ? '_' : static_cast<char>(std::tolower(c));
    });
    if (s == "rr" || s == "regular_random" || s == "regularrandom") return Family::RegularRandom;
    if (s == "er" || s == "erdos_renyi" || s == "erdosrenyi") return Family::ErdosRenyi;
    if (s == "ws" || s == "watts_strogatz" || s == "wattsstrogatz") return Family::WattsStrogatz;
    if (s == "ba" || s == "barabasi_albert" || s == "barabasialbert") return Family::BarabasiAlbert;
    throw std::invalid_argument("unknown network family '" + std::string(name) + "'");
}

void TopologySpec::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
    if (n < 2) fail("network needs at least 2 nodes");
    if (d < 1 || d >= n) fail("degree d must satisfy 1 <= d < n");
    if ((n * d) % 2 != 0) fail("n*d must be even");
    if (family == Family::WattsStrogatz || family == Family::BarabasiAlbert) {
        if (d % 2 != 0) fail("degree d must be even for ws and ba");
    }
    if (!(p >= 0.0 && p <= 1.0)) fail("rewiring probability p must lie in [0, 1]");
}

namespace {

void require_family(const TopologySpec& spec, Family f) {
    if (spec.family != f)
        throw std::invalid_argument("topology family mismatch: expected " + std::string(to_string(f)));
    spec.validate();
}

// Returns true if the remaining stubs contain at least one pairable couple.
bool has_valid_pair(const std::vector<NodeId>& stubs, const EdgeSet& edges) {
    for (std::size_t a = 0; a < stubs.size(); ++a)
        for (std::size_t b = a + 1; b < stubs.size(); ++b)
            if (stubs[a] != stubs[b] && !edges.contains(stubs[a], stubs[b])) return true;
    return false;
}

}  // namespace

InfluenceLayer generate_rr(const TopologySpec& spec, Rng& rng, std::size_t* restarts) {
    require_family(spec, Family::RegularRandom);
    if (2 * spec.d > spec.n - 1) {
        // Dense case: complement of a uniform (n-1-d)-regular graph.
        const std::size_t dc = spec.n - 1 - spec.d;
        std::vector<Edge> sparse;
        if (dc > 0) sparse = generate_rr({Family::RegularRandom, spec.n, dc, 0.0}, rng, restarts).edges();
        else if (restarts) *restarts = 0;
        std::vector<Edge> dense;
        dense.reserve(spec.n * spec.d / 2);
        std::size_t k = 0;
        for (NodeId i = 0; i < spec.n; ++i)
            for (NodeId j = i + 1; j < spec.n; ++j) {
                if (k < sparse.size() && sparse[k] == Edge{i, j}) {
                    ++k;
                    continue;
                }
                dense.emplace_back(i, j);
            }
        return InfluenceLayer(spec.n, dense);
    }
    const std::size_t m = spec.n * spec.d / 2;
    for (std::size_t attempt = 0; attempt <= kMaxRrRestarts; ++attempt) {
        std::vector<NodeId> stubs;
        stubs.reserve(spec.n * spec.d);
        for (NodeId i = 0; i < spec.n; ++i)
            for (std::size_t k = 0; k < spec.d; ++k) stubs.push_back(i);
        EdgeSet edges(m);
        std::size_t failures = 0;
        bool stalled = false;
        while (!stubs.empty()) {
            const auto a = uniform_below(rng, stubs.size());
            auto b = uniform_below(rng, stubs.size() - 1);
            if (b >= a) ++b;
            const NodeId u = stubs[a], v = stubs[b];
            if (u == v || edges.contains(u, v)) {
                if (++failures > 64) {
                    if (!has_valid_pair(stubs, edges)) {
                        stalled = true;
                        break;
                    }
                    failures = 0;
                }
                continue;
            }
            failures = 0;
            edges.insert(u, v);
            // Remove the higher index first so the lower one stays valid.
            for (auto idx : {std::max(a, b), std::min(a, b)}) {
                stubs[idx] = stubs.back();
                stubs.pop_back();
            }
        }
        if (!stalled) {
            if (restarts) *restarts = attempt;
            return InfluenceLayer(spec.n, edges.edges());
        }
    }
    throw GenerationError("regular random graph generation stalled after " +
                          std::to_string(kMaxRrRestarts) + " restarts");
}

InfluenceLayer generate_er(const TopologySpec& spec, Rng& rng) {
    require_family(spec, Family::ErdosRenyi);
    const std::size_t m = spec.n * spec.d / 2;
    EdgeSet edges(m);
    while (edges.edges().size() < m) {
        const auto u = static_cast<NodeId>(uniform_below(rng, spec.n));
        const auto v = static_cast<NodeId>(uniform_below(rng, spec.n));
        if (u == v) continue;
        edges.insert(u, v);
    }
    return InfluenceLayer(spec.n, edges.edges());
}

InfluenceLayer generate_ws(const TopologySpec& spec, Rng& rng) {
    require_family(spec, Family::WattsStrogatz);
    const std::size_t n = spec.n;
    const std::size_t half = spec.d / 2;
    EdgeSet edges(n * half);
    for (std::size_t k = 1; k <= half; ++k)
        for (std::size_t i = 0; i < n; ++i)
            edges.insert(static_cast<NodeId>(i), static_cast<NodeId>((i + k) % n));

    auto& list = edges.edges();
    for (std::size_t e = 0; e < list.size(); ++e) {
        if (!(uniform01(rng) < spec.p)) continue;
        const auto [a, b] = list[e];
        const bool replace_first = uniform01(rng) < 0.5;
        const NodeId keep = replace_first ? b : a;
        const NodeId drop = replace_first ? a : b;
        for (std::size_t attempt = 0; attempt < n; ++attempt) {
            // Uniform over the n-2 nodes other than the edge's endpoints.
            auto c = static_cast<NodeId>(uniform_below(rng, n - 2));
            const NodeId lo = std::min(keep, drop), hi = std::max(keep, drop);
            if (c >= lo) ++c;
            if (c >= hi) ++c;
            if (edges.contains(keep, c)) continue;
            edges.replace(e, keep, c);
            break;
        }
    }
    return InfluenceLayer(n, list);
}

InfluenceLayer generate_ba(const TopologySpec& spec, Rng& rng) {
    require_family(spec, Family::BarabasiAlbert);
    const std::size_t n = spec.n;
    const std::size_t core = spec.d + 1;
    const std::size_t per_node = spec.d / 2;
    std::vector<Edge> edges;
    edges.reserve(core * spec.d / 2 + (n - core) * per_node);
    // Each node appears once per incident edge end, so a uniform pick is
    // degree-proportional.
    std::vector<NodeId> ends;
    ends.reserve(2 * edges.capacity());
    for (NodeId i = 0; i < core; ++i)
        for (NodeId j = i + 1; j < core; ++j) {
            edges.emplace_back(i, j);
            ends.push_back(i);
            ends.push_back(j);
        }
    std::vector<NodeId> chosen;
    chosen.reserve(per_node);
    for (auto v = static_cast<NodeId>(core); v < n; ++v) {
        chosen.clear();
        while (chosen.size() < per_node) {
            const NodeId t = ends[uniform_below(rng, ends.size())];
            if (std::find(chosen.begin(), chosen.end(), t) == chosen.end()) chosen.push_back(t);
        }
        for (NodeId t : chosen) {
            edges.emplace_back(t, v);
            ends.push_back(t);
            ends.push_back(v);
        }
    }
    return InfluenceLayer(n, edges);
}

InfluenceLayer generate(const TopologySpec& spec, Rng& rng) {
    switch (spec.family) {
        case Family::RegularRandom: return generate_rr(spec, rng);
        case Family::ErdosRenyi: return generate_er(spec, rng);
        case Family::WattsStrogatz: return generate_ws(spec, rng);
        case Family::BarabasiAlbert: return generate_ba(spec, rng);
    }
    throw std::invalid_argument("unknown family");
}

InfluenceLayer generate(const TopologySpec& spec, std::uint64_t seed) {
    Rng rng(seed);
    return generate(spec, rng);
}

CommunicationLayer build_random_walk_weights(const InfluenceLayer& graph) {
    std::vector<std::vector<WeightEntry>> rows(graph.size());
    for (NodeId i = 0; i < graph.size(); ++i) {
        const auto nb = graph.neighbors(i);
        if (nb.empty())
            throw std::invalid_argument("node " + std::to_string(i) + " is isolated; random-walk weights undefined");
        const double w = 1.0 / static_cast<double>(nb.size());
        rows[i].reserve(nb.size());
        for (NodeId j : nb) rows[i].push_back({j, w});
    }
    return CommunicationLayer(std::move(rows));
}

CommunicationLayer make_stubborn(const CommunicationLayer& comm, NodeId s) {
    if (s >= comm.size()) throw std::invalid_argument("stubborn node out of range");
    std::vector<std::vector<WeightEntry>> rows(comm.size());
    for (NodeId i = 0; i < comm.size(); ++i) {
        if (i == s) {
            rows[i] = {{s, 1.0}};
        } else {
            auto r = comm.row(i);
            rows[i].assign(r.begin(), r.end());
        }
    }
    return CommunicationLayer(std::move(rows));
}

bool is_connected(const InfluenceLayer& graph) {
    const std::size_t n = graph.size();
    if (n <= 1) return true;
    std::vector<char> seen(n, 0);
    std::queue<NodeId> frontier;
    frontier.push(0);
    seen[0] = 1;
    std::size_t reached = 1;
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        for (NodeId v : graph.neighbors(u))
            if (!seen[v]) {
                seen[v] = 1;
                ++reached;
                frontier.push(v);
            }
    }
    return reached == n;
}

bool is_connected(const CommunicationLayer& comm) { return is_connected(comm.skeleton()); }

}  // namespace coevo
