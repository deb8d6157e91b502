#include "coevo/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace coevo {

namespace {

std::string format_with(double v, const char* fmt) {
    if (!std::isfinite(v)) throw std::domain_error("refusing to write a non-finite number");
    char buf[64];
    std::snprintf(buf, sizeof buf, fmt, v == 0.0 ? 0.0 : v);
    return buf;
}

std::size_t read_header(std::istream& is) {
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("n=", 0) != 0) throw std::invalid_argument("edge list must start with 'n=<int>'");
        try {
            std::size_t used = 0;
            const auto n = std::stoull(line.substr(2), &used);
            if (used != line.size() - 2) throw std::invalid_argument("trailing characters");
            return n;
        } catch (const std::exception&) {
            throw std::invalid_argument("malformed header '" + line + "'");
        }
    }
    throw std::invalid_argument("edge list is empty");
}

}  // namespace

std::string format_number(double v) { return format_with(v, "%.9g"); }

void write_edge_list(std::ostream& os, const InfluenceLayer& layer) {
    os << "n=" << layer.size() << '\n';
    for (auto [i, j] : layer.edges()) os << i << ' ' << j << '\n';
}

InfluenceLayer read_edge_list(std::istream& is) {
    const auto n = read_header(is);
    std::vector<Edge> edges;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long a = -1, b = -1;
        if (!(ls >> a >> b) || a < 0 || b < 0) throw std::invalid_argument("malformed edge line '" + line + "'");
        if (a >= b) throw std::invalid_argument("edge lines must satisfy i < j: '" + line + "'");
        edges.emplace_back(static_cast<NodeId>(a), static_cast<NodeId>(b));
    }
    return InfluenceLayer(n, edges);
}

void write_weights(std::ostream& os, const CommunicationLayer& layer) {
    os << "n=" << layer.size() << '\n';
    for (NodeId i = 0; i < layer.size(); ++i)
        for (const auto& e : layer.row(i)) os << i << ' ' << e.column << ' ' << format_with(e.weight, "%.17g") << '\n';
}

CommunicationLayer read_weights(std::istream& is) {
    const auto n = read_header(is);
    std::vector<std::vector<WeightEntry>> rows(n);
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        long long a = -1, b = -1;
        double w = 0.0;
        if (!(ls >> a >> b >> w) || a < 0 || b < 0 || static_cast<std::size_t>(a) >= n)
            throw std::invalid_argument("malformed weight line '" + line + "'");
        rows[static_cast<std::size_t>(a)].push_back({static_cast<NodeId>(b), w});
    }
    return CommunicationLayer(std::move(rows));
}

void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& series) {
    os << "t,avg_x,avg_y\n";
    for (const auto& s : series) os << s.t << ',' << format_number(s.avg_x) << ',' << format_number(s.avg_y) << '\n';
}

void write_final_state_csv(std::ostream& os, const PopulationState& state) {
    os << "node,x,y\n";
    for (std::size_t i = 0; i < state.size(); ++i)
        os << i << ',' << static_cast<int>(state.x[i]) << ',' << format_number(state.y[i]) << '\n';
}

void write_sweep_csv(std::ostream& os, const SweepResult& sweep) {
    os << "lambda,mu,replicate,seed,avg_x,avg_y,regime\n";
    for (const auto& cell : sweep.cells)
        for (std::size_t r = 0; r < cell.replicates.size(); ++r) {
            const auto& o = cell.replicates[r];
            os << format_number(cell.lambda) << ',' << format_number(cell.mu) << ',' << r << ',' << o.seed << ','
               << format_number(o.avg_x) << ',' << format_number(o.avg_y) << ',' << to_string(o.regime) << '\n';
        }
}

void write_variance_csv(std::ostream& os, const ThresholdEstimate& est) {
    os << "lambda,variance,mean_fraction\n";
    for (std::size_t g = 0; g < est.grid.size(); ++g)
        os << format_number(est.grid[g]) << ',' << format_number(est.variance[g]) << ','
           << format_number(est.mean_fraction[g]) << '\n';
}

nlohmann::ordered_json to_json(const TheoryReport& report) {
    nlohmann::ordered_json j;
    j["d_star"] = report.d_star;
    if (report.lambda_star)
        j["lambda_star"] = *report.lambda_star;
    else
        j["lambda_star"] = "not-applicable";
    j["condition_alpha_ok"] = report.condition_alpha_ok;
    j["paradigm_shift_excluded"] = report.paradigm_shift_excluded;
    return j;
}

nlohmann::ordered_json to_json(const ThresholdEstimate& est) {
    nlohmann::ordered_json j;
    j["lambda_hat"] = est.lambda_hat;
    j["grid"] = est.grid;
    j["variance"] = est.variance;
    j["mean_fraction"] = est.mean_fraction;
    j["replicates"] = est.adoption_fraction.empty() ? 0 : est.adoption_fraction.front().size();
    return j;
}

nlohmann::ordered_json sweep_summary_json(const SweepResult& sweep) {
    nlohmann::ordered_json j;
    j["lambda_grid"] = sweep.lambda_grid;
    j["mu_grid"] = sweep.mu_grid;
    auto cells = nlohmann::ordered_json::array();
    for (const auto& c : sweep.cells) {
        nlohmann::ordered_json cj;
        cj["lambda"] = c.lambda;
        cj["mu"] = c.mu;
        cj["replicates"] = c.replicates.size();
        cj["mean_x"] = c.mean_x;
        cj["mean_y"] = c.mean_y;
        cj["mean_fraction"] = c.mean_fraction;
        cj["variance_fraction"] = c.variance_fraction;
        cj["modal_regime"] = std::string(to_string(c.modal_regime));
        cells.push_back(std::move(cj));
    }
    j["cells"] = std::move(cells);
    // Modal-regime map, one row per lambda value.
    auto grid = nlohmann::ordered_json::array();
    for (std::size_t l = 0; l < sweep.lambda_grid.size(); ++l) {
        auto row = nlohmann::ordered_json::array();
        for (std::size_t m = 0; m < sweep.mu_grid.size(); ++m) row.push_back(std::string(to_string(sweep.at(l, m).modal_regime)));
        grid.push_back(std::move(row));
    }
    j["modal_regime_grid"] = std::move(grid);
    return j;
}

}  // namespace coevo
