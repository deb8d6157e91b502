#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "coevo/analysis.hpp"
#include "coevo/dynamics.hpp"
#include "coevo/harness.hpp"
#include "coevo/netgen.hpp"

namespace coevo {

/// Nine significant digits; throws std::domain_error on NaN or infinity so
/// that no non-finite value reaches an output file.
std::string format_number(double v);

// Edge-list text format: a header line "n=<int>", then one "i j" line per
// edge (0-based, i < j). Communication layers add a third column w_ij and
// list every directed row entry, including self-weights.
void write_edge_list(std::ostream& os, const InfluenceLayer& layer);
InfluenceLayer read_edge_list(std::istream& is);
void write_weights(std::ostream& os, const CommunicationLayer& layer);
CommunicationLayer read_weights(std::istream& is);

void write_trajectory_csv(std::ostream& os, const std::vector<Snapshot>& series);
void write_final_state_csv(std::ostream& os, const PopulationState& state);
void write_sweep_csv(std::ostream& os, const SweepResult& sweep);
void write_variance_csv(std::ostream& os, const ThresholdEstimate& est);

nlohmann::ordered_json to_json(const TheoryReport& report);
nlohmann::ordered_json to_json(const ThresholdEstimate& est);
nlohmann::ordered_json sweep_summary_json(const SweepResult& sweep);

}  // namespace coevo
