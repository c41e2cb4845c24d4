#pragma once

#include <iosfwd>
#include <string>

#include "drcbf/harness.hpp"

namespace drcbf {

/// Shortest round-trip decimal with 9 significant digits.
std::string fmt9(double v);

std::string to_string(FilterMode m);

extern const char* kTrajectoryCsvHeader;

void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_reach_csv(std::ostream& out, const Trajectory& traj);
void write_min_h_csv(std::ostream& out, const SummaryStats& stats);
void write_margins_csv(std::ostream& out,
                       const std::vector<std::pair<double, double>>& rows);

void write_summary_json(std::ostream& out, const Scenario& sc,
                        const Trajectory& traj);
void write_stats_json(std::ostream& out, const Scenario& sc, int runs,
                      const SummaryStats& stats);

/// Lipschitz-constants sidecar: flat key = value text, readable back through
/// the config parser so runs are reproducible without re-sampling.
void save_constants(std::ostream& out, const LipschitzEstimates& est,
                    int samples, double safety_factor, std::uint64_t seed);
LipschitzEstimates load_constants(std::istream& in);
LipschitzEstimates load_constants_file(const std::string& path);

}  // namespace drcbf
