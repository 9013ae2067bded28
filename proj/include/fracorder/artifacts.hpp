#pragma once

#include <string>
#include <vector>

#include "fracorder/config.hpp"

namespace fracorder {

struct CostCurveRow {
    double s, J, dJ, d2J, tracking, penalty;
};

struct Snapshot {
    double s = 0.0;
    double t = 0.0;
    std::vector<double> x;
    std::vector<double> y;
};

/// Everything a run produces, ready for emission: the cost curve on the scan
/// grid plus a refinement near s_star, the optimizer trace, requested solution
/// snapshots and the summary (report + config echo + tool version).
struct RunArtifacts {
    std::vector<CostCurveRow> cost_curve;
    std::vector<IterationRecord> trace;
    std::vector<Snapshot> snapshots;
    OptimizeReport report;
    nlohmann::json config_echo;
    std::string version;
};

RunArtifacts run(const ScenarioConfig& config);

/// Cost curve only (the `scan` subcommand): log-spaced samples of the reduced
/// cost over [s_min, s_max].
std::vector<CostCurveRow> scan_curve(const ScenarioConfig& config, double s_min, double s_max,
                                     int points);

/// Write artifacts under out_dir. `formats` holds "csv" and/or "json";
/// returns the paths written. Numbers are rendered with 17 significant
/// digits, '.' decimal separator and ',' column separator.
std::vector<std::string> emit(const RunArtifacts& artifacts, const std::string& out_dir,
                              const std::vector<std::string>& formats = {"csv", "json"});

std::vector<std::string> emit_curve(const std::vector<CostCurveRow>& curve,
                                    const std::string& out_dir);

/// Process exit code for a finished run: 0 second-order sufficient,
/// 2 first-order stationary only, 3 not stationary or fallback used.
int exit_code_for(const OptimizeReport& report);

}  // namespace fracorder
