#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fracorder/optimize.hpp"

namespace fracorder {

/// Declarative scenario description matching the JSON schema documented in
/// the README. Mode keys are eigen indices (Dirichlet starts at j = 1,
/// Neumann at j = 0); parsing is strict, unknown keys are rejected.
struct BasisConfig {
    BasisKind kind = BasisKind::Neumann1D;
    double domain_length = M_PI;
    int j_max = 8;
    std::vector<double> eigenvalues;  // Explicit kind only
};

struct SignalConfig {
    SignalKind kind = SignalKind::Zero;
    std::map<int, double> coeffs;                  // ConstantInTime
    std::vector<double> grid;                      // Sampled
    std::map<int, std::vector<double>> values;     // Sampled
};

struct PenaltyConfig {
    PenaltyKind kind = PenaltyKind::ExpOverS;
    double L = std::numeric_limits<double>::infinity();
};

struct SnapshotRequest {
    std::optional<double> s;  // defaults to the optimizer's s_star
    double t = 0.0;
};

struct ScenarioConfig {
    BasisConfig basis;
    double T = 1.0;
    std::map<int, double> y0_coeffs;
    SignalConfig f;
    SignalConfig y_q;
    PenaltyConfig penalty;
    OptimizerConfig optimizer;
    std::vector<std::string> outputs = {"summary", "cost_curve", "trace"};
    std::vector<SnapshotRequest> snapshots;
    int x_points = 512;
};

/// Parse and validate a config file. Parse failures carry the line number;
/// validation failures name the offending field.
ScenarioConfig load_config(const std::string& path);

/// Parse from a JSON value (same strict rules as load_config).
ScenarioConfig parse_config(const nlohmann::json& j);

/// Canonical JSON form (presets already expanded); reloading it yields an
/// equivalent config.
nlohmann::json config_to_json(const ScenarioConfig& config);

/// Scenario + penalty + optimizer options materialized from a config.
struct BuiltScenario {
    Scenario scenario;
    PenaltySpec penalty;
    OptimizerConfig optimizer;
};

BuiltScenario build_scenario(const ScenarioConfig& config);

/// Built-in example presets. Example 1: Neumann basis on (0, pi),
/// y0 = 1 + eps e_{j0}, y_Q = 1. Example 2: Dirichlet basis on (0, pi),
/// y0 = eps e_{j0}, y_Q = eps e_{j0}. j_max < 0 selects the default j0 + 8.
Scenario example1_scenario(double eps, int j0, double T = 1.0, int j_max = -1);
Scenario example2_scenario(double eps, int j0, double T = 1.0, int j_max = -1);

/// Config-level preset expansion (what {"y0": {"preset": ...}} produces).
ScenarioConfig example_config(const std::string& preset, double eps, int j0,
                              const PenaltyConfig& penalty, double T = 1.0, int j_max = -1);

}  // namespace fracorder
