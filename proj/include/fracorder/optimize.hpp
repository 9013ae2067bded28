#pragma once

#include <vector>

#include "fracorder/objective.hpp"

namespace fracorder {

struct OptimizerConfig {
    int grid_points = 64;       // log-spaced global scan, >= 16 points
    double newton_tol = 1e-10;  // stop when |dJ| <= newton_tol * (1 + |J|)
    int max_newton_iters = 50;
    double bracket_pad = 0.05;  // cost-curve refinement half-width, as a bracket fraction

    void validate() const;
    double s_lo(const PenaltySpec& spec) const;
    double s_hi(const PenaltySpec& spec) const;
};

struct IterationRecord {
    double s = 0.0;
    double J = 0.0;
    double dJ = 0.0;
    double d2J = 0.0;
    bool accepted = false;  // J did not increase relative to the last accepted iterate
};

/// Global scan: reduced cost on the log grid, the argmin (ties toward smaller
/// s) and its enclosing bracket, plus every interior grid-local minimum as a
/// multimodality diagnostic.
struct GridScan {
    std::vector<ReducedCostReport> points;
    int best_index = -1;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    std::vector<double> local_minima;
};

GridScan grid_scan(const Scenario& scenario, const PenaltySpec& spec,
                   const OptimizerConfig& config = {});

struct OptimizeReport {
    double s_star = 0.0;
    double J_star = 0.0;
    double dJ_star = 0.0;
    double d2J_star = 0.0;
    std::vector<IterationRecord> iterations;
    Optimality verdict = Optimality::NotStationary;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    bool fallback_used = false;  // golden-section on J (no sign change, no curvature)
    int refine_steps = 0;
    std::vector<double> grid_local_minima;
};

/// Safeguarded Newton on dJ inside the bracket: steps leaving the
/// pad-interior of the current sign-change bracket, steps with d2J <= 0 and
/// uphill steps are replaced by bisection; the bracket is updated from the
/// sign of dJ each iteration. Without a sign change the method runs clamped
/// Newton when curvature is positive at `start` and otherwise falls back to
/// golden-section minimization of J (flagged in the report).
OptimizeReport newton_refine(const Scenario& scenario, const PenaltySpec& spec,
                             double bracket_lo, double bracket_hi, double start,
                             const OptimizerConfig& config = {});

/// grid_scan followed by newton_refine; deterministic for a fixed config.
OptimizeReport solve(const Scenario& scenario, const PenaltySpec& spec,
                     const OptimizerConfig& config = {});

}  // namespace fracorder
