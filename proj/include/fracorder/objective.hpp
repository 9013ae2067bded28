#pragma once

#include <functional>
#include <limits>

#include "fracorder/state.hpp"

namespace fracorder {

enum class PenaltyKind { Reciprocal, ExpOverS, Custom };

/// Nonnegative penalty on the open interval (0, L) blowing up at both ends.
/// Built-ins: Reciprocal phi = 1/(s(L-s)) with finite L, ExpOverS
/// phi = e^s/s with L = +inf (evaluations capped at s = 50). Custom penalties
/// supply analytic value/first/second derivatives.
struct PenaltySpec {
    PenaltyKind kind = PenaltyKind::ExpOverS;
    double L = std::numeric_limits<double>::infinity();
    std::function<double(double)> custom_value;
    std::function<double(double)> custom_d1;
    std::function<double(double)> custom_d2;

    static PenaltySpec reciprocal(double L);
    static PenaltySpec exp_over_s();
    static PenaltySpec custom(double L, std::function<double(double)> value,
                              std::function<double(double)> d1,
                              std::function<double(double)> d2);

    /// Upper end of the working domain: L when finite, otherwise 50.
    double s_max() const;

    /// Numeric check of the blow-up-at-both-ends requirement (values at
    /// s = 1e-6 and s = s_max - 1e-6 must exceed 1e4) and nonnegativity on a
    /// coarse interior grid. Throws std::invalid_argument on failure.
    void validate() const;
};

/// phi, phi' or phi'' at s (order 0..2); s must lie strictly inside (0, L).
double penalty_eval(const PenaltySpec& spec, double s, int order);

/// Tracking problem: state data plus the target y_Q expressed in the same basis.
struct Scenario {
    StateEval state;
    TimeSignal y_q;
};

/// Reduced cost J(s) = J0(s) + phi(s) with both derivative orders.
struct ReducedCostReport {
    double s = 0.0;
    double J = 0.0;
    double dJ = 0.0;
    double d2J = 0.0;
    double tracking = 0.0;
    double penalty = 0.0;
};

ReducedCostReport reduced_cost(const Scenario& scenario, const PenaltySpec& spec, double s);

enum class Optimality { NotStationary, FirstOrderStationary, SecondOrderSufficient };

std::string to_string(Optimality v);

/// FirstOrderStationary iff |dJ| <= tol_stat (default 1e-9 (1+|J|));
/// SecondOrderSufficient additionally requires d2J > 0. The verdict speaks
/// for the truncated problem the report was computed on.
Optimality check_optimality(const ReducedCostReport& report, double tol_stat = -1.0);

}  // namespace fracorder
