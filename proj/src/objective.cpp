#include "fracorder/objective.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fracorder {

PenaltySpec PenaltySpec::reciprocal(double L) {
    if (!(L > 0.0) || !std::isfinite(L))
        throw std::invalid_argument("PenaltySpec: reciprocal needs finite L > 0");
    PenaltySpec spec;
    spec.kind = PenaltyKind::Reciprocal;
    spec.L = L;
    return spec;
}

PenaltySpec PenaltySpec::exp_over_s() {
    PenaltySpec spec;
    spec.kind = PenaltyKind::ExpOverS;
    spec.L = std::numeric_limits<double>::infinity();
    return spec;
}

PenaltySpec PenaltySpec::custom(double L, std::function<double(double)> value,
                                std::function<double(double)> d1,
                                std::function<double(double)> d2) {
    if (!(L > 0.0)) throw std::invalid_argument("PenaltySpec: custom needs L > 0");
    if (!value || !d1 || !d2)
        throw std::invalid_argument("PenaltySpec: custom needs value, d1 and d2 evaluators");
    PenaltySpec spec;
    spec.kind = PenaltyKind::Custom;
    spec.L = L;
    spec.custom_value = std::move(value);
    spec.custom_d1 = std::move(d1);
    spec.custom_d2 = std::move(d2);
    return spec;
}

double PenaltySpec::s_max() const { return std::isfinite(L) ? L : 50.0; }

void PenaltySpec::validate() const {
    const double hi = s_max();
    if (penalty_eval(*this, 1e-6, 0) <= 1e4)
        throw std::invalid_argument("PenaltySpec: no blow-up as s -> 0");
    if (penalty_eval(*this, hi - 1e-6, 0) <= 1e4)
        throw std::invalid_argument("PenaltySpec: no blow-up at the upper end");
    for (int i = 1; i <= 32; ++i) {
        const double s = hi * i / 33.0;
        if (s <= 0.0 || s >= hi) continue;
        if (penalty_eval(*this, s, 0) < 0.0)
            throw std::invalid_argument("PenaltySpec: negative penalty value");
    }
}

double penalty_eval(const PenaltySpec& spec, double s, int order) {
    if (order < 0 || order > 2) throw std::invalid_argument("penalty_eval: order must be 0..2");
    if (!(s > 0.0) || s >= spec.L)
        throw std::domain_error("penalty_eval: s outside (0, L)");
    switch (spec.kind) {
        case PenaltyKind::Reciprocal: {
            const double g = s * (spec.L - s);
            if (order == 0) return 1.0 / g;
            const double gp = spec.L - 2.0 * s;
            if (order == 1) return -gp / (g * g);
            return 2.0 * (g + gp * gp) / (g * g * g);
        }
        case PenaltyKind::ExpOverS: {
            const double e = std::exp(s);
            if (order == 0) return e / s;
            if (order == 1) return e * (s - 1.0) / (s * s);
            return e * (s * s - 2.0 * s + 2.0) / (s * s * s);
        }
        case PenaltyKind::Custom:
            if (order == 0) return spec.custom_value(s);
            if (order == 1) return spec.custom_d1(s);
            return spec.custom_d2(s);
    }
    throw std::logic_error("penalty_eval: unreachable");
}

ReducedCostReport reduced_cost(const Scenario& scenario, const PenaltySpec& spec, double s) {
    const TrackingMisfit misfit = misfit_and_derivatives(scenario.state, scenario.y_q, s);
    ReducedCostReport report;
    report.s = s;
    report.tracking = misfit.value;
    report.penalty = penalty_eval(spec, s, 0);
    report.J = report.tracking + report.penalty;
    report.dJ = misfit.d1 + penalty_eval(spec, s, 1);
    report.d2J = misfit.d2 + penalty_eval(spec, s, 2);
    return report;
}

std::string to_string(Optimality v) {
    switch (v) {
        case Optimality::NotStationary: return "NotStationary";
        case Optimality::FirstOrderStationary: return "FirstOrderStationary";
        case Optimality::SecondOrderSufficient: return "SecondOrderSufficient";
    }
    return "unknown";
}

Optimality check_optimality(const ReducedCostReport& report, double tol_stat) {
    if (!std::isfinite(report.J) || !std::isfinite(report.dJ) || !std::isfinite(report.d2J))
        throw std::invalid_argument("check_optimality: non-finite report");
    if (tol_stat < 0.0) tol_stat = 1e-9 * (1.0 + std::abs(report.J));
    if (std::abs(report.dJ) > tol_stat) return Optimality::NotStationary;
    return report.d2J > 0.0 ? Optimality::SecondOrderSufficient
                            : Optimality::FirstOrderStationary;
}

}  // namespace fracorder
