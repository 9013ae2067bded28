#include "fracorder/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fracorder {

void OptimizerConfig::validate() const {
    if (grid_points < 16) throw std::invalid_argument("OptimizerConfig: grid_points must be >= 16");
    if (!(newton_tol > 0.0)) throw std::invalid_argument("OptimizerConfig: newton_tol must be > 0");
    if (max_newton_iters < 1)
        throw std::invalid_argument("OptimizerConfig: max_newton_iters must be >= 1");
    if (!(bracket_pad > 0.0) || !(bracket_pad < 0.5))
        throw std::invalid_argument("OptimizerConfig: bracket_pad must lie in (0, 0.5)");
}

double OptimizerConfig::s_lo(const PenaltySpec&) const { return 1e-3; }

double OptimizerConfig::s_hi(const PenaltySpec& spec) const {
    return std::isfinite(spec.L) ? spec.L - 1e-3 : 50.0;
}

GridScan grid_scan(const Scenario& scenario, const PenaltySpec& spec,
                   const OptimizerConfig& config) {
    config.validate();
    const double lo = config.s_lo(spec);
    const double hi = config.s_hi(spec);
    if (!(lo < hi)) throw std::invalid_argument("grid_scan: empty scan interval");
    const int n = config.grid_points;

    GridScan scan;
    scan.points.reserve(static_cast<std::size_t>(n));
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) {
        const double s = std::exp(llo + (lhi - llo) * i / (n - 1));
        scan.points.push_back(reduced_cost(scenario, spec, s));
    }

    double best = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        const double J = scan.points[static_cast<std::size_t>(i)].J;
        if (std::isfinite(J) && J < best) {  // strict: ties keep the smaller s
            best = J;
            scan.best_index = i;
        }
    }
    if (scan.best_index < 0) throw std::runtime_error("grid_scan: no finite cost on the grid");

    const int i = scan.best_index;
    scan.bracket_lo = scan.points[static_cast<std::size_t>(std::max(0, i - 1))].s;
    scan.bracket_hi = scan.points[static_cast<std::size_t>(std::min(n - 1, i + 1))].s;
    for (int k = 1; k + 1 < n; ++k) {
        const double Jm = scan.points[static_cast<std::size_t>(k - 1)].J;
        const double J = scan.points[static_cast<std::size_t>(k)].J;
        const double Jp = scan.points[static_cast<std::size_t>(k + 1)].J;
        if (std::isfinite(J) && J <= Jm && J <= Jp)
            scan.local_minima.push_back(scan.points[static_cast<std::size_t>(k)].s);
    }
    return scan;
}

namespace {

bool converged(const ReducedCostReport& r, const OptimizerConfig& config) {
    return std::abs(r.dJ) <= config.newton_tol * (1.0 + std::abs(r.J));
}

OptimizeReport golden_fallback(const Scenario& scenario, const PenaltySpec& spec, double lo,
                               double hi, std::vector<IterationRecord> history,
                               double j_accepted) {
    const double gr = 0.6180339887498949;
    double a = lo, b = hi;
    ReducedCostReport rc = reduced_cost(scenario, spec, b - gr * (b - a));
    ReducedCostReport rd = reduced_cost(scenario, spec, a + gr * (b - a));
    int steps = 0;
    while (b - a > 1e-9 * (1.0 + std::abs(a)) && steps < 200) {
        if (rc.J < rd.J) {
            b = rd.s;
            rd = rc;
            rc = reduced_cost(scenario, spec, b - gr * (b - a));
        } else {
            a = rc.s;
            rc = rd;
            rd = reduced_cost(scenario, spec, a + gr * (b - a));
        }
        ++steps;
    }
    const ReducedCostReport best = rc.J < rd.J ? rc : rd;
    history.push_back({best.s, best.J, best.dJ, best.d2J, best.J <= j_accepted});

    OptimizeReport report;
    report.s_star = best.s;
    report.J_star = best.J;
    report.dJ_star = best.dJ;
    report.d2J_star = best.d2J;
    report.iterations = std::move(history);
    report.verdict = check_optimality(best);
    report.bracket_lo = a;
    report.bracket_hi = b;
    report.fallback_used = true;
    report.refine_steps = steps;
    return report;
}

}  // namespace

OptimizeReport newton_refine(const Scenario& scenario, const PenaltySpec& spec,
                             double bracket_lo, double bracket_hi, double start,
                             const OptimizerConfig& config) {
    config.validate();
    if (!(bracket_lo < bracket_hi))
        throw std::invalid_argument("newton_refine: empty bracket");
    if (!(start >= bracket_lo) || !(start <= bracket_hi))
        throw std::invalid_argument("newton_refine: start outside bracket");
    const double global_lo = config.s_lo(spec);
    const double global_hi = config.s_hi(spec);

    std::vector<IterationRecord> history;
    const ReducedCostReport r_lo = reduced_cost(scenario, spec, bracket_lo);
    const ReducedCostReport r_hi = reduced_cost(scenario, spec, bracket_hi);
    ReducedCostReport cur = start == bracket_lo   ? r_lo
                            : start == bracket_hi ? r_hi
                                                  : reduced_cost(scenario, spec, start);
    double j_accepted = cur.J;
    history.push_back({cur.s, cur.J, cur.dJ, cur.d2J, true});

    double blo = bracket_lo, bhi = bracket_hi;
    double djlo = r_lo.dJ, djhi = r_hi.dJ;
    bool sign_change = djlo * djhi < 0.0;
    if (sign_change && djlo > 0.0) {
        std::swap(blo, bhi);
        std::swap(djlo, djhi);
    }
    // Orientation: in sign-change mode dJ(blo) < 0 < dJ(bhi).

    if (!sign_change && !(cur.d2J > 0.0))
        return golden_fallback(scenario, spec, bracket_lo, bracket_hi,
                               std::move(history), j_accepted);

    OptimizeReport report;
    int steps = 0;
    while (!converged(cur, config) && steps < config.max_newton_iters) {
        ++steps;
        const double lo = std::min(blo, bhi), hi = std::max(blo, bhi);
        double s_next = 0.0;
        bool newton_step = cur.d2J > 0.0;
        if (newton_step) {
            s_next = cur.s - cur.dJ / cur.d2J;
            if (sign_change && !(s_next > lo && s_next < hi)) newton_step = false;
            if (!sign_change) s_next = std::clamp(s_next, global_lo, global_hi);
        }
        if (!newton_step) {
            if (!sign_change)
                return golden_fallback(scenario, spec, lo, hi, std::move(history),
                                       j_accepted);
            s_next = 0.5 * (lo + hi);
        }

        ReducedCostReport next = reduced_cost(scenario, spec, s_next);
        if (newton_step && sign_change && next.J > cur.J + 1e-12 * (1.0 + std::abs(cur.J))) {
            // Uphill Newton step: record it as rejected and bisect instead.
            history.push_back({next.s, next.J, next.dJ, next.d2J, false});
            if (next.dJ * djhi > 0.0) {
                bhi = next.s;
                djhi = next.dJ;
            } else {
                blo = next.s;
                djlo = next.dJ;
            }
            next = reduced_cost(scenario, spec, 0.5 * (std::min(blo, bhi) + std::max(blo, bhi)));
        }

        if (sign_change) {
            if (next.dJ * djhi > 0.0) {
                bhi = next.s;
                djhi = next.dJ;
            } else {
                blo = next.s;
                djlo = next.dJ;
            }
        } else if (next.dJ * cur.dJ < 0.0) {
            // Keep the orientation dJ(blo) < 0 < dJ(bhi) regardless of position.
            if (cur.dJ < 0.0) {
                blo = cur.s;
                djlo = cur.dJ;
                bhi = next.s;
                djhi = next.dJ;
            } else {
                blo = next.s;
                djlo = next.dJ;
                bhi = cur.s;
                djhi = cur.dJ;
            }
            sign_change = true;
        }

        const bool accepted = next.J <= j_accepted;
        if (accepted) j_accepted = next.J;
        history.push_back({next.s, next.J, next.dJ, next.d2J, accepted});
        cur = next;
    }

    report.s_star = cur.s;
    report.J_star = cur.J;
    report.dJ_star = cur.dJ;
    report.d2J_star = cur.d2J;
    report.iterations = std::move(history);
    report.verdict = converged(cur, config) ? check_optimality(cur) : Optimality::NotStationary;
    report.bracket_lo = std::min(blo, bhi);
    report.bracket_hi = std::max(blo, bhi);
    report.refine_steps = steps;
    return report;
}

OptimizeReport solve(const Scenario& scenario, const PenaltySpec& spec,
                     const OptimizerConfig& config) {
    const GridScan scan = grid_scan(scenario, spec, config);
    const double start = scan.points[static_cast<std::size_t>(scan.best_index)].s;
    OptimizeReport report =
        newton_refine(scenario, spec, scan.bracket_lo, scan.bracket_hi, start, config);
    report.grid_local_minima = scan.local_minima;
    return report;
}

}  // namespace fracorder
