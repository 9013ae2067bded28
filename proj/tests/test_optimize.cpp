#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fracorder/config.hpp"
#include "fracorder/optimize.hpp"
#include "fracorder/verify.hpp"

using namespace fracorder;

namespace {

Scenario pure_penalty_scenario() { return example1_scenario(0.0, 2, 1.0); }

}  // namespace

TEST_CASE("config validation") {
    OptimizerConfig config;
    config.grid_points = 8;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = OptimizerConfig{};
    config.bracket_pad = 0.6;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = OptimizerConfig{};
    config.newton_tol = 0.0;
    CHECK_THROWS_AS(config.validate(), std::invalid_argument);
    config = OptimizerConfig{};
    CHECK(config.s_lo(PenaltySpec::exp_over_s()) == doctest::Approx(1e-3));
    CHECK(config.s_hi(PenaltySpec::exp_over_s()) == doctest::Approx(50.0));
    CHECK(config.s_hi(PenaltySpec::reciprocal(2.0)) == doctest::Approx(2.0 - 1e-3));
}

TEST_CASE("grid scan finds the penalty minimum region") {
    const Scenario scenario = pure_penalty_scenario();

    const GridScan rec = grid_scan(scenario, PenaltySpec::reciprocal(2.0));
    const double best_rec = rec.points[static_cast<std::size_t>(rec.best_index)].s;
    // Minimizer of 1/(s(2-s)) is s = 1; the argmin grid point is its neighbor.
    CHECK(std::abs(best_rec - 1.0) < 0.15);
    CHECK(rec.bracket_lo < best_rec);
    CHECK(rec.bracket_hi > best_rec);
    CHECK(!rec.local_minima.empty());

    const GridScan exp = grid_scan(scenario, PenaltySpec::exp_over_s());
    const double best_exp = exp.points[static_cast<std::size_t>(exp.best_index)].s;
    CHECK(std::abs(best_exp - 1.0) < 0.2);
}

TEST_CASE("grid scan fails loudly when nothing is finite") {
    const PenaltySpec broken = PenaltySpec::custom(
        2.0, [](double) { return std::nan(""); }, [](double) { return std::nan(""); },
        [](double) { return std::nan(""); });
    CHECK_THROWS_AS(grid_scan(pure_penalty_scenario(), broken), std::runtime_error);
}

TEST_CASE("newton refinement solves the pure-penalty problems to 1e-9") {
    const Scenario scenario = pure_penalty_scenario();

    const OptimizeReport exp =
        newton_refine(scenario, PenaltySpec::exp_over_s(), 0.5, 2.0, 1.2);
    CHECK(std::abs(exp.s_star - 1.0) <= 1e-9);
    CHECK(exp.verdict == Optimality::SecondOrderSufficient);

    const OptimizeReport rec =
        newton_refine(scenario, PenaltySpec::reciprocal(2.0), 0.5, 1.5, 0.7);
    CHECK(std::abs(rec.s_star - 1.0) <= 1e-9);
    CHECK(rec.verdict == Optimality::SecondOrderSufficient);
}

TEST_CASE("newton refinement rejects bad brackets") {
    const Scenario scenario = pure_penalty_scenario();
    CHECK_THROWS_AS(newton_refine(scenario, PenaltySpec::exp_over_s(), 2.0, 0.5, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(newton_refine(scenario, PenaltySpec::exp_over_s(), 0.5, 2.0, 3.0),
                    std::invalid_argument);
}

TEST_CASE("solve matches the dense-scan oracle on example scenarios") {
    struct Case {
        int example;
        double eps;
        int j0;
    };
    for (const Case& c : {Case{1, 0.5, 2}, Case{2, 0.5, 2}}) {
        const Scenario scenario = c.example == 1 ? example1_scenario(c.eps, c.j0, 1.0)
                                                  : example2_scenario(c.eps, c.j0, 1.0);
        const PenaltySpec spec = PenaltySpec::exp_over_s();
        const OptimizeReport report = solve(scenario, spec);
        const double oracle = verify::dense_scan_minimizer(scenario, spec, 4000);
        CHECK(std::abs(report.s_star - oracle) <= 1e-6);
        CHECK(report.verdict == Optimality::SecondOrderSufficient);
        CHECK(report.s_star >= report.bracket_lo);
        CHECK(report.s_star <= report.bracket_hi);
        CHECK(std::abs(report.dJ_star) <= 1e-10 * (1.0 + std::abs(report.J_star)));
        if (c.example == 1) CHECK(report.s_star > 1.0 + 1e-4);
        if (c.example == 2) CHECK(report.s_star < 1.0 - 1e-4);
    }
}

TEST_CASE("degenerate perturbation mode lands exactly on the penalty minimizer") {
    // lambda_{j0} = 1 makes the tracking term s-independent, so the optimum
    // equals the penalty-only minimizer; strict ordering needs ln(lambda) != 0.
    const Scenario scenario = example2_scenario(0.5, 1, 1.0);
    const OptimizeReport report = solve(scenario, PenaltySpec::exp_over_s());
    CHECK(std::abs(report.s_star - 1.0) <= 1e-8);
    CHECK(report.verdict == Optimality::SecondOrderSufficient);
}

TEST_CASE("epsilon = 0 gives the analytic penalty minimizer") {
    const OptimizeReport report = solve(pure_penalty_scenario(), PenaltySpec::exp_over_s());
    CHECK(std::abs(report.s_star - 1.0) <= 1e-9);
}

TEST_CASE("accepted iterates never increase the cost") {
    for (int example : {1, 2}) {
        const Scenario scenario =
            example == 1 ? example1_scenario(0.5, 5, 1.0) : example2_scenario(0.3, 2, 1.0);
        const OptimizeReport report = solve(scenario, PenaltySpec::reciprocal(4.0));
        double last = std::numeric_limits<double>::infinity();
        int accepted = 0;
        for (const IterationRecord& it : report.iterations) {
            if (!it.accepted) continue;
            CHECK(it.J <= last);
            last = it.J;
            ++accepted;
        }
        CHECK(accepted >= 1);
        CHECK(report.refine_steps <= 15);
    }
}

TEST_CASE("golden-section fallback engages without sign change or curvature") {
    // Custom penalty with a concave stretch around s = 5: no stationary point
    // in [4.5, 5.5] and negative second derivative at the start.
    const PenaltySpec spec = PenaltySpec::custom(
        10.0,
        [](double s) { return 1.0 / s + 1.0 / (10.0 - s) + 0.4 * std::cos(s); },
        [](double s) {
            return -1.0 / (s * s) + 1.0 / ((10.0 - s) * (10.0 - s)) - 0.4 * std::sin(s);
        },
        [](double s) {
            return 2.0 / (s * s * s) + 2.0 / std::pow(10.0 - s, 3) - 0.4 * std::cos(s);
        });
    CHECK_NOTHROW(spec.validate());
    const OptimizeReport report =
        newton_refine(pure_penalty_scenario(), spec, 4.5, 5.5, 5.0);
    CHECK(report.fallback_used);
    CHECK(report.verdict == Optimality::NotStationary);
    CHECK(report.s_star >= 4.5);
    CHECK(report.s_star <= 5.5);
}

TEST_CASE("hitting the iteration cap reports NotStationary") {
    OptimizerConfig config;
    config.max_newton_iters = 1;
    const OptimizeReport report = solve(example1_scenario(0.5, 2, 1.0),
                                        PenaltySpec::exp_over_s(), config);
    CHECK(report.verdict == Optimality::NotStationary);
    CHECK(report.refine_steps == 1);
}

TEST_CASE("solve is deterministic") {
    const Scenario scenario = example1_scenario(0.5, 2, 1.0);
    const OptimizeReport a = solve(scenario, PenaltySpec::exp_over_s());
    const OptimizeReport b = solve(scenario, PenaltySpec::exp_over_s());
    CHECK(a.s_star == b.s_star);
    CHECK(a.J_star == b.J_star);
    CHECK(a.iterations.size() == b.iterations.size());
}
