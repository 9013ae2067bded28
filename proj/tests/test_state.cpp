#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "fracorder/config.hpp"
#include "fracorder/state.hpp"
#include "fracorder/verify.hpp"

using namespace fracorder;

namespace {

StateEval single_mode(double lambda, double y0, double T) {
    StateEval state;
    state.basis = build_explicit_basis({lambda});
    state.y0.coeffs = {y0};
    state.f = TimeSignal::zero();
    state.T = T;
    return state;
}

}  // namespace

TEST_CASE("free decay of one mode") {
    const StateEval state = single_mode(4.0, 1.0, 2.0);
    CHECK(solve_mode(state, 0, 0.5, 1.0) == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(solve_mode(state, 0, 0.5, 0.0) == doctest::Approx(1.0));
}

TEST_CASE("zero data stays zero") {
    StateEval state = single_mode(3.0, 0.0, 1.0);
    for (double s : {0.2, 1.0, 2.5})
        for (double t : {0.0, 0.4, 1.0}) CHECK(solve_mode(state, 0, s, t) == 0.0);
}

TEST_CASE("constant forcing: closed form and quadrature path agree") {
    const double c = 0.8, lambda = 3.0, T = 1.5;
    StateEval closed = single_mode(lambda, 0.0, T);
    closed.f = TimeSignal::constant({c});

    StateEval sampled = closed;
    sampled.f = TimeSignal::sampled({0.0, T}, {{c, c}});  // linear interp is exactly constant

    for (double s : {0.3, 0.8, 1.6}) {
        const double a = std::pow(lambda, s);
        for (double t : {0.2, 0.7, 1.5}) {
            const double expected = c * (1.0 - std::exp(-a * t)) / a;
            CHECK(solve_mode(closed, 0, s, t) == doctest::Approx(expected).epsilon(1e-12));
            CHECK(solve_mode(sampled, 0, s, t) == doctest::Approx(expected).epsilon(1e-10));
            // Sensitivities along both integration paths as well.
            for (int order : {1, 2})
                CHECK(sensitivity_mode(closed, 0, s, t, order) ==
                      doctest::Approx(sensitivity_mode(sampled, 0, s, t, order))
                          .epsilon(1e-9)
                          .scale(1.0));
        }
    }
    // lambda = 0 limit of the constant-forcing solution is c * t.
    StateEval flat = single_mode(0.0, 0.0, 1.0);
    flat.f = TimeSignal::constant({c});
    CHECK(solve_mode(flat, 0, 1.0, 0.75) == doctest::Approx(c * 0.75).epsilon(1e-14));
}

TEST_CASE("sensitivities vanish identically at lambda in {0, 1}") {
    for (double lambda : {0.0, 1.0}) {
        StateEval state = single_mode(lambda, 2.0, 1.0);
        state.f = TimeSignal::constant({0.7});
        for (double s : {0.3, 1.0, 2.0})
            for (double t : {0.1, 0.6, 1.0})
                for (int order : {1, 2})
                    CHECK(sensitivity_mode(state, 0, s, t, order) == 0.0);
    }
}

TEST_CASE("perturbation-mode sensitivity matches the closed form") {
    // d/ds y_j = -2 eps j0^{2s} ln(j0) t e^{-j0^{2s} t} on the example-1 mode.
    const double eps = 0.3;
    const int j0 = 2;
    const Scenario scenario = example1_scenario(eps, j0, 1.0);
    const int pos = mode_position(scenario.state.basis, j0);
    for (double s : {0.4, 1.0, 1.9}) {
        const double a = std::pow(static_cast<double>(j0), 2.0 * s);
        for (double t : {0.15, 0.5, 1.0}) {
            const double expected =
                -2.0 * eps * a * std::log(static_cast<double>(j0)) * t * std::exp(-a * t);
            CHECK(sensitivity_mode(scenario.state, pos, s, t, 1) ==
                  doctest::Approx(expected).epsilon(1e-12));
        }
    }
}

TEST_CASE("sensitivity sign and finite-difference consistency") {
    const StateEval state = single_mode(6.0, 0.9, 1.0);
    for (double s : {0.4, 1.1, 2.3}) {
        for (double t : {0.2, 0.8}) {
            const double d1 = sensitivity_mode(state, 0, s, t, 1);
            CHECK(d1 < 0.0);
            const double fd = verify::central_diff(
                [&](double x) { return solve_mode(state, 0, x, t); }, s, 1e-5);
            CHECK(d1 == doctest::Approx(fd).epsilon(1e-7));
        }
    }
}

TEST_CASE("sampled forcing: sensitivities match finite differences") {
    StateEval state = single_mode(2.0, 0.4, 1.0);
    state.f = TimeSignal::sampled({0.0, 0.25, 0.6, 1.0}, {{0.5, -0.2, 0.3, 0.1}});
    for (double s : {0.5, 1.3}) {
        for (double t : {0.3, 0.9}) {
            const double fd1 = verify::central_diff(
                [&](double x) { return solve_mode(state, 0, x, t); }, s, 1e-5);
            CHECK(sensitivity_mode(state, 0, s, t, 1) == doctest::Approx(fd1).epsilon(1e-6));
            const double fd2 = verify::central_diff(
                [&](double x) { return sensitivity_mode(state, 0, x, t, 1); }, s, 1e-5);
            CHECK(sensitivity_mode(state, 0, s, t, 2) == doctest::Approx(fd2).epsilon(1e-6));
        }
    }
}

TEST_CASE("free decay is monotone and dominated by the initial value") {
    const StateEval state = single_mode(5.0, -0.7, 2.0);
    double prev = std::abs(solve_mode(state, 0, 0.8, 0.0));
    CHECK(prev == doctest::Approx(0.7));
    for (double t : {0.2, 0.6, 1.2, 2.0}) {
        const double cur = std::abs(solve_mode(state, 0, 0.8, t));
        CHECK(cur <= 0.7);
        CHECK(cur < prev);
        prev = cur;
    }
}

TEST_CASE("argument validation") {
    const StateEval state = single_mode(2.0, 1.0, 1.0);
    CHECK_THROWS_AS(solve_mode(state, 1, 1.0, 0.5), std::out_of_range);
    CHECK_THROWS_AS(solve_mode(state, 0, -0.5, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(solve_mode(state, 0, 1.0, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(sensitivity_mode(state, 0, 1.0, 0.5, 3), std::invalid_argument);
    TimeSignal bad = TimeSignal::constant({1.0, 2.0});  // width mismatch
    CHECK_THROWS_AS(misfit_and_derivatives(state, bad, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(misfit_and_derivatives(state, TimeSignal::zero(), -1.0),
                    std::invalid_argument);
}

TEST_CASE("misfit of matching data is zero") {
    StateEval state = single_mode(2.0, 0.0, 1.0);
    const TrackingMisfit m = misfit_and_derivatives(state, TimeSignal::zero(), 1.0);
    CHECK(m.value == 0.0);
    CHECK(m.d1 == 0.0);
    CHECK(m.d2 == 0.0);
}

TEST_CASE("example tracking gradients against the closed-form oracle") {
    for (int example : {1, 2}) {
        const double eps = 0.5;
        const int j0 = 2;
        const Scenario scenario =
            example == 1 ? example1_scenario(eps, j0, 1.0) : example2_scenario(eps, j0, 1.0);
        for (double s : {0.35, 1.0, 2.2}) {
            const double g = misfit_and_derivatives(scenario.state, scenario.y_q, s).d1;
            const double oracle = example == 1 ? verify::example1_gradient_oracle(s, eps, j0, 1.0)
                                               : verify::example2_gradient_oracle(s, eps, j0, 1.0);
            CHECK(g == doctest::Approx(oracle).epsilon(1e-8));
            if (example == 2) CHECK(g >= 0.0);
        }
    }
}

TEST_CASE("misfit derivatives are consistent with finite differences") {
    for (int example : {1, 2}) {
        const Scenario scenario =
            example == 1 ? example1_scenario(0.4, 3, 1.0) : example2_scenario(0.4, 3, 1.0);
        for (double s : {0.2, 0.7, 1.8}) {
            const TrackingMisfit mid =
                misfit_and_derivatives(scenario.state, scenario.y_q, s);
            const double h = 1e-4;
            const TrackingMisfit lo =
                misfit_and_derivatives(scenario.state, scenario.y_q, s - h);
            const TrackingMisfit hi =
                misfit_and_derivatives(scenario.state, scenario.y_q, s + h);
            const double fd_g = (hi.value - lo.value) / (2.0 * h);
            const double fd_h = (hi.d1 - lo.d1) / (2.0 * h);
            CHECK(std::abs(fd_g - mid.d1) <= std::max(1e-6, 1e-4 * std::abs(mid.d1)));
            CHECK(std::abs(fd_h - mid.d2) <= std::max(1e-6, 1e-4 * std::abs(mid.d2)));
        }
    }
}

TEST_CASE("scaled sensitivity norms stay below the assembled envelope") {
    const Scenario scenario = example1_scenario(0.5, 2, 1.0);
    const double env1 = verify::sensitivity_envelope(scenario.state, 1);
    const double env2 = verify::sensitivity_envelope(scenario.state, 2);
    for (double s : {0.05, 0.2, 0.7, 1.5, 3.0, 4.0}) {
        CHECK(s * sensitivity_norm(scenario.state, s, 1) <= env1);
        CHECK(s * s * sensitivity_norm(scenario.state, s, 2) <= env2);
    }
}

TEST_CASE("energy identity: trivial, single mode, and example data") {
    StateEval trivial = single_mode(2.0, 0.0, 1.0);
    const EnergyReport zero = energy_diagnostic(trivial, 1.0);
    CHECK(zero.lhs == 0.0);
    CHECK(zero.rhs == 0.0);

    // Free decay at lambda = 4, s = 1: both sides equal lambda^s |y0|^2 = 4.
    const StateEval one = single_mode(4.0, 1.0, 1.0);
    const EnergyReport single = energy_diagnostic(one, 1.0);
    CHECK(single.rhs == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(single.lhs <= single.rhs * (1.0 + 1e-8));
    CHECK(single.lhs == doctest::Approx(4.0).epsilon(1e-6));

    const Scenario ex1 = example1_scenario(0.1, 2, 1.0);
    const EnergyReport report = energy_diagnostic(ex1.state, 0.5);
    CHECK(report.lhs <= report.rhs * (1.0 + 1e-8));

    // Forced single mode: rhs picks up T * sup|f|^2.
    StateEval forced = single_mode(4.0, 1.0, 1.0);
    forced.f = TimeSignal::constant({0.5});
    const EnergyReport fr = energy_diagnostic(forced, 1.0);
    CHECK(fr.rhs == doctest::Approx(4.0 + 0.25).epsilon(1e-14));
    CHECK(fr.lhs <= fr.rhs * (1.0 + 1e-8));
}

TEST_CASE("tracking_value agrees with the full misfit") {
    const Scenario scenario = example2_scenario(0.5, 2, 1.0);
    for (double s : {0.3, 1.0, 2.5})
        CHECK(tracking_value(scenario.state, scenario.y_q, s) ==
              doctest::Approx(misfit_and_derivatives(scenario.state, scenario.y_q, s).value)
                  .epsilon(1e-12));
}

TEST_CASE("sampled-signal validation") {
    StateEval state = single_mode(2.0, 1.0, 1.0);
    CHECK_THROWS_AS(
        (void)TimeSignal::sampled({0.0, 0.5, 0.5}, {{1.0, 2.0, 3.0}}).validate(1, 1.0),
        std::invalid_argument);
    CHECK_THROWS_AS((void)TimeSignal::sampled({0.2, 1.0}, {{1.0, 2.0}}).validate(1, 1.0),
                    std::invalid_argument);
    CHECK_THROWS_AS((void)TimeSignal::sampled({0.0, 0.6}, {{1.0, 2.0}}).validate(1, 1.0),
                    std::invalid_argument);
    state.f = TimeSignal::sampled({0.0, 1.0}, {{1.0, std::nan("")}});
    CHECK_THROWS_AS(state.validate(), std::invalid_argument);
}
