#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fracorder/kernel.hpp"
#include "fracorder/verify.hpp"

using namespace fracorder;

TEST_CASE("degenerate eigenvalues: lambda = 1 and lambda = 0") {
    const KernelEval unit = eval_kernel(1.0, 2.0, 0.7, 3);
    CHECK(unit.value == doctest::Approx(std::exp(-2.0)).epsilon(1e-15));
    CHECK(unit.d1 == 0.0);
    CHECK(unit.d2 == 0.0);
    CHECK(unit.d3 == 0.0);

    const KernelEval zero = eval_kernel(0.0, 5.0, 1.3, 3);
    CHECK(zero.value == 1.0);
    CHECK(zero.d1 == 0.0);
    CHECK(zero.d2 == 0.0);
    CHECK(zero.d3 == 0.0);
}

TEST_CASE("lambda = 4, t = 1, s = 1/2") {
    const KernelEval e = eval_kernel(4.0, 1.0, 0.5, 3);
    CHECK(e.value == doctest::Approx(std::exp(-2.0)).epsilon(1e-14));
    CHECK(e.d1 == doctest::Approx(-2.0 * std::exp(-2.0) * std::log(4.0)).epsilon(1e-14));
    // Cross-check the derivative by central differences.
    const double fd = verify::central_diff(
        [](double s) { return eval_kernel(4.0, 1.0, s, 0).value; }, 0.5, 1e-5);
    CHECK(e.d1 == doctest::Approx(fd).epsilon(1e-8));
}

TEST_CASE("t = 0 is the constant 1 with vanishing derivatives") {
    const KernelEval e = eval_kernel(7.0, 0.0, 1.2, 3);
    CHECK(e.value == 1.0);
    CHECK(e.d1 == 0.0);
    CHECK(e.d3 == 0.0);
}

TEST_CASE("argument validation") {
    CHECK_THROWS_AS(eval_kernel(-1.0, 1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_kernel(1.0, -1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_kernel(1.0, 1.0, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_kernel(1.0, 1.0, -2.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_kernel(std::nan(""), 1.0, 1.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(eval_kernel(1.0, 1.0, 1.0, 4), std::invalid_argument);
}

TEST_CASE("overflow guard keeps everything finite and zero") {
    const KernelEval e = eval_kernel(1e6, 1.0, 4.0, 3);
    CHECK(e.value == 0.0);
    CHECK(e.d1 == 0.0);
    CHECK(e.d2 == 0.0);
    CHECK(e.d3 == 0.0);
    // Extreme exponent where lambda^s alone would overflow.
    const KernelEval x = eval_kernel(100.0, 1.0, 50.0, 3);
    CHECK(std::isfinite(x.value));
    CHECK(x.value == 0.0);
}

TEST_CASE("value stays in [0, 1] and derivatives match finite differences") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double h = 1e-5;
    for (int i = 0; i < 500; ++i) {
        const double lam = 100.0 * u(rng);
        const double t = 10.0 * (1.0 - u(rng));
        const double s = 4.0 - 3.95 * u(rng);
        const KernelEval e = eval_kernel(lam, t, s, 3);
        CHECK(e.value >= 0.0);
        CHECK(e.value <= 1.0);
        const double fd1 = verify::central_diff(
            [&](double x) { return eval_kernel(lam, t, x, 0).value; }, s, h);
        const double fd2 = verify::central_diff(
            [&](double x) { return eval_kernel(lam, t, x, 1).d1; }, s, h);
        const double fd3 = verify::central_diff(
            [&](double x) { return eval_kernel(lam, t, x, 2).d2; }, s, h);
        CHECK(std::abs(fd1 - e.d1) <= std::max(1e-7, 1e-5 * std::abs(e.d1)));
        CHECK(std::abs(fd2 - e.d2) <= std::max(1e-7, 1e-5 * std::abs(e.d2)));
        CHECK(std::abs(fd3 - e.d3) <= std::max(1e-7, 1e-5 * std::abs(e.d3)));
    }
}

TEST_CASE("sign of the first derivative") {
    std::mt19937_64 rng(78);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double t = 5.0 * (1.0 - u(rng));
        const double s = 0.1 + 3.0 * u(rng);
        const double lam_hi = 1.0 + 50.0 * u(rng) + 1e-6;
        const double lam_lo = u(rng) * (1.0 - 1e-6) + 1e-9;
        if (eval_kernel(lam_hi, t, s, 1).value > 0.0)
            CHECK(eval_kernel(lam_hi, t, s, 1).d1 < 0.0);
        CHECK(eval_kernel(lam_lo, t, s, 1).d1 > 0.0);
    }
}

TEST_CASE("substitution identity for the first derivative") {
    // d1 = -s^{-1} r e^{-r} (ln r - ln t), r = lambda^s t.
    std::mt19937_64 rng(79);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 300; ++i) {
        const double lam = 0.05 + 20.0 * u(rng);
        const double t = 0.05 + 5.0 * u(rng);
        const double s = 0.1 + 3.0 * u(rng);
        if (lam == 1.0) continue;
        const double r = std::pow(lam, s) * t;
        if (r <= 0.0 || r > 700.0) continue;
        const double expected = -(r * std::exp(-r) * (std::log(r) - std::log(t))) / s;
        const double got = eval_kernel(lam, t, s, 1).d1;
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("bound constants match independent calculus and scan values") {
    const BoundConstants& k = bound_constants();
    CHECK(k.c_hat0 == 1.0);
    CHECK(k.m2 == doctest::Approx(1.0 / std::exp(1.0)).epsilon(1e-9));
    // M4 attains its sup at r = (3 + sqrt(5))/2.
    const double r4 = 0.5 * (3.0 + std::sqrt(5.0));
    CHECK(k.m4 == doctest::Approx(4.0 * r4 * (r4 - 1.0) * std::exp(-r4)).epsilon(1e-9));
    // Scan-oracle golden values.
    CHECK(k.m1 == doctest::Approx(0.270053371317).epsilon(1e-6));
    CHECK(k.m3 == doctest::Approx(1.736617204510).epsilon(1e-6));
    CHECK(k.m5 == doctest::Approx(13.186844324529).epsilon(1e-6));
    CHECK(k.m6 == doctest::Approx(3.436917365641).epsilon(1e-6));
    CHECK(k.c_hat1 == k.m1 + k.m2);
    CHECK(k.c_hat2 == k.m3 + k.m4);
    CHECK(k.c_hat3 == k.m5 + k.m6);
}

TEST_CASE("derivative bounds hold") {
    CHECK(check_bounds(1.0, 1.0, 1.0));
    CHECK_THROWS_AS(check_bounds(1.0, 0.0, 1.0), std::invalid_argument);

    // |d1| at (e, 1, 1) equals e * e^{-e}, below C_hat1 * (1 + |ln 1|).
    const double d1 = eval_kernel(std::exp(1.0), 1.0, 1.0, 1).d1;
    CHECK(std::abs(d1) == doctest::Approx(std::exp(1.0 - std::exp(1.0))).epsilon(1e-12));
    CHECK(std::abs(d1) <= bound_constants().c_hat1);

    std::mt19937_64 rng(80);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 2000; ++i) {
        const double lam = 100.0 * u(rng) + 1e-12;
        const double t = 10.0 * (1.0 - u(rng));
        const double s = 4.0 - 3.95 * u(rng);
        CHECK(check_bounds(lam, t, s));
    }
}
