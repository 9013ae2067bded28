#include <cmath>
#include <stdexcept>

#include "fracorder/kernel.hpp"
#include "fracorder/numerics.hpp"
#include "fracorder/verify.hpp"

namespace fracorder::verify {

namespace {

double simpson_fixed(const std::function<double(double)>& f, double a, double b, int n) {
    // n intervals (even). Composite Simpson 1/3.
    const double h = (b - a) / n;
    KahanSum sum;
    sum.add(f(a));
    sum.add(f(b));
    for (int i = 1; i < n; ++i) sum.add((i % 2 == 1 ? 4.0 : 2.0) * f(a + i * h));
    return sum.value() * h / 3.0;
}

}  // namespace

double simpson_oracle(const std::function<double(double)>& f, double a, double b,
                      double rel_tol) {
    if (a == b) return 0.0;
    double prev = simpson_fixed(f, a, b, 16);
    for (int n = 32; n <= (1 << 22); n *= 2) {
        const double cur = simpson_fixed(f, a, b, n);
        if (std::abs(cur - prev) <= rel_tol * std::abs(cur) + 1e-300) return cur;
        prev = cur;
    }
    throw std::runtime_error("simpson_oracle: no convergence");
}

double central_diff(const std::function<double(double)>& f, double x, double h) {
    return (f(x + h) - f(x - h)) / (2.0 * h);
}

namespace {

// theta integrals truncated where the integrand has underflowed to zero.
double theta_integral_ex1(double upper) {
    const double cut = std::min(upper, 400.0);
    return simpson_oracle([](double th) { return th * std::exp(-2.0 * th); }, 0.0, cut);
}

double theta_integral_ex2(double upper) {
    const double cut = std::min(upper, 800.0);
    return simpson_oracle(
        [](double th) { return th * (std::exp(-th) - 1.0) * std::exp(-th); }, 0.0, cut);
}

}  // namespace

double example1_gradient_oracle(double s, double eps, int j0, double T) {
    if (j0 < 1) throw std::invalid_argument("example1_gradient_oracle: j0 >= 1");
    if (j0 == 1) return 0.0;  // ln(j0) = 0
    const double upper = std::pow(static_cast<double>(j0), 2.0 * s) * T;
    return -2.0 * eps * eps * std::pow(static_cast<double>(j0), -2.0 * s) *
           std::log(static_cast<double>(j0)) * theta_integral_ex1(upper);
}

double example2_gradient_oracle(double s, double eps, int j0, double T) {
    if (j0 < 1) throw std::invalid_argument("example2_gradient_oracle: j0 >= 1");
    if (j0 == 1) return 0.0;
    const double upper = std::pow(static_cast<double>(j0), 2.0 * s) * T;
    return -2.0 * eps * eps * std::pow(static_cast<double>(j0), -2.0 * s) *
           std::log(static_cast<double>(j0)) * theta_integral_ex2(upper);
}

double phi_sq_integral(int k, double T) {
    if (k < 1 || k > 3) throw std::invalid_argument("phi_sq_integral: k in 1..3");
    if (!(T > 0.0)) throw std::invalid_argument("phi_sq_integral: T > 0");
    const double c = std::min(T, 1.0);
    const double lc = -std::log(c);  // >= 0
    // t = c e^{-x}: ∫_0^c (1+|ln t|^k)² dt = c ∫_0^inf (1+(x+lc)^k)² e^{-x} dx
    const double sing = c * simpson_oracle(
                                [&](double x) {
                                    const double p = std::pow(x + lc, k);
                                    return (1.0 + p) * (1.0 + p) * std::exp(-x);
                                },
                                0.0, 80.0);
    if (T <= 1.0) return sing;
    const double smooth = simpson_oracle(
        [&](double t) {
            const double p = std::pow(std::log(t), k);  // ln t >= 0 here
            return (1.0 + p) * (1.0 + p);
        },
        1.0, T);
    return sing + smooth;
}

namespace {

// psi_k(t) = ∫_0^t (1+|ln u|^k) du, integrated squared over [0, T].
double psi_sq_integral(int k, double T) {
    const auto psi = [&](double t) {
        const double c = std::min(t, 1.0);
        const double lc = -std::log(c);
        double v = t + c * simpson_oracle(
                               [&](double x) { return std::pow(x + lc, k) * std::exp(-x); }, 0.0,
                               80.0, 1e-10);
        if (t > 1.0)
            v += simpson_oracle([&](double u) { return std::pow(std::log(u), k); }, 1.0, t, 1e-10);
        return v;
    };
    return simpson_oracle([&](double t) { return psi(t) * psi(t); }, 1e-12, T, 1e-9);
}

}  // namespace

double sensitivity_envelope(const StateEval& state, int order) {
    if (order != 1 && order != 2)
        throw std::invalid_argument("sensitivity_envelope: order must be 1 or 2");
    const BoundConstants& k = bound_constants();
    const double c_hat = order == 1 ? k.c_hat1 : k.c_hat2;
    double y0_sq = 0.0;
    for (double c : state.y0.coeffs) y0_sq += c * c;
    double f_sq = 0.0;
    for (int j = 0; j < state.basis.size(); ++j) {
        const double sup = state.f.sup_abs(j);
        f_sq += sup * sup;
    }
    double inner = phi_sq_integral(order, state.T) * y0_sq;
    if (f_sq > 0.0) inner += psi_sq_integral(order, state.T) * f_sq;
    return c_hat * std::sqrt(2.0 * inner);
}

double dense_scan_minimizer(const Scenario& scenario, const PenaltySpec& penalty, int points) {
    const OptimizerConfig config;
    const double lo = config.s_lo(penalty);
    const double hi = config.s_hi(penalty);
    const auto cost = [&](double s) {
        return tracking_value(scenario.state, scenario.y_q, s) + penalty_eval(penalty, s, 0);
    };
    const double llo = std::log(lo), lhi = std::log(hi);
    double best = std::numeric_limits<double>::infinity();
    int best_i = 0;
    for (int i = 0; i < points; ++i) {
        const double s = std::exp(llo + (lhi - llo) * i / (points - 1));
        const double J = cost(s);
        if (std::isfinite(J) && J < best) {
            best = J;
            best_i = i;
        }
    }
    double a = std::exp(llo + (lhi - llo) * std::max(0, best_i - 1) / (points - 1));
    double b = std::exp(llo + (lhi - llo) * std::min(points - 1, best_i + 1) / (points - 1));
    while (b - a > 1e-8 * std::max(1.0, a)) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        if (cost(m1) < cost(m2))
            b = m2;
        else
            a = m1;
    }
    return 0.5 * (a + b);
}

std::vector<NamedScenario> builtin_scenarios() {
    std::vector<NamedScenario> out;
    for (int example : {1, 2}) {
        for (double eps : {0.1, 0.5}) {
            for (int j0 : {1, 2, 5}) {
                for (int pen : {0, 1}) {
                    NamedScenario item;
                    item.example = example;
                    item.eps = eps;
                    item.j0 = j0;
                    item.scenario = example == 1 ? example1_scenario(eps, j0, 1.0)
                                                 : example2_scenario(eps, j0, 1.0);
                    item.penalty = pen == 0 ? PenaltySpec::exp_over_s()
                                            : PenaltySpec::reciprocal(4.0);
                    item.penalty_name = pen == 0 ? "exp_over_s" : "reciprocal4";
                    item.name = "ex" + std::to_string(example) + " eps=" + std::to_string(eps) +
                                " j0=" + std::to_string(j0) + " " + item.penalty_name;
                    out.push_back(std::move(item));
                }
            }
        }
    }
    return out;
}

}  // namespace fracorder::verify
