#include "fracorder/kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace fracorder {

namespace {

void check_args(double lambda, double t, double s, int order) {
    if (!std::isfinite(lambda) || !std::isfinite(t) || !std::isfinite(s))
        throw std::invalid_argument("eval_kernel: non-finite argument");
    if (lambda < 0.0) throw std::invalid_argument("eval_kernel: lambda must be >= 0");
    if (t < 0.0) throw std::invalid_argument("eval_kernel: t must be >= 0");
    if (s <= 0.0) throw std::invalid_argument("eval_kernel: s must be > 0");
    if (order < 0 || order > 3) throw std::invalid_argument("eval_kernel: order must be in 0..3");
}

}  // namespace

double lambda_pow_s(double lambda, double s) {
    if (lambda == 0.0) return 0.0;
    const double z = s * std::log(lambda);
    // exp(705) is still finite; beyond that the kernel value is 0 for any
    // t > 0, so the clamp cannot change results.
    return std::exp(std::min(z, 705.0));
}

KernelEval eval_kernel(double lambda, double t, double s, int order) {
    check_args(lambda, t, s, order);
    KernelEval out;
    if (lambda == 0.0) {
        out.value = 1.0;
        return out;
    }
    const double log_lambda = std::log(lambda);
    if (log_lambda == 0.0) {
        out.value = std::exp(-t);
        return out;
    }
    // r = lambda^s * t, assembled in log space so lambda^s may overflow
    // harmlessly; e^{-r} underflows to exact 0 past r ~ 745.
    const double z = s * log_lambda;
    double r;
    if (t == 0.0) {
        r = 0.0;
    } else {
        const double log_r = z + std::log(t);
        if (log_r > 7.0) {  // r > 1096: every term carries r e^{-r} = 0
            return out;     // value = e^{-r} = 0, derivatives 0
        }
        r = std::exp(log_r);
    }
    const double decay = std::exp(-r);
    out.value = decay;
    if (order >= 1) out.d1 = -r * decay * log_lambda;
    if (order >= 2) out.d2 = r * decay * (r - 1.0) * log_lambda * log_lambda;
    if (order >= 3)
        out.d3 = r * decay * (3.0 * r - 1.0 - r * r) * log_lambda * log_lambda * log_lambda;
    return out;
}

namespace {

// sup over r > 0 of g(r): dense log scan over [1e-12, 1e3] followed by
// golden-section refinement around the best grid point.
template <class G>
double scan_sup(G&& g) {
    const double lo = std::log(1e-12), hi = std::log(1e3);
    const int n = 200001;
    double best = -1.0;
    int best_i = 0;
    for (int i = 0; i < n; ++i) {
        const double r = std::exp(lo + (hi - lo) * i / (n - 1));
        const double v = g(r);
        if (v > best) {
            best = v;
            best_i = i;
        }
    }
    const double step = (hi - lo) / (n - 1);
    double a = std::exp(lo + step * (best_i - 1));
    double b = std::exp(lo + step * (best_i + 1));
    const double gr = 0.6180339887498949;
    for (int it = 0; it < 120; ++it) {
        const double c = b - gr * (b - a);
        const double d = a + gr * (b - a);
        if (g(c) > g(d))
            b = d;
        else
            a = c;
    }
    return g(0.5 * (a + b));
}

BoundConstants compute_constants() {
    BoundConstants k{};
    const auto re = [](double r) { return r * std::exp(-r); };
    k.m1 = scan_sup([&](double r) { return re(r) * std::abs(std::log(r)); });
    k.m2 = scan_sup([&](double r) { return re(r); });
    k.m3 = scan_sup([&](double r) {
        const double lr = std::log(r);
        return re(r) * std::abs(r - 1.0) * 4.0 * lr * lr;
    });
    k.m4 = scan_sup([&](double r) { return re(r) * 4.0 * std::abs(r - 1.0); });
    k.m5 = scan_sup([&](double r) {
        const double lr = std::abs(std::log(r));
        return re(r) * std::abs(3.0 * r - 1.0 - r * r) * 8.0 * lr * lr * lr;
    });
    k.m6 = scan_sup([&](double r) { return re(r) * 8.0 * std::abs(3.0 * r - 1.0 - r * r); });
    k.c_hat0 = 1.0;
    k.c_hat1 = k.m1 + k.m2;
    k.c_hat2 = k.m3 + k.m4;
    k.c_hat3 = k.m5 + k.m6;
    return k;
}

}  // namespace

const BoundConstants& bound_constants() {
    static const BoundConstants cached = compute_constants();
    return cached;
}

bool check_bounds(double lambda, double t, double s) {
    if (t == 0.0) throw std::invalid_argument("check_bounds: t must be > 0");
    const KernelEval e = eval_kernel(lambda, t, s, 3);
    const BoundConstants& k = bound_constants();
    const double alt = std::abs(std::log(t));
    const bool b1 = std::abs(e.d1) <= k.c_hat1 * (1.0 + alt) / s;
    const bool b2 = std::abs(e.d2) <= k.c_hat2 * (1.0 + alt * alt) / (s * s);
    const bool b3 = std::abs(e.d3) <= k.c_hat3 * (1.0 + alt * alt * alt) / (s * s * s);
    return b1 && b2 && b3;
}

}  // namespace fracorder
