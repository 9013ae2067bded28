#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace fracorder {

/// Compensated (Kahan) accumulator. All mode/panel reductions in this library
/// run through it in a fixed ascending order so results are reproducible
/// bit-for-bit across runs.
class KahanSum {
public:
    void add(double x) {
        const double y = x - comp_;
        const double t = sum_ + y;
        comp_ = (t - sum_) - y;
        sum_ = t;
    }
    double value() const { return sum_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

struct QuadratureOptions {
    double rel_tol = 1e-11;
    int initial_panels = 8;
    int max_panels = 8192;
};

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// 8-point Gauss-Legendre rule on [-1, 1].
inline constexpr double kGl8Nodes[4] = {
    0.18343464249564980, 0.52553240991632899,
    0.79666647741362674, 0.96028985649753623};
inline constexpr double kGl8Weights[4] = {
    0.36268378337836198, 0.31370664587788729,
    0.22238103445337447, 0.10122853629037626};

template <class F>
double gl8_panels(F&& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    KahanSum sum;
    for (int p = 0; p < panels; ++p) {
        const double mid = a + (p + 0.5) * h;
        const double half = 0.5 * h;
        for (int k = 0; k < 4; ++k) {
            const double dx = half * kGl8Nodes[k];
            sum.add(kGl8Weights[k] * half * (f(mid - dx) + f(mid + dx)));
        }
    }
    return sum.value();
}

}  // namespace detail

/// Composite Gauss-Legendre integration of f over [a, b]. Starts at
/// `initial_panels` panels of 8 nodes and doubles the panel count until two
/// successive values agree to `rel_tol` (relative), throwing QuadratureError
/// if the cap is reached without convergence.
template <class F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opt = {}) {
    if (!(b >= a)) throw std::invalid_argument("integrate: b < a");
    if (a == b) return 0.0;
    double prev = detail::gl8_panels(f, a, b, opt.initial_panels);
    for (int panels = 2 * opt.initial_panels; panels <= opt.max_panels; panels *= 2) {
        const double cur = detail::gl8_panels(f, a, b, panels);
        if (std::abs(cur - prev) <= opt.rel_tol * std::abs(cur) + 1e-300) return cur;
        prev = cur;
    }
    throw QuadratureError("integrate: panel doubling did not converge");
}

/// Integrate over consecutive segments given by `breaks` (ascending, at least
/// two entries); each segment converges independently, so exponential
/// boundary layers can be isolated from smooth stretches.
template <class F>
double integrate_segments(F&& f, std::span<const double> breaks,
                          const QuadratureOptions& opt = {}) {
    if (breaks.size() < 2) throw std::invalid_argument("integrate_segments: need >= 2 breaks");
    KahanSum sum;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i)
        sum.add(integrate(f, breaks[i], breaks[i + 1], opt));
    return sum.value();
}

/// Segment breaks for integrands containing a factor exp(-rate*(t-lo)):
/// geometric subdivision of the decay layer so panel doubling converges even
/// when rate*(hi-lo) is enormous. Extra interior breaks may be appended by
/// the caller (e.g. sample-grid kinks); see merge_breaks.
inline std::vector<double> layer_breaks(double rate, double lo, double hi) {
    std::vector<double> breaks{lo};
    if (rate > 0.0 && std::isfinite(rate) && rate * (hi - lo) > 50.0) {
        double w = 50.0 / rate;
        while (lo + w < hi && w < 760.0 / rate) {
            breaks.push_back(lo + w);
            w *= 8.0;
        }
        if (lo + 760.0 / rate < hi) breaks.push_back(lo + 760.0 / rate);
    }
    breaks.push_back(hi);
    return breaks;
}

/// Merge extra break points (e.g. sampled-signal grid nodes) into an
/// ascending break list, dropping points outside [front, back] and
/// near-duplicates.
inline std::vector<double> merge_breaks(std::vector<double> breaks,
                                        std::span<const double> extra) {
    for (double x : extra)
        if (x > breaks.front() && x < breaks.back()) breaks.push_back(x);
    std::sort(breaks.begin(), breaks.end());
    std::vector<double> out;
    for (double x : breaks) {
        if (out.empty() || x - out.back() > 1e-15 * (1.0 + std::abs(x))) out.push_back(x);
    }
    if (out.size() < 2) out = {breaks.front(), breaks.back()};
    return out;
}

/// Moments of the decaying exponential on [0, t]:
///   I0 = ∫ e^{-a u} du, I1 = ∫ u e^{-a u} du, I2 = ∫ u² e^{-a u} du.
/// Uses truncated series when a*t < 1e-6 to avoid cancellation.
struct ExpMoments {
    double i0;
    double i1;
    double i2;
};

inline ExpMoments exp_moments(double a, double t) {
    const double at = a * t;
    if (at < 1e-6) {
        const double at2 = at * at, at3 = at2 * at;
        return {t * (1.0 - at / 2 + at2 / 6 - at3 / 24),
                t * t * (0.5 - at / 3 + at2 / 8 - at3 / 30),
                t * t * t * (1.0 / 3 - at / 4 + at2 / 10 - at3 / 36)};
    }
    const double e = std::exp(-at);
    return {(1.0 - e) / a,
            (1.0 - e * (1.0 + at)) / (a * a),
            (2.0 - e * (2.0 + 2.0 * at + at * at)) / (a * a * a)};
}

/// Composite Simpson over uniformly spaced samples spanning [a, b] inclusive.
/// Handles an odd panel count with a trailing 3/8 rule; requires >= 4 samples.
inline double simpson_uniform(std::span<const double> samples, double a, double b) {
    const std::size_t n = samples.size();
    if (n < 4) throw std::invalid_argument("simpson_uniform: need >= 4 samples");
    const double h = (b - a) / static_cast<double>(n - 1);
    std::size_t panels = n - 1;
    std::size_t m = panels;        // panels integrated with the 1/3 rule
    if (panels % 2 != 0) m = panels - 3;
    KahanSum sum;
    for (std::size_t i = 0; i + 2 <= m; i += 2)
        sum.add(h / 3.0 * (samples[i] + 4.0 * samples[i + 1] + samples[i + 2]));
    if (m != panels) {
        const std::size_t i = m;
        sum.add(3.0 * h / 8.0 *
                (samples[i] + 3.0 * samples[i + 1] + 3.0 * samples[i + 2] + samples[i + 3]));
    }
    return sum.value();
}

}  // namespace fracorder
