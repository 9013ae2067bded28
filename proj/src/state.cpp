#include "fracorder/state.hpp"

#include <cmath>
#include <stdexcept>

#include "fracorder/kernel.hpp"
#include "fracorder/numerics.hpp"

namespace fracorder {

void StateEval::validate() const {
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("StateEval: T must be positive");
    if (y0.size() != basis.size())
        throw std::invalid_argument("StateEval: y0 length differs from basis");
    for (double c : y0.coeffs)
        if (!std::isfinite(c)) throw std::invalid_argument("StateEval: non-finite y0");
    f.validate(basis.size(), T);
}

namespace {

void check_mode_and_time(const StateEval& state, int mode, double t) {
    if (mode < 0 || mode >= state.basis.size())
        throw std::out_of_range("state: mode out of range");
    if (!(t >= 0.0) || t > state.T * (1.0 + 1e-12))
        throw std::invalid_argument("state: t outside [0, T]");
}

// Break list for time integrals of mode quantities: isolates the e^{-a t}
// boundary layer and pins sampled-signal kinks to segment boundaries.
std::vector<double> mode_breaks(double rate, double lo, double hi,
                                const TimeSignal* f, const TimeSignal* g) {
    std::vector<double> breaks = layer_breaks(rate, lo, hi);
    if (f && f->kind == SignalKind::Sampled) breaks = merge_breaks(std::move(breaks), f->grid);
    if (g && g->kind == SignalKind::Sampled) breaks = merge_breaks(std::move(breaks), g->grid);
    return breaks;
}

}  // namespace

ModeTrajectory::ModeTrajectory(const StateEval& state, int mode, double s)
    : state_(&state), mode_(mode), s_(s) {
    if (mode < 0 || mode >= state.basis.size())
        throw std::out_of_range("ModeTrajectory: mode out of range");
    if (!(s > 0.0)) throw std::invalid_argument("ModeTrajectory: s must be > 0");
    const EigenMode& m = state.basis.modes[static_cast<std::size_t>(mode)];
    lambda_ = m.lambda;
    a_ = lambda_pow_s(lambda_, s);
    degenerate_ = (lambda_ == 0.0 || lambda_ == 1.0);
    log_lambda_ = degenerate_ ? 0.0 : std::log(lambda_);
    y0_ = state.y0.coeffs[static_cast<std::size_t>(mode)];
}

double ModeTrajectory::y(double t) const {
    const double v = y0_ * eval_kernel(lambda_, t, s_, 0).value;
    const TimeSignal& f = state_->f;
    switch (f.kind) {
        case SignalKind::Zero: return v;
        case SignalKind::ConstantInTime:
            return v + f.coeffs[static_cast<std::size_t>(mode_)] * exp_moments(a_, t).i0;
        case SignalKind::Sampled: break;
    }
    if (t == 0.0) return v;
    auto breaks = mode_breaks(a_, 0.0, t, nullptr, nullptr);
    std::vector<double> kinks;
    for (double g : f.grid)
        if (g > 0.0 && g < t) kinks.push_back(t - g);
    breaks = merge_breaks(std::move(breaks), kinks);
    const double w = integrate_segments(
        [&](double u) {
            return f.value(mode_, t - u) * eval_kernel(lambda_, u, s_, 0).value;
        },
        breaks);
    return v + w;
}

double ModeTrajectory::w_derivative(double t, int order) const {
    const TimeSignal& f = state_->f;
    if (f.kind == SignalKind::Zero || degenerate_ || t == 0.0) return 0.0;
    if (f.kind == SignalKind::ConstantInTime) {
        const double c = f.coeffs[static_cast<std::size_t>(mode_)];
        const ExpMoments m = exp_moments(a_, t);
        if (order == 1) return -c * log_lambda_ * a_ * m.i1;
        return c * log_lambda_ * log_lambda_ * (a_ * a_ * m.i2 - a_ * m.i1);
    }
    auto breaks = mode_breaks(a_, 0.0, t, nullptr, nullptr);
    std::vector<double> kinks;
    for (double g : f.grid)
        if (g > 0.0 && g < t) kinks.push_back(t - g);
    breaks = merge_breaks(std::move(breaks), kinks);
    return integrate_segments(
        [&](double u) {
            const KernelEval e = eval_kernel(lambda_, u, s_, order);
            return f.value(mode_, t - u) * (order == 1 ? e.d1 : e.d2);
        },
        breaks);
}

double ModeTrajectory::dy_ds(double t) const {
    if (degenerate_) return 0.0;
    return y0_ * eval_kernel(lambda_, t, s_, 1).d1 + w_derivative(t, 1);
}

double ModeTrajectory::d2y_ds2(double t) const {
    if (degenerate_) return 0.0;
    return y0_ * eval_kernel(lambda_, t, s_, 2).d2 + w_derivative(t, 2);
}

double solve_mode(const StateEval& state, int mode, double s, double t) {
    check_mode_and_time(state, mode, t);
    return ModeTrajectory(state, mode, s).y(t);
}

double sensitivity_mode(const StateEval& state, int mode, double s, double t, int order) {
    check_mode_and_time(state, mode, t);
    if (order != 1 && order != 2)
        throw std::invalid_argument("sensitivity_mode: order must be 1 or 2");
    ModeTrajectory traj(state, mode, s);
    return order == 1 ? traj.dy_ds(t) : traj.d2y_ds2(t);
}

TrackingMisfit misfit_and_derivatives(const StateEval& state, const TimeSignal& y_q, double s) {
    state.validate();
    y_q.validate(state.basis.size(), state.T);
    if (!(s > 0.0)) throw std::invalid_argument("misfit_and_derivatives: s must be > 0");

    KahanSum q0, q1, q2;
    for (int j = 0; j < state.basis.size(); ++j) {
        const bool state_active =
            state.y0.coeffs[static_cast<std::size_t>(j)] != 0.0 || !state.f.mode_is_zero(j);
        const bool target_active = !y_q.mode_is_zero(j);
        if (!state_active && !target_active) continue;

        if (!state_active) {
            // y_j == 0 identically: only the target enters the misfit.
            auto breaks = mode_breaks(0.0, 0.0, state.T, nullptr, &y_q);
            q0.add(integrate_segments(
                [&](double t) {
                    const double d = y_q.value(j, t);
                    return d * d;
                },
                breaks));
            continue;
        }

        ModeTrajectory traj(state, j, s);
        auto breaks = mode_breaks(traj.rate(), 0.0, state.T, &state.f, &y_q);
        q0.add(integrate_segments(
            [&](double t) {
                const double d = traj.y(t) - y_q.value(j, t);
                return d * d;
            },
            breaks));
        q1.add(integrate_segments(
            [&](double t) { return (traj.y(t) - y_q.value(j, t)) * traj.dy_ds(t); },
            breaks));
        q2.add(integrate_segments(
            [&](double t) {
                const double d1 = traj.dy_ds(t);
                return d1 * d1 + (traj.y(t) - y_q.value(j, t)) * traj.d2y_ds2(t);
            },
            breaks));
    }
    return {0.5 * q0.value(), q1.value(), q2.value()};
}

double tracking_value(const StateEval& state, const TimeSignal& y_q, double s) {
    state.validate();
    y_q.validate(state.basis.size(), state.T);
    if (!(s > 0.0)) throw std::invalid_argument("tracking_value: s must be > 0");
    KahanSum q0;
    for (int j = 0; j < state.basis.size(); ++j) {
        const bool state_active =
            state.y0.coeffs[static_cast<std::size_t>(j)] != 0.0 || !state.f.mode_is_zero(j);
        const bool target_active = !y_q.mode_is_zero(j);
        if (!state_active && !target_active) continue;
        if (!state_active) {
            auto breaks = mode_breaks(0.0, 0.0, state.T, nullptr, &y_q);
            q0.add(integrate_segments(
                [&](double t) {
                    const double d = y_q.value(j, t);
                    return d * d;
                },
                breaks));
            continue;
        }
        ModeTrajectory traj(state, j, s);
        auto breaks = mode_breaks(traj.rate(), 0.0, state.T, &state.f, &y_q);
        q0.add(integrate_segments(
            [&](double t) {
                const double d = traj.y(t) - y_q.value(j, t);
                return d * d;
            },
            breaks));
    }
    return 0.5 * q0.value();
}

EnergyReport energy_diagnostic(const StateEval& state, double s) {
    state.validate();
    if (!(s > 0.0)) throw std::invalid_argument("energy_diagnostic: s must be > 0");

    EnergyReport report;
    {
        KahanSum rhs;
        for (int j = 0; j < state.basis.size(); ++j)
            rhs.add(state.T * state.f.sup_abs(j) * state.f.sup_abs(j));
        for (int j = 0; j < state.basis.size(); ++j) {
            const double c = state.y0.coeffs[static_cast<std::size_t>(j)];
            rhs.add(lambda_pow_s(state.basis.modes[static_cast<std::size_t>(j)].lambda, s) * c * c);
        }
        report.rhs = rhs.value();
    }

    constexpr int kCells = 64;
    std::vector<KahanSum> totals(kCells);  // lhs candidates at tau_k, k = 1..kCells
    for (int j = 0; j < state.basis.size(); ++j) {
        const bool active =
            state.y0.coeffs[static_cast<std::size_t>(j)] != 0.0 || !state.f.mode_is_zero(j);
        if (!active) continue;
        ModeTrajectory traj(state, j, s);
        const double a = traj.rate();
        KahanSum acc;  // ∫_0^tau (dt y_j)² + a² y_j² accumulated cell by cell
        for (int k = 1; k <= kCells; ++k) {
            const double lo = state.T * (k - 1) / kCells;
            const double hi = state.T * k / kCells;
            auto breaks = mode_breaks(k == 1 ? a : 0.0, lo, hi, &state.f, nullptr);
            acc.add(integrate_segments(
                [&](double t) {
                    const double yt = traj.y(t);
                    const double dty = -a * yt + state.f.value(j, t);
                    return dty * dty + a * a * yt * yt;
                },
                breaks));
            const double y_tau = traj.y(hi);
            totals[static_cast<std::size_t>(k - 1)].add(acc.value() + a * y_tau * y_tau);
        }
    }
    for (const KahanSum& v : totals) report.lhs = std::max(report.lhs, v.value());
    return report;
}

double sensitivity_norm(const StateEval& state, double s, int order) {
    state.validate();
    if (!(s > 0.0)) throw std::invalid_argument("sensitivity_norm: s must be > 0");
    if (order != 1 && order != 2)
        throw std::invalid_argument("sensitivity_norm: order must be 1 or 2");
    KahanSum sum;
    for (int j = 0; j < state.basis.size(); ++j) {
        const bool active =
            state.y0.coeffs[static_cast<std::size_t>(j)] != 0.0 || !state.f.mode_is_zero(j);
        if (!active) continue;
        ModeTrajectory traj(state, j, s);
        auto breaks = mode_breaks(traj.rate(), 0.0, state.T, &state.f, nullptr);
        sum.add(integrate_segments(
            [&](double t) {
                const double d = order == 1 ? traj.dy_ds(t) : traj.d2y_ds2(t);
                return d * d;
            },
            breaks));
    }
    return std::sqrt(sum.value());
}

}  // namespace fracorder
