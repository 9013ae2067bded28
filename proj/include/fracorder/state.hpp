#pragma once

#include "fracorder/basis.hpp"
#include "fracorder/signal.hpp"

namespace fracorder {

/// Data of the evolution problem dy/dt + L^s y = f, y(0) = y0, on [0, T].
struct StateEval {
    EigenBasis basis;
    SpectralField y0;
    TimeSignal f;
    double T = 1.0;

    void validate() const;
};

/// Evaluation handles for one mode at fixed s: the mode solution
/// y(t) = y0 e^{-a t} + ∫_0^t f(tau) e^{-a (t-tau)} dtau with a = lambda^s,
/// and its first two s-derivatives.
class ModeTrajectory {
public:
    ModeTrajectory(const StateEval& state, int mode, double s);

    double y(double t) const;
    double dy_ds(double t) const;
    double d2y_ds2(double t) const;

    double lambda() const { return lambda_; }
    double rate() const { return a_; }

private:
    double w_derivative(double t, int order) const;

    const StateEval* state_;
    int mode_;
    double s_;
    double lambda_;
    double log_lambda_;
    double a_;            // lambda^s
    double y0_;
    bool degenerate_;     // lambda in {0, 1}: s-derivatives vanish identically
};

/// y_mode(t, s) = v + w per the Duhamel representation. `mode` is the
/// position in the basis mode list.
double solve_mode(const StateEval& state, int mode, double s, double t);

/// d^order/ds^order of y_mode(t, s), order 1 or 2.
double sensitivity_mode(const StateEval& state, int mode, double s, double t, int order);

/// Tracking misfit J0(s) = 1/2 Σ_j ∫ (y_j - yQ_j)² dt together with its first
/// two s-derivatives G and H (the penalty is not included here).
struct TrackingMisfit {
    double value = 0.0;  // J0
    double d1 = 0.0;     // G  = Σ_j ∫ (y_j - yQ_j) ∂_s y_j dt
    double d2 = 0.0;     // H  = Σ_j ∫ [(∂_s y_j)² + (y_j - yQ_j) ∂²_ss y_j] dt
};

TrackingMisfit misfit_and_derivatives(const StateEval& state, const TimeSignal& y_q, double s);

/// J0(s) alone, without the derivative integrals (cheap path for scans).
double tracking_value(const StateEval& state, const TimeSignal& y_q, double s);

/// Both sides of the energy estimate: lhs is the per-time energy identity
///   ∫_0^tau |∂_t y|² + ‖y(tau)‖²_{H^{s/2}} + ∫_0^tau ‖y‖²_{H^s}
/// maximized over a tau-grid; rhs = T Σ_j sup|f_j|² + ‖y0‖²_{H^{s/2}}.
struct EnergyReport {
    double lhs = 0.0;
    double rhs = 0.0;
};

EnergyReport energy_diagnostic(const StateEval& state, double s);

/// ‖∂_s^order y(s)‖_{L²(Q)} for order 1 or 2 (Parseval over modes).
double sensitivity_norm(const StateEval& state, double s, int order);

}  // namespace fracorder
