#pragma once

namespace fracorder {

/// Value and s-derivatives of E(s) = exp(-lambda^s * t) at one (lambda, t, s).
/// Fields above the requested order are left at zero.
struct KernelEval {
    double value = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
    double d3 = 0.0;
};

/// Envelope constants for the derivative bounds: with r = lambda^s * t,
///   M1 = sup r e^{-r} |ln r|,            M2 = sup r e^{-r},
///   M3 = sup 4 r e^{-r} |r-1| ln²r,      M4 = sup 4 r e^{-r} |r-1|,
///   M5 = sup 8 r e^{-r} |3r-1-r²| |ln r|³, M6 = sup 8 r e^{-r} |3r-1-r²|,
/// and C_hat1 = M1+M2, C_hat2 = M3+M4, C_hat3 = M5+M6, C_hat0 = 1.
struct BoundConstants {
    double m1, m2, m3, m4, m5, m6;
    double c_hat0, c_hat1, c_hat2, c_hat3;
};

/// Evaluate E and its first `order` s-derivatives (order in 0..3).
/// lambda = 0 gives value 1 with zero derivatives; lambda = 1 gives
/// value e^{-t} with zero derivatives (ln lambda = 0 in both limits).
KernelEval eval_kernel(double lambda, double t, double s, int order = 3);

/// lambda^s computed as exp(s ln lambda), clamped so downstream products stay
/// finite; 0^s = 0 for s > 0.
double lambda_pow_s(double lambda, double s);

/// Suprema M1..M6 found by dense logarithmic scan with golden-section
/// refinement; computed once and cached.
const BoundConstants& bound_constants();

/// True iff |E^(k)| <= s^{-k} C_hat_k (1 + |ln t|^k) holds for k = 1..3 at
/// the point. Rejects t = 0 (|ln t| undefined).
bool check_bounds(double lambda, double t, double s);

}  // namespace fracorder
