#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "fracorder/config.hpp"

namespace fracorder::verify {

/// Iterated composite Simpson quadrature, independent of the Gauss-Legendre
/// path used by the solver modules. Doubles the interval count until two
/// successive values agree to rel_tol.
double simpson_oracle(const std::function<double(double)>& f, double a, double b,
                      double rel_tol = 1e-12);

/// (f(x+h) - f(x-h)) / (2h).
double central_diff(const std::function<double(double)>& f, double x, double h);

/// Closed-form tracking gradients of the built-in examples, with the
/// theta-integral evaluated by simpson_oracle:
///   example 1: -2 eps² j0^{-2s} ln(j0) ∫_0^{j0^{2s} T} th e^{-2 th} dth
///   example 2: -2 eps² j0^{-2s} ln(j0) ∫_0^{j0^{2s} T} th (e^{-th}-1) e^{-th} dth
double example1_gradient_oracle(double s, double eps, int j0, double T);
double example2_gradient_oracle(double s, double eps, int j0, double T);

/// ∫_0^T (1+|ln t|^k)² dt via the substitution t = c e^{-x} (smooth
/// integrand); used to assemble the sensitivity-norm envelope constants.
double phi_sq_integral(int k, double T);

/// Envelope constant for s^k ||d^k y/ds^k||_{L2(Q)}: with C_hat_k from the
/// scanned kernel bound constants,
///   C4_k = C_hat_k sqrt(2) sqrt(∫ phi_k² ||y0||² + ∫ psi_k² Σ_j sup|f_j|²).
double sensitivity_envelope(const StateEval& state, int order);

/// Brute-force minimizer of the reduced cost: dense log-spaced scan followed
/// by trisection refinement of the enclosing bracket down to 1e-8.
double dense_scan_minimizer(const Scenario& scenario, const PenaltySpec& penalty,
                            int points = 10000);

/// One built-in scenario of the verification matrix.
struct NamedScenario {
    std::string name;
    int example = 1;  // 1 or 2
    double eps = 0.0;
    int j0 = 1;
    Scenario scenario;
    PenaltySpec penalty;
    std::string penalty_name;
};

/// The full matrix: examples 1-2, eps in {0.1, 0.5}, j0 in {1, 2, 5},
/// penalties exp_over_s and reciprocal(L=4), T = 1.
std::vector<NamedScenario> builtin_scenarios();

struct CriterionResult {
    int id = 0;
    std::string name;
    bool pass = false;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyOptions {
    bool quick = false;            // reduced sample counts for fast smoke runs
    std::string fracorder_exe;     // CLI path for the determinism criterion
    std::string scratch_dir;       // defaults to a fresh temp directory
};

/// Run the ten verification criteria, printing one pass/fail line per
/// criterion to `log`. Returns the individual results.
std::vector<CriterionResult> run_criteria(std::ostream& log, const VerifyOptions& options = {});

}  // namespace fracorder::verify
