#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

#include <unistd.h>

#include "fracorder/artifacts.hpp"
#include "fracorder/kernel.hpp"
#include "fracorder/verify.hpp"

namespace fracorder::verify {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", x);
    return buf;
}

struct Sampler {
    std::mt19937_64 rng{20240801};
    std::uniform_real_distribution<double> u{0.0, 1.0};
    // (lambda, t, s) in [0,100] x (0,10] x (0.05, 4]
    std::array<double, 3> next() {
        const double lam = 100.0 * u(rng);
        const double t = 10.0 * (1.0 - u(rng));
        const double s = 4.0 - 3.95 * u(rng);
        return {lam, t, s};
    }
};

CriterionResult c1_kernel_fd(const VerifyOptions& options) {
    CriterionResult res{1, "kernel-derivative-fidelity", false, "", 0.0};
    const int n = options.quick ? 1000 : 10000;
    const double h = 1e-5;
    Sampler sampler;
    double worst = 0.0;
    bool ok = true;
    const auto check_point = [&](double lam, double t, double s) {
        const KernelEval e = eval_kernel(lam, t, s, 3);
        const double fd1 = central_diff(
            [&](double x) { return eval_kernel(lam, t, x, 0).value; }, s, h);
        const double fd2 = central_diff(
            [&](double x) { return eval_kernel(lam, t, x, 1).d1; }, s, h);
        const double fd3 = central_diff(
            [&](double x) { return eval_kernel(lam, t, x, 2).d2; }, s, h);
        const double r1 = std::abs(fd1 - e.d1) / std::max(1e-7, 1e-5 * std::abs(e.d1));
        const double r2 = std::abs(fd2 - e.d2) / std::max(1e-7, 1e-5 * std::abs(e.d2));
        const double r3 = std::abs(fd3 - e.d3) / std::max(1e-7, 1e-5 * std::abs(e.d3));
        worst = std::max({worst, r1, r2, r3});
        if (r1 > 1.0 || r2 > 1.0 || r3 > 1.0) ok = false;
    };
    check_point(0.0, 1.0, 1.0);
    check_point(1.0, 2.0, 0.7);
    for (int i = 0; i < n; ++i) {
        const auto [lam, t, s] = sampler.next();
        check_point(lam, t, s);
    }
    res.pass = ok;
    res.detail = "samples=" + std::to_string(n + 2) + " max err/tol=" + fmt(worst);
    return res;
}

CriterionResult c2_derivative_bounds(const VerifyOptions& options) {
    CriterionResult res{2, "kernel-derivative-bound-envelopes", false, "", 0.0};
    const int n = options.quick ? 1000 : 10000;
    Sampler sampler;
    int failures = 0;
    for (int i = 0; i < n; ++i) {
        auto [lam, t, s] = sampler.next();
        if (lam == 0.0) lam = 1e-9;  // the envelopes are stated for lambda > 0
        if (!check_bounds(lam, t, s)) ++failures;
    }
    const BoundConstants& k = bound_constants();
    res.pass = failures == 0;
    res.detail = "samples=" + std::to_string(n) + " violations=" + std::to_string(failures) +
                 " C1=" + fmt(k.c_hat1) + " C2=" + fmt(k.c_hat2) + " C3=" + fmt(k.c_hat3);
    return res;
}

std::vector<double> log_grid(double lo, double hi, int n) {
    std::vector<double> out;
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) out.push_back(std::exp(llo + (lhi - llo) * i / (n - 1)));
    return out;
}

CriterionResult c3_cost_derivatives(const VerifyOptions& options) {
    CriterionResult res{3, "reduced-cost-derivative-consistency", false, "", 0.0};
    const auto scenarios = builtin_scenarios();
    const auto grid = log_grid(0.1, 3.0, options.quick ? 6 : 16);
    const double h = 1e-4;
    double worst = 0.0;
    bool ok = true;
    for (std::size_t k = 0; k < scenarios.size(); ++k) {
        if (options.quick && k % 3 != 0) continue;
        const NamedScenario& sc = scenarios[k];
        for (double s : grid) {
            const ReducedCostReport mid = reduced_cost(sc.scenario, sc.penalty, s);
            const ReducedCostReport lo = reduced_cost(sc.scenario, sc.penalty, s - h);
            const ReducedCostReport hi = reduced_cost(sc.scenario, sc.penalty, s + h);
            const double fd_j = (hi.J - lo.J) / (2.0 * h);
            const double fd_dj = (hi.dJ - lo.dJ) / (2.0 * h);
            const double r1 = std::abs(fd_j - mid.dJ) / std::max(1e-6, 1e-4 * std::abs(mid.dJ));
            const double r2 =
                std::abs(fd_dj - mid.d2J) / std::max(1e-6, 1e-4 * std::abs(mid.d2J));
            worst = std::max({worst, r1, r2});
            if (r1 > 1.0 || r2 > 1.0) ok = false;
        }
    }
    res.pass = ok;
    res.detail = "max err/tol=" + fmt(worst);
    return res;
}

CriterionResult c4_closed_forms(const VerifyOptions& options) {
    CriterionResult res{4, "example-closed-form-gradients", false, "", 0.0};
    const auto grid = log_grid(0.1, 3.0, options.quick ? 6 : 16);
    double worst = 0.0;
    bool ok = true;
    for (int example : {1, 2}) {
        for (double eps : {0.1, 0.5}) {
            for (int j0 : {1, 2, 5}) {
                const Scenario scenario = example == 1 ? example1_scenario(eps, j0, 1.0)
                                                        : example2_scenario(eps, j0, 1.0);
                for (double s : grid) {
                    const double g =
                        misfit_and_derivatives(scenario.state, scenario.y_q, s).d1;
                    const double f = example == 1 ? example1_gradient_oracle(s, eps, j0, 1.0)
                                                   : example2_gradient_oracle(s, eps, j0, 1.0);
                    const double err = std::abs(g - f);
                    const double tol = 1e-8 * std::abs(f) + 1e-300;
                    worst = std::max(worst, err / tol);
                    if (err > tol) ok = false;
                }
            }
        }
    }
    res.pass = ok;
    res.detail = "max err/tol=" + fmt(worst);
    return res;
}

std::map<std::string, double> penalty_only_minimizers(const VerifyOptions&) {
    // s0 computed by the same machinery at eps = 0.
    std::map<std::string, double> out;
    for (int pen : {0, 1}) {
        const PenaltySpec spec =
            pen == 0 ? PenaltySpec::exp_over_s() : PenaltySpec::reciprocal(4.0);
        const Scenario scenario = example1_scenario(0.0, 2, 1.0);
        out[pen == 0 ? "exp_over_s" : "reciprocal4"] = solve(scenario, spec).s_star;
    }
    return out;
}

CriterionResult c5_ordering(const VerifyOptions& options) {
    CriterionResult res{5, "optimum-ordering-vs-penalty-minimizer", false, "", 0.0};
    const auto s0 = penalty_only_minimizers(options);
    double min_margin = std::numeric_limits<double>::infinity();
    double worst_degenerate = 0.0;
    bool ok = true;
    for (const NamedScenario& sc : builtin_scenarios()) {
        const double s_bar = solve(sc.scenario, sc.penalty).s_star;
        const double base = s0.at(sc.penalty_name);
        if (sc.j0 == 1) {
            // lambda_{j0} = 1: the tracking term is s-independent, so the
            // optimum coincides with the penalty minimizer exactly.
            worst_degenerate = std::max(worst_degenerate, std::abs(s_bar - base));
            if (std::abs(s_bar - base) > 1e-8) ok = false;
            continue;
        }
        const double margin = sc.example == 1 ? s_bar - base : base - s_bar;
        min_margin = std::min(min_margin, margin);
        if (margin < 1e-6) ok = false;
    }
    res.pass = ok;
    res.detail = "min strict margin=" + fmt(min_margin) +
                 " degenerate |s-s0|=" + fmt(worst_degenerate);
    return res;
}

CriterionResult c6_degenerate(const VerifyOptions&) {
    CriterionResult res{6, "degenerate-epsilon-reduction", false, "", 0.0};
    double worst = 0.0;
    for (int pen : {0, 1}) {
        const PenaltySpec spec =
            pen == 0 ? PenaltySpec::exp_over_s() : PenaltySpec::reciprocal(4.0);
        const double s0 = pen == 0 ? 1.0 : 2.0;  // phi'(s0) = 0 analytically
        for (int example : {1, 2}) {
            const Scenario scenario = example == 1 ? example1_scenario(0.0, 2, 1.0)
                                                    : example2_scenario(0.0, 2, 1.0);
            const double s_bar = solve(scenario, spec).s_star;
            worst = std::max(worst, std::abs(s_bar - s0));
        }
    }
    res.pass = worst <= 1e-8;
    res.detail = "max |s_star - s0|=" + fmt(worst);
    return res;
}

CriterionResult c7_optimizer_oracle(const VerifyOptions& options) {
    CriterionResult res{7, "optimizer-vs-dense-scan-oracle", false, "", 0.0};
    const int points = options.quick ? 2000 : 10000;
    double worst_ds = 0.0;
    int worst_steps = 0;
    bool ok = true;
    for (const NamedScenario& sc : builtin_scenarios()) {
        const OptimizeReport report = solve(sc.scenario, sc.penalty);
        const double oracle = dense_scan_minimizer(sc.scenario, sc.penalty, points);
        const double ds = std::abs(report.s_star - oracle);
        worst_ds = std::max(worst_ds, ds);
        worst_steps = std::max(worst_steps, report.refine_steps);
        const bool converged =
            std::abs(report.dJ_star) <= 1e-10 * (1.0 + std::abs(report.J_star));
        if (ds > 1e-6 || report.refine_steps > 15 || !converged) ok = false;
    }
    res.pass = ok;
    res.detail = "max |s-oracle|=" + fmt(worst_ds) +
                 " max newton steps=" + std::to_string(worst_steps);
    return res;
}

CriterionResult c8_energy(const VerifyOptions&) {
    CriterionResult res{8, "energy-estimate", false, "", 0.0};
    double worst_ratio = 0.0;
    bool ok = true;
    for (int example : {1, 2}) {
        for (double eps : {0.1, 0.5}) {
            for (int j0 : {1, 2, 5}) {
                const Scenario scenario = example == 1 ? example1_scenario(eps, j0, 1.0)
                                                        : example2_scenario(eps, j0, 1.0);
                for (double s : {0.3, 0.7, 1.0, 1.6, 2.5}) {
                    const EnergyReport e = energy_diagnostic(scenario.state, s);
                    const double ratio = e.rhs > 0.0 ? e.lhs / e.rhs : 0.0;
                    worst_ratio = std::max(worst_ratio, ratio);
                    if (e.lhs > e.rhs * (1.0 + 1e-8)) ok = false;
                }
            }
        }
    }
    res.pass = ok;
    res.detail = "max lhs/rhs=" + fmt(worst_ratio);
    return res;
}

CriterionResult c9_sensitivity_norms(const VerifyOptions& options) {
    CriterionResult res{9, "sensitivity-norm-envelopes", false, "", 0.0};
    const auto grid = log_grid(0.05, 4.0, options.quick ? 8 : 24);
    double worst = 0.0;
    bool ok = true;
    for (int example : {1, 2}) {
        for (double eps : {0.1, 0.5}) {
            for (int j0 : {1, 2, 5}) {
                const Scenario scenario = example == 1 ? example1_scenario(eps, j0, 1.0)
                                                        : example2_scenario(eps, j0, 1.0);
                const double env1 = sensitivity_envelope(scenario.state, 1);
                const double env2 = sensitivity_envelope(scenario.state, 2);
                for (double s : grid) {
                    const double g1 = s * sensitivity_norm(scenario.state, s, 1);
                    const double g2 = s * s * sensitivity_norm(scenario.state, s, 2);
                    worst = std::max({worst, g1 / env1, g2 / env2});
                    if (g1 > env1 || g2 > env2) ok = false;
                }
            }
        }
    }
    res.pass = ok;
    res.detail = "max scaled-norm/envelope=" + fmt(worst);
    return res;
}

std::string read_all(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

bool compare_dirs(const fs::path& a, const fs::path& b, std::string& detail) {
    std::vector<std::string> rel_a, rel_b;
    for (const auto& entry : fs::recursive_directory_iterator(a))
        if (entry.is_regular_file()) rel_a.push_back(fs::relative(entry.path(), a).string());
    for (const auto& entry : fs::recursive_directory_iterator(b))
        if (entry.is_regular_file()) rel_b.push_back(fs::relative(entry.path(), b).string());
    std::sort(rel_a.begin(), rel_a.end());
    std::sort(rel_b.begin(), rel_b.end());
    if (rel_a != rel_b) {
        detail = "file sets differ";
        return false;
    }
    for (const std::string& rel : rel_a) {
        if (read_all(a / rel) != read_all(b / rel)) {
            detail = "byte mismatch in " + rel;
            return false;
        }
    }
    detail = std::to_string(rel_a.size()) + " files byte-identical";
    return true;
}

CriterionResult c10_determinism(const VerifyOptions& options) {
    CriterionResult res{10, "artifact-determinism", false, "", 0.0};
    fs::path scratch =
        options.scratch_dir.empty()
            ? fs::temp_directory_path() /
                  ("fracorder_verify_" + std::to_string(::getpid()))
            : fs::path(options.scratch_dir);
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    const fs::path cfg_path = scratch / "determinism.json";
    {
        nlohmann::json cfg;
        cfg["y0"] = {{"preset", "example1"}, {"epsilon", 0.5}, {"j0", 2}};
        cfg["penalty"] = {{"kind", "exp_over_s"}};
        cfg["optimizer"] = {{"grid_points", 32}};
        cfg["outputs"] = {"summary", "cost_curve", "trace", "snapshots"};
        cfg["snapshots"] = {{{"t", 0.5}}, {{"s", 1.0}, {"t", 1.0}}};
        std::ofstream out(cfg_path);
        out << cfg.dump(2) << "\n";
    }

    const fs::path dir_a = scratch / "run_a";
    const fs::path dir_b = scratch / "run_b";
    bool ran_cli = false;
    if (!options.fracorder_exe.empty() && fs::exists(options.fracorder_exe)) {
        const auto invoke = [&](const fs::path& out_dir) {
            const std::string cmd = "'" + options.fracorder_exe + "' run --config '" +
                                    cfg_path.string() + "' --out '" + out_dir.string() +
                                    "' > /dev/null 2>&1";
            return std::system(cmd.c_str());
        };
        const int rc_a = invoke(dir_a);
        const int rc_b = invoke(dir_b);
        ran_cli = true;
        if (rc_a != 0 || rc_b != 0) {
            res.detail = "fracorder run exited nonzero";
            fs::remove_all(scratch);
            return res;
        }
    } else {
        const ScenarioConfig config = load_config(cfg_path.string());
        emit(run(config), dir_a.string());
        emit(run(config), dir_b.string());
    }

    std::string detail;
    res.pass = compare_dirs(dir_a, dir_b, detail);
    res.detail = (ran_cli ? "cli runs: " : "library runs: ") + detail;
    fs::remove_all(scratch);
    return res;
}

}  // namespace

std::vector<CriterionResult> run_criteria(std::ostream& log, const VerifyOptions& options) {
    using Runner = CriterionResult (*)(const VerifyOptions&);
    const Runner runners[] = {c1_kernel_fd,    c2_derivative_bounds, c3_cost_derivatives,
                              c4_closed_forms, c5_ordering,     c6_degenerate,
                              c7_optimizer_oracle, c8_energy,   c9_sensitivity_norms,
                              c10_determinism};
    std::vector<CriterionResult> results;
    for (Runner runner : runners) {
        const auto start = std::chrono::steady_clock::now();
        CriterionResult res = runner(options);
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        char line[256];
        std::snprintf(line, sizeof(line), "%s  criterion %2d  %-40s %6.2fs  %s\n",
                      res.pass ? "PASS" : "FAIL", res.id, res.name.c_str(), res.seconds,
                      res.detail.c_str());
        log << line;
        log.flush();
        results.push_back(std::move(res));
    }
    return results;
}

}  // namespace fracorder::verify
