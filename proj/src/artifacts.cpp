#include "fracorder/artifacts.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "fracorder/numerics.hpp"
#include "fracorder/version.hpp"

namespace fracorder {

namespace {

namespace fs = std::filesystem;

// Locale-independent 17-significant-digit rendering.
std::string format_number(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_file(const fs::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("emit: cannot open '" + path.string() + "' for writing");
    out << content;
    if (!out) throw std::runtime_error("emit: write failed for '" + path.string() + "'");
}

CostCurveRow to_row(const ReducedCostReport& r) {
    return {r.s, r.J, r.dJ, r.d2J, r.tracking, r.penalty};
}

}  // namespace

RunArtifacts run(const ScenarioConfig& config) {
    const BuiltScenario built = build_scenario(config);
    const GridScan scan = grid_scan(built.scenario, built.penalty, built.optimizer);
    const double start = scan.points[static_cast<std::size_t>(scan.best_index)].s;
    OptimizeReport report = newton_refine(built.scenario, built.penalty, scan.bracket_lo,
                                          scan.bracket_hi, start, built.optimizer);
    report.grid_local_minima = scan.local_minima;

    RunArtifacts artifacts;
    artifacts.report = report;
    artifacts.version = kVersion;
    artifacts.config_echo = config_to_json(config);

    for (const ReducedCostReport& p : scan.points) artifacts.cost_curve.push_back(to_row(p));
    // Refinement near s_star: 16 uniform samples across a bracket_pad-sized
    // window around the optimum.
    const double half = built.optimizer.bracket_pad * (scan.bracket_hi - scan.bracket_lo);
    const double lo = std::max(scan.bracket_lo, report.s_star - half);
    const double hi = std::min(scan.bracket_hi, report.s_star + half);
    for (int i = 0; i < 16; ++i) {
        const double s = lo + (hi - lo) * (i + 0.5) / 16.0;
        artifacts.cost_curve.push_back(to_row(reduced_cost(built.scenario, built.penalty, s)));
    }
    std::sort(artifacts.cost_curve.begin(), artifacts.cost_curve.end(),
              [](const CostCurveRow& a, const CostCurveRow& b) { return a.s < b.s; });

    artifacts.trace = report.iterations;

    for (const SnapshotRequest& req : config.snapshots) {
        Snapshot snap;
        snap.s = req.s ? *req.s : report.s_star;
        snap.t = req.t;
        const EigenBasis& basis = built.scenario.state.basis;
        const int n = config.x_points;
        snap.x.resize(static_cast<std::size_t>(n));
        snap.y.resize(static_cast<std::size_t>(n));
        std::vector<double> mode_values(static_cast<std::size_t>(basis.size()));
        for (int j = 0; j < basis.size(); ++j)
            mode_values[static_cast<std::size_t>(j)] =
                solve_mode(built.scenario.state, j, snap.s, snap.t);
        for (int i = 0; i < n; ++i) {
            const double x = basis.domain_length * i / (n - 1);
            KahanSum sum;
            for (int j = 0; j < basis.size(); ++j)
                sum.add(mode_values[static_cast<std::size_t>(j)] *
                        eval_mode(basis, basis.modes[static_cast<std::size_t>(j)].index, x));
            snap.x[static_cast<std::size_t>(i)] = x;
            snap.y[static_cast<std::size_t>(i)] = sum.value();
        }
        artifacts.snapshots.push_back(std::move(snap));
    }
    return artifacts;
}

std::vector<CostCurveRow> scan_curve(const ScenarioConfig& config, double s_min, double s_max,
                                     int points) {
    if (!(s_min > 0.0) || !(s_max > s_min)) throw std::invalid_argument("scan: need 0 < s_min < s_max");
    if (points < 2) throw std::invalid_argument("scan: need >= 2 points");
    const BuiltScenario built = build_scenario(config);
    if (s_max >= built.penalty.L)
        throw std::invalid_argument("scan: s_max must stay below the penalty domain end");
    std::vector<CostCurveRow> curve;
    curve.reserve(static_cast<std::size_t>(points));
    const double llo = std::log(s_min), lhi = std::log(s_max);
    for (int i = 0; i < points; ++i) {
        const double s = std::exp(llo + (lhi - llo) * i / (points - 1));
        curve.push_back(to_row(reduced_cost(built.scenario, built.penalty, s)));
    }
    return curve;
}

namespace {

std::string curve_csv(const std::vector<CostCurveRow>& curve) {
    std::string text = "s,J,dJ,d2J,tracking,penalty\n";
    for (const CostCurveRow& row : curve) {
        text += format_number(row.s) + ',' + format_number(row.J) + ',' + format_number(row.dJ) +
                ',' + format_number(row.d2J) + ',' + format_number(row.tracking) + ',' +
                format_number(row.penalty) + '\n';
    }
    return text;
}

}  // namespace

std::vector<std::string> emit(const RunArtifacts& artifacts, const std::string& out_dir,
                              const std::vector<std::string>& formats) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    bool csv = false, json_fmt = false;
    for (const std::string& f : formats) {
        if (f == "csv") csv = true;
        else if (f == "json") json_fmt = true;
        else throw std::invalid_argument("emit: unknown format '" + f + "'");
    }

    std::vector<std::string> written;
    if (json_fmt) {
        nlohmann::json summary;
        summary["version"] = artifacts.version;
        summary["config"] = artifacts.config_echo;
        nlohmann::json result;
        result["s_star"] = artifacts.report.s_star;
        result["J_star"] = artifacts.report.J_star;
        result["dJ_star"] = artifacts.report.dJ_star;
        result["d2J_star"] = artifacts.report.d2J_star;
        result["verdict"] = to_string(artifacts.report.verdict);
        result["bracket"] = {artifacts.report.bracket_lo, artifacts.report.bracket_hi};
        result["fallback_used"] = artifacts.report.fallback_used;
        result["refine_steps"] = artifacts.report.refine_steps;
        result["iterations"] = artifacts.report.iterations.size();
        result["grid_local_minima"] = artifacts.report.grid_local_minima;
        summary["result"] = result;
        const fs::path path = dir / "summary.json";
        write_file(path, summary.dump(2) + "\n");
        written.push_back(path.string());
    }
    if (csv) {
        const fs::path curve_path = dir / "cost_curve.csv";
        write_file(curve_path, curve_csv(artifacts.cost_curve));
        written.push_back(curve_path.string());

        std::string trace = "iter,s,J,dJ,d2J\n";
        int k = 0;
        for (const IterationRecord& it : artifacts.trace) {
            trace += std::to_string(k++) + ',' + format_number(it.s) + ',' + format_number(it.J) +
                     ',' + format_number(it.dJ) + ',' + format_number(it.d2J) + '\n';
        }
        const fs::path trace_path = dir / "trace.csv";
        write_file(trace_path, trace);
        written.push_back(trace_path.string());

        if (!artifacts.snapshots.empty()) {
            const fs::path snap_dir = dir / "snapshots";
            fs::create_directories(snap_dir);
            int idx = 0;
            for (const Snapshot& snap : artifacts.snapshots) {
                std::string text = "s,t,x,y\n";
                for (std::size_t i = 0; i < snap.x.size(); ++i) {
                    text += format_number(snap.s) + ',' + format_number(snap.t) + ',' +
                            format_number(snap.x[i]) + ',' + format_number(snap.y[i]) + '\n';
                }
                char name[32];
                std::snprintf(name, sizeof(name), "snapshot_%03d.csv", idx++);
                const fs::path path = snap_dir / name;
                write_file(path, text);
                written.push_back(path.string());
            }
        }
    }
    return written;
}

std::vector<std::string> emit_curve(const std::vector<CostCurveRow>& curve,
                                    const std::string& out_dir) {
    const fs::path dir(out_dir);
    fs::create_directories(dir);
    const fs::path path = dir / "cost_curve.csv";
    write_file(path, curve_csv(curve));
    return {path.string()};
}

int exit_code_for(const OptimizeReport& report) {
    if (report.fallback_used || report.verdict == Optimality::NotStationary) return 3;
    return report.verdict == Optimality::SecondOrderSufficient ? 0 : 2;
}

}  // namespace fracorder
