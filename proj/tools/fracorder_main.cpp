#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "fracorder/artifacts.hpp"
#include "fracorder/verify.hpp"
#include "fracorder/version.hpp"

namespace {

namespace fs = std::filesystem;

std::vector<std::string> split_formats(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

int thread_cap() {
    if (const char* env = std::getenv("FRACORDER_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

struct RunOutcome {
    std::string config_path;
    std::string out_dir;
    int exit_code = 1;
    std::string message;
};

RunOutcome run_one(const std::string& config_path, const std::string& out_dir,
                   const std::vector<std::string>& formats, int grid_override,
                   int jmax_override) {
    RunOutcome outcome;
    outcome.config_path = config_path;
    outcome.out_dir = out_dir;
    try {
        fracorder::ScenarioConfig config = fracorder::load_config(config_path);
        if (grid_override > 0) config.optimizer.grid_points = grid_override;
        if (jmax_override > 0) {
            if (config.basis.kind == fracorder::BasisKind::Explicit)
                throw std::invalid_argument("--jmax cannot override an explicit basis");
            config.basis.j_max = jmax_override;
        }
        const fracorder::RunArtifacts artifacts = fracorder::run(config);
        fracorder::emit(artifacts, out_dir, formats);
        outcome.exit_code = fracorder::exit_code_for(artifacts.report);
        std::ostringstream msg;
        msg << "s_star=" << artifacts.report.s_star
            << " J=" << artifacts.report.J_star
            << " verdict=" << fracorder::to_string(artifacts.report.verdict)
            << " -> " << out_dir;
        outcome.message = msg.str();
    } catch (const std::exception& e) {
        outcome.exit_code = 1;
        outcome.message = std::string("error: ") + e.what();
    }
    return outcome;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"fracorder: fractional-order identification for spectral evolution problems"};
    app.set_version_flag("--version", std::string("fracorder ") + fracorder::kVersion);
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "solve scenarios and emit artifacts");
    std::vector<std::string> config_paths;
    std::string out_dir = "out";
    std::string formats_text = "csv,json";
    int grid_override = 0;
    int jmax_override = 0;
    run_cmd->add_option("--config", config_paths, "scenario config JSON (repeatable)")
        ->required()
        ->expected(-1);
    run_cmd->add_option("--out", out_dir, "output directory");
    run_cmd->add_option("--formats", formats_text, "comma list of csv,json");
    run_cmd->add_option("--grid", grid_override, "override optimizer grid points");
    run_cmd->add_option("--jmax", jmax_override, "override basis truncation J_max");

    // scan
    auto* scan_cmd = app.add_subcommand("scan", "emit the cost curve only");
    std::string scan_config;
    std::string scan_out = ".";
    double s_min = 0.1, s_max = 3.0;
    int scan_points = 128;
    scan_cmd->add_option("--config", scan_config, "scenario config JSON")->required();
    scan_cmd->add_option("--s-min", s_min, "lower end of the s range")->required();
    scan_cmd->add_option("--s-max", s_max, "upper end of the s range")->required();
    scan_cmd->add_option("--points", scan_points, "number of log-spaced samples");
    scan_cmd->add_option("--out", scan_out, "output directory");

    // verify
    auto* verify_cmd = app.add_subcommand("verify", "run the built-in oracle/property suite");
    bool quick = false;
    verify_cmd->add_flag("--quick", quick, "reduced sample counts");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            const std::vector<std::string> formats = split_formats(formats_text);
            std::vector<RunOutcome> outcomes(config_paths.size());
            const bool multi = config_paths.size() > 1;
            const int cap = thread_cap();
            std::size_t next = 0;
            while (next < config_paths.size()) {
                const std::size_t batch =
                    std::min<std::size_t>(static_cast<std::size_t>(cap),
                                          config_paths.size() - next);
                std::vector<std::thread> workers;
                for (std::size_t k = 0; k < batch; ++k) {
                    const std::size_t idx = next + k;
                    const std::string dir =
                        multi ? (fs::path(out_dir) / fs::path(config_paths[idx]).stem()).string()
                              : out_dir;
                    workers.emplace_back([&, idx, dir]() {
                        outcomes[idx] = run_one(config_paths[idx], dir, formats, grid_override,
                                                jmax_override);
                    });
                }
                for (std::thread& w : workers) w.join();
                next += batch;
            }
            int exit_code = 0;
            for (const RunOutcome& o : outcomes) {
                std::cout << o.config_path << ": " << o.message << "\n";
                exit_code = std::max(exit_code, o.exit_code);
            }
            return exit_code;
        }
        if (*scan_cmd) {
            const fracorder::ScenarioConfig config = fracorder::load_config(scan_config);
            const auto curve = fracorder::scan_curve(config, s_min, s_max, scan_points);
            for (const std::string& path : fracorder::emit_curve(curve, scan_out))
                std::cout << path << "\n";
            return 0;
        }
        if (*verify_cmd) {
            fracorder::verify::VerifyOptions options;
            options.quick = quick;
            // Resolve our own binary for the determinism criterion; fall back
            // to the in-process path when argv[0] is not resolvable.
            std::error_code ec;
            const fs::path self = fs::canonical(fs::path(argv[0]), ec);
            if (!ec) options.fracorder_exe = self.string();
            const auto results = fracorder::verify::run_criteria(std::cout, options);
            for (const auto& r : results)
                if (!r.pass) return 1;
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
