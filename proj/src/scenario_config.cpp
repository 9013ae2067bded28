#include "fracorder/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fracorder {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw std::invalid_argument("config: field '" + field + "': " + what);
}

void expect_keys(const json& obj, const std::string& ctx,
                 std::initializer_list<const char*> allowed) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        bool ok = false;
        for (const char* a : allowed)
            if (key == a) ok = true;
        if (!ok) fail(ctx.empty() ? key : ctx + "." + key, "unknown key");
    }
}

double get_number(const json& obj, const std::string& ctx, const char* key, double fallback,
                  bool required = false) {
    if (!obj.contains(key)) {
        if (required) fail(ctx + "." + key, "missing");
        return fallback;
    }
    if (!obj[key].is_number()) fail(ctx + "." + key, "must be a number");
    return obj[key].get<double>();
}

int get_int(const json& obj, const std::string& ctx, const char* key, int fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number_integer()) fail(ctx + "." + key, "must be an integer");
    return obj[key].get<int>();
}

std::map<int, double> parse_mode_map(const json& obj, const std::string& ctx) {
    if (!obj.is_object()) fail(ctx, "must be an object of mode->value");
    std::map<int, double> out;
    for (const auto& [key, value] : obj.items()) {
        int mode = 0;
        try {
            std::size_t used = 0;
            mode = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            fail(ctx + "." + key, "mode keys must be integers");
        }
        if (mode < 0) fail(ctx + "." + key, "mode index must be >= 0");
        if (!value.is_number()) fail(ctx + "." + key, "must be a number");
        out[mode] = value.get<double>();
    }
    return out;
}

SignalConfig parse_signal(const json& obj, const std::string& ctx) {
    SignalConfig sig;
    if (!obj.is_object()) fail(ctx, "must be an object");
    expect_keys(obj, ctx, {"kind", "coeffs", "grid", "values"});
    if (!obj.contains("kind") || !obj["kind"].is_string()) fail(ctx + ".kind", "missing or not a string");
    const std::string kind = obj["kind"].get<std::string>();
    if (kind == "zero") {
        sig.kind = SignalKind::Zero;
        if (obj.contains("coeffs") || obj.contains("grid") || obj.contains("values"))
            fail(ctx, "zero signal takes no data");
    } else if (kind == "constant") {
        sig.kind = SignalKind::ConstantInTime;
        if (!obj.contains("coeffs")) fail(ctx + ".coeffs", "missing");
        sig.coeffs = parse_mode_map(obj["coeffs"], ctx + ".coeffs");
        if (obj.contains("grid") || obj.contains("values"))
            fail(ctx, "constant signal takes only coeffs");
    } else if (kind == "sampled") {
        sig.kind = SignalKind::Sampled;
        if (!obj.contains("grid") || !obj["grid"].is_array()) fail(ctx + ".grid", "missing array");
        for (const auto& v : obj["grid"]) {
            if (!v.is_number()) fail(ctx + ".grid", "entries must be numbers");
            sig.grid.push_back(v.get<double>());
        }
        if (!obj.contains("values") || !obj["values"].is_object())
            fail(ctx + ".values", "missing object");
        for (const auto& [key, row] : obj["values"].items()) {
            int mode = 0;
            try {
                mode = std::stoi(key);
            } catch (const std::exception&) {
                fail(ctx + ".values." + key, "mode keys must be integers");
            }
            if (!row.is_array()) fail(ctx + ".values." + key, "must be an array");
            std::vector<double> vals;
            for (const auto& v : row) {
                if (!v.is_number()) fail(ctx + ".values." + key, "entries must be numbers");
                vals.push_back(v.get<double>());
            }
            sig.values[mode] = std::move(vals);
        }
        if (obj.contains("coeffs")) fail(ctx, "sampled signal takes grid/values, not coeffs");
    } else {
        fail(ctx + ".kind", "must be zero, constant or sampled");
    }
    return sig;
}

json signal_to_json(const SignalConfig& sig) {
    json out;
    switch (sig.kind) {
        case SignalKind::Zero:
            out["kind"] = "zero";
            break;
        case SignalKind::ConstantInTime: {
            out["kind"] = "constant";
            json coeffs = json::object();
            for (const auto& [mode, c] : sig.coeffs) coeffs[std::to_string(mode)] = c;
            out["coeffs"] = coeffs;
            break;
        }
        case SignalKind::Sampled: {
            out["kind"] = "sampled";
            out["grid"] = sig.grid;
            json values = json::object();
            for (const auto& [mode, row] : sig.values) values[std::to_string(mode)] = row;
            out["values"] = values;
            break;
        }
    }
    return out;
}

BasisKind parse_basis_kind(const std::string& text, const std::string& ctx) {
    if (text == "dirichlet1d") return BasisKind::Dirichlet1D;
    if (text == "neumann1d") return BasisKind::Neumann1D;
    if (text == "explicit") return BasisKind::Explicit;
    fail(ctx, "must be dirichlet1d, neumann1d or explicit");
}

ScenarioConfig parse_explicit_config(const json& j) {
    ScenarioConfig config;
    expect_keys(j, "",
                {"basis", "T", "y0", "f", "y_q", "penalty", "optimizer", "outputs", "snapshots",
                 "x_points"});

    if (!j.contains("basis") || !j["basis"].is_object()) fail("basis", "missing object");
    const json& jb = j["basis"];
    expect_keys(jb, "basis", {"kind", "domain_length", "J_max", "eigenvalues"});
    if (!jb.contains("kind") || !jb["kind"].is_string()) fail("basis.kind", "missing string");
    config.basis.kind = parse_basis_kind(jb["kind"].get<std::string>(), "basis.kind");
    config.basis.domain_length = get_number(jb, "basis", "domain_length", M_PI);
    if (!(config.basis.domain_length > 0.0)) fail("basis.domain_length", "must be positive");
    if (config.basis.kind == BasisKind::Explicit) {
        if (!jb.contains("eigenvalues") || !jb["eigenvalues"].is_array())
            fail("basis.eigenvalues", "explicit basis needs an eigenvalue array");
        for (const auto& v : jb["eigenvalues"]) {
            if (!v.is_number()) fail("basis.eigenvalues", "entries must be numbers");
            config.basis.eigenvalues.push_back(v.get<double>());
        }
        config.basis.j_max = static_cast<int>(config.basis.eigenvalues.size());
        if (jb.contains("J_max") &&
            get_int(jb, "basis", "J_max", config.basis.j_max) != config.basis.j_max)
            fail("basis.J_max", "conflicts with eigenvalue count");
    } else {
        if (jb.contains("eigenvalues")) fail("basis.eigenvalues", "only valid for explicit kind");
        config.basis.j_max = get_int(jb, "basis", "J_max", 8);
        if (config.basis.j_max < 1) fail("basis.J_max", "must be >= 1");
    }

    config.T = get_number(j, "", "T", 1.0);
    if (!(config.T > 0.0)) fail("T", "must be positive");

    if (!j.contains("y0") || !j["y0"].is_object()) fail("y0", "missing object");
    expect_keys(j["y0"], "y0", {"coeffs"});
    if (!j["y0"].contains("coeffs")) fail("y0.coeffs", "missing");
    config.y0_coeffs = parse_mode_map(j["y0"]["coeffs"], "y0.coeffs");

    config.f = j.contains("f") ? parse_signal(j["f"], "f") : SignalConfig{};
    config.y_q = j.contains("y_q") ? parse_signal(j["y_q"], "y_q") : SignalConfig{};

    if (j.contains("penalty")) {
        const json& jp = j["penalty"];
        if (!jp.is_object()) fail("penalty", "must be an object");
        expect_keys(jp, "penalty", {"kind", "L"});
        if (!jp.contains("kind") || !jp["kind"].is_string()) fail("penalty.kind", "missing string");
        const std::string kind = jp["kind"].get<std::string>();
        if (kind == "reciprocal") {
            config.penalty.kind = PenaltyKind::Reciprocal;
            config.penalty.L = get_number(jp, "penalty", "L", 0.0, true);
            if (!(config.penalty.L > 0.0)) fail("penalty.L", "must be positive");
        } else if (kind == "exp_over_s") {
            config.penalty.kind = PenaltyKind::ExpOverS;
            config.penalty.L = std::numeric_limits<double>::infinity();
            if (jp.contains("L")) fail("penalty.L", "exp_over_s has L = infinity");
        } else {
            fail("penalty.kind", "must be reciprocal or exp_over_s");
        }
    }

    if (j.contains("optimizer")) {
        const json& jo = j["optimizer"];
        if (!jo.is_object()) fail("optimizer", "must be an object");
        expect_keys(jo, "optimizer",
                    {"grid_points", "newton_tol", "max_newton_iters", "bracket_pad"});
        config.optimizer.grid_points = get_int(jo, "optimizer", "grid_points", 64);
        config.optimizer.newton_tol = get_number(jo, "optimizer", "newton_tol", 1e-10);
        config.optimizer.max_newton_iters = get_int(jo, "optimizer", "max_newton_iters", 50);
        config.optimizer.bracket_pad = get_number(jo, "optimizer", "bracket_pad", 0.05);
        try {
            config.optimizer.validate();
        } catch (const std::exception& e) {
            fail("optimizer", e.what());
        }
    }

    if (j.contains("outputs")) {
        if (!j["outputs"].is_array()) fail("outputs", "must be an array of strings");
        config.outputs.clear();
        for (const auto& v : j["outputs"]) {
            if (!v.is_string()) fail("outputs", "entries must be strings");
            const std::string name = v.get<std::string>();
            if (name != "summary" && name != "cost_curve" && name != "trace" &&
                name != "snapshots")
                fail("outputs", "unknown artifact '" + name + "'");
            config.outputs.push_back(name);
        }
    }

    if (j.contains("snapshots")) {
        if (!j["snapshots"].is_array()) fail("snapshots", "must be an array");
        for (const auto& req : j["snapshots"]) {
            if (!req.is_object()) fail("snapshots", "entries must be objects");
            expect_keys(req, "snapshots", {"s", "t"});
            SnapshotRequest snap;
            if (req.contains("s")) snap.s = get_number(req, "snapshots", "s", 0.0, true);
            snap.t = get_number(req, "snapshots", "t", 0.0, true);
            config.snapshots.push_back(snap);
        }
    }

    config.x_points = get_int(j, "", "x_points", 512);
    if (config.x_points < 2) fail("x_points", "must be >= 2");
    return config;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("config: top level must be an object");
    if (j.contains("y0") && j["y0"].is_object() && j["y0"].contains("preset")) {
        const json& jy = j["y0"];
        expect_keys(jy, "y0", {"preset", "epsilon", "j0"});
        if (!jy["preset"].is_string()) fail("y0.preset", "must be a string");
        const std::string preset = jy["preset"].get<std::string>();
        const double eps = get_number(jy, "y0", "epsilon", 0.0, true);
        const int j0 = get_int(jy, "y0", "j0", -1);
        if (j0 < 0) fail("y0.j0", "missing or negative");

        expect_keys(j, "", {"basis", "T", "y0", "penalty", "optimizer", "outputs", "snapshots",
                            "x_points"});
        PenaltyConfig penalty;
        int j_max = -1;
        double T = get_number(j, "", "T", 1.0);
        if (j.contains("basis")) {
            const json& jb = j["basis"];
            expect_keys(jb, "basis", {"kind", "domain_length", "J_max"});
            j_max = get_int(jb, "basis", "J_max", -1);
            // kind/domain_length, when present, must match the preset's values.
            if (jb.contains("kind")) {
                const std::string kind = jb["kind"].get<std::string>();
                const std::string want = preset == "example1" ? "neumann1d" : "dirichlet1d";
                if (kind != want) fail("basis.kind", "conflicts with preset " + preset);
            }
            if (jb.contains("domain_length") &&
                std::abs(get_number(jb, "basis", "domain_length", M_PI) - M_PI) > 1e-12)
                fail("basis.domain_length", "presets use the interval (0, pi)");
        }
        ScenarioConfig config = example_config(preset, eps, j0, penalty, T, j_max);
        // Re-apply the remaining explicit fields through the strict parser.
        json canonical = config_to_json(config);
        for (const char* key : {"penalty", "optimizer", "outputs", "snapshots", "x_points"})
            if (j.contains(key)) canonical[key] = j[key];
        if (j.contains("T")) canonical["T"] = j["T"];
        return parse_explicit_config(canonical);
    }
    return parse_explicit_config(j);
}

ScenarioConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        for (std::size_t i = 0; i < std::min(e.byte, text.size()); ++i)
            if (text[i] == '\n') ++line;
        throw std::runtime_error("config: parse error in '" + path + "' near line " +
                                 std::to_string(line) + ": " + e.what());
    }
    return parse_config(j);
}

json config_to_json(const ScenarioConfig& config) {
    json j;
    json jb;
    jb["kind"] = to_string(config.basis.kind);
    jb["domain_length"] = config.basis.domain_length;
    jb["J_max"] = config.basis.j_max;
    if (config.basis.kind == BasisKind::Explicit) jb["eigenvalues"] = config.basis.eigenvalues;
    j["basis"] = jb;
    j["T"] = config.T;
    json y0_coeffs = json::object();
    for (const auto& [mode, c] : config.y0_coeffs) y0_coeffs[std::to_string(mode)] = c;
    j["y0"] = json{{"coeffs", y0_coeffs}};
    j["f"] = signal_to_json(config.f);
    j["y_q"] = signal_to_json(config.y_q);
    json jp;
    jp["kind"] = config.penalty.kind == PenaltyKind::Reciprocal ? "reciprocal" : "exp_over_s";
    if (config.penalty.kind == PenaltyKind::Reciprocal) jp["L"] = config.penalty.L;
    j["penalty"] = jp;
    j["optimizer"] = json{{"grid_points", config.optimizer.grid_points},
                          {"newton_tol", config.optimizer.newton_tol},
                          {"max_newton_iters", config.optimizer.max_newton_iters},
                          {"bracket_pad", config.optimizer.bracket_pad}};
    j["outputs"] = config.outputs;
    if (!config.snapshots.empty()) {
        json snaps = json::array();
        for (const SnapshotRequest& snap : config.snapshots) {
            json one;
            if (snap.s) one["s"] = *snap.s;
            one["t"] = snap.t;
            snaps.push_back(one);
        }
        j["snapshots"] = snaps;
    }
    j["x_points"] = config.x_points;
    return j;
}

namespace {

TimeSignal signal_from_config(const SignalConfig& sig, const EigenBasis& basis,
                              const std::string& field) {
    switch (sig.kind) {
        case SignalKind::Zero: return TimeSignal::zero();
        case SignalKind::ConstantInTime: {
            std::vector<double> per_mode(static_cast<std::size_t>(basis.size()), 0.0);
            for (const auto& [mode, c] : sig.coeffs) {
                const int pos = mode_position(basis, mode);
                if (pos < 0)
                    fail(field, "mode index " + std::to_string(mode) + " not in basis (J_max=" +
                                    std::to_string(basis.size()) + ")");
                per_mode[static_cast<std::size_t>(pos)] = c;
            }
            return TimeSignal::constant(std::move(per_mode));
        }
        case SignalKind::Sampled: break;
    }
    std::vector<std::vector<double>> rows(static_cast<std::size_t>(basis.size()),
                                          std::vector<double>(sig.grid.size(), 0.0));
    for (const auto& [mode, row] : sig.values) {
        const int pos = mode_position(basis, mode);
        if (pos < 0)
            fail(field, "mode index " + std::to_string(mode) + " not in basis (J_max=" +
                            std::to_string(basis.size()) + ")");
        rows[static_cast<std::size_t>(pos)] = row;
    }
    return TimeSignal::sampled(sig.grid, std::move(rows));
}

}  // namespace

BuiltScenario build_scenario(const ScenarioConfig& config) {
    BuiltScenario built;
    EigenBasis basis = config.basis.kind == BasisKind::Explicit
                           ? build_explicit_basis(config.basis.eigenvalues)
                           : build_basis(config.basis.kind, config.basis.domain_length,
                                         config.basis.j_max);

    SpectralField y0;
    y0.coeffs.assign(static_cast<std::size_t>(basis.size()), 0.0);
    for (const auto& [mode, c] : config.y0_coeffs) {
        const int pos = mode_position(basis, mode);
        if (pos < 0)
            fail("y0.coeffs", "mode index " + std::to_string(mode) + " not in basis (J_max=" +
                                  std::to_string(basis.size()) + ")");
        y0.coeffs[static_cast<std::size_t>(pos)] = c;
    }

    built.scenario.state.y0 = std::move(y0);
    built.scenario.state.f = signal_from_config(config.f, basis, "f");
    built.scenario.y_q = signal_from_config(config.y_q, basis, "y_q");
    built.scenario.state.basis = std::move(basis);
    built.scenario.state.T = config.T;
    built.scenario.state.validate();
    built.scenario.y_q.validate(built.scenario.state.basis.size(), config.T);

    built.penalty = config.penalty.kind == PenaltyKind::Reciprocal
                        ? PenaltySpec::reciprocal(config.penalty.L)
                        : PenaltySpec::exp_over_s();
    built.penalty.validate();
    built.optimizer = config.optimizer;
    built.optimizer.validate();

    if (!config.snapshots.empty() && !built.scenario.state.basis.has_eigenfunctions())
        fail("snapshots", "explicit bases have no eigenfunctions to reconstruct");
    for (const SnapshotRequest& snap : config.snapshots) {
        if (snap.t < 0.0 || snap.t > config.T) fail("snapshots.t", "must lie in [0, T]");
        if (snap.s && !(*snap.s > 0.0)) fail("snapshots.s", "must be positive");
    }
    return built;
}

Scenario example1_scenario(double eps, int j0, double T, int j_max) {
    if (j0 < 1) throw std::invalid_argument("example1: j0 must be >= 1");
    if (j_max < 0) j_max = j0 + 8;
    if (j0 >= j_max) throw std::invalid_argument("example1: j0 must be < J_max");
    Scenario scenario;
    scenario.state.basis = build_basis(BasisKind::Neumann1D, M_PI, j_max);
    scenario.state.y0.coeffs.assign(static_cast<std::size_t>(j_max), 0.0);
    scenario.state.y0.coeffs[0] = std::sqrt(M_PI);  // <1, e_0> with e_0 = 1/sqrt(pi)
    scenario.state.y0.coeffs[static_cast<std::size_t>(j0)] = eps;
    scenario.state.f = TimeSignal::zero();
    scenario.state.T = T;
    std::vector<double> target(static_cast<std::size_t>(j_max), 0.0);
    target[0] = std::sqrt(M_PI);
    scenario.y_q = TimeSignal::constant(std::move(target));
    return scenario;
}

Scenario example2_scenario(double eps, int j0, double T, int j_max) {
    if (j0 < 1) throw std::invalid_argument("example2: j0 must be >= 1");
    if (j_max < 0) j_max = j0 + 8;
    if (j0 > j_max) throw std::invalid_argument("example2: j0 must be <= J_max");
    Scenario scenario;
    scenario.state.basis = build_basis(BasisKind::Dirichlet1D, M_PI, j_max);
    scenario.state.y0.coeffs.assign(static_cast<std::size_t>(j_max), 0.0);
    const int pos = mode_position(scenario.state.basis, j0);
    scenario.state.y0.coeffs[static_cast<std::size_t>(pos)] = eps;
    scenario.state.f = TimeSignal::zero();
    scenario.state.T = T;
    std::vector<double> target(static_cast<std::size_t>(j_max), 0.0);
    target[static_cast<std::size_t>(pos)] = eps;
    scenario.y_q = TimeSignal::constant(std::move(target));
    return scenario;
}

ScenarioConfig example_config(const std::string& preset, double eps, int j0,
                              const PenaltyConfig& penalty, double T, int j_max) {
    ScenarioConfig config;
    config.penalty = penalty;
    config.T = T;
    if (preset == "example1") {
        if (j0 < 1) fail("y0.j0", "example1 needs j0 >= 1");
        config.basis.kind = BasisKind::Neumann1D;
        config.basis.j_max = j_max < 0 ? j0 + 8 : j_max;
        if (j0 >= config.basis.j_max) fail("y0.j0", "j0 must be < J_max");
        config.y0_coeffs[0] = std::sqrt(M_PI);
        config.y0_coeffs[j0] = eps;
        config.y_q.kind = SignalKind::ConstantInTime;
        config.y_q.coeffs[0] = std::sqrt(M_PI);
    } else if (preset == "example2") {
        if (j0 < 1) fail("y0.j0", "example2 needs j0 >= 1");
        config.basis.kind = BasisKind::Dirichlet1D;
        config.basis.j_max = j_max < 0 ? j0 + 8 : j_max;
        if (j0 > config.basis.j_max) fail("y0.j0", "j0 must be <= J_max");
        config.y0_coeffs[j0] = eps;
        config.y_q.kind = SignalKind::ConstantInTime;
        config.y_q.coeffs[j0] = eps;
    } else {
        fail("y0.preset", "must be example1 or example2");
    }
    config.basis.domain_length = M_PI;
    config.f.kind = SignalKind::Zero;
    return config;
}

}  // namespace fracorder
