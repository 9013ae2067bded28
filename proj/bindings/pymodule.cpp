#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fracorder/artifacts.hpp"
#include "fracorder/kernel.hpp"
#include "fracorder/verify.hpp"
#include "fracorder/version.hpp"

namespace py = pybind11;
using namespace fracorder;

namespace {

Scenario make_scenario(const EigenBasis& basis, const std::vector<double>& y0,
                       const TimeSignal& f, const TimeSignal& y_q, double T) {
    Scenario scenario;
    scenario.state.basis = basis;
    scenario.state.y0.coeffs = y0;
    scenario.state.f = f;
    scenario.state.T = T;
    scenario.y_q = y_q;
    scenario.state.validate();
    scenario.y_q.validate(scenario.state.basis.size(), T);
    return scenario;
}

}  // namespace

PYBIND11_MODULE(_fracorder, m) {
    m.doc() = "Spectral solver and fractional-order identification toolkit";
    m.attr("__version__") = kVersion;

    py::enum_<BasisKind>(m, "BasisKind")
        .value("Dirichlet1D", BasisKind::Dirichlet1D)
        .value("Neumann1D", BasisKind::Neumann1D)
        .value("Explicit", BasisKind::Explicit);

    py::class_<EigenMode>(m, "EigenMode")
        .def_readonly("index", &EigenMode::index)
        .def_readonly("lam", &EigenMode::lambda)
        .def_readonly("norm_const", &EigenMode::norm_const);

    py::class_<EigenBasis>(m, "EigenBasis")
        .def_readonly("kind", &EigenBasis::kind)
        .def_readonly("domain_length", &EigenBasis::domain_length)
        .def_readonly("modes", &EigenBasis::modes)
        .def("size", &EigenBasis::size)
        .def("eigenvalues", [](const EigenBasis& b) {
            std::vector<double> out;
            for (const EigenMode& mode : b.modes) out.push_back(mode.lambda);
            return out;
        });

    py::class_<SpectralField>(m, "SpectralField")
        .def(py::init([](std::vector<double> coeffs) {
            SpectralField f;
            f.coeffs = std::move(coeffs);
            return f;
        }))
        .def_readwrite("coeffs", &SpectralField::coeffs)
        .def("l2_norm", &SpectralField::l2_norm);

    m.def("build_basis", &build_basis, py::arg("kind"), py::arg("domain_length"),
          py::arg("j_max"));
    m.def("build_explicit_basis", &build_explicit_basis, py::arg("eigenvalues"));
    m.def("eval_mode", &eval_mode, py::arg("basis"), py::arg("j"), py::arg("x"));
    m.def(
        "project",
        [](const EigenBasis& basis, const std::vector<double>& samples) {
            return project(basis, samples);
        },
        py::arg("basis"), py::arg("samples"));
    m.def("hs_norm", &hs_norm, py::arg("field"), py::arg("basis"), py::arg("s"));

    py::class_<KernelEval>(m, "KernelEval")
        .def_readonly("value", &KernelEval::value)
        .def_readonly("d1", &KernelEval::d1)
        .def_readonly("d2", &KernelEval::d2)
        .def_readonly("d3", &KernelEval::d3);
    m.def("eval_kernel", &eval_kernel, py::arg("lam"), py::arg("t"), py::arg("s"),
          py::arg("order") = 3);
    py::class_<BoundConstants>(m, "BoundConstants")
        .def_readonly("m1", &BoundConstants::m1)
        .def_readonly("m2", &BoundConstants::m2)
        .def_readonly("m3", &BoundConstants::m3)
        .def_readonly("m4", &BoundConstants::m4)
        .def_readonly("m5", &BoundConstants::m5)
        .def_readonly("m6", &BoundConstants::m6)
        .def_readonly("c_hat0", &BoundConstants::c_hat0)
        .def_readonly("c_hat1", &BoundConstants::c_hat1)
        .def_readonly("c_hat2", &BoundConstants::c_hat2)
        .def_readonly("c_hat3", &BoundConstants::c_hat3);
    m.def("bound_constants", &bound_constants, py::return_value_policy::reference);
    m.def("check_bounds", &check_bounds, py::arg("lam"), py::arg("t"), py::arg("s"));

    py::class_<TimeSignal>(m, "TimeSignal")
        .def_static("zero", &TimeSignal::zero)
        .def_static("constant", &TimeSignal::constant, py::arg("per_mode"))
        .def_static("sampled", &TimeSignal::sampled, py::arg("grid"), py::arg("values"))
        .def("value", &TimeSignal::value, py::arg("mode"), py::arg("t"))
        .def("sup_abs", &TimeSignal::sup_abs, py::arg("mode"));

    py::class_<StateEval>(m, "StateEval")
        .def_readonly("T", &StateEval::T)
        .def_readonly("basis", &StateEval::basis);

    py::class_<Scenario>(m, "Scenario")
        .def(py::init(&make_scenario), py::arg("basis"), py::arg("y0"), py::arg("f"),
             py::arg("y_q"), py::arg("T"))
        .def_readonly("state", &Scenario::state);
    m.def("example1_scenario", &example1_scenario, py::arg("eps"), py::arg("j0"),
          py::arg("T") = 1.0, py::arg("j_max") = -1);
    m.def("example2_scenario", &example2_scenario, py::arg("eps"), py::arg("j0"),
          py::arg("T") = 1.0, py::arg("j_max") = -1);

    m.def(
        "solve_mode",
        [](const Scenario& scenario, int mode, double s, double t) {
            return solve_mode(scenario.state, mode, s, t);
        },
        py::arg("scenario"), py::arg("mode"), py::arg("s"), py::arg("t"));
    m.def(
        "sensitivity_mode",
        [](const Scenario& scenario, int mode, double s, double t, int order) {
            return sensitivity_mode(scenario.state, mode, s, t, order);
        },
        py::arg("scenario"), py::arg("mode"), py::arg("s"), py::arg("t"), py::arg("order"));
    py::class_<TrackingMisfit>(m, "TrackingMisfit")
        .def_readonly("value", &TrackingMisfit::value)
        .def_readonly("d1", &TrackingMisfit::d1)
        .def_readonly("d2", &TrackingMisfit::d2);
    m.def(
        "misfit_and_derivatives",
        [](const Scenario& scenario, double s) {
            return misfit_and_derivatives(scenario.state, scenario.y_q, s);
        },
        py::arg("scenario"), py::arg("s"));
    py::class_<EnergyReport>(m, "EnergyReport")
        .def_readonly("lhs", &EnergyReport::lhs)
        .def_readonly("rhs", &EnergyReport::rhs);
    m.def(
        "energy_diagnostic",
        [](const Scenario& scenario, double s) { return energy_diagnostic(scenario.state, s); },
        py::arg("scenario"), py::arg("s"));
    m.def(
        "sensitivity_norm",
        [](const Scenario& scenario, double s, int order) {
            return sensitivity_norm(scenario.state, s, order);
        },
        py::arg("scenario"), py::arg("s"), py::arg("order"));

    py::class_<PenaltySpec>(m, "PenaltySpec")
        .def_static("reciprocal", &PenaltySpec::reciprocal, py::arg("L"))
        .def_static("exp_over_s", &PenaltySpec::exp_over_s)
        .def_static("custom", &PenaltySpec::custom, py::arg("L"), py::arg("value"),
                    py::arg("d1"), py::arg("d2"))
        .def("s_max", &PenaltySpec::s_max)
        .def("validate", &PenaltySpec::validate);
    m.def("penalty_eval", &penalty_eval, py::arg("spec"), py::arg("s"), py::arg("order"));

    py::class_<ReducedCostReport>(m, "ReducedCostReport")
        .def_readonly("s", &ReducedCostReport::s)
        .def_readonly("J", &ReducedCostReport::J)
        .def_readonly("dJ", &ReducedCostReport::dJ)
        .def_readonly("d2J", &ReducedCostReport::d2J)
        .def_readonly("tracking", &ReducedCostReport::tracking)
        .def_readonly("penalty", &ReducedCostReport::penalty);
    m.def("reduced_cost", &reduced_cost, py::arg("scenario"), py::arg("penalty"), py::arg("s"));

    py::enum_<Optimality>(m, "Optimality")
        .value("NotStationary", Optimality::NotStationary)
        .value("FirstOrderStationary", Optimality::FirstOrderStationary)
        .value("SecondOrderSufficient", Optimality::SecondOrderSufficient);
    m.def("check_optimality", &check_optimality, py::arg("report"), py::arg("tol_stat") = -1.0);

    py::class_<OptimizerConfig>(m, "OptimizerConfig")
        .def(py::init<>())
        .def_readwrite("grid_points", &OptimizerConfig::grid_points)
        .def_readwrite("newton_tol", &OptimizerConfig::newton_tol)
        .def_readwrite("max_newton_iters", &OptimizerConfig::max_newton_iters)
        .def_readwrite("bracket_pad", &OptimizerConfig::bracket_pad);
    py::class_<IterationRecord>(m, "IterationRecord")
        .def_readonly("s", &IterationRecord::s)
        .def_readonly("J", &IterationRecord::J)
        .def_readonly("dJ", &IterationRecord::dJ)
        .def_readonly("d2J", &IterationRecord::d2J)
        .def_readonly("accepted", &IterationRecord::accepted);
    py::class_<OptimizeReport>(m, "OptimizeReport")
        .def_readonly("s_star", &OptimizeReport::s_star)
        .def_readonly("J_star", &OptimizeReport::J_star)
        .def_readonly("dJ_star", &OptimizeReport::dJ_star)
        .def_readonly("d2J_star", &OptimizeReport::d2J_star)
        .def_readonly("iterations", &OptimizeReport::iterations)
        .def_readonly("verdict", &OptimizeReport::verdict)
        .def_readonly("bracket_lo", &OptimizeReport::bracket_lo)
        .def_readonly("bracket_hi", &OptimizeReport::bracket_hi)
        .def_readonly("fallback_used", &OptimizeReport::fallback_used)
        .def_readonly("refine_steps", &OptimizeReport::refine_steps)
        .def_readonly("grid_local_minima", &OptimizeReport::grid_local_minima);
    m.def("solve", &solve, py::arg("scenario"), py::arg("penalty"),
          py::arg("config") = OptimizerConfig{});

    m.def(
        "run_config",
        [](const std::string& config_json, const std::string& out_dir) {
            const ScenarioConfig config = parse_config(nlohmann::json::parse(config_json));
            const RunArtifacts artifacts = run(config);
            if (!out_dir.empty()) emit(artifacts, out_dir);
            return artifacts.report;
        },
        py::arg("config_json"), py::arg("out_dir") = std::string(),
        "Run a scenario from a JSON config string; optionally emit artifacts.");
}
