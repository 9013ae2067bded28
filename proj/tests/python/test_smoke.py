"""Smoke tests for the python bindings."""

import json
import math

import fracorder as fo


def test_basis_and_projection():
    basis = fo.build_basis(fo.BasisKind.Dirichlet1D, math.pi, 3)
    assert basis.eigenvalues() == [1.0, 4.0, 9.0]
    n = 257
    samples = [fo.eval_mode(basis, 2, math.pi * i / (n - 1)) for i in range(n)]
    field = fo.project(basis, samples)
    assert abs(field.coeffs[1] - 1.0) < 1e-8
    assert abs(field.coeffs[0]) < 1e-8
    assert abs(fo.hs_norm(fo.SpectralField([0.0, 0.0, 1.0]), basis, 1.0) - 9.0) < 1e-12


def test_kernel_derivative():
    e = fo.eval_kernel(4.0, 1.0, 0.5)
    assert abs(e.value - math.exp(-2.0)) < 1e-14
    h = 1e-5
    fd = (fo.eval_kernel(4.0, 1.0, 0.5 + h, 0).value -
          fo.eval_kernel(4.0, 1.0, 0.5 - h, 0).value) / (2 * h)
    assert abs(e.d1 - fd) < 1e-8 * abs(e.d1) + 1e-12
    assert fo.check_bounds(4.0, 1.0, 0.5)
    assert fo.bound_constants().c_hat0 == 1.0


def test_state_and_misfit():
    scenario = fo.example1_scenario(0.5, 2, 1.0)
    pos = 2  # Neumann mode j0 = 2 sits at position 2
    y = fo.solve_mode(scenario, pos, 0.5, 1.0)
    assert abs(y - 0.5 * math.exp(-2.0)) < 1e-12
    m = fo.misfit_and_derivatives(scenario, 1.0)
    assert m.value > 0.0
    assert m.d1 < 0.0  # example 1 pushes the optimum above s0
    e = fo.energy_diagnostic(scenario, 1.0)
    assert e.lhs <= e.rhs * (1 + 1e-8)


def test_optimizer_pure_penalty():
    scenario = fo.example1_scenario(0.0, 2, 1.0)
    report = fo.solve(scenario, fo.PenaltySpec.exp_over_s())
    assert abs(report.s_star - 1.0) <= 1e-9
    assert report.verdict == fo.Optimality.SecondOrderSufficient


def test_optimizer_example_ordering():
    report = fo.solve(fo.example1_scenario(0.5, 2, 1.0), fo.PenaltySpec.exp_over_s())
    assert report.s_star > 1.0
    report2 = fo.solve(fo.example2_scenario(0.5, 2, 1.0), fo.PenaltySpec.exp_over_s())
    assert report2.s_star < 1.0


def test_run_config(tmp_path):
    config = {
        "y0": {"preset": "example1", "epsilon": 0.5, "j0": 2},
        "penalty": {"kind": "exp_over_s"},
        "optimizer": {"grid_points": 16},
    }
    report = fo.run_config(json.dumps(config), str(tmp_path / "out"))
    assert report.verdict == fo.Optimality.SecondOrderSufficient
    summary = json.loads((tmp_path / "out" / "summary.json").read_text())
    assert abs(summary["result"]["s_star"] - report.s_star) == 0.0
