import math

import pytest

import graftlab as gl


def test_chart_invariants():
    chart = gl.GraftedCollar(2 * math.pi, 2.0, 1.0, gl.OuterBoundary.dirichlet_zero)
    assert gl.total_area(chart) == pytest.approx(4 * math.pi * math.sinh(1.0) + 4 * math.pi)
    assert gl.conformal_modulus(chart) == pytest.approx(gl.conformal_modulus_quadrature(chart), rel=1e-10)
    assert chart.seam(gl.Side.left) == -1.0


def test_field_and_variation():
    sol = gl.random_solution(2 * math.pi, 2.0, 4, 7)
    assert sol.c0 == 0.0
    pair = gl.ModePair()
    pair.c = 1.0
    sol.modes = [pair]
    sol.d0 = 0.0
    assert gl.evaluate(sol, 0.0, 0.0) == pytest.approx(2.0)
    lam = gl.flat_variation_coefficient(sol, gl.Side.left, 1)
    assert lam.real == pytest.approx(-math.sinh(1.0) / 2)


def test_boundary_pair_and_dtn():
    sol = gl.random_solution(3.0, 1.2, 16, 3)
    closed, quad = gl.boundary_term_pair(sol, 0.2, -0.1)
    assert closed == pytest.approx(quad, rel=1e-10)
    assert gl.dtn(5, 2 * math.pi, 1.0, gl.OuterBoundary.dirichlet_zero) < gl.dtn(
        0, 2 * math.pi, 1.0, gl.OuterBoundary.dirichlet_zero) < 0
    assert gl.mode_cross_error(2, 3.0, 1.0, gl.OuterBoundary.dirichlet_zero) < 1e-8


def test_errors_map_to_python():
    with pytest.raises(ValueError):
        gl.GraftedCollar(-1.0, 1.0, 1.0, gl.OuterBoundary.dirichlet_zero)
    with pytest.raises(ValueError):
        gl.sweep({"bogus": 1})


def test_sweep_and_verify():
    code, text = gl.sweep({"modes": 2, "steps": 5})
    assert code == 0
    rows = [r for r in text.splitlines() if r and not r.startswith("sweep:")]
    assert len(rows) == 6
    reports = gl.verify_reports(modes=4, configs=5)
    assert len(reports) >= 12
    assert all(r["pass"] for r in reports)
