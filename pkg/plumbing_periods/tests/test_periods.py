#!/usr/bin/env python
"""
Test periods of the glued family, their expansions and the period matrix.
"""
import math

import numpy as np
import pytest

from plumbing_periods.curve.basis import CyclePath, symplectic_basis
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, totally_degenerate
from plumbing_periods.differentials.ratdiff import RationalDifferential, circle
from plumbing_periods.errors import CurveError
from plumbing_periods.periods.closed_forms import banana_tau_terms, eval_tot_deg_tau, tot_deg_tau_expansion
from plumbing_periods.periods.expansion import PeriodExpansion, period_expansion
from plumbing_periods.periods.periods import (
    a_period,
    fit_slope,
    h_function,
    normalized_basis,
    per_trsf_check,
    period_matrix,
    period_numeric,
    wrap_2pi_i,
)
from plumbing_periods.periods.schottky import oracle_for_curve
from plumbing_periods.solver.jump import initial_data, iterate

from .conftest import uniform_params

G2_NODES = [(3, -3), (3j, -3j)]


def close_mod_2pi_i(a: complex, b: complex, tol: float) -> bool:
    return abs(wrap_2pi_i(a - b)) < tol


@pytest.fixture
def g1_solution(g1_curve, g1_params, g1_omega):
    return iterate(initial_data(g1_omega, g1_curve, g1_params), g1_curve, g1_params)


def test_wrap_2pi_i():
    """Imaginary parts land in (-pi, pi]."""
    assert wrap_2pi_i(1 + 2j * math.pi) == pytest.approx(1)
    assert wrap_2pi_i(-1j * math.pi) == pytest.approx(1j * math.pi)
    assert wrap_2pi_i(0.5 + 4j) == pytest.approx(0.5 + (4 - 2 * math.pi) * 1j)


def test_fit_slope():
    """Slope of log|y| against log|x|."""
    assert fit_slope([1e-2, 1e-3, 1e-4], [1e-4, 1e-6, 1e-8]) == pytest.approx(2.0)


def test_g1_period_matches_closed_form(g1_curve):
    """tau = log s - log(-16) - s/8 + O(s^2) for node points +-2."""
    s = 1e-4
    params = PlumbingParams({"e1": s})
    pm = period_matrix(g1_curve, params, order="both")
    closed = eval_tot_deg_tau([(2, -2)], [s], 0, 0)
    assert close_mod_2pi_i(closed, math.log(s) - np.log(-16 + 0j) - s / 8, 1e-14)
    assert close_mod_2pi_i(pm.numeric[0, 0], closed, 1e-6)
    assert close_mod_2pi_i(pm.expansion_value[0, 0], closed, 1e-12)
    entry = pm.expansions[0][0]
    assert entry.log_coeffs == {"e1": 1}
    assert entry.linear_coeffs["e1"] == pytest.approx(-1 / 8)


def test_g1_h_function(g1_curve):
    """Subtracting log s leaves a holomorphic remainder."""
    s = 1e-4
    params = PlumbingParams({"e1": s})
    basis = symplectic_basis(g1_curve)
    pm = period_matrix(g1_curve, params, basis=basis)
    h = h_function(pm.numeric, basis, params)
    assert close_mod_2pi_i(h[0, 0], -np.log(-16 + 0j), 1e-4)


def test_g2_period_matrix(g2_curve):
    """Numeric, expansion, closed form and Schottky oracle agree."""
    s = 1e-4
    params = PlumbingParams({"e1": s, "e2": s})
    pm = period_matrix(g2_curve, params, order="both")
    assert pm.symmetry_defect() < 1e-8
    assert all(bound < 1e-12 for bound in pm.tail_bounds)
    oracle = oracle_for_curve(g2_curve, params)
    for i in range(2):
        for j in range(2):
            closed = tot_deg_tau_expansion(G2_NODES, i, j)
            entry = pm.expansions[i][j]
            assert close_mod_2pi_i(entry.constant, closed.constant, 1e-12)
            for edge_id, value in closed.linear_coeffs.items():
                assert entry.linear_coeffs[edge_id] == pytest.approx(value, abs=1e-12)
            assert close_mod_2pi_i(pm.numeric[i, j], pm.expansion_value[i, j], 1e-6)
            assert close_mod_2pi_i(pm.numeric[i, j], oracle.tau[i, j], 1e-8)


def test_off_diagonal_constant_is_a_cross_ratio():
    """log of (3, -3; 3i, -3i) = log(-1)."""
    closed = tot_deg_tau_expansion(G2_NODES, 0, 1)
    assert close_mod_2pi_i(closed.constant, 1j * math.pi, 1e-14)
    assert closed.log_coeffs == {}


def test_banana_period(banana_curve):
    """tau_11 carries log s_1 + log s_2 and the sigma products at first order."""
    params = PlumbingParams({"e1": 1e-4, "e2": 2e-4})
    pm = period_matrix(banana_curve, params, order="both")
    entry = pm.expansions[0][0]
    assert entry.log_coeffs == {"e1": 1, "e2": 1}
    terms = banana_tau_terms(banana_curve, params)
    for edge_id, value in terms["linear"].items():
        assert entry.linear_coeffs[edge_id] == pytest.approx(value, abs=1e-12)
    assert close_mod_2pi_i(pm.numeric[0, 0], pm.expansion_value[0, 0], 1e-6)


def test_theta_shared_edge_log_term(theta_curve):
    """Both B-cycles cross e3, so tau_12 moves by one when log s_3 does."""
    base = PlumbingParams({"e1": 1e-4, "e2": 1e-4, "e3": 1e-6})
    moved = base.with_edge("e3", 1e-6 / math.e)
    first = period_matrix(theta_curve, base)
    second = period_matrix(theta_curve, moved)
    difference = first.numeric[0, 1] - second.numeric[0, 1]
    assert close_mod_2pi_i(difference, 1.0, 1e-4)
    assert first.symmetry_defect() < 1e-8
    expansion = period_matrix(theta_curve, base, order="expansion").expansions[0][1]
    assert expansion.log_coeffs == {"e3": 1}


def test_normalized_basis_residues(theta_curve):
    """v_k has residue +1 where B_k leaves a component and -1 where it enters."""
    basis = symplectic_basis(theta_curve)
    v1 = normalized_basis(theta_curve, basis)[0]
    assert v1["a"].residue(3) == 1
    assert v1["a"].residue(3j) == -1
    assert v1["b"].residue(3j) == 1
    assert v1["b"].residue(3) == -1


def test_a_period_and_loop_period(g1_solution):
    """A-periods are 2 pi i times the residue; a small loop agrees."""
    assert a_period(g1_solution, HalfEdge("e1", 1)) == pytest.approx(2j * math.pi)
    assert a_period(g1_solution, HalfEdge("e1", -1)) == pytest.approx(-2j * math.pi)
    loop = CyclePath((), vertex="v", loop=tuple(circle(2, 0.5, 64)[:-1]))
    assert period_numeric(g1_solution, loop) == pytest.approx(2j * math.pi, abs=1e-10)


def test_crossing_a_node(g1_solution):
    """The integral across a node is r log s plus the xi integrals."""
    assert per_trsf_check(g1_solution, "e1") < 1e-9
    assert per_trsf_check(g1_solution, HalfEdge("e1", -1)) < 1e-9


def test_broken_cycle_raises(banana_curve):
    """Periods need closed cycles."""
    params = PlumbingParams({"e1": 1e-4, "e2": 1e-4})
    omega = {"a": RationalDifferential.third_kind(2, -2), "b": RationalDifferential.third_kind(-2, 2)}
    sol = iterate(initial_data(omega, banana_curve, params), banana_curve, params)
    with pytest.raises(CurveError):
        period_numeric(sol, CyclePath.parse(["e1", "e2"]))


def test_expansion_of_loop_without_crossings(g1_curve, g1_omega):
    """A loop on one component has only a constant term."""
    loop = CyclePath((), vertex="v", loop=tuple(circle(-2, 0.5, 64)[:-1]))
    expansion = period_expansion(g1_omega, loop, g1_curve, PlumbingParams({"e1": 1e-3}))
    assert expansion.log_coeffs == {}
    assert expansion.constant == pytest.approx(-2j * math.pi, abs=1e-12)


def test_expansion_evaluate_and_json():
    """Expansions evaluate at given parameters and serialize."""
    expansion = PeriodExpansion({"e1": 1.0}, 2.0 + 1j, {"e1": -0.125})
    params = PlumbingParams({"e1": 1e-2})
    assert expansion.evaluate(params) == pytest.approx(math.log(1e-2) + 2 + 1j - 0.125e-2)
    assert expansion.to_json() == {"log": {"e1": 1.0}, "const": [2.0, 1.0], "linear": {"e1": [-0.125, 0.0]}}


def test_unknown_order_raises(g1_curve, g1_params):
    """Only numeric, expansion and both are known."""
    with pytest.raises(ValueError):
        period_matrix(g1_curve, g1_params, order="series")


@pytest.mark.parametrize("curve_name", ["g1_curve", "g2_curve", "banana_curve", "theta_curve"])
def test_crossing_every_node(request, curve_name):
    """The node-crossing identity holds for every basis differential and half-edge."""
    curve = request.getfixturevalue(curve_name)
    params = uniform_params(curve, 1e-4)
    for omega in normalized_basis(curve, symplectic_basis(curve)):
        sol = iterate(initial_data(omega, curve, params), curve, params)
        for h in curve.half_edges:
            assert per_trsf_check(sol, h) < max(10 * sol.tail_bound, 1e-9)


@pytest.mark.slow
@pytest.mark.parametrize("nodes", [[(2, -2)], G2_NODES], ids=["g1", "g2"])
def test_period_error_is_quadratic(nodes):
    """Numeric periods minus the closed form through O(s) shrink like s^2."""
    curve = totally_degenerate(nodes)
    g = len(nodes)
    values = [3e-2, 1e-2, 3e-3, 1e-3, 3e-4]
    errors = []
    for s in values:
        pm = period_matrix(curve, uniform_params(curve, s))
        errors.append(
            max(
                abs(wrap_2pi_i(pm.numeric[i, j] - eval_tot_deg_tau(nodes, [s] * g, i, j)))
                for i in range(g)
                for j in range(g)
            )
        )
    assert fit_slope(values, errors) >= 1.9


def test_g1_period_matrix_matches_oracle(g1_curve):
    """The solver and the Schottky series agree at s = 1e-4."""
    params = PlumbingParams({"e1": 1e-4})
    pm = period_matrix(g1_curve, params)
    oracle = oracle_for_curve(g1_curve, params, L=8)
    assert close_mod_2pi_i(pm.numeric[0, 0], oracle.tau[0, 0], 1e-8)
