#!/usr/bin/env python
"""
Periods of the glued differential Omega_s and the period matrix of the
plumbed curve.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

from plumbing_periods.curve.basis import CyclePath, SymplecticBasis, symplectic_basis
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.differentials.ratdiff import RationalDifferential, antiderivative_along, chart_value
from plumbing_periods.errors import PoleError
from plumbing_periods.periods.expansion import PeriodExpansion, period_expansion
from plumbing_periods.periods.paths import crossing_in, crossing_out, cycle_polylines
from plumbing_periods.solver.jump import GluedFamily, JumpSolution, glued_family, initial_data, iterate

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * math.pi

Family = Union[JumpSolution, GluedFamily]


def wrap_2pi_i(z: complex) -> complex:
    """Representative of z modulo 2 pi i with imaginary part in (-pi, pi]."""
    z = complex(z)
    imag = math.remainder(z.imag, 2.0 * math.pi)
    if imag == -math.pi:
        imag = math.pi
    return complex(z.real, imag)


def _family(sol: Family) -> GluedFamily:
    return sol if isinstance(sol, GluedFamily) else glued_family(sol)


def _integrate(omega: RationalDifferential, points: List[complex]) -> complex:
    try:
        return antiderivative_along(omega, points)
    except PoleError:
        # push every interior vertex slightly off the path and try once more
        logger.warning("integration path hits a pole, rerouting")
        moved = [points[0]]
        for a, z, b in zip(points[:-2], points[1:-1], points[2:]):
            normal = 1j * (b - a)
            moved.append(z + 1e-6 * normal)
        moved.append(points[-1])
        return antiderivative_along(omega, moved)


def period_numeric(sol: Family, cycle: CyclePath) -> complex:
    """
    Integral of Omega_s over a cycle, component by component along the
    canonical path.

    Args:
        sol: A converged jump solution or its glued family
        cycle: A closed cycle on the dual graph

    Returns:
        The period, with the logarithm branch followed along the path
    """
    family = _family(sol)
    curve, params = family.sol.curve, family.sol.params
    total = 0j
    for vertex, points in cycle_polylines(curve, params, cycle):
        total += _integrate(family.differential(vertex), points)
    return cycle.orientation * total


def a_period(sol: Family, h: HalfEdge) -> complex:
    """Integral of Omega_s over the seam around q_h, counter-clockwise in z_h."""
    family = _family(sol)
    curve, params = family.sol.curve, family.sol.params
    omega = family.differential(curve.vertex_of(h))
    return TWO_PI_I * omega.residue_sum_inside(curve.node_point(h), params.seam_radius(curve, h))


def per_trsf_check(sol: JumpSolution, h: Union[str, HalfEdge]) -> float:
    """
    Compare the integral of Omega_s across the node of h (chart 1 to the seam
    on v(h), then seam to chart 1 on v(-h)) with r log s plus the integrals of
    every xi^(k) between chart coordinates 1 and s.
    """
    h = h if isinstance(h, HalfEdge) else HalfEdge.parse(str(h))
    curve, params = sol.curve, sol.params
    lhs = _integrate(sol.total(curve.vertex_of(h)), crossing_out(curve, params, h))
    lhs += _integrate(sol.total(curve.vertex_of(h.opposite)), crossing_in(curve, params, h.opposite))

    s = params[h]
    rhs = sol.data.residues[h] * np.log(s)
    for xi in sol.xi[h]:
        rhs += _integrate(xi, [curve.from_chart(h, 1.0), curve.from_chart(h, s)])
    for xi in sol.xi[h.opposite]:
        rhs += _integrate(xi, [curve.from_chart(h.opposite, s), curve.from_chart(h.opposite, 1.0)])
    return abs(wrap_2pi_i(lhs - rhs))


def normalized_basis(curve: StableCurve, basis: SymplecticBasis) -> List[Dict[str, RationalDifferential]]:
    """
    Third-kind differentials v_k along B_k: on v(e_i) a pole of residue +1 at
    q_{e_i} and -1 at q_{-e_{i-1}}.
    """
    out = []
    for cycle in basis.b_cycles:
        parts = {v: RationalDifferential.zero() for v in curve.vertices}
        for i, h in enumerate(cycle.edges):
            entry = cycle.edges[i - 1].opposite
            vertex = curve.vertex_of(h)
            parts[vertex] = parts[vertex] + RationalDifferential.third_kind(
                curve.node_point(h), curve.node_point(entry)
            )
        out.append(parts)
    return out


def h_function(tau: np.ndarray, basis: SymplecticBasis, params: PlumbingParams) -> np.ndarray:
    """tau minus its logarithmic part sum_e N_{e,h} N_{e,k} log s_e."""
    out = np.array(tau, dtype=complex)
    for edge_id, row in basis.intersections.items():
        out = out - np.outer(row, row) * np.log(params[edge_id])
    return out


def fit_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    """Least-squares slope of log|y| against log|x|."""
    x = np.log(np.abs(np.asarray(xs, dtype=float)))
    y = np.log(np.abs(np.asarray(ys, dtype=complex)))
    return float(np.polyfit(x, y, 1)[0])


def expansion_linear(
    curve: StableCurve,
    basis: SymplecticBasis,
    chart_values: Sequence[Dict[HalfEdge, complex]],
    h: int,
    k: int,
) -> Dict[str, complex]:
    """
    Coefficient of s_e in tau_{hk}: minus the sum over both orientations of e of
    hol(v_k)(q_e) hol(v_h)(q_{-e}), in the charts.
    """
    linear: Dict[str, complex] = {}
    for half in curve.half_edges:
        value = -chart_values[k][half] * chart_values[h][half.opposite]
        linear[half.edge] = linear.get(half.edge, 0j) + value
    return linear


@dataclass
class PeriodMatrix:
    basis: SymplecticBasis
    params: PlumbingParams
    numeric: Optional[np.ndarray] = None
    expansions: Optional[List[List[PeriodExpansion]]] = None
    tail_bounds: List[float] = field(default_factory=list)

    @property
    def expansion_value(self) -> Optional[np.ndarray]:
        if self.expansions is None:
            return None
        return np.array([[entry.evaluate(self.params) for entry in row] for row in self.expansions])

    def symmetry_defect(self) -> float:
        if self.numeric is None:
            return 0.0
        difference = self.numeric - self.numeric.T
        return max((abs(wrap_2pi_i(x)) for x in difference.flat), default=0.0)

    def to_json(self) -> List[List[dict]]:
        g = self.basis.genus
        rows = []
        for h in range(g):
            row = []
            for k in range(g):
                entry = self.expansions[h][k].to_json() if self.expansions is not None else {}
                if self.numeric is not None:
                    value = complex(self.numeric[h, k])
                    entry["numeric"] = [value.real, value.imag]
                row.append(entry)
            rows.append(row)
        return rows


def period_matrix(
    curve: StableCurve,
    params: PlumbingParams,
    order: str = "numeric",
    basis: Optional[SymplecticBasis] = None,
    **solver_options,
) -> PeriodMatrix:
    """
    Period matrix tau_{hk} = integral of v_{k,s} over B_h.

    Args:
        curve: A valid curve with rational components
        params: Plumbing parameters
        order: "numeric", "expansion" or "both"
        basis: Symplectic basis, built from the spanning tree when omitted
        **solver_options: Passed on to the jump solver

    Returns:
        The matrix in the requested forms

    Raises:
        NonConvergenceError: If a jump solve does not converge
    """
    if order not in ("numeric", "expansion", "both"):
        raise ValueError(f"unknown period-matrix order: {order}")
    basis = basis or symplectic_basis(curve)
    g = basis.genus
    differentials = normalized_basis(curve, basis)
    result = PeriodMatrix(basis, params)

    if order in ("numeric", "both"):
        tau = np.zeros((g, g), dtype=complex)
        for k, omega in enumerate(differentials):
            sol = iterate(initial_data(omega, curve, params), curve, params, **solver_options)
            result.tail_bounds.append(sol.tail_bound)
            family = glued_family(sol)
            for h, cycle in enumerate(basis.b_cycles):
                tau[h, k] = period_numeric(family, cycle)
        result.numeric = tau
        logger.info("numeric period matrix, symmetry defect %.3e", result.symmetry_defect())

    if order in ("expansion", "both"):
        chart_values = []
        for omega in differentials:
            data = initial_data(omega, curve, params)
            chart_values.append(
                {half: chart_value(data.xi0[half], curve, half) for half in curve.half_edges}
            )
        expansions = []
        for h, cycle in enumerate(basis.b_cycles):
            row = []
            for k, omega in enumerate(differentials):
                constant = period_expansion(omega, cycle, curve, params).constant
                log_coeffs = {
                    edge_id: complex(basis.intersection(edge_id, h) * basis.intersection(edge_id, k))
                    for edge_id in curve.edge_ids
                    if basis.intersection(edge_id, h) * basis.intersection(edge_id, k) != 0
                }
                row.append(
                    PeriodExpansion(log_coeffs, constant, expansion_linear(curve, basis, chart_values, h, k))
                )
            expansions.append(row)
        result.expansions = expansions
    return result

