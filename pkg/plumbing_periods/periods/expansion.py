#!/usr/bin/env python
"""
Expansion of a period in the plumbing parameters:

    sum_e L_e log s_e + C + sum_e l_e s_e + O(|s|^2)

For rational components the constant and linear coefficients are finite sums
of logarithms and elementary integrals of dz/(z - q)^2.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, Mapping, Optional

import numpy as np

from plumbing_periods.curve.basis import CyclePath
from plumbing_periods.curve.model import PlumbingParams, StableCurve
from plumbing_periods.differentials.ratdiff import RationalDifferential, antiderivative_along, chart_value
from plumbing_periods.periods.paths import component_path
from plumbing_periods.solver.jump import initial_data

logger = logging.getLogger(__name__)


def _pair(value: complex):
    value = complex(value)
    return [value.real, value.imag]


def _real_or_pair(value: complex):
    value = complex(value)
    return value.real if value.imag == 0 else [value.real, value.imag]


@dataclass(frozen=True)
class PeriodExpansion:
    log_coeffs: Mapping[str, complex] = field(default_factory=dict)
    constant: complex = 0j
    linear_coeffs: Mapping[str, complex] = field(default_factory=dict)
    remainder_order: int = 2

    def evaluate(self, params: PlumbingParams) -> complex:
        value = complex(self.constant)
        for edge_id, coeff in self.log_coeffs.items():
            value += coeff * np.log(params[edge_id])
        for edge_id, coeff in self.linear_coeffs.items():
            value += coeff * params[edge_id]
        return value

    def to_json(self) -> dict:
        return {
            "log": {edge_id: _real_or_pair(c) for edge_id, c in sorted(self.log_coeffs.items())},
            "const": _pair(self.constant),
            "linear": {edge_id: _pair(c) for edge_id, c in sorted(self.linear_coeffs.items())},
        }


def _add(target: Dict[str, complex], key: str, value: complex) -> None:
    target[key] = target.get(key, 0j) + value


def period_expansion(
    omega: Mapping[str, RationalDifferential],
    cycle: CyclePath,
    curve: StableCurve,
    params: Optional[PlumbingParams] = None,
) -> PeriodExpansion:
    """
    Log, constant and linear coefficients of the period of Omega_s over a cycle.

    Args:
        omega: A stable differential, per component
        cycle: The cycle, following the same canonical path as period_numeric
        curve: The nodal curve
        params: Unused by the coefficients; accepted for symmetry with the numeric path

    Returns:
        The expansion; a cycle crossing no node gives the plain integral on its component

    Raises:
        ResidueMismatchError: If omega is not a stable differential
    """
    data = initial_data(omega, curve, params)
    zero = RationalDifferential.zero()
    if not cycle.edges:
        constant = antiderivative_along(omega.get(cycle.vertex, zero), list(cycle.loop) + [cycle.loop[0]])
        return PeriodExpansion({}, cycle.orientation * constant, {})

    tilde = {h: chart_value(data.xi0[h], curve, h) for h in curve.half_edges}
    rho = curve.chart_radius
    q = curve.node_point

    log_coeffs: Dict[str, complex] = {}
    linear: Dict[str, complex] = {}
    constant = 0j
    for i, e in enumerate(cycle.edges):
        entry = cycle.edges[i - 1].opposite
        vertex = curve.vertex_of(e)
        x_in = curve.from_chart(entry, 1.0)
        x_out = curve.from_chart(e, 1.0)

        # across the component
        constant += antiderivative_along(omega.get(vertex, zero), component_path(curve, vertex, x_in, x_out))
        for h in curve.half_edges_at(vertex):
            weight = 1.0 / (x_in - q(h)) - 1.0 / (x_out - q(h))
            _add(linear, h.edge, -rho(h) * tilde[h.opposite] * weight)

        # across the node of e
        _add(log_coeffs, e.edge, data.residues[e])
        constant += antiderivative_along(data.xi0[e], [x_out, q(e)])
        constant += antiderivative_along(data.xi0[e.opposite], [q(e.opposite), curve.from_chart(e.opposite, 1.0)])
        _add(linear, e.edge, tilde[e] - tilde[e.opposite])
        for h in curve.half_edges_at(vertex):
            if h != e:
                weight = 1.0 / (q(e) - q(h)) - 1.0 / (x_out - q(h))
                _add(linear, h.edge, rho(h) * tilde[h.opposite] * weight)
        far = curve.from_chart(e.opposite, 1.0)
        for h in curve.half_edges_at(curve.vertex_of(e.opposite)):
            if h != e.opposite:
                weight = 1.0 / (q(e.opposite) - q(h)) - 1.0 / (far - q(h))
                _add(linear, h.edge, -rho(h) * tilde[h.opposite] * weight)

    sign = cycle.orientation
    log_coeffs = {k: sign * v for k, v in log_coeffs.items() if v != 0}
    linear = {k: sign * v for k, v in linear.items()}
    logger.debug("period expansion over %s: log %s", [str(h) for h in cycle.edges], log_coeffs)
    return PeriodExpansion(log_coeffs, sign * constant, linear)
