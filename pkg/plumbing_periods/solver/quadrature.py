#!/usr/bin/env python
"""
Quadrature referee for the jump recursion.

Runs the same recursion as solver.jump, but every seam integral is computed
by the trapezoid rule on n_quad equispaced seam points. A transform is kept as
its quadrature nodes and weights, T(z) = sum_j weight_j / (z - w_j).
"""
import logging
from dataclasses import dataclass
from typing import Dict, List, Mapping

import numpy as np

from plumbing_periods.curve.gluing import gluing_map
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.solver.jump import JumpData, JumpSolution
from plumbing_periods.solver.norms import seam_points

logger = logging.getLogger(__name__)

DEFAULT_N_QUAD = 64


@dataclass(frozen=True)
class SampledTransform:
    nodes: np.ndarray
    weights: np.ndarray

    def __call__(self, z):
        z_arr = np.asarray(z, dtype=complex)
        values = np.sum(self.weights / (z_arr[..., None] - self.nodes), axis=-1)
        return complex(values) if np.ndim(z) == 0 else values


@dataclass(frozen=True)
class QuadratureSolution:
    curve: StableCurve
    params: PlumbingParams
    data: JumpData
    transforms: List[Mapping[HalfEdge, SampledTransform]]
    n_quad: int

    @property
    def K(self) -> int:
        return len(self.transforms)

    def xi_value(self, h: HalfEdge, k: int, z):
        if k == 0:
            return self.data.xi0[h].evaluate(z)
        step = self.transforms[k - 1]
        here = self.curve.half_edges_at(self.curve.vertex_of(h))
        return sum(step[other](z) for other in here if other != h)

    def eta_value(self, vertex: str, z, k=None):
        """eta_v^(k)(z), or the full correction when k is None."""
        steps = range(1, self.K + 1) if k is None else [k]
        here = self.curve.half_edges_at(vertex)
        total = np.zeros(np.shape(z), dtype=complex)
        for step in steps:
            for h in here:
                total = total + self.transforms[step - 1][h](z)
        return complex(total) if np.ndim(z) == 0 else total

    def total_value(self, vertex: str, z):
        return self.data.base[vertex].evaluate(z) + self.eta_value(vertex, z)


def quadrature_backend(
    data: JumpData,
    curve: StableCurve,
    params: PlumbingParams,
    K: int,
    n_quad: int = DEFAULT_N_QUAD,
) -> QuadratureSolution:
    """
    Args:
        data: Jump data
        curve: The nodal curve
        params: Plumbing parameters
        K: Number of steps
        n_quad: Trapezoid points per seam

    Returns:
        The sampled solution
    """
    params.require_valid(curve)
    solution = QuadratureSolution(curve, params, data, [], n_quad)
    if data.is_zero:
        return solution
    transforms: List[Dict[HalfEdge, SampledTransform]] = []
    for k in range(1, K + 1):
        current = QuadratureSolution(curve, params, data, transforms, n_quad)
        step: Dict[HalfEdge, SampledTransform] = {}
        for h in curve.half_edges:
            gmap = gluing_map(curve, params, h)
            w = seam_points(curve, params, h, n_quad)
            g = current.xi_value(h.opposite, k - 1, gmap(w)) * gmap.derivative(w)
            step[h] = SampledTransform(w, g * (w - curve.node_point(h)) / n_quad)
        transforms = transforms + [step]
    logger.debug("quadrature recursion: K=%d, n_quad=%d", K, n_quad)
    return QuadratureSolution(curve, params, data, transforms, n_quad)


def backend_difference(sol: JumpSolution, referee: QuadratureSolution, n_samples: int = 32) -> float:
    """max |eta_exact - eta_quadrature| over the chart boundaries of every component."""
    worst = 0.0
    theta = 2.0 * np.pi * np.arange(n_samples) / n_samples
    for v in sol.curve.vertices:
        exact = sol.eta_total(v)
        for h in sol.curve.half_edges_at(v):
            z = sol.curve.node_point(h) + sol.curve.chart_radius(h) * np.exp(1j * theta)
            difference = np.abs(exact.evaluate(z) - referee.eta_value(v, z))
            worst = max(worst, float(np.max(difference)))
    return worst
