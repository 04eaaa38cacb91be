#!/usr/bin/env python
"""
Norms and residual functionals of a jump solution.
"""
import logging
import math
from typing import TYPE_CHECKING, Dict, Mapping, Optional, Union

import numpy as np

from plumbing_periods.curve.gluing import gluing_map
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.differentials.ratdiff import RationalDifferential

if TYPE_CHECKING:
    from plumbing_periods.solver.jump import JumpSolution

logger = logging.getLogger(__name__)

SEAM_SAMPLES = 64
TWO_PI_I = 2j * math.pi


def seam_points(curve: StableCurve, params: PlumbingParams, h: HalfEdge, n: int = SEAM_SAMPLES) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(n) / n
    return curve.node_point(h) + params.seam_radius(curve, h) * np.exp(1j * theta)


def seam_norm(
    xi: Mapping[HalfEdge, RationalDifferential],
    curve: StableCurve,
    params: PlumbingParams,
    n: int = SEAM_SAMPLES,
) -> float:
    """max over half-edges of the chart sup-norm rho_h |xi_h| on the seam of h."""
    worst = 0.0
    for h, omega in xi.items():
        if omega.is_zero:
            continue
        values = omega.evaluate(seam_points(curve, params, h, n))
        worst = max(worst, curve.chart_radius(h) * float(np.max(np.abs(values))))
    return worst


def _as_half_edge(h: Union[str, HalfEdge]) -> HalfEdge:
    return h if isinstance(h, HalfEdge) else HalfEdge.parse(str(h))


def jump_residual(sol: "JumpSolution", h: Union[str, HalfEdge], n_samples: int = SEAM_SAMPLES) -> float:
    """
    max over seam points of |Omega_{v(h),s} - I_h^* Omega_{v(-h),s}| in the chart z_h.

    The pullback is evaluated pointwise through the gluing map, independently
    of the partial-fraction pullback used by the solver.
    """
    h = _as_half_edge(h)
    curve, params = sol.curve, sol.params
    gmap = gluing_map(curve, params, h)
    z = seam_points(curve, params, h, n_samples)
    here = sol.total(curve.vertex_of(h)).evaluate(z)
    there = sol.total(curve.vertex_of(h.opposite)).evaluate(gmap(z)) * gmap.derivative(z)
    return curve.chart_radius(h) * float(np.max(np.abs(here - there)))


def a_norm_residual(sol: "JumpSolution") -> Dict[str, complex]:
    """Integral of the correction eta over every seam, by residues; each must vanish."""
    out: Dict[str, complex] = {}
    for edge_id in sol.curve.edge_ids:
        h = HalfEdge(edge_id, 1)
        center = sol.curve.node_point(h)
        radius = sol.params.seam_radius(sol.curve, h)
        eta = sol.eta_total(sol.curve.vertex_of(h))
        out[edge_id] = TWO_PI_I * eta.residue_sum_inside(center, radius)
    return out


def xi_seam_periods(sol: "JumpSolution") -> Dict[HalfEdge, complex]:
    """Integral of every xi_h^(k) over its own seam, summed over k; each must vanish."""
    out: Dict[HalfEdge, complex] = {}
    for h, terms in sol.xi.items():
        center = sol.curve.node_point(h)
        radius = sol.params.seam_radius(sol.curve, h)
        out[h] = TWO_PI_I * sum((xi.residue_sum_inside(center, radius) for xi in terms), 0j)
    return out


def sp_identity_residual(
    sol: "JumpSolution",
    h: Union[str, HalfEdge],
    k: int,
    radius: Optional[float] = None,
    n_samples: int = SEAM_SAMPLES,
) -> float:
    """
    max |eta_v^(k) - I_h^* xi_{-h}^(k-1) - xi_h^(k)| on a circle of the annulus
    around q_h, by default of radius rho_h |s_h|^(1/4).
    """
    h = _as_half_edge(h)
    if not 1 <= k <= sol.K:
        raise ValueError(f"step {k} outside 1..{sol.K}")
    curve, params = sol.curve, sol.params
    gmap = gluing_map(curve, params, h)
    rho = curve.chart_radius(h)
    if radius is None:
        radius = rho * abs(params[h]) ** 0.25
    theta = 2.0 * np.pi * np.arange(n_samples) / n_samples
    z = curve.node_point(h) + radius * np.exp(1j * theta)
    eta = sol.eta[curve.vertex_of(h)][k - 1].evaluate(z)
    pulled = sol.xi[h.opposite][k - 1].evaluate(gmap(z)) * gmap.derivative(z)
    own = sol.xi[h][k].evaluate(z)
    return rho * float(np.max(np.abs(eta - pulled - own)))


def _log_primitive(eta: RationalDifferential, caps: Mapping[complex, float], z: np.ndarray) -> np.ndarray:
    """
    Single-valued primitive of eta outside the caps: each logarithm is paired
    with the center of the cap containing its pole.
    """
    out = np.zeros(z.shape, dtype=complex)
    for (p, m), c in eta.terms.items():
        if m == 1:
            center = next((q for q, r in caps.items() if abs(p - q) < r), None)
            if center is None:
                raise ValueError(f"pole {p} of a correction term lies outside every cap")
            if p != center:
                out += c * np.log((z - p) / (z - center))
        else:
            out += -c * (z - p) ** (1 - m) / (m - 1)
    for j, a in enumerate(eta.polynomial):
        out += a * z ** (j + 1) / (j + 1)
    return out


def l2_norm(sol: "JumpSolution", vertex: str, n_quad: int = 256) -> float:
    """
    L2 norm of the correction eta_v on the component minus its caps, by Stokes:
    the area integral becomes a sum over seams of the primitive times conj(eta).
    """
    eta = sol.eta_total(vertex)
    if eta.is_zero:
        return 0.0
    curve, params = sol.curve, sol.params
    here = curve.half_edges_at(vertex)
    caps = {curve.node_point(h): params.seam_radius(curve, h) for h in here}
    theta = 2.0 * np.pi * np.arange(n_quad) / n_quad
    total = 0.0
    for h in here:
        radius = params.seam_radius(curve, h)
        unit = np.exp(1j * theta)
        z = curve.node_point(h) + radius * unit
        integrand = -0.5 * radius * np.conj(unit) * _log_primitive(eta, caps, z) * np.conj(eta.evaluate(z))
        total += float(np.real(np.sum(integrand))) * (2.0 * np.pi / n_quad)
    if total < 0:
        logger.debug("negative L2 quadrature %g at %s, clipping", total, vertex)
        total = 0.0
    return math.sqrt(total)
