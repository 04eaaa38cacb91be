#!/usr/bin/env python
"""
The recursive A-normalized solution of the jump problem on a plumbed curve.

Step k pulls every xi_{-h}^(k-1) back through the gluing map onto v(h) and
takes its Cauchy transform over the seam of h. On a rational component the
transform is exact: it is the principal part of the pullback inside the seam.

    eta_v^(k)  = sum of the transforms P_h, h at v
    xi_h^(k)   = sum of the transforms P_h', h' != h at v
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional

import numpy as np

from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.differentials.kernels import KernelEvaluator, get_kernel
from plumbing_periods.differentials.ratdiff import (
    RationalDifferential,
    chart_value,
    pullback_glue,
)
from plumbing_periods.errors import CapError, NonConvergenceError, ResidueMismatchError
from plumbing_periods.solver.norms import seam_norm

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-14
DEFAULT_K_MAX = 32
DEFAULT_RATIO_LIMIT = 0.5
# seam norms below this many ulps of the data scale are round-off
ROUNDOFF_ULPS = 64.0
CAP_SLACK = 1e-9


@dataclass(frozen=True)
class JumpData:
    """
    Jump data xi_h^(0) per half-edge, residues r_h, and the base differential
    Omega_v per component that the correction is added to.
    """

    xi0: Mapping[HalfEdge, RationalDifferential]
    residues: Mapping[HalfEdge, complex]
    base: Mapping[str, RationalDifferential]

    @classmethod
    def from_jumps(
        cls,
        curve: StableCurve,
        xi0: Mapping[HalfEdge, RationalDifferential],
        base: Optional[Mapping[str, RationalDifferential]] = None,
    ) -> "JumpData":
        """Arbitrary jump data; missing half-edges get zero data."""
        data = {h: xi0.get(h, RationalDifferential.zero()) for h in curve.half_edges}
        if base is None:
            base = {v: RationalDifferential.zero() for v in curve.vertices}
        else:
            base = {v: base.get(v, RationalDifferential.zero()) for v in curve.vertices}
        return cls(data, {h: 0j for h in curve.half_edges}, base)

    @property
    def is_zero(self) -> bool:
        return all(xi.is_zero for xi in self.xi0.values())


def initial_data(
    omega: Mapping[str, RationalDifferential],
    curve: StableCurve,
    params: PlumbingParams,
    tol: float = 1e-10,
) -> JumpData:
    """
    Jump data of a stable differential: xi_h^(0) = Omega_v - r_h dz/(z - q_h).

    Args:
        omega: Omega_v per component
        curve: The nodal curve
        params: Plumbing parameters
        tol: Relative tolerance for the residue and infinity checks

    Returns:
        The jump data with the residues r_h

    Raises:
        ResidueMismatchError: If a pole is not simple, not at a node, or
            residues at the two sides of a node do not cancel
    """
    nodes = {v: [curve.node_point(h) for h in curve.half_edges_at(v)] for v in curve.vertices}
    for v in curve.vertices:
        differential = omega.get(v, RationalDifferential.zero())
        if differential.polynomial:
            raise ResidueMismatchError(f"differential on {v} has a pole at infinity")
        if not differential.is_holomorphic_at_infinity(tol):
            raise ResidueMismatchError(f"differential on {v} has a residue at infinity")
        for (p, m), _ in differential.terms.items():
            if m > 1:
                raise ResidueMismatchError(f"differential on {v} has a pole of order {m} at {p}")
            if not any(abs(p - q) <= tol * max(1.0, abs(q)) for q in nodes[v]):
                raise ResidueMismatchError(f"differential on {v} has a pole at {p} away from the nodes")

    xi0: Dict[HalfEdge, RationalDifferential] = {}
    residues: Dict[HalfEdge, complex] = {}
    for h in curve.half_edges:
        differential = omega.get(curve.vertex_of(h), RationalDifferential.zero())
        q = curve.node_point(h)
        residues[h] = differential.residue(q)
        xi0[h] = differential.without_pole(q)
    for edge_id in curve.edge_ids:
        plus, minus = residues[HalfEdge(edge_id, 1)], residues[HalfEdge(edge_id, -1)]
        if abs(plus + minus) > tol * max(1.0, abs(plus), abs(minus)):
            raise ResidueMismatchError(f"residues at node {edge_id} do not cancel: {plus} and {minus}")
    base = {v: omega.get(v, RationalDifferential.zero()) for v in curve.vertices}
    logger.debug("initial data with residues %s", {str(h): r for h, r in residues.items()})
    return JumpData(xi0, residues, base)


@dataclass(frozen=True)
class JumpSolution:
    curve: StableCurve
    params: PlumbingParams
    data: JumpData
    eta: Mapping[str, List[RationalDifferential]]
    xi: Mapping[HalfEdge, List[RationalDifferential]]
    K: int
    tail_bound: float = 0.0
    ratio: float = 0.0
    norms: List[float] = field(default_factory=list)

    def eta_total(self, vertex: str) -> RationalDifferential:
        total = RationalDifferential.zero()
        for term in self.eta[vertex]:
            total = total + term
        return total

    def total(self, vertex: str) -> RationalDifferential:
        """Omega_{v,s} = Omega_v + sum_k eta_v^(k)."""
        return self.data.base[vertex] + self.eta_total(vertex)


def _step(
    previous: Mapping[HalfEdge, RationalDifferential],
    curve: StableCurve,
    params: PlumbingParams,
    kernel: KernelEvaluator,
):
    transforms: Dict[HalfEdge, RationalDifferential] = {}
    for h in curve.half_edges:
        pulled = pullback_glue(previous[h.opposite], curve, params, h)
        transforms[h] = kernel.cauchy_transform(pulled, curve.node_point(h), params.seam_radius(curve, h))
    eta: Dict[str, RationalDifferential] = {}
    xi: Dict[HalfEdge, RationalDifferential] = {}
    for v in curve.vertices:
        here = curve.half_edges_at(v)
        total = RationalDifferential.zero()
        for h in here:
            total = total + transforms[h]
        eta[v] = total.flushed()
        for h in here:
            own = RationalDifferential.zero()
            for other in here:
                if other != h:
                    own = own + transforms[other]
            xi[h] = own.flushed()
    return eta, xi


def iterate(
    data: JumpData,
    curve: StableCurve,
    params: PlumbingParams,
    K: Optional[int] = None,
    tol: float = DEFAULT_TOL,
    k_max: int = DEFAULT_K_MAX,
    ratio_limit: float = DEFAULT_RATIO_LIMIT,
    force: bool = False,
    kernel: Optional[KernelEvaluator] = None,
) -> JumpSolution:
    """
    Run the jump recursion.

    With K given, exactly K steps are taken. Otherwise steps continue until the
    seam norm of the last xi falls below tol * |xi^(0)| * (1 - ratio), or below
    the round-off floor of the data, where the ratio test is skipped.

    Raises:
        NonConvergenceError: If the observed contraction ratio reaches
            ratio_limit (unless force), or k_max steps do not reach tol
    """
    kernel = kernel or get_kernel()
    params.require_valid(curve)
    xi: Dict[HalfEdge, List[RationalDifferential]] = {h: [data.xi0[h]] for h in curve.half_edges}
    eta: Dict[str, List[RationalDifferential]] = {v: [] for v in curve.vertices}
    norm0 = seam_norm(data.xi0, curve, params)
    norms = [norm0]
    if norm0 == 0.0:
        logger.debug("zero jump data, nothing to iterate")
        return JumpSolution(curve, params, data, eta, xi, 0, 0.0, 0.0, norms)
    scale = max([norm0] + [omega.magnitude for omega in data.xi0.values()])
    floor = ROUNDOFF_ULPS * np.finfo(float).eps * scale

    limit = K if K is not None else k_max
    ratio = 0.0
    last_ratio = 0.0
    k = 0
    while k < limit:
        k += 1
        step_eta, step_xi = _step({h: terms[-1] for h, terms in xi.items()}, curve, params, kernel)
        for v, term in step_eta.items():
            eta[v].append(term)
        for h, term in step_xi.items():
            xi[h].append(term)
        norm = seam_norm(step_xi, curve, params)
        norms.append(norm)
        ratio = norm / norms[-2] if norms[-2] > 0 else 0.0
        logger.debug("step %d: seam norm %.3e, ratio %.3e", k, norm, ratio)
        if K is None and norm <= floor:
            if k >= 2:
                ratio = min(ratio, last_ratio)
            logger.debug("seam norm at round-off floor %.3e", floor)
            break
        if k >= 2 and ratio >= min(ratio_limit, 1.0) and not force:
            raise NonConvergenceError(
                f"jump series contracts too slowly at step {k}: ratio {ratio:.3g} >= {ratio_limit}",
                ratio=ratio,
                k=k,
            )
        last_ratio = ratio
        if norm == 0.0:
            break
        if K is None and ratio < 1.0 and norm <= tol * norm0 * (1.0 - ratio):
            break
    else:
        if K is None:
            raise NonConvergenceError(f"no convergence within {k_max} steps", ratio=ratio, k=k)

    tail = norms[-1] * ratio / (1.0 - ratio) if ratio < 1.0 else math.inf
    logger.info("jump recursion: K=%d, ratio=%.3e, tail bound %.3e", k, ratio, tail)
    return JumpSolution(curve, params, data, eta, xi, k, tail, ratio, norms)


def first_order(data: JumpData, curve: StableCurve, params: PlumbingParams) -> Dict[str, RationalDifferential]:
    """
    Leading correction -sum_h s_h rho_h xi~_{-h} dz/(z - q_h)^2 per component,
    where xi~ is the chart value of xi^(0) at the opposite node.
    """
    out: Dict[str, RationalDifferential] = {}
    for v in curve.vertices:
        terms = {}
        for h in curve.half_edges_at(v):
            tilde = chart_value(data.xi0[h.opposite], curve, h.opposite)
            key = (curve.node_point(h), 2)
            terms[key] = terms.get(key, 0j) - params[h] * curve.chart_radius(h) * tilde
        out[v] = RationalDifferential(terms)
    return out


class GluedFamily:
    """Omega_s evaluable on every component minus its caps."""

    def __init__(self, sol: JumpSolution):
        self.sol = sol
        self._totals = {v: sol.total(v) for v in sol.curve.vertices}

    @property
    def tail_bound(self) -> float:
        return self.sol.tail_bound

    def differential(self, vertex: str) -> RationalDifferential:
        return self._totals[vertex]

    def evaluate(self, vertex: str, z):
        """
        Raises:
            CapError: If a point lies strictly inside a removed cap
        """
        curve, params = self.sol.curve, self.sol.params
        points = np.asarray(z, dtype=complex)
        for h in curve.half_edges_at(vertex):
            radius = params.seam_radius(curve, h)
            if np.any(np.abs(points - curve.node_point(h)) < radius * (1.0 - CAP_SLACK)):
                raise CapError(f"point inside the cap of {h} on {vertex}")
        return self._totals[vertex].evaluate(z)

    __call__ = evaluate


def glued_family(sol: JumpSolution) -> GluedFamily:
    return GluedFamily(sol)
