#!/usr/bin/env python
"""
Twisted differentials on level graphs and the degenerating families glued
from them.

A twisted differential assigns a rational differential Xi_v and a level
(0 at the top, then -1, -2, ...) to every component. Scaling parameters t_k,
one per level drop, fix the plumbing parameters through s_e^(k_e + 1) = t_{i,j},
where k_e is the order of Xi at the upper end of e.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import networkx as nx
import numpy as np

from plumbing_periods.curve.gluing import gluing_map
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.differentials.ratdiff import RationalDifferential, chart_expansion
from plumbing_periods.errors import CompatibilityError
from plumbing_periods.solver.jump import GluedFamily, JumpData, JumpSolution, glued_family, iterate

logger = logging.getLogger(__name__)

CONDITIONS = ("(0)", "(1)", "(2)", "(3)", "(4)", "(5)", "maxima")
ZERO_TOL = 1e-6
RESIDUE_TOL = 1e-10


@dataclass(frozen=True)
class TwistedData:
    differentials: Mapping[str, RationalDifferential]
    levels: Mapping[str, int]

    def __post_init__(self):
        object.__setattr__(self, "differentials", dict(self.differentials))
        object.__setattr__(self, "levels", {v: int(level) for v, level in dict(self.levels).items()})

    def differential(self, vertex: str) -> RationalDifferential:
        return self.differentials.get(vertex, RationalDifferential.zero())

    def level(self, vertex: str) -> int:
        return self.levels.get(vertex, 0)

    @property
    def level_count(self) -> int:
        return 1 - min(self.levels.values(), default=0)

    def order(self, curve: StableCurve, h: HalfEdge) -> int:
        """ord_{q_h} Xi_{v(h)}."""
        return self.differential(curve.vertex_of(h)).order_at(curve.node_point(h))

    def residue(self, curve: StableCurve, h: HalfEdge) -> complex:
        return self.differential(curve.vertex_of(h)).residue(curve.node_point(h))

    def is_down(self, curve: StableCurve, h: HalfEdge) -> bool:
        """h leaves its component towards a strictly lower level."""
        return self.level(curve.vertex_of(h)) > self.level(curve.vertex_of(h.opposite))

    def is_horizontal(self, curve: StableCurve, h: HalfEdge) -> bool:
        return self.level(curve.vertex_of(h)) == self.level(curve.vertex_of(h.opposite))


@dataclass(frozen=True)
class ScalingParams:
    """t = (t_{-1}, t_{-2}, ...): t_k scales the drop from level k + 1 to k."""

    t: Tuple[complex, ...]

    def __post_init__(self):
        object.__setattr__(self, "t", tuple(complex(x) for x in self.t))
        if any(x == 0 for x in self.t):
            raise CompatibilityError("scaling parameters must be non-zero")

    def from_top(self, level: int) -> complex:
        """t_{0,i} = product of t_k for k = i .. -1; t_{0,0} = 1."""
        if level > 0 or -level > len(self.t):
            raise CompatibilityError(f"no scaling parameter reaches level {level}")
        return complex(np.prod(self.t[:-level])) if level < 0 else 1.0 + 0j

    def between(self, upper: int, lower: int) -> complex:
        """t_{i,j} = t_{0,j} / t_{0,i} for i > j."""
        return self.from_top(lower) / self.from_top(upper)


@dataclass
class CompatibilityReport:
    violations: Dict[str, List[str]] = field(default_factory=lambda: {key: [] for key in CONDITIONS})

    def add(self, condition: str, message: str) -> None:
        self.violations[condition].append(message)

    def passed(self, condition: str) -> bool:
        return not self.violations[condition]

    @property
    def ok(self) -> bool:
        return all(not items for items in self.violations.values())

    @property
    def failed(self) -> List[str]:
        return [key for key in CONDITIONS if self.violations[key]]

    def to_json(self) -> dict:
        return {key: {"passed": not items, "violations": items} for key, items in self.violations.items()}


def _near(a: complex, b: complex, tol: float = ZERO_TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


def _check_zeros_and_poles(report: CompatibilityReport, curve: StableCurve, xi: TwistedData) -> None:
    for v in curve.vertices:
        omega = xi.differential(v)
        nodes = [curve.node_point(h) for h in curve.half_edges_at(v)]
        marked = curve.marked_points(v)
        for point in marked:
            order = omega.order_at(point.point)
            if order != point.multiplicity:
                report.add("(0)", f"order {order} at marked point {point.point} on {v}, expected {point.multiplicity}")
        for zero in omega.zeros():
            if not any(_near(zero, point.point) for point in marked) and not any(_near(zero, q) for q in nodes):
                report.add("(0)", f"zero at {zero:.6g} on {v} is not a marked point")
        if not omega.is_zero and not omega.polynomial and omega.order_at_infinity() != 0:
            report.add("(0)", f"infinity is a zero or pole on {v}")
        if omega.polynomial:
            report.add("(1)", f"pole at infinity on {v}")
        for pole in omega.poles:
            if not any(_near(pole, q, 1e-12) for q in nodes):
                report.add("(1)", f"pole at {pole} on {v} is not a node")


def _check_nodes(report: CompatibilityReport, curve: StableCurve, xi: TwistedData) -> None:
    for edge_id in curve.edge_ids:
        up, down = HalfEdge(edge_id, 1), HalfEdge(edge_id, -1)
        k_up, k_down = xi.order(curve, up), xi.order(curve, down)
        if k_up + k_down != -2:
            report.add("(2)", f"orders at {edge_id} sum to {k_up + k_down}")
        if k_up == -1 and k_down == -1:
            r_up, r_down = xi.residue(curve, up), xi.residue(curve, down)
            if abs(r_up + r_down) > RESIDUE_TOL * max(1.0, abs(r_up)):
                report.add("(3)", f"residues at {edge_id} are not opposite: {r_up}, {r_down}")
        level_up = xi.level(curve.vertex_of(up))
        level_down = xi.level(curve.vertex_of(down))
        if k_up == -1 and k_down == -1:
            expected = 0
        else:
            expected = (k_up > k_down) - (k_up < k_down)
        actual = (level_up > level_down) - (level_up < level_down)
        if actual != expected:
            report.add("(4)", f"levels {level_up}, {level_down} at {edge_id} do not match orders {k_up}, {k_down}")


def _check_grc(report: CompatibilityReport, curve: StableCurve, xi: TwistedData) -> None:
    graph = curve.graph.to_networkx()
    for level in sorted(set(xi.levels.values())):
        above = [v for v in curve.vertices if xi.level(v) > level]
        for component in nx.connected_components(graph.subgraph(above)):
            total = 0j
            crossing = []
            for v in component:
                for h in curve.half_edges_at(v):
                    if xi.level(curve.vertex_of(h.opposite)) == level:
                        total += xi.residue(curve, h.opposite)
                        crossing.append(str(h))
            if crossing and abs(total) > RESIDUE_TOL:
                report.add("(5)", f"residues below {sorted(component)} at level {level} sum to {total:.3g}")


def check_compatibility(
    xi: TwistedData,
    omega: Optional[Mapping[str, RationalDifferential]],
    curve: StableCurve,
) -> CompatibilityReport:
    """
    Check a twisted differential against the compatibility conditions.

    Args:
        xi: Twisted differential with its level function
        omega: Stable differential that Xi must equal on top-level components, if any
        curve: The nodal curve carrying the marked points

    Returns:
        Violations per condition; an empty report means the data can be glued
    """
    report = CompatibilityReport()
    missing = [v for v in curve.vertices if v not in xi.levels]
    for v in missing:
        report.add("(4)", f"no level for {v}")
    _check_zeros_and_poles(report, curve, xi)
    _check_nodes(report, curve, xi)
    _check_grc(report, curve, xi)
    if omega is not None:
        top = max(xi.levels.values(), default=0)
        for v in curve.vertices:
            if xi.level(v) == top and xi.differential(v).max_difference(omega.get(v, RationalDifferential.zero())) > 1e-12:
                report.add("maxima", f"Xi differs from Omega on top-level component {v}")
    if report.ok:
        logger.debug("twisted differential is compatible")
    else:
        logger.info("twisted differential fails %s", report.failed)
    return report


def modification_differential(curve: StableCurve, xi: TwistedData, v: str, level: int) -> RationalDifferential:
    """
    phi_{v,j} = sum of r_h dz/(z - q_h) over the half-edges h from v down to
    level j, with r_h = -res_{q_{-h}} Xi_{v(-h)}.

    Raises:
        CompatibilityError: If the residues do not sum to zero
    """
    terms = {}
    for h in curve.half_edges_at(v):
        if xi.level(v) > level == xi.level(curve.vertex_of(h.opposite)):
            key = (curve.node_point(h), 1)
            terms[key] = terms.get(key, 0j) - xi.residue(curve, h.opposite)
    total = sum(terms.values(), 0j)
    if abs(total) > RESIDUE_TOL * max(1.0, max((abs(c) for c in terms.values()), default=0.0)):
        raise CompatibilityError(f"residues below {v} at level {level} sum to {total:.3g}")
    return RationalDifferential(terms)


def modified_differential(curve: StableCurve, xi: TwistedData, t: ScalingParams, v: str) -> RationalDifferential:
    """Xi^_v = Xi_v + sum over lower levels j of t_{i,j} phi_{v,j}."""
    total = xi.differential(v)
    upper = xi.level(v)
    for level in range(upper - 1, -xi.level_count, -1):
        phi = modification_differential(curve, xi, v, level)
        if not phi.is_zero:
            total = total + t.between(upper, level) * phi
    return total


def _principal_root(value: complex, degree: int, branch: int = 0) -> complex:
    return cmath.exp((cmath.log(value) + 2j * math.pi * branch) / degree)


def scaling_to_plumbing(
    curve: StableCurve,
    xi: TwistedData,
    t: ScalingParams,
    horizontal: Optional[Mapping[str, complex]] = None,
    branches: Optional[Mapping[str, int]] = None,
) -> PlumbingParams:
    """
    s_e = (k_e + 1)-th root of t_{i,j} on every edge between levels i > j;
    horizontal edges take a user value or the geometric mean of the adjacent
    down-edge magnitudes.

    Raises:
        CompatibilityError: If a horizontal edge has no value and no adjacent down-edge
    """
    horizontal = dict(horizontal or {})
    branches = dict(branches or {})
    s: Dict[str, complex] = {}
    for edge_id in curve.edge_ids:
        up = HalfEdge(edge_id, 1)
        if xi.is_horizontal(curve, up):
            continue
        if not xi.is_down(curve, up):
            up = up.opposite
        k = xi.order(curve, up)
        target = t.between(xi.level(curve.vertex_of(up)), xi.level(curve.vertex_of(up.opposite)))
        s[edge_id] = _principal_root(target, k + 1, branches.get(edge_id, 0))
    for edge_id in curve.edge_ids:
        if edge_id in s:
            continue
        if edge_id in horizontal:
            s[edge_id] = complex(horizontal[edge_id])
            continue
        edge = curve.edge(edge_id)
        adjacent = [
            abs(s[h.edge])
            for v in {edge.source, edge.target}
            for h in curve.half_edges_at(v)
            if h.edge in s
        ]
        if not adjacent:
            raise CompatibilityError(f"horizontal edge {edge_id} needs a plumbing parameter")
        s[edge_id] = complex(math.exp(sum(math.log(x) for x in adjacent) / len(adjacent)))
    return PlumbingParams(s)


def path_product_audit(curve: StableCurve, xi: TwistedData, params: PlumbingParams, t: ScalingParams) -> float:
    """
    Largest relative deviation of prod s_e^(k_e + 1) along a simple downward
    path from t_{i,j} of its end levels, over all vertex pairs.
    """
    graph = nx.MultiDiGraph()
    graph.add_nodes_from(curve.vertices)
    for h in curve.half_edges:
        if xi.is_down(curve, h):
            graph.add_edge(curve.vertex_of(h), curve.vertex_of(h.opposite), key=str(h), half=h)
    worst = 0.0
    for start in curve.vertices:
        for end in curve.vertices:
            if xi.level(start) <= xi.level(end):
                continue
            expected = t.between(xi.level(start), xi.level(end))
            for path in nx.all_simple_edge_paths(graph, start, end):
                product = 1.0 + 0j
                for u, w, key in path:
                    h = graph.edges[u, w, key]["half"]
                    product *= params[h] ** (xi.order(curve, h) + 1)
                worst = max(worst, abs(product - expected) / abs(expected))
    return worst


def twisted_initial_data(
    curve: StableCurve,
    xi: TwistedData,
    t: ScalingParams,
    params: PlumbingParams,
) -> JumpData:
    """
    Jump data of the twisted family:
        upper end e:  t_{0,i} (Xi^_v - t_{i,j} I_e^* P(Xi^_{v(-e)}))
        lower end -e: t_{0,j} hol(Xi^_{v(-e)})
        horizontal h: t_{0,i} Xi^_v minus its residue term at q_h

    Raises:
        CompatibilityError: If some xi_e^(0) is not holomorphic in its chart
    """
    hats = {v: modified_differential(curve, xi, t, v) for v in curve.vertices}
    base = {v: t.from_top(xi.level(v)) * hats[v] for v in curve.vertices}
    xi0: Dict[HalfEdge, RationalDifferential] = {}
    residues: Dict[HalfEdge, complex] = {}
    for h in curve.half_edges:
        v, other = curve.vertex_of(h), curve.vertex_of(h.opposite)
        q = curve.node_point(h)
        residues[h] = 0j
        if xi.is_horizontal(curve, h):
            residues[h] = base[v].residue(q)
            data = base[v].without_pole(q)
        elif xi.is_down(curve, h):
            principal = hats[other].principal_part(curve.node_point(h.opposite))
            pulled = principal.pullback(gluing_map(curve, params, h))
            ratio = t.between(xi.level(v), xi.level(other))
            data = t.from_top(xi.level(v)) * (hats[v] - ratio * pulled)
            leftover = data.residue(q)
            if abs(leftover) > 1e-9 * max(1.0, data.magnitude):
                raise CompatibilityError(f"residual pole {leftover:.3g} at the upper end of {h}")
            data = data.without_pole(q)
        else:
            data = t.from_top(xi.level(v)) * hats[v].without_pole(q)
        if not chart_expansion(data, curve, h, order=4).is_holomorphic():
            raise CompatibilityError(f"jump data at {h} is not holomorphic in its chart")
        xi0[h] = data
    return JumpData(xi0, residues, base)


@dataclass
class TwistedFamily:
    twisted: TwistedData
    scaling: ScalingParams
    params: PlumbingParams
    solution: JumpSolution
    family: GluedFamily

    def level_scale(self, vertex: str) -> complex:
        return self.scaling.from_top(self.twisted.level(vertex))


def build_twisted_family(
    curve: StableCurve,
    xi: TwistedData,
    t: ScalingParams,
    K: Optional[int] = None,
    horizontal: Optional[Mapping[str, complex]] = None,
    **solver_options,
) -> TwistedFamily:
    """
    Glue a compatible twisted differential into the family Xi_t.

    Raises:
        CompatibilityError: If the data cannot be glued
        NonConvergenceError: If the jump recursion does not converge
    """
    params = scaling_to_plumbing(curve, xi, t, horizontal)
    data = twisted_initial_data(curve, xi, t, params)
    solution = iterate(data, curve, params, K=K, **solver_options)
    logger.info("twisted family at t=%s: K=%d, tail %.3e", t.t, solution.K, solution.tail_bound)
    return TwistedFamily(xi, t, params, solution, glued_family(solution))


def compact_samples(curve: StableCurve, vertex: str, n: int = 64) -> np.ndarray:
    """Points on the circles of radius 1.5 rho around every node of a component."""
    theta = 2.0 * np.pi * np.arange(n) / n
    points = [
        curve.node_point(h) + 1.5 * curve.chart_radius(h) * np.exp(1j * theta)
        for h in curve.half_edges_at(vertex)
    ]
    return np.concatenate(points) if points else np.zeros(0, dtype=complex)


def rescaled_restriction_error(family: TwistedFamily, vertex: str, points: Optional[np.ndarray] = None) -> float:
    """max |t_{0,i}^{-1} Xi_t(z) - Xi_v(z)| over points of the component."""
    curve = family.solution.curve
    if points is None:
        points = compact_samples(curve, vertex)
    scaled = family.family.evaluate(vertex, points) / family.level_scale(vertex)
    return float(np.max(np.abs(scaled - family.twisted.differential(vertex).evaluate(points)), initial=0.0))


def zero_clusters(family: TwistedFamily, radius: float = 0.1) -> Dict[str, List[Tuple[complex, int, int]]]:
    """
    Zeros of Xi_t counted on a small circle around every marked point,
    as (point, expected multiplicity, count).
    """
    curve = family.solution.curve
    out: Dict[str, List[Tuple[complex, int, int]]] = {}
    for v in curve.vertices:
        omega = family.family.differential(v)
        out[v] = [
            (point.point, point.multiplicity, omega.argument_count(point.point, radius))
            for point in curve.marked_points(v)
        ]
    return out


def t_power_audit(
    curve: StableCurve,
    xi: TwistedData,
    t: ScalingParams,
    factor: float = 10.0,
    horizontal: Optional[Mapping[str, complex]] = None,
) -> Dict[HalfEdge, float]:
    """
    Observed power of t in each xi_h^(0): the slope of the largest chart
    coefficient between t and t / factor. Negative slopes mean negative powers.
    """
    smaller = ScalingParams(tuple(x / factor for x in t.t))
    slopes: Dict[HalfEdge, float] = {}
    data = []
    for scaling in (t, smaller):
        params = scaling_to_plumbing(curve, xi, scaling, horizontal)
        data.append(twisted_initial_data(curve, xi, scaling, params))
    for h in curve.half_edges:
        sizes = [
            float(np.max(np.abs(chart_expansion(d.xi0[h], curve, h, order=4).coefficients), initial=0.0))
            for d in data
        ]
        if sizes[0] == 0.0 or sizes[1] == 0.0:
            slopes[h] = math.inf
            continue
        slopes[h] = math.log(sizes[0] / sizes[1]) / math.log(factor)
    return slopes
