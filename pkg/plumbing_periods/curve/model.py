#!/usr/bin/env python
"""
Stable curves with rational components: dual graph, node points, charts and
plumbing parameters.

Every component is a copy of the Riemann sphere with global coordinate z.
The chart at a node preimage q_e is the affine map z_e = (z - q_e) / rho_e.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, Iterable, List, Mapping, Optional, Tuple

import networkx as nx

from plumbing_periods.errors import CurveError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class HalfEdge:
    """Oriented edge: (edge, +1) leaves the edge's source, (edge, -1) its target."""

    edge: str
    sign: int = 1

    def __post_init__(self):
        if self.sign not in (1, -1):
            raise ValueError(f"half-edge sign must be +1 or -1, got {self.sign}")

    @property
    def opposite(self) -> "HalfEdge":
        return HalfEdge(self.edge, -self.sign)

    def __neg__(self) -> "HalfEdge":
        return self.opposite

    def __str__(self) -> str:
        return self.edge if self.sign > 0 else f"-{self.edge}"

    @classmethod
    def parse(cls, text: str) -> "HalfEdge":
        text = text.strip()
        if text.startswith("-"):
            return cls(text[1:], -1)
        return cls(text.lstrip("+"), 1)


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    q_source: complex
    q_target: complex
    rho_source: float = 1.0
    rho_target: float = 1.0

    @property
    def is_loop(self) -> bool:
        return self.source == self.target


@dataclass(frozen=True)
class MarkedPoint:
    point: complex
    multiplicity: int = 1


@dataclass(frozen=True)
class DualGraph:
    """Vertices, edge ids and the source map of every half-edge."""

    vertices: Tuple[str, ...]
    edges: Tuple[str, ...]
    source: Mapping[HalfEdge, str]

    @property
    def half_edges(self) -> List[HalfEdge]:
        return [HalfEdge(e, sign) for e in self.edges for sign in (1, -1)]

    def half_edges_at(self, vertex: str) -> List[HalfEdge]:
        return [h for h in self.half_edges if self.source[h] == vertex]

    def to_networkx(self) -> nx.MultiGraph:
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.vertices)
        for e in self.edges:
            graph.add_edge(self.source[HalfEdge(e, 1)], self.source[HalfEdge(e, -1)], key=e)
        return graph

    def is_connected(self) -> bool:
        if not self.vertices:
            return False
        return nx.is_connected(self.to_networkx())

    def betti(self) -> int:
        if not self.is_connected():
            raise CurveError("dual graph is disconnected")
        return len(self.edges) - len(self.vertices) + 1


def betti(graph: DualGraph) -> int:
    """First Betti number of a connected dual graph."""
    return graph.betti()


@dataclass(frozen=True)
class StableCurve:
    vertices: Tuple[str, ...]
    edges: Tuple[Edge, ...]
    marked: Mapping[str, Tuple[MarkedPoint, ...]] = field(default_factory=dict)
    _edges_by_id: Dict[str, Edge] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        by_id: Dict[str, Edge] = {}
        for edge in self.edges:
            by_id.setdefault(edge.id, edge)
        object.__setattr__(self, "_edges_by_id", by_id)
        object.__setattr__(
            self, "marked", {v: tuple(points) for v, points in dict(self.marked).items()}
        )

    @property
    def edge_ids(self) -> Tuple[str, ...]:
        return tuple(edge.id for edge in self.edges)

    def edge(self, edge_id: str) -> Edge:
        edge = self._edges_by_id.get(edge_id)
        if edge is None:
            raise CurveError(f"unknown edge: {edge_id}")
        return edge

    @property
    def graph(self) -> DualGraph:
        source = {}
        for edge in self.edges:
            source[HalfEdge(edge.id, 1)] = edge.source
            source[HalfEdge(edge.id, -1)] = edge.target
        return DualGraph(self.vertices, self.edge_ids, source)

    @property
    def half_edges(self) -> List[HalfEdge]:
        return [HalfEdge(edge.id, sign) for edge in self.edges for sign in (1, -1)]

    def vertex_of(self, h: HalfEdge) -> str:
        edge = self.edge(h.edge)
        return edge.source if h.sign > 0 else edge.target

    def half_edges_at(self, vertex: str) -> List[HalfEdge]:
        return [h for h in self.half_edges if self.vertex_of(h) == vertex]

    def node_point(self, h: HalfEdge) -> complex:
        edge = self.edge(h.edge)
        return complex(edge.q_source if h.sign > 0 else edge.q_target)

    def chart_radius(self, h: HalfEdge) -> float:
        edge = self.edge(h.edge)
        return float(edge.rho_source if h.sign > 0 else edge.rho_target)

    def to_chart(self, h: HalfEdge, z):
        return (z - self.node_point(h)) / self.chart_radius(h)

    def from_chart(self, h: HalfEdge, zeta):
        return self.node_point(h) + self.chart_radius(h) * zeta

    def marked_points(self, vertex: str) -> Tuple[MarkedPoint, ...]:
        return tuple(self.marked.get(vertex, ()))

    @property
    def genus(self) -> int:
        return self.graph.betti()


@dataclass(frozen=True)
class PlumbingParams:
    """Plumbing parameter s_e per unoriented edge."""

    s: Mapping[str, complex]

    def __post_init__(self):
        object.__setattr__(self, "s", {e: complex(v) for e, v in dict(self.s).items()})

    def __getitem__(self, key) -> complex:
        if isinstance(key, HalfEdge):
            key = key.edge
        try:
            return self.s[key]
        except KeyError:
            raise CurveError(f"no plumbing parameter for edge {key}") from None

    @property
    def norm(self) -> float:
        return max((abs(v) for v in self.s.values()), default=0.0)

    def seam_radius(self, curve: StableCurve, h: HalfEdge) -> float:
        """Radius of the seam around q_h in the global coordinate."""
        return curve.chart_radius(h) * math.sqrt(abs(self[h]))

    def scaled(self, factor: complex) -> "PlumbingParams":
        return PlumbingParams({e: factor * v for e, v in self.s.items()})

    def with_edge(self, edge_id: str, value: complex) -> "PlumbingParams":
        s = dict(self.s)
        s[edge_id] = value
        return PlumbingParams(s)

    def validate(self, curve: StableCurve) -> List[str]:
        problems = []
        for edge_id in curve.edge_ids:
            if edge_id not in self.s:
                problems.append(f"missing plumbing parameter for edge {edge_id}")
                continue
            value = self.s[edge_id]
            if value == 0 or not cmath.isfinite(value):
                problems.append(f"plumbing parameter of {edge_id} must be finite and non-zero")
            elif abs(value) >= 1:
                problems.append(f"plumbing parameter of {edge_id} must satisfy |s| < 1")
        return problems

    def require_valid(self, curve: StableCurve) -> None:
        problems = self.validate(curve)
        if problems:
            raise CurveError("; ".join(problems))


def _disks_overlap(q1: complex, r1: float, q2: complex, r2: float) -> bool:
    return abs(q1 - q2) <= r1 + r2


def validate(curve: StableCurve) -> List[str]:
    """
    Check that a curve is admissible for plumbing.

    Args:
        curve: The curve to check

    Returns:
        A list of human-readable violations, empty iff the curve is admissible
    """
    problems: List[str] = []
    known = set(curve.vertices)
    for edge in curve.edges:
        for vertex in (edge.source, edge.target):
            if vertex not in known:
                problems.append(f"edge {edge.id} refers to unknown vertex {vertex}")
    for vertex in curve.marked:
        if vertex not in known:
            problems.append(f"marked point on unknown vertex {vertex}")
    if problems:
        return problems

    if not curve.graph.is_connected():
        problems.append("graph is disconnected")

    for h in curve.half_edges:
        q = curve.node_point(h)
        rho = curve.chart_radius(h)
        if not cmath.isfinite(q):
            problems.append(f"node point of {h} is not finite")
        if not (math.isfinite(rho) and rho > 0):
            problems.append(f"chart radius of {h} must be positive")

    for vertex in curve.vertices:
        here = curve.half_edges_at(vertex)
        for h1, h2 in combinations(here, 2):
            if _disks_overlap(
                curve.node_point(h1), curve.chart_radius(h1),
                curve.node_point(h2), curve.chart_radius(h2),
            ):
                problems.append(f"charts overlap at {vertex}: {h1} and {h2}")
        for marked in curve.marked_points(vertex):
            if marked.multiplicity <= 0:
                problems.append(f"marked point {marked.point} on {vertex} needs positive multiplicity")
            for h in here:
                if abs(marked.point - curve.node_point(h)) <= curve.chart_radius(h):
                    problems.append(f"marked point {marked.point} lies in the chart of {h}")
        special = len(here) + len(curve.marked_points(vertex))
        if special < 3 and not _is_nodal_cubic(curve):
            problems.append(f"component has < 3 special points: {vertex}")
    return problems


def _is_nodal_cubic(curve: StableCurve) -> bool:
    # the irreducible one-node genus-one curve is admitted without marked points
    return len(curve.vertices) == 1 and len(curve.edges) == 1 and curve.edges[0].is_loop


def require_valid(curve: StableCurve) -> None:
    problems = validate(curve)
    if problems:
        raise CurveError("; ".join(problems))


def curve_from_dict(data: Mapping) -> StableCurve:
    """Build a curve from the JSON layout {vertices, edges, marked}."""
    edges = []
    for item in data.get("edges", []):
        edges.append(
            Edge(
                id=str(item["id"]),
                source=str(item["from"]),
                target=str(item["to"]),
                q_source=_complex(item["q_from"]),
                q_target=_complex(item["q_to"]),
                rho_source=float(item.get("rho_from", 1.0)),
                rho_target=float(item.get("rho_to", 1.0)),
            )
        )
    marked: Dict[str, List[MarkedPoint]] = {}
    for item in data.get("marked", []):
        marked.setdefault(str(item["vertex"]), []).append(
            MarkedPoint(_complex(item["point"]), int(item.get("order", 1)))
        )
    return StableCurve(
        vertices=tuple(str(v) for v in data["vertices"]),
        edges=tuple(edges),
        marked={v: tuple(points) for v, points in marked.items()},
    )


def _complex(value) -> complex:
    if isinstance(value, (list, tuple)):
        re, im = value
        return complex(float(re), float(im))
    return complex(value)


def totally_degenerate(
    pairs: Iterable[Tuple[complex, complex]],
    radius: float = 1.0,
    vertex: str = "v",
) -> StableCurve:
    """One rational component with a self-loop per pair (q_i, q_-i)."""
    edges = tuple(
        Edge(f"e{i + 1}", vertex, vertex, complex(qp), complex(qm), radius, radius)
        for i, (qp, qm) in enumerate(pairs)
    )
    return StableCurve(vertices=(vertex,), edges=edges)
