#!/usr/bin/env python
"""
Cycles on the plumbed surface and the symplectic basis built from a spanning
tree of the dual graph.

A CyclePath (e_0, ..., e_{N-1}) crosses node e_i from q_{e_i} on v(e_i) to
q_{-e_i} on v(-e_i), then runs inside that component to q_{e_{i+1}}.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from plumbing_periods.curve.model import HalfEdge, StableCurve
from plumbing_periods.errors import CurveError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CyclePath:
    edges: Tuple[HalfEdge, ...]
    orientation: int = 1
    # a loop inside a single component, used when the cycle crosses no node
    vertex: Optional[str] = None
    loop: Tuple[complex, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "edges", tuple(self.edges))
        object.__setattr__(self, "loop", tuple(complex(z) for z in self.loop))
        if self.orientation not in (1, -1):
            raise ValueError("orientation must be +1 or -1")

    def reversed(self) -> "CyclePath":
        return CyclePath(self.edges, -self.orientation, self.vertex, self.loop)

    def crossings(self, edge_id: str) -> int:
        """Signed number of times the cycle crosses the seam of edge_id."""
        return self.orientation * sum(h.sign for h in self.edges if h.edge == edge_id)

    def components(self, curve: StableCurve) -> List[str]:
        return [curve.vertex_of(h) for h in self.edges]

    def validate(self, curve: StableCurve) -> List[str]:
        if not self.edges:
            if self.vertex is None or len(self.loop) < 3:
                return ["cycle without crossings needs a vertex and a closed loop"]
            return []
        problems = []
        for i, h in enumerate(self.edges):
            previous = self.edges[i - 1]
            if curve.vertex_of(previous.opposite) != curve.vertex_of(h):
                problems.append(f"cycle breaks between {previous} and {h}")
        return problems

    @classmethod
    def parse(cls, items) -> "CyclePath":
        return cls(tuple(HalfEdge.parse(str(item)) for item in items))


@dataclass(frozen=True)
class SymplecticBasis:
    a_cycles: Tuple[HalfEdge, ...]
    b_cycles: Tuple[CyclePath, ...]
    intersections: Mapping[str, Tuple[int, ...]] = field(default_factory=dict)
    tree_edges: Tuple[str, ...] = ()

    @property
    def genus(self) -> int:
        return len(self.a_cycles)

    def intersection(self, edge_id: str, k: int) -> int:
        """N_{|e|,k}: signed crossings of B_k through the seam of edge_id."""
        row = self.intersections.get(edge_id)
        return 0 if row is None else row[k]


def _spanning_tree(curve: StableCurve) -> nx.Graph:
    # larger rank = later id; the maximum tree leaves the smallest ids to the cotree
    ranks = {edge_id: i for i, edge_id in enumerate(sorted(curve.edge_ids))}
    graph = nx.MultiGraph()
    graph.add_nodes_from(curve.vertices)
    for edge in curve.edges:
        if not edge.is_loop:
            graph.add_edge(edge.source, edge.target, key=edge.id, weight=ranks[edge.id])
    forest = nx.maximum_spanning_tree(graph, weight="weight", algorithm="kruskal")
    tree = nx.Graph()
    tree.add_nodes_from(curve.vertices)
    for u, w, key in forest.edges(keys=True):
        tree.add_edge(u, w, id=key)
    return tree


def _tree_path(curve: StableCurve, tree: nx.Graph, start: str, end: str) -> List[HalfEdge]:
    vertices = nx.shortest_path(tree, start, end)
    path = []
    for u, w in zip(vertices[:-1], vertices[1:]):
        edge = curve.edge(tree[u][w]["id"])
        path.append(HalfEdge(edge.id, 1 if edge.source == u else -1))
    return path


def symplectic_basis(curve: StableCurve) -> SymplecticBasis:
    """
    A-cycles are the seams of the non-tree edges; B_k is the fundamental cycle
    of the k-th non-tree edge.

    Args:
        curve: A valid curve with rational components

    Returns:
        The basis together with the signed seam crossings N_{|e|,k}

    Raises:
        CurveError: If the dual graph is disconnected
    """
    if not curve.graph.is_connected():
        raise CurveError("dual graph is disconnected")
    tree = _spanning_tree(curve)
    tree_ids = sorted(data["id"] for _, _, data in tree.edges(data=True))
    cotree = [edge for edge in sorted(curve.edges, key=lambda e: e.id) if edge.id not in tree_ids]

    a_cycles = []
    b_cycles = []
    for edge in cotree:
        first = HalfEdge(edge.id, 1)
        a_cycles.append(first)
        b_cycles.append(CyclePath((first, *_tree_path(curve, tree, edge.target, edge.source))))

    intersections: Dict[str, Tuple[int, ...]] = {
        edge_id: tuple(cycle.crossings(edge_id) for cycle in b_cycles) for edge_id in curve.edge_ids
    }
    logger.debug("spanning tree %s, cotree %s", tree_ids, [e.id for e in cotree])
    return SymplecticBasis(tuple(a_cycles), tuple(b_cycles), intersections, tuple(tree_ids))


def intersection_matrix(basis: SymplecticBasis) -> np.ndarray:
    """Combinatorial intersection form in the order (A_1..A_g, B_1..B_g)."""
    g = basis.genus
    form = np.zeros((2 * g, 2 * g), dtype=int)
    for j, a in enumerate(basis.a_cycles):
        for k in range(g):
            value = a.sign * basis.intersection(a.edge, k)
            form[j, g + k] = value
            form[g + k, j] = -value
    return form
