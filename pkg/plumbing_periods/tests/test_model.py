#!/usr/bin/env python
"""
Test the curve model, the symplectic basis and the gluing maps.
"""
import math

import numpy as np
import pytest

from plumbing_periods.curve.basis import CyclePath, intersection_matrix, symplectic_basis
from plumbing_periods.curve.gluing import gluing_map
from plumbing_periods.curve.model import (
    HalfEdge,
    MarkedPoint,
    PlumbingParams,
    StableCurve,
    curve_from_dict,
    require_valid,
    totally_degenerate,
    validate,
)
from plumbing_periods.errors import CurveError


def test_half_edge_parse_and_opposite():
    """Half-edges parse from text and flip sign."""
    h = HalfEdge.parse("-e2")
    assert h == HalfEdge("e2", -1)
    assert -h == HalfEdge("e2", 1)
    assert HalfEdge.parse("+e2") == HalfEdge("e2", 1)
    assert str(h) == "-e2"
    with pytest.raises(ValueError):
        HalfEdge("e1", 0)


def test_genus_of_standard_curves(g1_curve, g2_curve, banana_curve, theta_curve):
    """Genus is the first Betti number of the dual graph."""
    assert g1_curve.genus == 1
    assert g2_curve.genus == 2
    assert banana_curve.genus == 1
    assert theta_curve.genus == 2


def test_standard_curves_are_valid(g1_curve, g2_curve, banana_curve):
    """The nodal cubic is admitted without marked points."""
    assert validate(g1_curve) == []
    assert validate(g2_curve) == []
    assert validate(banana_curve) == []


def test_node_points_and_charts(g1_curve):
    """(e, +1) sits at the source's node point."""
    h = HalfEdge("e1", 1)
    assert g1_curve.node_point(h) == 2
    assert g1_curve.node_point(-h) == -2
    assert g1_curve.vertex_of(-h) == "v"
    zeta = 0.3 + 0.1j
    assert abs(g1_curve.to_chart(h, g1_curve.from_chart(h, zeta)) - zeta) < 1e-15


def test_edge_lookup_by_id(theta_curve):
    """Edges are found by id; unknown ids are refused."""
    for edge in theta_curve.edges:
        assert theta_curve.edge(edge.id) is edge
    assert theta_curve.node_point(HalfEdge("e3", -1)) == 3j
    with pytest.raises(CurveError, match="unknown edge: e9"):
        theta_curve.edge("e9")
    with pytest.raises(CurveError):
        theta_curve.vertex_of(HalfEdge("e9", 1))


def test_overlapping_charts_are_reported():
    """Chart disks around node points on one component must be disjoint."""
    curve = totally_degenerate([(2, 2.5)])
    problems = validate(curve)
    assert any("overlap" in p for p in problems)
    with pytest.raises(CurveError):
        require_valid(curve)


def test_unstable_component_is_reported():
    """A sphere with two nodes and nothing else is not stable."""
    curve = curve_from_dict(
        {
            "vertices": ["a", "b"],
            "edges": [
                {"id": "e1", "from": "a", "to": "b", "q_from": 2, "q_to": 2},
                {"id": "e2", "from": "a", "to": "b", "q_from": -2, "q_to": -2},
            ],
        }
    )
    problems = validate(curve)
    assert any("< 3 special points" in p for p in problems)


def test_disconnected_curve_is_reported():
    """Two components without a node between them."""
    curve = StableCurve(vertices=("a", "b"), edges=())
    assert "graph is disconnected" in validate(curve)


def test_marked_point_in_chart_is_reported(g1_curve):
    """Marked points must stay outside the node charts."""
    curve = StableCurve(g1_curve.vertices, g1_curve.edges, {"v": (MarkedPoint(2.5),)})
    assert any("lies in the chart" in p for p in validate(curve))


def test_curve_from_dict_reads_pairs():
    """Complex values may be given as [re, im] pairs."""
    curve = curve_from_dict(
        {
            "vertices": ["v"],
            "edges": [{"id": "e1", "from": "v", "to": "v", "q_from": [0, 3], "q_to": [0, -3], "rho_from": 0.5}],
            "marked": [{"vertex": "v", "point": [1, 1], "order": 2}],
        }
    )
    assert curve.node_point(HalfEdge("e1", 1)) == 3j
    assert curve.chart_radius(HalfEdge("e1", 1)) == 0.5
    assert curve.chart_radius(HalfEdge("e1", -1)) == 1.0
    assert curve.marked_points("v") == (MarkedPoint(1 + 1j, 2),)


def test_plumbing_params(g1_curve):
    """Seam radius is rho * sqrt(|s|); bad parameters are reported."""
    params = PlumbingParams({"e1": 1e-4})
    assert params[HalfEdge("e1", -1)] == 1e-4
    assert math.isclose(params.seam_radius(g1_curve, HalfEdge("e1", 1)), 1e-2)
    assert params.validate(g1_curve) == []
    assert params.scaled(10)["e1"] == pytest.approx(1e-3)
    assert any("|s| < 1" in p for p in PlumbingParams({"e1": 1.5}).validate(g1_curve))
    assert any("non-zero" in p for p in PlumbingParams({"e1": 0}).validate(g1_curve))
    assert any("missing" in p for p in PlumbingParams({}).validate(g1_curve))
    with pytest.raises(CurveError):
        PlumbingParams({})["e1"]


def test_basis_of_totally_degenerate_curve(g2_curve):
    """Every loop is an A-cycle; B_k crosses only its own node."""
    basis = symplectic_basis(g2_curve)
    assert basis.genus == 2
    assert basis.a_cycles == (HalfEdge("e1", 1), HalfEdge("e2", 1))
    assert basis.b_cycles[0].edges == (HalfEdge("e1", 1),)
    assert basis.intersection("e1", 0) == 1
    assert basis.intersection("e1", 1) == 0
    form = intersection_matrix(basis)
    expected = np.block([[np.zeros((2, 2)), np.eye(2)], [-np.eye(2), np.zeros((2, 2))]])
    assert np.array_equal(form, expected)


def test_basis_of_banana(banana_curve):
    """The smallest edge id goes to the cotree."""
    basis = symplectic_basis(banana_curve)
    assert basis.a_cycles == (HalfEdge("e1", 1),)
    assert basis.tree_edges == ("e2",)
    cycle = basis.b_cycles[0]
    assert cycle.edges == (HalfEdge("e1", 1), HalfEdge("e2", -1))
    assert cycle.validate(banana_curve) == []
    assert basis.intersection("e2", 0) == -1


def test_basis_of_theta(theta_curve):
    """Both B-cycles return through the tree edge e3."""
    basis = symplectic_basis(theta_curve)
    assert basis.a_cycles == (HalfEdge("e1", 1), HalfEdge("e2", 1))
    assert basis.b_cycles[1].edges == (HalfEdge("e2", 1), HalfEdge("e3", -1))
    assert basis.intersections["e3"] == (-1, -1)
    form = intersection_matrix(basis)
    assert np.array_equal(form, -form.T)
    assert form[0, 2] == 1 and form[1, 3] == 1 and form[0, 3] == 0


def test_broken_cycle_is_reported(banana_curve):
    """Consecutive crossings must share a component."""
    cycle = CyclePath.parse(["e1", "e2"])
    assert cycle.validate(banana_curve)
    assert cycle.reversed().crossings("e1") == -1


def test_gluing_map_swaps_seams(g1_curve, g1_params):
    """The seam around q_h lands on the seam around q_{-h}."""
    h = HalfEdge("e1", 1)
    gmap = gluing_map(g1_curve, g1_params, h)
    radius = g1_params.seam_radius(g1_curve, h)
    z = 2 + radius * np.exp(1j * np.linspace(0, 2 * np.pi, 17))
    w = gmap(z)
    assert np.allclose(np.abs(w + 2), radius, rtol=1e-12)
    assert np.allclose(gmap.inverse(w), z, rtol=1e-12)
    other = gluing_map(g1_curve, g1_params, -h)
    assert other == gmap.inverse
    assert abs(np.linalg.det(gmap.sl2()) - 1) < 1e-12
