#!/usr/bin/env python
"""
Shared fixtures: the standard curves and plumbing parameters.
"""
import os

import pytest

from plumbing_periods.curve.model import PlumbingParams, curve_from_dict, totally_degenerate
from plumbing_periods.differentials.ratdiff import RationalDifferential

SCENARIOS = os.path.abspath(os.path.join(os.path.dirname(__file__), "..", "..", "scenarios"))


def pytest_configure(config):
    config.addinivalue_line("markers", "slow: runs over a grid of plumbing parameters")


@pytest.fixture
def g1_curve():
    """Nodal cubic with node preimages at +2 and -2."""
    return totally_degenerate([(2, -2)])


@pytest.fixture
def g2_curve():
    """Two self-loops on one sphere."""
    return totally_degenerate([(3, -3), (3j, -3j)])


@pytest.fixture
def g3_curve():
    """Three self-loops on one sphere."""
    return totally_degenerate([(3, -3), (3j, -3j), (6 + 6j, -6 - 6j)])


@pytest.fixture
def banana_curve():
    """Two spheres joined by two nodes."""
    return curve_from_dict(
        {
            "vertices": ["a", "b"],
            "edges": [
                {"id": "e1", "from": "a", "to": "b", "q_from": 2, "q_to": 2},
                {"id": "e2", "from": "a", "to": "b", "q_from": -2, "q_to": -2},
            ],
            "marked": [{"vertex": "a", "point": [0, 5]}, {"vertex": "b", "point": [0, 5]}],
        }
    )


@pytest.fixture
def theta_curve():
    """Two spheres joined by three nodes."""
    return curve_from_dict(
        {
            "vertices": ["a", "b"],
            "edges": [
                {"id": "e1", "from": "a", "to": "b", "q_from": 3, "q_to": 3},
                {"id": "e2", "from": "a", "to": "b", "q_from": -3, "q_to": -3},
                {"id": "e3", "from": "a", "to": "b", "q_from": [0, 3], "q_to": [0, 3]},
            ],
        }
    )


@pytest.fixture
def small_s():
    return 1e-4


def uniform_params(curve, s):
    return PlumbingParams({edge_id: s for edge_id in curve.edge_ids})


@pytest.fixture
def g1_params(g1_curve, small_s):
    return uniform_params(g1_curve, small_s)


@pytest.fixture
def g2_params(g2_curve):
    return uniform_params(g2_curve, 1e-3)


@pytest.fixture
def g1_omega():
    """Third-kind differential with residue +1 at 2 and -1 at -2."""
    return {"v": RationalDifferential.third_kind(2, -2)}
