#!/usr/bin/env python
"""
Test the Schottky-group oracle for totally degenerate curves.
"""
import numpy as np
import pytest

from plumbing_periods.curve.gluing import GluingMap
from plumbing_periods.curve.model import PlumbingParams
from plumbing_periods.errors import OracleError
from plumbing_periods.periods.closed_forms import eval_tot_deg_tau
from plumbing_periods.periods.periods import wrap_2pi_i
from plumbing_periods.periods.schottky import (
    Generator,
    SchottkyGroup,
    apply,
    oracle_for_curve,
    oracle_tau,
    schottky_cross_ratio,
)


def test_generator_fixed_points():
    """Fixed points are fixed; the multiplier contracts."""
    gen = Generator.from_gluing(GluingMap(q=2.0, b=-2.0, c=1e-3))
    assert abs(apply(gen.matrix, gen.attracting) - gen.attracting) < 1e-12
    # the repelling point attracts under the inverse, where the residual is not amplified
    assert abs(apply(np.linalg.inv(gen.matrix), gen.repelling) - gen.repelling) < 1e-12
    (a, b), (c, d) = gen.matrix
    for z in (gen.attracting, gen.repelling):
        assert abs(c * z * z + (d - a) * z - b) < 1e-12 * abs(b)
    assert gen.attracting == pytest.approx(-np.sqrt(4 + 1e-3), abs=4e-15)
    assert gen.repelling == pytest.approx(np.sqrt(4 + 1e-3), abs=4e-15)
    assert gen.multiplier == pytest.approx(1e-3 / (2 + np.sqrt(4 + 1e-3)) ** 2 * -1, rel=1e-12)
    assert abs(gen.multiplier) < 1
    assert abs(np.linalg.det(gen.matrix) - 1) < 1e-12


def test_elliptic_generator_raises():
    """z -> 1/z has no attracting fixed point."""
    with pytest.raises(OracleError):
        Generator.from_gluing(GluingMap(q=0.0, b=0.0, c=1.0))


def test_reduced_words():
    """Two generators: 1, 4, 12 reduced words of length 0, 1, 2."""
    gens = [
        Generator.from_gluing(GluingMap(q=3.0, b=-3.0, c=1e-3)),
        Generator.from_gluing(GluingMap(q=3j, b=-3j, c=1e-3)),
    ]
    shells = SchottkyGroup(gens, max_word_length=2).words()
    assert [len(shell) for shell in shells] == [1, 4, 12]
    for word, _ in shells[2]:
        assert word[0] != (word[1][0], -word[1][1])


def test_cross_ratio_convention():
    assert schottky_cross_ratio(0, 1, 2, 3) == pytest.approx((0 - 2) * (1 - 3) / ((0 - 3) * (1 - 2)))


def test_genus_one_oracle_matches_closed_form():
    """tau = log of the multiplier = log s - log(-16) - s/8 + O(s^2)."""
    s = 1e-4
    result = oracle_tau([(2, -2)], None, [s])
    closed = eval_tot_deg_tau([(2, -2)], [s], 0, 0)
    assert abs(wrap_2pi_i(result.tau[0, 0] - closed)) < 1e-6
    assert result.tau[0, 0] == pytest.approx(np.log(result.multipliers[0]))


def test_genus_two_oracle(g2_curve):
    """The oracle is symmetric and its shells shrink with word length."""
    params = PlumbingParams({"e1": 1e-3, "e2": 1e-3})
    short = oracle_for_curve(g2_curve, params, L=2)
    long = oracle_for_curve(g2_curve, params, L=4)
    assert long.error_estimate < short.error_estimate
    assert abs(wrap_2pi_i(long.tau[0, 1] - long.tau[1, 0])) < 1e-12
    closed = eval_tot_deg_tau([(3, -3), (3j, -3j)], [1e-3, 1e-3], 0, 1)
    assert abs(wrap_2pi_i(long.tau[0, 1] - closed)) < 1e-4


def test_oracle_needs_totally_degenerate_curve(banana_curve):
    params = PlumbingParams({"e1": 1e-3, "e2": 1e-3})
    with pytest.raises(OracleError):
        oracle_for_curve(banana_curve, params)
