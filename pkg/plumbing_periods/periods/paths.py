#!/usr/bin/env python
"""
Canonical integration paths on the plumbed surface.

Inside a component a cycle runs between chart-boundary points z_h = 1,
going around every chart disk it would enter. Across a node it runs radially
in the chart from 1 to sqrt|s|, then along the seam to sqrt(s), where the
gluing z_e z_{-e} = s_e identifies it with sqrt(s) in the opposite chart.
"""
import cmath
import math
from typing import List, Sequence, Tuple

import numpy as np

from plumbing_periods.curve.basis import CyclePath
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.errors import CurveError

ARC_STEP = math.pi / 16


def arc(center: complex, radius: float, start: float, stop: float) -> List[complex]:
    """Polyline along a circle from angle start to angle stop, endpoints included."""
    n = max(2, int(math.ceil(abs(stop - start) / ARC_STEP)) + 1)
    return list(center + radius * np.exp(1j * np.linspace(start, stop, n)))


def _wrap_angle(angle: float) -> float:
    wrapped = math.remainder(angle, 2.0 * math.pi)
    return math.pi if wrapped == -math.pi else wrapped


def _disk_interval(a: complex, b: complex, center: complex, radius: float) -> Tuple[float, float]:
    u = b - a
    d = a - center
    qa = abs(u) ** 2
    qb = 2.0 * (d * u.conjugate()).real
    qc = abs(d) ** 2 - radius**2
    disc = qb * qb - 4.0 * qa * qc
    if qa == 0 or disc <= 0:
        return 1.0, 0.0
    root = math.sqrt(disc)
    return max(0.0, (-qb - root) / (2.0 * qa)), min(1.0, (-qb + root) / (2.0 * qa))


def detour(a: complex, b: complex, disks: Sequence[Tuple[complex, float]]) -> List[complex]:
    """
    The segment [a, b] with every chord through a disk replaced by the shorter
    arc of its boundary circle. The disks must be disjoint.
    """
    hits = []
    for center, radius in disks:
        t1, t2 = _disk_interval(a, b, center, radius)
        if t2 - t1 > 1e-12:
            hits.append((t1, t2, center, radius))
    hits.sort(key=lambda item: item[0])
    points = [a]
    for t1, t2, center, radius in hits:
        enter = a + t1 * (b - a)
        leave = a + t2 * (b - a)
        start = cmath.phase(enter - center)
        sweep = _wrap_angle(cmath.phase(leave - center) - start)
        points.extend(arc(center, radius, start, start + sweep))
    points.append(b)
    return points


def chart_point(curve: StableCurve, h: HalfEdge, zeta: complex) -> complex:
    return curve.from_chart(h, zeta)


def component_path(curve: StableCurve, vertex: str, start: complex, end: complex) -> List[complex]:
    disks = [(curve.node_point(h), curve.chart_radius(h)) for h in curve.half_edges_at(vertex)]
    return detour(start, end, disks)


def crossing_out(curve: StableCurve, params: PlumbingParams, h: HalfEdge) -> List[complex]:
    """On v(h): chart coordinate 1 -> sqrt|s| -> arc -> sqrt(s), in global coordinates."""
    s = params[h]
    radius = math.sqrt(abs(s))
    chart = [1.0 + 0j] + arc(0j, radius, 0.0, cmath.phase(s) / 2.0)
    return [chart_point(curve, h, zeta) for zeta in chart]


def crossing_in(curve: StableCurve, params: PlumbingParams, h: HalfEdge) -> List[complex]:
    """On v(h): the seam point sqrt(s) back out to chart coordinate 1."""
    return list(reversed(crossing_out(curve, params, h)))


def cycle_polylines(curve: StableCurve, params: PlumbingParams, cycle: CyclePath) -> List[Tuple[str, List[complex]]]:
    """
    One polyline per visited component: in through the seam of -e_{i-1},
    across the component, out through the seam of e_i.

    Raises:
        CurveError: If the cycle is not closed on the curve
    """
    problems = cycle.validate(curve)
    if problems:
        raise CurveError("; ".join(problems))
    if not cycle.edges:
        return [(cycle.vertex, list(cycle.loop) + [cycle.loop[0]])]
    pieces = []
    for i, h in enumerate(cycle.edges):
        entry = cycle.edges[i - 1].opposite
        vertex = curve.vertex_of(h)
        x_in = chart_point(curve, entry, 1.0)
        x_out = chart_point(curve, h, 1.0)
        points = crossing_in(curve, params, entry)
        points += component_path(curve, vertex, x_in, x_out)[1:]
        points += crossing_out(curve, params, h)[1:]
        pieces.append((vertex, points))
    return pieces
