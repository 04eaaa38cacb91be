#!/usr/bin/env python
"""
The plumbing identification z_e * z_{-e} = s_e written as a Moebius map
between global coordinates.
"""
import cmath
from dataclasses import dataclass

import numpy as np

from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve


@dataclass(frozen=True)
class GluingMap:
    """
    w = b + c / (z - q), taking the seam around q on v(h) to the seam around b
    on v(-h).
    """

    q: complex
    b: complex
    c: complex

    def __call__(self, z):
        return self.b + self.c / (z - self.q)

    def derivative(self, z):
        return -self.c / (z - self.q) ** 2

    @property
    def inverse(self) -> "GluingMap":
        return GluingMap(q=self.b, b=self.q, c=self.c)

    def matrix(self) -> np.ndarray:
        return np.array([[self.b, self.c - self.b * self.q], [1.0, -self.q]], dtype=complex)

    def sl2(self) -> np.ndarray:
        """Matrix normalized to determinant one."""
        return self.matrix() / cmath.sqrt(-self.c)


def gluing_map(curve: StableCurve, params: PlumbingParams, h: HalfEdge) -> GluingMap:
    q = curve.node_point(h)
    b = curve.node_point(h.opposite)
    c = curve.chart_radius(h) * curve.chart_radius(h.opposite) * params[h]
    return GluingMap(q=q, b=b, c=c)
