#!/usr/bin/env python
"""
Cauchy kernel and fundamental bidifferential of a component.

The genus-0 kernels have closed forms:
    K(z, w) = dz / (2 pi i (z - w)),   omega(z, w) = dz dw / (z - w)^2
Evaluators for components of higher genus can be registered by name and are
then picked up by the solver through get_kernel.
"""
import logging
import math
from abc import ABC, abstractmethod
from typing import Callable, Dict, Optional, Sequence

import numpy as np

from plumbing_periods.curve.model import HalfEdge, StableCurve
from plumbing_periods.differentials.ratdiff import RationalDifferential
from plumbing_periods.errors import PlumbingError, PoleError

logger = logging.getLogger(__name__)

TWO_PI_I = 2j * math.pi


class KernelEvaluator(ABC):
    """Kernels of one component, together with their chart data."""

    name = "abstract"
    # base point of the Cauchy kernel; unused in genus 0
    q0: Optional[complex] = None

    @abstractmethod
    def cauchy(self, z, w):
        """K(z, w) as the coefficient of dz."""

    @abstractmethod
    def bidifferential(self, z, w):
        """omega(z, w) as the coefficient of dz dw."""

    @abstractmethod
    def cauchy_hat(self, z, w, same_chart: bool):
        """Holomorphic part of K in a pair of chart coordinates."""

    @abstractmethod
    def bidifferential_hat(self, z, w, same_chart: bool):
        """Holomorphic part of omega in a pair of chart coordinates."""

    @abstractmethod
    def beta(self, curve: StableCurve, e: HalfEdge, f: HalfEdge) -> complex:
        """beta_{e,f}: value of the holomorphic part of omega at (q_e, q_f) in the charts."""

    @abstractmethod
    def cauchy_transform(self, phi: RationalDifferential, center: complex, radius: float) -> RationalDifferential:
        """z -> contour integral over |w - center| = radius of K(z, w) phi(w)."""


class Genus0Kernel(KernelEvaluator):
    name = "genus0"

    def cauchy(self, z, w):
        diff = np.asarray(z, dtype=complex) - np.asarray(w, dtype=complex)
        if np.any(diff == 0):
            raise PoleError("Cauchy kernel evaluated on the diagonal")
        value = 1.0 / (TWO_PI_I * diff)
        return complex(value) if np.ndim(value) == 0 else value

    def bidifferential(self, z, w):
        diff = np.asarray(z, dtype=complex) - np.asarray(w, dtype=complex)
        if np.any(diff == 0):
            raise PoleError("bidifferential evaluated on the diagonal")
        value = 1.0 / diff**2
        return complex(value) if np.ndim(value) == 0 else value

    def cauchy_hat(self, z, w, same_chart: bool):
        # affine charts preserve both kernels exactly
        if same_chart:
            return 0j
        return self.cauchy(z, w)

    def bidifferential_hat(self, z, w, same_chart: bool):
        if same_chart:
            return 0j
        return self.bidifferential(z, w)

    def beta(self, curve: StableCurve, e: HalfEdge, f: HalfEdge) -> complex:
        if e == f:
            return 0j
        if curve.vertex_of(e) != curve.vertex_of(f):
            raise PlumbingError(f"beta needs two half-edges on one component, got {e} and {f}")
        qe, qf = curve.node_point(e), curve.node_point(f)
        return curve.chart_radius(e) * curve.chart_radius(f) / (qe - qf) ** 2

    def cauchy_transform(self, phi: RationalDifferential, center: complex, radius: float) -> RationalDifferential:
        # for |z| outside the circle this is sum of residues inside; the result
        # extends as the principal parts of phi enclosed by the contour
        return phi.principal_parts_inside(center, radius)


def a_normalization_check(
    kernel: KernelEvaluator,
    w: complex,
    loop_center: complex,
    loop_radius: float,
    n_quad: int = 256,
) -> complex:
    """
    Integrate K(., w) over a circle by the trapezoid rule.

    Returns:
        The integral; 0 for loops not enclosing w, 1 for loops enclosing w only
    """
    theta = 2.0 * np.pi * np.arange(n_quad) / n_quad
    z = loop_center + loop_radius * np.exp(1j * theta)
    dz = 1j * loop_radius * np.exp(1j * theta)
    values = np.asarray(kernel.cauchy(z, np.full_like(z, w)))
    return complex(np.sum(values * dz) * (2.0 * np.pi / n_quad))


def symmetry_defect(kernel: KernelEvaluator, points: Sequence[complex]) -> float:
    """max |omega(z, w) - omega(w, z)| over all distinct pairs."""
    worst = 0.0
    for i, z in enumerate(points):
        for w in points[i + 1:]:
            worst = max(worst, abs(kernel.bidifferential(z, w) - kernel.bidifferential(w, z)))
    return worst


def derivative_defect(kernel: KernelEvaluator, z: complex, w: complex, step: float = 1e-5) -> float:
    """Relative error of omega = 2 pi i d/dw K, by central differences in w."""
    dk = (kernel.cauchy(z, w + step) - kernel.cauchy(z, w - step)) / (2.0 * step)
    expected = kernel.bidifferential(z, w)
    return abs(TWO_PI_I * dk - expected) / max(abs(expected), 1e-300)


_REGISTRY: Dict[str, Callable[[], KernelEvaluator]] = {"genus0": Genus0Kernel}


def register_kernel(name: str, factory: Callable[[], KernelEvaluator]) -> None:
    if name in _REGISTRY:
        logger.warning("Replacing registered kernel %s", name)
    _REGISTRY[name] = factory


def get_kernel(name: str = "genus0") -> KernelEvaluator:
    try:
        return _REGISTRY[name]()
    except KeyError:
        raise PlumbingError(f"unknown kernel: {name}") from None


def genus0_kernel() -> KernelEvaluator:
    return Genus0Kernel()
