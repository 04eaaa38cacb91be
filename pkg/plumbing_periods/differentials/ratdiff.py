#!/usr/bin/env python
"""
Rational differentials on a genus-0 component in partial-fraction form.

A differential f(z) dz is stored as principal parts {(p, m): c}, each term
meaning c (z - p)^(-m) dz, plus an optional polynomial part sum_j a_j z^j dz.
Differentials of the stable pipeline never carry a polynomial part; it only
appears when principal parts are pulled back through a gluing map.
"""
import cmath
import logging
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial
from numpy.polynomial import polynomial as npoly
from scipy.special import comb

from plumbing_periods.curve.gluing import GluingMap, gluing_map
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.errors import ChartError, PoleError

logger = logging.getLogger(__name__)

Term = Tuple[complex, int]

FLUSH_THRESHOLD = 1e-300
POLE_MATCH_TOL = 1e-12
_MAX_SEGMENTS = 100_000


def _same_point(a: complex, b: complex, tol: float = POLE_MATCH_TOL) -> bool:
    return abs(a - b) <= tol * max(1.0, abs(b))


@dataclass(frozen=True)
class ChartExpansion:
    """Laurent coefficients a_n, n = min_order .. max_order, in a chart variable."""

    min_order: int
    coefficients: np.ndarray

    @property
    def max_order(self) -> int:
        return self.min_order + len(self.coefficients) - 1

    def coefficient(self, n: int) -> complex:
        index = n - self.min_order
        if 0 <= index < len(self.coefficients):
            return complex(self.coefficients[index])
        return 0j

    @property
    def residue(self) -> complex:
        return self.coefficient(-1)

    @property
    def tilde(self) -> complex:
        """Value of the holomorphic part at the chart center."""
        return self.coefficient(0)

    def is_holomorphic(self, tol: float = 0.0) -> bool:
        return all(abs(self.coefficient(n)) <= tol for n in range(self.min_order, 0))


@dataclass(frozen=True)
class RationalDifferential:
    terms: Mapping[Term, complex] = field(default_factory=dict)
    polynomial: Tuple[complex, ...] = ()

    def __post_init__(self):
        terms: Dict[Term, complex] = {}
        for (pole, order), coeff in dict(self.terms).items():
            if int(order) < 1:
                raise ValueError(f"pole order must be positive, got {order}")
            key = (complex(pole), int(order))
            terms[key] = terms.get(key, 0j) + complex(coeff)
        object.__setattr__(self, "terms", {k: c for k, c in terms.items() if c != 0})
        poly = [complex(a) for a in self.polynomial]
        while poly and poly[-1] == 0:
            poly.pop()
        object.__setattr__(self, "polynomial", tuple(poly))

    # construction

    @classmethod
    def zero(cls) -> "RationalDifferential":
        return cls()

    @classmethod
    def simple_pole(cls, pole: complex, residue: complex = 1.0) -> "RationalDifferential":
        return cls({(pole, 1): residue})

    @classmethod
    def third_kind(cls, plus: complex, minus: complex) -> "RationalDifferential":
        """dz/(z - plus) - dz/(z - minus): residues +1 and -1."""
        return cls({(plus, 1): 1.0, (minus, 1): -1.0})

    @classmethod
    def pole_of_order(cls, pole: complex, order: int, coeff: complex = 1.0) -> "RationalDifferential":
        return cls({(pole, order): coeff})

    @classmethod
    def from_rational(
        cls,
        numerator: Sequence[complex],
        poles: Mapping[complex, int],
    ) -> "RationalDifferential":
        """
        Partial fractions of N(z) / prod (z - p)^m_p.

        Args:
            numerator: Coefficients of N, lowest degree first
            poles: Pole locations with their multiplicities

        Returns:
            The same differential in partial-fraction form
        """
        roots: List[complex] = []
        for p, m in poles.items():
            roots.extend([complex(p)] * int(m))
        denominator = npoly.polyfromroots(roots) if roots else np.array([1.0 + 0j])
        quotient, remainder = npoly.polydiv(np.asarray(numerator, dtype=complex), denominator)
        terms: Dict[Term, complex] = {}
        for p, m in poles.items():
            p = complex(p)
            others = [r for q, k in poles.items() if complex(q) != p for r in [complex(q)] * int(k)]
            shift = Polynomial([p, 1.0])
            top = Polynomial(remainder)(shift).coef
            bottom = Polynomial(npoly.polyfromroots(others) if others else [1.0])(shift).coef
            series = _series_quotient(top, bottom, int(m))
            for j, value in enumerate(series):
                terms[(p, int(m) - j)] = value
        poly = tuple(quotient) if np.any(quotient != 0) else ()
        return cls(terms, poly)

    # inspection

    @cached_property
    def _arrays(self) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        keys = list(self.terms)
        poles = np.array([p for p, _ in keys], dtype=complex)
        orders = np.array([m for _, m in keys], dtype=int)
        coeffs = np.array([self.terms[k] for k in keys], dtype=complex)
        return poles, orders, coeffs

    @property
    def poles(self) -> List[complex]:
        seen: List[complex] = []
        for p, _ in self.terms:
            if p not in seen:
                seen.append(p)
        return seen

    @property
    def is_zero(self) -> bool:
        return not self.terms and not self.polynomial

    @property
    def magnitude(self) -> float:
        values = [abs(c) for c in self.terms.values()] + [abs(a) for a in self.polynomial]
        return max(values, default=0.0)

    def __len__(self) -> int:
        return len(self.terms)

    def max_order(self, pole: complex, tol: float = POLE_MATCH_TOL) -> int:
        return max((m for (p, m) in self.terms if _same_point(p, pole, tol)), default=0)

    def residue(self, pole: complex, tol: float = POLE_MATCH_TOL) -> complex:
        """Coefficient of dz/(z - pole); zero if pole is not a pole."""
        return sum((c for (p, m), c in self.terms.items() if m == 1 and _same_point(p, pole, tol)), 0j)

    def residue_at_infinity(self) -> complex:
        return -sum((c for (_, m), c in self.terms.items() if m == 1), 0j)

    def residue_sum_inside(self, center: complex, radius: float) -> complex:
        return sum((c for (p, m), c in self.terms.items() if m == 1 and abs(p - center) < radius), 0j)

    def is_holomorphic_at_infinity(self, tol: float = 1e-12) -> bool:
        if self.polynomial:
            return False
        return abs(self.residue_at_infinity()) <= tol * max(1.0, self.magnitude)

    # algebra

    def __add__(self, other: "RationalDifferential") -> "RationalDifferential":
        if not isinstance(other, RationalDifferential):
            return NotImplemented
        terms = dict(self.terms)
        for key, c in other.terms.items():
            terms[key] = terms.get(key, 0j) + c
        n = max(len(self.polynomial), len(other.polynomial))
        poly = tuple(
            (self.polynomial[j] if j < len(self.polynomial) else 0j)
            + (other.polynomial[j] if j < len(other.polynomial) else 0j)
            for j in range(n)
        )
        return RationalDifferential(terms, poly)

    def __neg__(self) -> "RationalDifferential":
        return self.scale(-1.0)

    def __sub__(self, other: "RationalDifferential") -> "RationalDifferential":
        if not isinstance(other, RationalDifferential):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: complex) -> "RationalDifferential":
        factor = complex(factor)
        return RationalDifferential(
            {k: factor * c for k, c in self.terms.items()},
            tuple(factor * a for a in self.polynomial),
        )

    def __mul__(self, factor) -> "RationalDifferential":
        if isinstance(factor, RationalDifferential):
            return NotImplemented
        return self.scale(factor)

    __rmul__ = __mul__

    def flushed(self, threshold: float = FLUSH_THRESHOLD) -> "RationalDifferential":
        return RationalDifferential(
            {k: c for k, c in self.terms.items() if abs(c) >= threshold},
            tuple(a if abs(a) >= threshold else 0j for a in self.polynomial),
        )

    def principal_part(self, pole: complex, tol: float = POLE_MATCH_TOL) -> "RationalDifferential":
        return RationalDifferential({(p, m): c for (p, m), c in self.terms.items() if _same_point(p, pole, tol)})

    def without_pole(self, pole: complex, tol: float = POLE_MATCH_TOL) -> "RationalDifferential":
        return RationalDifferential(
            {(p, m): c for (p, m), c in self.terms.items() if not _same_point(p, pole, tol)},
            self.polynomial,
        )

    def principal_parts_inside(self, center: complex, radius: float) -> "RationalDifferential":
        """Principal parts at poles strictly inside the circle; the polynomial part is dropped."""
        return RationalDifferential({(p, m): c for (p, m), c in self.terms.items() if abs(p - center) < radius})

    def max_difference(self, other: "RationalDifferential") -> float:
        """Largest coefficient difference, poles matched exactly."""
        diff = self - other
        return diff.magnitude

    # evaluation

    def evaluate(self, z):
        """
        Value of f at z, where the differential is f(z) dz.

        Raises:
            PoleError: If z is a pole
        """
        z_arr = np.asarray(z, dtype=complex)
        poles, orders, coeffs = self._arrays
        out = np.zeros(z_arr.shape, dtype=complex)
        if poles.size:
            diff = z_arr[..., None] - poles
            if np.any(diff == 0):
                raise PoleError(f"evaluation at a pole of the differential: {z}")
            out = np.sum(coeffs * np.reciprocal(diff) ** orders, axis=-1)
        if self.polynomial:
            out = out + npoly.polyval(z_arr, np.asarray(self.polynomial))
        if np.ndim(z) == 0:
            return complex(out)
        return out

    __call__ = evaluate

    def expansion(self, center: complex, radius: float = 1.0, order: int = 8) -> ChartExpansion:
        """
        Laurent coefficients in zeta, where z = center + radius * zeta; the
        chart factor dz = radius dzeta is included.
        """
        min_order = -self.max_order(center)
        coeffs = np.zeros(order - min_order + 1, dtype=complex)
        n = np.arange(order + 1)
        for (p, m), c in self.terms.items():
            if _same_point(p, center):
                coeffs[-m - min_order] += c * radius ** (1 - m)
                continue
            d = center - p
            coeffs[-min_order:] += c * radius * d ** (-m) * (-1.0) ** n * comb(m + n - 1, n) * (radius / d) ** n
        for j, a in enumerate(self.polynomial):
            for k in range(min(j, order) + 1):
                coeffs[k - min_order] += a * comb(j, k, exact=True) * center ** (j - k) * radius ** (k + 1)
        return ChartExpansion(min_order, coeffs)

    def order_at(self, point: complex, tol: float = 1e-9, depth: int = 12) -> int:
        """Order of vanishing at a finite point (negative for poles)."""
        if any(_same_point(p, point) for p in self.poles):
            return -self.max_order(point)
        distances = [abs(p - point) for p in self.poles]
        radius = 0.5 * min(distances) if distances else 1.0
        radius = min(radius, 1.0)
        coeffs = self.expansion(point, radius, depth).coefficients
        reference = max(float(np.max(np.abs(coeffs))), 1e-300)
        for k, a in enumerate(coeffs):
            if abs(a) > tol * reference:
                return k
        return depth + 1

    def order_at_infinity(self, tol: float = 1e-9, depth: int = 16) -> int:
        """Order at z = infinity, computed in the coordinate u = 1/z."""
        if self.polynomial:
            return -(len(self.polynomial) - 1) - 2
        if not self.terms:
            return depth
        b = []
        for k in range(1, depth + 1):
            b.append(
                sum(
                    (c * comb(k - 1, m - 1, exact=True) * p ** (k - m) for (p, m), c in self.terms.items() if m <= k),
                    0j,
                )
            )
        reference = max(max(abs(x) for x in b), 1e-300)
        for k, value in enumerate(b, start=1):
            if abs(value) > tol * reference:
                return k - 2
        return depth

    def numerator(self) -> Tuple[np.ndarray, Dict[complex, int]]:
        """Numerator polynomial N and pole multiplicities with f = N / prod (z - p)^m."""
        multiplicity: Dict[complex, int] = {}
        for p, m in self.terms:
            multiplicity[p] = max(multiplicity.get(p, 0), m)
        all_roots = [p for p, m in multiplicity.items() for _ in range(m)]
        denominator = npoly.polyfromroots(all_roots) if all_roots else np.array([1.0 + 0j])
        total = npoly.polymul(np.asarray(self.polynomial or (0j,)), denominator)
        for (p, m), c in self.terms.items():
            rest = [q for q, k in multiplicity.items() for _ in range(k - (m if q == p else 0))]
            part = npoly.polyfromroots(rest) if rest else np.array([1.0 + 0j])
            total = npoly.polyadd(total, c * part)
        return npoly.polytrim(total, tol=0.0), multiplicity

    def zeros(self) -> np.ndarray:
        """Finite zeros, with multiplicity, as roots of the numerator."""
        numerator, _ = self.numerator()
        if len(numerator) <= 1:
            return np.array([], dtype=complex)
        scale = float(np.max(np.abs(numerator)))
        trimmed = npoly.polytrim(numerator, tol=1e-13 * scale)
        return npoly.polyroots(trimmed) if len(trimmed) > 1 else np.array([], dtype=complex)

    def argument_count(self, center: complex, radius: float, samples: int = 2048) -> int:
        """Zeros minus poles inside the circle, by the argument principle."""
        theta = np.linspace(0.0, 2.0 * np.pi, samples + 1)
        values = self.evaluate(center + radius * np.exp(1j * theta))
        if np.any(values == 0):
            raise PoleError("differential vanishes on the counting circle")
        phase = np.unwrap(np.angle(values))
        return int(round((phase[-1] - phase[0]) / (2.0 * np.pi)))

    def zeros_in_disk(self, center: complex, radius: float, samples: int = 2048) -> int:
        """Zeros inside the circle, counted with multiplicity."""
        poles = sum(self.max_order(p) for p in self.poles if abs(p - center) < radius)
        return self.argument_count(center, radius, samples) + poles

    # gluing

    def pullback(self, gmap: GluingMap) -> "RationalDifferential":
        """
        Substitute w = b + c/(z - q) and multiply by dw/dz.

        A term c_pm (w - p)^(-m) with p != b becomes a pole of order <= m at
        z* = q - c/(b - p); a pole at p = b becomes a polynomial in (z - q)
        (or a simple pole at q when m = 1). A polynomial part becomes poles at q.
        """
        q, b, c = gmap.q, gmap.b, gmap.c
        terms: Dict[Term, complex] = {}
        shifted: Dict[int, complex] = {}

        def add(key: Term, value: complex) -> None:
            terms[key] = terms.get(key, 0j) + value

        for (p, m), coeff in self.terms.items():
            d = b - p
            if abs(d) <= POLE_MATCH_TOL * max(1.0, abs(b)):
                if m == 1:
                    add((q, 1), -coeff)
                else:
                    shifted[m - 2] = shifted.get(m - 2, 0j) - coeff * c ** (1 - m)
                continue
            z_star = q - c / d
            if m == 1:
                add((z_star, 1), coeff)
                add((q, 1), -coeff)
                continue
            base = -coeff * c / d**m
            delta = z_star - q
            for j in range(m - 1):
                add((z_star, m - j), base * comb(m - 2, j, exact=True) * delta ** (m - 2 - j))
        for j, a in enumerate(self.polynomial):
            for i in range(j + 1):
                add((q, i + 2), -a * c * comb(j, i, exact=True) * b ** (j - i) * c**i)
        poly: Tuple[complex, ...] = ()
        if shifted:
            coeffs = np.zeros(max(shifted) + 1, dtype=complex)
            for k, value in shifted.items():
                coeffs[k] = value
            poly = tuple(Polynomial(coeffs)(Polynomial([-q, 1.0])).coef)
        return RationalDifferential(terms, poly)

    # integration

    @cached_property
    def _log_arrays(self) -> Tuple[np.ndarray, np.ndarray]:
        keys = [(p, m) for (p, m) in self.terms if m == 1]
        return (
            np.array([p for p, _ in keys], dtype=complex),
            np.array([self.terms[k] for k in keys], dtype=complex),
        )

    def rational_antiderivative(self, z: complex) -> complex:
        """Single-valued part of a primitive: everything except the logarithms."""
        total = 0j
        for (p, m), c in self.terms.items():
            if m >= 2:
                total += -c * (z - p) ** (1 - m) / (m - 1)
        for j, a in enumerate(self.polynomial):
            total += a * z ** (j + 1) / (j + 1)
        return total

    def __repr__(self) -> str:
        return f"RationalDifferential({len(self.terms)} terms, degree {len(self.polynomial) - 1})"


def _series_quotient(top: np.ndarray, bottom: np.ndarray, n: int) -> List[complex]:
    """First n Taylor coefficients of top/bottom at 0."""
    out: List[complex] = []
    for k in range(n):
        value = top[k] if k < len(top) else 0j
        for j in range(1, k + 1):
            if j < len(bottom):
                value -= bottom[j] * out[k - j]
        out.append(value / bottom[0])
    return out


def _segment_distance(a: complex, b: complex, points: np.ndarray) -> np.ndarray:
    ab = b - a
    if ab == 0:
        return np.abs(points - a)
    t = np.clip(((points - a) * np.conj(ab)).real / abs(ab) ** 2, 0.0, 1.0)
    return np.abs(a + t * ab - points)


def _log_increment(a: complex, b: complex, poles: np.ndarray, coeffs: np.ndarray) -> complex:
    """Sum of c_p times the continuous change of log(z - p) along [a, b]."""
    if poles.size == 0:
        return 0j
    total = 0j
    stack = [(a, b)]
    count = 0
    while stack:
        x, y = stack.pop()
        count += 1
        if count > _MAX_SEGMENTS:
            raise PoleError("branch tracking did not settle; path passes too close to a pole")
        ratio = (y - poles) / (x - poles)
        angles = np.angle(ratio)
        if np.all(np.abs(angles) < np.pi / 2):
            total += np.sum(coeffs * np.log(ratio))
        else:
            mid = 0.5 * (x + y)
            stack.append((mid, y))
            stack.append((x, mid))
    return total


def antiderivative_along(omega: RationalDifferential, path: Iterable[complex]) -> complex:
    """
    Integral of omega along a polyline, with the logarithm branch followed
    continuously.

    Raises:
        PoleError: If the path passes through a pole
    """
    points = [complex(z) for z in path]
    if len(points) < 2:
        return 0j
    all_poles = np.array(omega.poles, dtype=complex)
    log_poles, log_coeffs = omega._log_arrays
    total = 0j
    for a, b in zip(points[:-1], points[1:]):
        if all_poles.size:
            scale = 1.0 + abs(a) + abs(b)
            if np.min(_segment_distance(a, b, all_poles)) <= 1e-14 * scale:
                raise PoleError(f"integration path [{a}, {b}] passes through a pole")
        total += _log_increment(a, b, log_poles, log_coeffs)
    return total + omega.rational_antiderivative(points[-1]) - omega.rational_antiderivative(points[0])


def winding_number(path: Sequence[complex], point: complex) -> int:
    """Winding number of a closed polyline around a point."""
    points = [complex(z) for z in path]
    if points[0] != points[-1]:
        points.append(points[0])
    turn = 0.0
    for a, b in zip(points[:-1], points[1:]):
        turn += _log_increment(a, b, np.array([point]), np.array([1.0 + 0j])).imag
    return int(round(turn / (2.0 * math.pi)))


def contour_by_residues(omega: RationalDifferential, path: Sequence[complex]) -> complex:
    """2 pi i times the winding-weighted residues; compare with antiderivative_along."""
    total = 0j
    for p in omega.poles:
        total += winding_number(path, p) * omega.residue(p)
    return 2j * math.pi * total


def circle(center: complex, radius: float, samples: int = 64) -> List[complex]:
    """Closed counter-clockwise polygon inscribed in a circle."""
    theta = np.linspace(0.0, 2.0 * np.pi, samples + 1)
    return list(center + radius * np.exp(1j * theta))


def chart_expansion(omega: RationalDifferential, curve: StableCurve, h: HalfEdge, order: int = 8) -> ChartExpansion:
    """
    Laurent expansion of omega in the chart z_h.

    Raises:
        ChartError: If a pole other than q_h lies in the closed chart disk
    """
    q = curve.node_point(h)
    rho = curve.chart_radius(h)
    for p in omega.poles:
        if not _same_point(p, q) and abs(p - q) <= rho:
            raise ChartError(f"pole {p} lies in the chart disk of {h}")
    return omega.expansion(q, rho, order)


def chart_value(omega: RationalDifferential, curve: StableCurve, h: HalfEdge) -> complex:
    """The holomorphic part of omega at q_h in the chart z_h."""
    return chart_expansion(omega, curve, h, order=0).tilde


def pullback_glue(
    omega: RationalDifferential,
    curve: StableCurve,
    params: PlumbingParams,
    h: HalfEdge,
) -> RationalDifferential:
    """I_h^* omega: omega lives on v(-h), the result on v(h)."""
    return omega.pullback(gluing_map(curve, params, h))
