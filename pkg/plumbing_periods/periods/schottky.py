#!/usr/bin/env python
"""
Period matrix of a plumbed totally degenerate curve from its Schottky group.

The gluing maps gamma_i of the self-loops generate a Schottky group G, and

    tau_jk = delta_jk log lambda_j
             + sum over <gamma_j> \\ G / <gamma_k>, identity excluded when j = k,
               of log {r_j, a_j; sigma r_k, sigma a_k}

with a, r the attracting and repelling fixed points and lambda the multiplier.
This never touches the jump solver.
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from plumbing_periods.curve.gluing import GluingMap, gluing_map
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.errors import OracleError

logger = logging.getLogger(__name__)

DEFAULT_MAX_WORD_LENGTH = 8

Letter = Tuple[int, int]


@dataclass(frozen=True)
class Generator:
    matrix: np.ndarray
    attracting: complex
    repelling: complex
    multiplier: complex

    @classmethod
    def from_gluing(cls, gmap: GluingMap) -> "Generator":
        """
        Fixed points from c z^2 + (d - a) z - b = 0, solved in the cancellation-free
        form and polished by one Newton step; the multiplier is the derivative
        1 / (c z + d)^2 at the attracting one.

        Raises:
            OracleError: If the map is not loxodromic
        """
        matrix = np.asarray(gmap.sl2(), dtype=complex)
        (a, b), (c, d) = matrix
        if c == 0:
            raise OracleError("generator fixes infinity")
        linear = d - a
        root = np.sqrt(linear * linear + 4.0 * c * b)
        if (np.conj(linear) * root).real < 0:
            root = -root
        big = -(linear + root) / 2.0
        if big == 0:
            raise OracleError("generator is parabolic")
        points = [_newton_fixed_point(matrix, big / c), _newton_fixed_point(matrix, -b / big)]
        scales = [abs(c * z + d) for z in points]
        order = np.argsort(scales)
        if scales[order[1]] <= scales[order[0]] * (1.0 + 1e-12):
            raise OracleError("generator is not loxodromic")
        attracting, repelling = points[order[1]], points[order[0]]
        multiplier = complex(1.0 / (c * attracting + d) ** 2)
        if abs(multiplier) >= 1.0:
            raise OracleError(f"generator multiplier {abs(multiplier):.3g} is not contracting")
        return cls(matrix, attracting, repelling, multiplier)


def _newton_fixed_point(matrix: np.ndarray, z: complex) -> complex:
    (a, b), (c, d) = matrix
    slope = 2.0 * c * z + (d - a)
    if slope == 0:
        return complex(z)
    return complex(z - (c * z * z + (d - a) * z - b) / slope)


def apply(matrix: np.ndarray, z: complex) -> complex:
    return complex((matrix[0, 0] * z + matrix[0, 1]) / (matrix[1, 0] * z + matrix[1, 1]))


def schottky_cross_ratio(z1: complex, z2: complex, z3: complex, z4: complex) -> complex:
    """{z1, z2; z3, z4} = (z1 - z3)(z2 - z4) / ((z1 - z4)(z2 - z3))."""
    return (z1 - z3) * (z2 - z4) / ((z1 - z4) * (z2 - z3))


@dataclass
class SchottkyGroup:
    generators: List[Generator]
    max_word_length: int = DEFAULT_MAX_WORD_LENGTH

    @property
    def genus(self) -> int:
        return len(self.generators)

    def letter_matrix(self, letter: Letter) -> np.ndarray:
        index, power = letter
        matrix = self.generators[index].matrix
        return matrix if power > 0 else np.linalg.inv(matrix)

    def words(self) -> List[List[Tuple[Tuple[Letter, ...], np.ndarray]]]:
        """Reduced words grouped by length 0..L, each with its matrix, in sorted order."""
        letters = sorted((i, p) for i in range(self.genus) for p in (1, -1))
        shells = [[((), np.eye(2, dtype=complex))]]
        for _ in range(self.max_word_length):
            shell = []
            for word, matrix in shells[-1]:
                for letter in letters:
                    if word and word[-1] == (letter[0], -letter[1]):
                        continue
                    shell.append((word + (letter,), matrix @ self.letter_matrix(letter)))
            shells.append(shell)
        return shells


@dataclass
class OracleResult:
    tau: np.ndarray
    shell: np.ndarray
    multipliers: List[complex] = field(default_factory=list)

    @property
    def error_estimate(self) -> float:
        return float(np.max(self.shell, initial=0.0))


def oracle_from_group(group: SchottkyGroup) -> OracleResult:
    g = group.genus
    shells = group.words()
    tau = np.zeros((g, g), dtype=complex)
    shell_sizes = np.zeros((len(shells), g, g))
    for j in range(g):
        gj = group.generators[j]
        tau[j, j] += np.log(gj.multiplier)
        for k in range(g):
            gk = group.generators[k]
            for length, shell in enumerate(shells):
                for word, matrix in shell:
                    if word and (word[0][0] == j or word[-1][0] == k):
                        continue
                    if not word and j == k:
                        continue
                    ratio = schottky_cross_ratio(
                        gj.repelling, gj.attracting, apply(matrix, gk.repelling), apply(matrix, gk.attracting)
                    )
                    term = np.log(ratio)
                    tau[j, k] += term
                    shell_sizes[length, j, k] += abs(term)
    last = shell_sizes[-1]
    if len(shells) > 2 and np.any(last > shell_sizes[-2] + 1e-300):
        logger.warning("Schottky series shell is not decreasing at length %d", group.max_word_length)
    return OracleResult(tau, last, [gen.multiplier for gen in group.generators])


def oracle_tau(
    q: Sequence[Tuple[complex, complex]],
    rho: Optional[Sequence[Tuple[float, float]]],
    s: Sequence[complex],
    L: int = DEFAULT_MAX_WORD_LENGTH,
) -> OracleResult:
    """
    Args:
        q: Node pairs (q_i, q_{-i})
        rho: Chart radii per pair; all 1 when None
        s: Plumbing parameters
        L: Maximal word length

    Returns:
        The truncated period matrix with the last shell as an error estimate

    Raises:
        OracleError: If a generator is not loxodromic
    """
    radii = rho if rho is not None else [(1.0, 1.0)] * len(q)
    generators = [
        Generator.from_gluing(GluingMap(q=complex(qp), b=complex(qm), c=rp * rm * complex(sk)))
        for (qp, qm), (rp, rm), sk in zip(q, radii, s)
    ]
    return oracle_from_group(SchottkyGroup(generators, L))


def oracle_for_curve(curve: StableCurve, params: PlumbingParams, L: int = DEFAULT_MAX_WORD_LENGTH) -> OracleResult:
    """
    Oracle for a one-component curve whose edges are all self-loops, in the
    edge order of the curve.

    Raises:
        OracleError: If the curve is not totally degenerate
    """
    if len(curve.vertices) != 1 or not all(edge.is_loop for edge in curve.edges):
        raise OracleError("Schottky oracle needs one component with self-loops only")
    generators = [Generator.from_gluing(gluing_map(curve, params, HalfEdge(edge.id, 1))) for edge in curve.edges]
    result = oracle_from_group(SchottkyGroup(generators, L))
    logger.info("Schottky oracle: L=%d, shell %.3e", L, result.error_estimate)
    return result
