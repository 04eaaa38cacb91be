#!/usr/bin/env python
"""
Closed-form reference values for plumbing expansions on rational components.

Everything here is plain arithmetic on node points, chart radii and plumbing
parameters; nothing calls the jump solver. Chart radii enter through
c_e = rho_e rho_{-e} s_e, and logarithms are principal-branch complex logs, so
comparisons with numeric periods are made modulo 2 pi i. The self-loop
diagonal constant takes an explicit branch of log(-(q - q')^2).
"""
import cmath
import math
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Sequence, Tuple

from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve
from plumbing_periods.differentials.kernels import KernelEvaluator, genus0_kernel
from plumbing_periods.differentials.ratdiff import RationalDifferential
from plumbing_periods.errors import PlumbingError
from plumbing_periods.periods.expansion import PeriodExpansion

logger = logging.getLogger(__name__)

Pair = Tuple[complex, complex]


def cross_ratio(a: complex, b: complex, c: complex, d: complex) -> complex:
    """(a, b; c, d) = (a - c)(b - d) / ((a - d)(b - c))."""
    denominator = (a - d) * (b - c)
    if denominator == 0:
        raise PlumbingError("coincident points in cross-ratio")
    return (a - c) * (b - d) / denominator


def _radii(rho: Optional[Sequence[Pair]], g: int) -> List[Pair]:
    if rho is None:
        return [(1.0, 1.0)] * g
    return [(float(a), float(b)) for a, b in rho]


def _check_points(q: Sequence[Pair]) -> None:
    points = [p for pair in q for p in pair]
    if len(set(points)) != len(points):
        raise PlumbingError("coincident node points")


def tot_deg_tau_expansion(
    q: Sequence[Pair],
    i: int,
    j: int,
    rho: Optional[Sequence[Pair]] = None,
) -> PeriodExpansion:
    """
    tau_{ij} of the totally degenerate curve (one sphere, self-loops e1..eg
    joining q_k to q_{-k}) through first order in s.

    Args:
        q: Node pairs (q_k, q_{-k})
        i: Row index, 0-based
        j: Column index, 0-based
        rho: Chart radii (rho_k, rho_{-k}); all 1 when omitted

    Returns:
        Log coefficients, constant and linear coefficients; edge ids are e1..eg
    """
    _check_points(q)
    g = len(q)
    radii = _radii(rho, g)
    plus = [complex(a) for a, _ in q]
    minus = [complex(b) for _, b in q]
    weight = [radii[k][0] * radii[k][1] for k in range(g)]
    delta = [plus[k] - minus[k] for k in range(g)]
    edge = [f"e{k + 1}" for k in range(g)]
    linear: Dict[str, complex] = {}

    if i == j:
        d2 = delta[i] ** 2
        # log(-d2) on the branch 2 log(delta) + i pi, independent of signed zeros;
        # the multiplier of the self-loop is -c/d2, so its real part is ln|c| - 2 ln|delta|
        constant = cmath.log(weight[i]) - 2.0 * cmath.log(delta[i]) - 1j * math.pi
        linear[edge[i]] = -2.0 * weight[i] / d2
        for k in range(g):
            if k != i:
                denominator = (plus[k] - plus[i]) * (plus[k] - minus[i]) * (minus[k] - plus[i]) * (minus[k] - minus[i])
                linear[edge[k]] = -2.0 * weight[k] * d2 / denominator
        return PeriodExpansion({edge[i]: 1.0}, constant, linear)

    constant = cmath.log(cross_ratio(plus[i], minus[i], plus[j], minus[j]))
    dd = delta[i] * delta[j]
    for k in range(g):
        if k in (i, j):
            continue
        first = (plus[k] - plus[i]) * (plus[k] - minus[i]) * (minus[k] - plus[j]) * (minus[k] - minus[j])
        second = (plus[k] - plus[j]) * (plus[k] - minus[j]) * (minus[k] - plus[i]) * (minus[k] - minus[i])
        linear[edge[k]] = -weight[k] * (dd / first + dd / second)
    for a, b in ((i, j), (j, i)):
        bracket = 1.0 / ((plus[a] - plus[b]) * (plus[a] - minus[b])) + 1.0 / ((minus[a] - plus[b]) * (minus[a] - minus[b]))
        linear[edge[a]] = -weight[a] * delta[b] / (minus[a] - plus[a]) * bracket
    return PeriodExpansion({}, constant, linear)


def eval_tot_deg_tau(
    q: Sequence[Pair],
    s: Sequence[complex],
    i: int,
    j: int,
    rho: Optional[Sequence[Pair]] = None,
) -> complex:
    """tau_{ij} through the O(s) terms; principal-branch logarithms."""
    params = PlumbingParams({f"e{k + 1}": value for k, value in enumerate(s)})
    return tot_deg_tau_expansion(q, i, j, rho).evaluate(params)


def _chart_tilde(omega: RationalDifferential, point: complex, radius: float) -> complex:
    return radius * omega.without_pole(point).evaluate(point)


def tot_deg_omega(
    omega: RationalDifferential,
    q: Sequence[Pair],
    s: Sequence[complex],
    rho: Optional[Sequence[Pair]] = None,
) -> RationalDifferential:
    """
    First correction on the totally degenerate curve:
    -sum_k s_k (rho_k xi~_{-k} dz/(z - q_k)^2 + rho_{-k} xi~_k dz/(z - q_{-k})^2).
    """
    radii = _radii(rho, len(q))
    terms: Dict[Tuple[complex, int], complex] = {}
    for (qp, qm), (rp, rm), sk in zip(q, radii, s):
        qp, qm = complex(qp), complex(qm)
        tilde_plus = _chart_tilde(omega, qp, rp)
        tilde_minus = _chart_tilde(omega, qm, rm)
        terms[(qp, 2)] = terms.get((qp, 2), 0j) - sk * rp * tilde_minus
        terms[(qm, 2)] = terms.get((qm, 2), 0j) - sk * rm * tilde_plus
    return RationalDifferential(terms)


def nonseparating_first_order(
    omega: RationalDifferential,
    q1: complex,
    q2: complex,
    s: complex,
    rho: Pair = (1.0, 1.0),
) -> RationalDifferential:
    """
    One non-separating node joining q1 and q2 on a sphere:
    Omega - s (omega(z, q1) xi~_2 + omega(z, q2) xi~_1), with
    omega(z, q) = rho dz / (z - q)^2 in the chart at q.
    """
    r1, r2 = rho
    tilde1 = _chart_tilde(omega, q1, r1)
    tilde2 = _chart_tilde(omega, q2, r2)
    correction = RationalDifferential({(q1, 2): -s * r1 * tilde2, (q2, 2): -s * r2 * tilde1})
    return omega + correction


def separating_coefficient(tilde_here: complex, tilde_there: complex, beta_there: complex, s: complex) -> complex:
    """
    Coefficient of omega_i(z, q_i) in Omega_s on the side i of a separating node,
    through second order: -s xi~_{i'} + s^2 beta_{i'} xi~_i.
    """
    return -s * tilde_there + s * s * beta_there * tilde_here


def separating_first_order(
    curve: StableCurve,
    omega: Mapping[str, RationalDifferential],
    edge_id: str,
    params: PlumbingParams,
    kernel: Optional[KernelEvaluator] = None,
) -> Dict[str, RationalDifferential]:
    """
    Omega_s on both sides of a separating node through O(s^2), with the
    self-coefficients beta taken from the kernel.
    """
    kernel = kernel or genus0_kernel()
    s = params[edge_id]
    out = {}
    for h in (HalfEdge(edge_id, 1), HalfEdge(edge_id, -1)):
        here, there = curve.vertex_of(h), curve.vertex_of(h.opposite)
        rho, rho_there = curve.chart_radius(h), curve.chart_radius(h.opposite)
        tilde_here = _chart_tilde(omega[here], curve.node_point(h), rho)
        tilde_there = _chart_tilde(omega[there], curve.node_point(h.opposite), rho_there)
        beta_there = kernel.beta(curve, h.opposite, h.opposite)
        coefficient = separating_coefficient(tilde_here, tilde_there, beta_there, s)
        out[here] = omega[here] + RationalDifferential({(curve.node_point(h), 2): rho * coefficient})
    return out


def _banana_sides(curve: StableCurve) -> Tuple[str, str, List[str]]:
    edges = sorted(curve.edges, key=lambda e: e.id)
    if len(curve.vertices) != 2 or len(edges) != 2 or edges[0].is_loop:
        raise PlumbingError("banana curve needs two components joined by two edges")
    a, b = edges[0].source, edges[0].target
    if edges[1].source != a or edges[1].target != b:
        raise PlumbingError("banana edges must run from the same source to the same target")
    return a, b, [e.id for e in edges]


def banana_eta(
    curve: StableCurve,
    tilde: Mapping[HalfEdge, complex],
    params: PlumbingParams,
    kernel: Optional[KernelEvaluator] = None,
) -> Dict[str, Dict[int, RationalDifferential]]:
    """
    Leading corrections on the banana curve when Omega_b = 0:
    eta_b^(1) = -sum_j s_j omega_b(z, q_{-e_j}) xi~_{e_j},
    eta_a^(2) = sum_{j,k} s_j s_k omega_a(z, q_{e_j}) beta^b_{-e_j,-e_k} xi~_{e_k},
    and eta_a^(1) = eta_b^(2) = 0.

    Args:
        curve: Banana curve, edges running from a to b
        tilde: Chart values xi~_h of the jump data
        params: Plumbing parameters
        kernel: Supplies beta on the b side

    Returns:
        {vertex: {k: eta^(k)}} for k = 1, 2
    """
    kernel = kernel or genus0_kernel()
    a, b, ids = _banana_sides(curve)
    eta_b1: Dict[Tuple[complex, int], complex] = {}
    eta_a2: Dict[Tuple[complex, int], complex] = {}
    for ej in ids:
        up, down = HalfEdge(ej, 1), HalfEdge(ej, -1)
        key = (curve.node_point(down), 2)
        eta_b1[key] = eta_b1.get(key, 0j) - params[ej] * curve.chart_radius(down) * tilde[up]
        for ek in ids:
            beta = kernel.beta(curve, down, HalfEdge(ek, -1))
            key = (curve.node_point(up), 2)
            value = params[ej] * params[ek] * curve.chart_radius(up) * beta * tilde[HalfEdge(ek, 1)]
            eta_a2[key] = eta_a2.get(key, 0j) + value
    zero = RationalDifferential.zero()
    return {
        a: {1: zero, 2: RationalDifferential(eta_a2)},
        b: {1: RationalDifferential(eta_b1), 2: zero},
    }


def banana_tau_terms(curve: StableCurve, params: PlumbingParams) -> Dict[str, Dict[str, complex]]:
    """
    Log and linear terms of tau_11 on the banana curve with rational
    components: log s_1 + log s_2 - 2 s_1 sigma_{e1} sigma_{-e1} - 2 s_2 sigma_{e2} sigma_{-e2},
    sigma_h being the chart value at q_h of the holomorphic part of v_1.
    """
    _, _, ids = _banana_sides(curve)
    e1, e2 = ids
    q = curve.node_point
    rho = curve.chart_radius
    p1, m1, p2, m2 = HalfEdge(e1, 1), HalfEdge(e1, -1), HalfEdge(e2, 1), HalfEdge(e2, -1)
    # v_1 = dz/(z - q_e1) - dz/(z - q_e2) on a, dz/(z - q_-e2) - dz/(z - q_-e1) on b
    sigma = {
        p1: -rho(p1) / (q(p1) - q(p2)),
        p2: rho(p2) / (q(p2) - q(p1)),
        m1: rho(m1) / (q(m1) - q(m2)),
        m2: -rho(m2) / (q(m2) - q(m1)),
    }
    return {
        "log": {e1: 1.0, e2: 1.0},
        "linear": {
            e1: -2.0 * sigma[p1] * sigma[m1],
            e2: -2.0 * sigma[p2] * sigma[m2],
        },
    }


def _tot_deg(p: Mapping[str, Any]) -> complex:
    return eval_tot_deg_tau(p["q"], p["s"], int(p["i"]), int(p["j"]), p.get("rho"))


FORMULAS: Dict[str, Callable[[Mapping[str, Any]], Any]] = {
    "tot_deg_tau_ii": _tot_deg,
    "tot_deg_tau_ij": _tot_deg,
    "tot_deg_omega": lambda p: tot_deg_omega(p["omega"], p["q"], p["s"], p.get("rho")),
    "nonsep_first_order": lambda p: nonseparating_first_order(
        p["omega"], p["q1"], p["q2"], p["s"], p.get("rho", (1.0, 1.0))
    ),
    "sep_first_order": lambda p: separating_first_order(p["curve"], p["omega"], p["edge"], p["params"], p.get("kernel")),
    "banana_eta": lambda p: banana_eta(p["curve"], p["tilde"], p["params"], p.get("kernel")),
    "banana_tau": lambda p: banana_tau_terms(p["curve"], p["params"]),
}


@dataclass(frozen=True)
class ReferenceFormula:
    formula: str
    parameters: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.formula not in FORMULAS:
            raise PlumbingError(f"unknown reference formula: {self.formula}")

    def evaluate(self):
        logger.debug("evaluating reference formula %s", self.formula)
        return FORMULAS[self.formula](self.parameters)
