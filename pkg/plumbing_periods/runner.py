#!/usr/bin/env python
"""
The computations behind the command line and the tool server. Each payload
function takes a Run and returns a JSON-ready dict; a dict with
"passed": False marks a failed check.
"""
import csv
import logging
import math
from typing import Any, Callable, Dict, List, Optional

import numpy as np

from plumbing_periods.curve.basis import symplectic_basis
from plumbing_periods.curve.model import HalfEdge, PlumbingParams, StableCurve, validate
from plumbing_periods.differentials.ratdiff import RationalDifferential
from plumbing_periods.errors import PlumbingError, ScenarioError
from plumbing_periods.periods.closed_forms import banana_tau_terms, eval_tot_deg_tau
from plumbing_periods.periods.expansion import period_expansion
from plumbing_periods.periods.periods import fit_slope, normalized_basis, period_matrix, period_numeric, wrap_2pi_i
from plumbing_periods.periods.schottky import oracle_for_curve
from plumbing_periods.scenario import Scenario, complex_pair
from plumbing_periods.solver.jump import JumpSolution, glued_family, initial_data, iterate
from plumbing_periods.solver.norms import a_norm_residual, jump_residual, l2_norm
from plumbing_periods.solver.quadrature import backend_difference, quadrature_backend
from plumbing_periods.twisted.higher_order import (
    ScalingParams,
    build_twisted_family,
    check_compatibility,
    path_product_audit,
    rescaled_restriction_error,
    zero_clusters,
)
from plumbing_periods.utils.config import default_config, solver_options

logger = logging.getLogger(__name__)

ORACLE_TOL = 1e-8
BACKENDS = ("residue", "quadrature", "both")


class CheckFailed(PlumbingError):
    """A report came back with violations."""


def differential_json(omega: RationalDifferential) -> Dict[str, Any]:
    terms = sorted(omega.terms.items(), key=lambda item: (item[0][0].real, item[0][0].imag, item[0][1]))
    return {
        "terms": [{"pole": complex_pair(p), "order": m, "coeff": complex_pair(c)} for (p, m), c in terms],
        "polynomial": [complex_pair(c) for c in omega.polynomial],
    }


class Run:
    """One scenario with its merged configuration."""

    def __init__(
        self,
        scenario: Scenario,
        config: Optional[Dict[str, Any]] = None,
        backend: str = "residue",
        seed: int = 0,
    ):
        if backend not in BACKENDS:
            raise ScenarioError(f"unknown backend {backend}")
        self.scenario = scenario
        self.config = scenario.config(config or default_config())
        self.backend = backend
        self.rng = np.random.default_rng(seed)
        self.curve = scenario.build_curve()
        self.curve_problems = validate(self.curve)

    @property
    def solver(self) -> Dict[str, Any]:
        return solver_options(self.config)

    @property
    def n_quad(self) -> int:
        return int(self.config["quadrature"]["n_quad"])

    def params(self, value: Optional[complex] = None) -> PlumbingParams:
        edges = self.scenario.sweep.edges if self.scenario.sweep is not None else None
        return self.scenario.plumbing(value, edges)

    def differential(self) -> Dict[str, RationalDifferential]:
        omega = self.scenario.differential_map()
        if omega is not None:
            return omega
        basis = normalized_basis(self.curve, symplectic_basis(self.curve))
        if self.scenario.basis_index >= len(basis):
            raise ScenarioError(f"basis_index {self.scenario.basis_index} exceeds the genus {len(basis)}")
        return basis[self.scenario.basis_index]

    def solve(self, params: PlumbingParams) -> JumpSolution:
        data = initial_data(self.differential(), self.curve, params)
        return iterate(data, self.curve, params, K=self.scenario.solver.K, **self.solver)

    def sample_points(self, vertex: str, params: PlumbingParams, n: int = 4) -> np.ndarray:
        """Random points in the annuli between the seams and the chart circles."""
        points = []
        for h in self.curve.half_edges_at(vertex):
            inner = params.seam_radius(self.curve, h)
            outer = self.curve.chart_radius(h)
            radius = inner + (outer - inner) * self.rng.uniform(0.25, 0.75, n)
            angle = self.rng.uniform(0.0, 2.0 * np.pi, n)
            points.append(self.curve.node_point(h) + radius * np.exp(1j * angle))
        return np.concatenate(points) if points else np.zeros(0, dtype=complex)


def validate_payload(run: Run) -> Dict[str, Any]:
    """Check the curve and its plumbing parameters."""
    params = run.params()
    problems = run.curve_problems + params.validate(run.curve)
    return {
        "genus": None if run.curve_problems else run.curve.genus,
        "vertices": list(run.curve.vertices),
        "edges": list(run.curve.edge_ids),
        "problems": problems,
        "passed": not problems,
    }


def _residual_table(sol: JumpSolution) -> Dict[str, Any]:
    a_norm = a_norm_residual(sol)
    return {
        edge_id: {
            "jump_residual": max(jump_residual(sol, HalfEdge(edge_id, 1)), jump_residual(sol, HalfEdge(edge_id, -1))),
            "a_period": abs(a_norm[edge_id]),
        }
        for edge_id in sol.curve.edge_ids
    }


def solve_payload(run: Run) -> Dict[str, Any]:
    """Solve the jump problem; emit eta^(k) and the residual table."""
    params = run.params()
    sol = run.solve(params)
    payload: Dict[str, Any] = {
        "K": sol.K,
        "ratio": sol.ratio,
        "tail_bound": sol.tail_bound,
        "seam_norms": list(sol.norms),
        "residuals": _residual_table(sol),
        "eta": {v: [differential_json(term) for term in sol.eta[v]] for v in run.curve.vertices},
    }
    family = glued_family(sol)
    samples = {v: run.sample_points(v, params) for v in run.curve.vertices}
    payload["samples"] = {
        v: [{"z": complex_pair(z), "value": complex_pair(w)} for z, w in zip(points, family.evaluate(v, points))]
        for v, points in samples.items()
    }
    if run.backend in ("quadrature", "both"):
        referee = quadrature_backend(sol.data, run.curve, params, sol.K, run.n_quad)
        payload["quadrature"] = {
            v: [{"z": complex_pair(z), "value": complex_pair(w)} for z, w in zip(points, referee.total_value(v, points))]
            for v, points in samples.items()
        }
        if run.backend == "both":
            payload["backend_difference"] = backend_difference(sol, referee)
    return payload


def period_payload(run: Run) -> Dict[str, Any]:
    """One period, numerically and from its expansion."""
    params = run.params()
    cycle = run.scenario.cycle_path()
    if cycle is None:
        cycle = symplectic_basis(run.curve).b_cycles[run.scenario.basis_index]
    problems = cycle.validate(run.curve)
    if problems:
        raise ScenarioError("; ".join(problems))
    omega = run.differential()
    sol = run.solve(params)
    numeric = period_numeric(sol, cycle)
    expansion = period_expansion(omega, cycle, run.curve, params)
    predicted = expansion.evaluate(params)
    return {
        "cycle": [str(h) for h in cycle.edges],
        "numeric": complex_pair(numeric),
        "expansion": expansion.to_json(),
        "expansion_value": complex_pair(predicted),
        "difference": abs(wrap_2pi_i(numeric - predicted)),
        "tail_bound": sol.tail_bound,
    }


def period_matrix_payload(run: Run) -> Dict[str, Any]:
    """Period matrix, numeric and expansion."""
    params = run.params()
    result = period_matrix(run.curve, params, order="both", **run.solver)
    difference = result.numeric - result.expansion_value
    return {
        "tau": result.to_json(),
        "symmetry_defect": result.symmetry_defect(),
        "expansion_difference": max(abs(wrap_2pi_i(x)) for x in difference.flat),
        "tail_bounds": result.tail_bounds,
        "b_cycles": [[str(h) for h in cycle.edges] for cycle in result.basis.b_cycles],
    }


def oracle_compare_payload(run: Run) -> Dict[str, Any]:
    """Numeric period matrix against the Schottky series."""
    params = run.params()
    L = int(run.config["schottky"]["max_word_length"])
    oracle = oracle_for_curve(run.curve, params, L)
    result = period_matrix(run.curve, params, order="numeric", **run.solver)
    difference = max(abs(wrap_2pi_i(x)) for x in (result.numeric - oracle.tau).flat)
    return {
        "numeric": [[complex_pair(x) for x in row] for row in result.numeric],
        "oracle": [[complex_pair(x) for x in row] for row in oracle.tau],
        "oracle_shell": oracle.error_estimate,
        "max_difference": difference,
        "passed": difference <= ORACLE_TOL,
    }


def _closed_form_kind(curve: StableCurve) -> str:
    if len(curve.vertices) == 1 and all(edge.is_loop for edge in curve.edges):
        return "tot_deg_tau"
    if len(curve.vertices) == 2 and len(curve.edges) == 2:
        return "banana_tau"
    raise ScenarioError("no closed form for this curve; set closed_form in the scenario")


def closed_form_payload(run: Run) -> Dict[str, Any]:
    """Evaluate the closed-form period matrix for the curve."""
    params = run.params()
    kind = run.scenario.closed_form or _closed_form_kind(run.curve)
    if kind == "tot_deg_tau":
        edges = run.curve.edges
        q = [(e.q_source, e.q_target) for e in edges]
        rho = [(e.rho_source, e.rho_target) for e in edges]
        s = [params[e.id] for e in edges]
        g = len(edges)
        tau = [[complex_pair(eval_tot_deg_tau(q, s, i, j, rho)) for j in range(g)] for i in range(g)]
        return {"formula": kind, "tau": tau}
    if kind == "banana_tau":
        terms = banana_tau_terms(run.curve, params)
        return {
            "formula": kind,
            "log": {k: complex_pair(v) for k, v in terms["log"].items()},
            "linear": {k: complex_pair(v) for k, v in terms["linear"].items()},
        }
    raise ScenarioError(f"unknown closed form {kind}")


def _twisted(run: Run):
    if run.scenario.twisted is None:
        raise ScenarioError("scenario has no twisted section")
    return run.scenario.twisted


def twisted_check_payload(run: Run) -> Dict[str, Any]:
    """Compatibility report of the twisted differential."""
    section = _twisted(run)
    report = check_compatibility(section.build(), section.omega_map(), run.curve)
    return {"conditions": report.to_json(), "passed": report.ok}


def _twisted_point(run: Run, scaling: ScalingParams) -> Dict[str, Any]:
    section = _twisted(run)
    xi = section.build()
    family = build_twisted_family(run.curve, xi, scaling, K=run.scenario.solver.K, horizontal=section.horizontal, **run.solver)
    sol = family.solution
    return {
        "t": [complex_pair(x) for x in scaling.t],
        "s": {edge_id: complex_pair(family.params[edge_id]) for edge_id in run.curve.edge_ids},
        "K": sol.K,
        "tail_bound": sol.tail_bound,
        "residuals": _residual_table(sol),
        "path_product": path_product_audit(run.curve, xi, family.params, scaling),
        "rescaled_error": {v: rescaled_restriction_error(family, v) for v in run.curve.vertices},
        "zero_clusters": {
            v: [{"point": complex_pair(p), "expected": m, "count": n} for p, m, n in items]
            for v, items in zero_clusters(family).items()
        },
    }


def twisted_build_payload(run: Run) -> Dict[str, Any]:
    """Glue the twisted differential at t, or over t_grid."""
    section = _twisted(run)
    report = check_compatibility(section.build(), section.omega_map(), run.curve)
    if not report.ok:
        raise CheckFailed(f"twisted data fails conditions {report.failed}")
    if section.t_grid:
        depth = -min(section.levels.values(), default=0)
        points = [_twisted_point(run, ScalingParams((value,) * depth)) for value in section.t_grid]
        errors = [max(point["rescaled_error"].values()) for point in points]
        monotone = all(b <= a for a, b in zip(errors, errors[1:]))
        return {"grid": points, "monotone": monotone}
    return _twisted_point(run, section.scaling())


def sweep_payload(run: Run) -> Dict[str, Any]:
    """log |s| against log |eta| over the sweep grid, with the fitted slope."""
    sweep = run.scenario.sweep
    if sweep is None:
        raise ScenarioError("scenario has no sweep section")
    rows: List[Dict[str, float]] = []
    for value in sweep.values():
        params = run.params(complex(value))
        sol = run.solve(params)
        eta = max(l2_norm(sol, v) for v in run.curve.vertices)
        rows.append(
            {
                "s": float(value),
                "log_s": math.log(value),
                "log_eta": math.log(eta) if eta > 0 else float("-inf"),
                "K": sol.K,
                "tail_bound": sol.tail_bound,
            }
        )
    finite = [row for row in rows if math.isfinite(row["log_eta"])]
    if len(finite) > 1:
        slope = fit_slope([row["s"] for row in finite], [math.exp(row["log_eta"]) for row in finite])
    else:
        slope = None
    logger.info("sweep slope %s over %d points", slope, len(rows))
    return {"rows": rows, "slope": slope}


def write_sweep_csv(rows: List[Dict[str, float]], path: str) -> None:
    """Plottable CSV of a sweep."""
    with open(path, "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=["s", "log_s", "log_eta", "K", "tail_bound"])
        writer.writeheader()
        for row in rows:
            writer.writerow(row)


PAYLOADS: Dict[str, Callable[[Run], Dict[str, Any]]] = {
    "validate": validate_payload,
    "solve": solve_payload,
    "period": period_payload,
    "period-matrix": period_matrix_payload,
    "oracle-compare": oracle_compare_payload,
    "closed-form": closed_form_payload,
    "twisted-check": twisted_check_payload,
    "twisted-build": twisted_build_payload,
    "sweep": sweep_payload,
}
