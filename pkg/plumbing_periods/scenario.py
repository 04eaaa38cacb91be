#!/usr/bin/env python
"""
Scenario files: one JSON document describing a curve, its data and the runs
to perform on it.

Complex numbers are written as numbers or [re, im] pairs throughout.
"""
import json
import logging
from typing import Annotated, Any, Dict, List, Optional, Union

import numpy as np
from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, ValidationError, model_validator

from plumbing_periods.curve.basis import CyclePath
from plumbing_periods.curve.model import PlumbingParams, StableCurve, curve_from_dict
from plumbing_periods.differentials.ratdiff import RationalDifferential
from plumbing_periods.errors import ScenarioError
from plumbing_periods.twisted.higher_order import ScalingParams, TwistedData
from plumbing_periods.utils.config import default_config, merge_config

logger = logging.getLogger(__name__)


def _to_complex(value: Any) -> complex:
    if isinstance(value, (list, tuple)):
        if len(value) != 2:
            raise ValueError("complex numbers are [re, im] pairs")
        return complex(float(value[0]), float(value[1]))
    if isinstance(value, str):
        return complex(value.replace(" ", ""))
    return complex(value)


Complex = Annotated[complex, BeforeValidator(_to_complex)]


def complex_pair(value: complex) -> List[float]:
    value = complex(value)
    return [value.real, value.imag]


class EdgeSpec(BaseModel):
    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    id: str
    source: str = Field(alias="from")
    target: str = Field(alias="to")
    q_from: Complex
    q_to: Complex
    rho_from: float = 1.0
    rho_to: float = 1.0


class MarkedSpec(BaseModel):
    vertex: str
    point: Complex
    order: int = 1


class CurveSpec(BaseModel):
    vertices: List[str]
    edges: List[EdgeSpec] = Field(default_factory=list)
    marked: List[MarkedSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _references(self) -> "CurveSpec":
        known = set(self.vertices)
        for edge in self.edges:
            for v in (edge.source, edge.target):
                if v not in known:
                    raise ValueError(f"edge {edge.id} references unknown vertex {v}")
        for point in self.marked:
            if point.vertex not in known:
                raise ValueError(f"marked point on unknown vertex {point.vertex}")
        ids = [edge.id for edge in self.edges]
        if len(set(ids)) != len(ids):
            raise ValueError("edge ids must be unique")
        return self

    def build(self) -> StableCurve:
        data = {
            "vertices": self.vertices,
            "edges": [
                {
                    "id": e.id, "from": e.source, "to": e.target,
                    "q_from": e.q_from, "q_to": e.q_to,
                    "rho_from": e.rho_from, "rho_to": e.rho_to,
                }
                for e in self.edges
            ],
            "marked": [{"vertex": m.vertex, "point": m.point, "order": m.order} for m in self.marked],
        }
        return curve_from_dict(data)


class TermSpec(BaseModel):
    pole: Complex
    order: int = Field(default=1, ge=1)
    coeff: Complex


class DifferentialSpec(BaseModel):
    terms: List[TermSpec] = Field(default_factory=list)
    polynomial: List[Complex] = Field(default_factory=list)

    def build(self) -> RationalDifferential:
        terms: Dict = {}
        for term in self.terms:
            key = (term.pole, term.order)
            terms[key] = terms.get(key, 0j) + term.coeff
        return RationalDifferential(terms, tuple(self.polynomial))


class SweepSpec(BaseModel):
    """Plumbing parameters s = 10^x for x on a linear grid; all edges move together."""

    start: float = -2.0
    stop: float = -6.0
    num: int = Field(default=9, ge=2)
    edges: Optional[List[str]] = None

    def values(self) -> np.ndarray:
        return np.logspace(self.start, self.stop, self.num)


class SolverSpec(BaseModel):
    tol: Optional[float] = Field(default=None, gt=0)
    k_max: Optional[int] = Field(default=None, ge=1)
    ratio_limit: Optional[float] = Field(default=None, gt=0, lt=1)
    force: Optional[bool] = None
    K: Optional[int] = Field(default=None, ge=0)


class TwistedSpec(BaseModel):
    differentials: Dict[str, DifferentialSpec]
    levels: Dict[str, int]
    t: List[Complex] = Field(default_factory=list)
    t_grid: List[float] = Field(default_factory=list)
    horizontal: Dict[str, Complex] = Field(default_factory=dict)
    omega: Optional[Dict[str, DifferentialSpec]] = None

    @model_validator(mode="after")
    def _levels(self) -> "TwistedSpec":
        if any(level > 0 for level in self.levels.values()):
            raise ValueError("levels are 0 at the top and negative below")
        needed = -min(self.levels.values(), default=0)
        if self.t and len(self.t) != needed:
            raise ValueError(f"expected {needed} scaling parameters, got {len(self.t)}")
        return self

    def build(self) -> TwistedData:
        return TwistedData({v: d.build() for v, d in self.differentials.items()}, self.levels)

    def scaling(self, t: Optional[List[complex]] = None) -> ScalingParams:
        return ScalingParams(tuple(t if t is not None else self.t))

    def omega_map(self) -> Optional[Dict[str, RationalDifferential]]:
        return None if self.omega is None else {v: d.build() for v, d in self.omega.items()}


class Scenario(BaseModel):
    model_config = ConfigDict(extra="forbid")

    name: str = "scenario"
    curve: CurveSpec
    params: Dict[str, Complex] = Field(default_factory=dict)
    s: Optional[Complex] = None
    differential: Optional[Dict[str, DifferentialSpec]] = None
    basis_index: int = Field(default=0, ge=0)
    cycle: Optional[List[str]] = None
    closed_form: Optional[str] = None
    sweep: Optional[SweepSpec] = None
    twisted: Optional[TwistedSpec] = None
    solver: SolverSpec = Field(default_factory=SolverSpec)
    n_quad: Optional[int] = Field(default=None, ge=4)
    max_word_length: Optional[int] = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _edges_exist(self) -> "Scenario":
        ids = {edge.id for edge in self.curve.edges}
        unknown = set(self.params) - ids
        if unknown:
            raise ValueError(f"plumbing parameters for unknown edges: {sorted(unknown)}")
        if self.differential is not None:
            missing = set(self.differential) - set(self.curve.vertices)
            if missing:
                raise ValueError(f"differential on unknown vertices: {sorted(missing)}")
        if self.twisted is not None:
            missing = (set(self.twisted.levels) | set(self.twisted.differentials)) - set(self.curve.vertices)
            if missing:
                raise ValueError(f"twisted data on unknown vertices: {sorted(missing)}")
        if self.cycle is not None:
            for item in self.cycle:
                if item.lstrip("+-") not in ids:
                    raise ValueError(f"cycle crosses unknown edge {item}")
        if self.sweep is not None and self.sweep.edges is not None:
            if set(self.sweep.edges) - ids:
                raise ValueError("sweep names unknown edges")
        return self

    def build_curve(self) -> StableCurve:
        return self.curve.build()

    def plumbing(self, value: Optional[complex] = None, edges: Optional[List[str]] = None) -> PlumbingParams:
        """
        The scenario's plumbing parameters; with value given, the edges listed
        (all edges by default) are set to it.
        """
        s = {edge.id: self.s for edge in self.curve.edges if self.s is not None}
        s.update(self.params)
        if value is not None:
            for edge_id in edges or [edge.id for edge in self.curve.edges]:
                s[edge_id] = value
        missing = [edge.id for edge in self.curve.edges if edge.id not in s]
        if missing:
            raise ScenarioError(f"no plumbing parameter for edges {missing}")
        return PlumbingParams(s)

    def differential_map(self) -> Optional[Dict[str, RationalDifferential]]:
        if self.differential is None:
            return None
        return {v: d.build() for v, d in self.differential.items()}

    def cycle_path(self) -> Optional[CyclePath]:
        return None if self.cycle is None else CyclePath.parse(self.cycle)

    def config(self, base: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
        """Scenario settings laid over a config."""
        override: Dict[str, Dict[str, Any]] = {
            "solver": {k: v for k, v in self.solver.model_dump().items() if v is not None and k != "K"},
        }
        if self.n_quad is not None:
            override["quadrature"] = {"n_quad": self.n_quad}
        if self.max_word_length is not None:
            override["schottky"] = {"max_word_length": self.max_word_length}
        return merge_config(base or default_config(), override)


def load_scenario(path: str) -> Scenario:
    """
    Raises:
        ScenarioError: If the file is missing, not JSON, or fails the schema
    """
    try:
        with open(path, "r") as f:
            raw = json.load(f)
    except (OSError, json.JSONDecodeError) as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    return parse_scenario(raw)


def parse_scenario(raw: Union[str, Dict[str, Any]]) -> Scenario:
    try:
        if isinstance(raw, str):
            return Scenario.model_validate_json(raw)
        return Scenario.model_validate(raw)
    except ValidationError as exc:
        raise ScenarioError(str(exc)) from exc
