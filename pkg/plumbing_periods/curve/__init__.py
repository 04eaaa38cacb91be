from plumbing_periods.curve.model import (
    DualGraph,
    Edge,
    HalfEdge,
    MarkedPoint,
    PlumbingParams,
    StableCurve,
    betti,
    curve_from_dict,
    require_valid,
    totally_degenerate,
    validate,
)
from plumbing_periods.curve.basis import CyclePath, SymplecticBasis, intersection_matrix, symplectic_basis
from plumbing_periods.curve.gluing import GluingMap, gluing_map

__all__ = [
    "CyclePath",
    "DualGraph",
    "Edge",
    "GluingMap",
    "HalfEdge",
    "MarkedPoint",
    "PlumbingParams",
    "StableCurve",
    "SymplecticBasis",
    "betti",
    "curve_from_dict",
    "gluing_map",
    "intersection_matrix",
    "require_valid",
    "symplectic_basis",
    "totally_degenerate",
    "validate",
]
