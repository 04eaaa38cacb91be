#!/usr/bin/env python
"""
Exception hierarchy for plumbing_periods.
"""


class PlumbingError(Exception):
    """Base class for every error raised by the library."""


class CurveError(PlumbingError):
    """The curve or its plumbing parameters are not admissible."""


class PoleError(PlumbingError):
    """Evaluation point or integration path hits a pole."""


class ChartError(PlumbingError):
    """A pole other than the chart center lies in the closed chart disk."""


class ResidueMismatchError(PlumbingError):
    """Residues are not opposite across a node, or a pole is too singular."""


class NonConvergenceError(PlumbingError):
    """The jump series does not contract fast enough to be trusted."""

    def __init__(self, message: str, ratio: float = float("nan"), k: int = 0):
        super().__init__(message)
        self.ratio = ratio
        self.k = k


class CapError(PlumbingError):
    """Evaluation requested inside a removed cap of the plumbed surface."""


class CompatibilityError(PlumbingError):
    """Twisted data cannot be glued."""


class OracleError(PlumbingError):
    """Schottky generators are not loxodromic."""


class ScenarioError(PlumbingError):
    """Scenario file is malformed or refers to unknown objects."""
