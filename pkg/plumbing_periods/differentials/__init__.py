from plumbing_periods.differentials.ratdiff import (
    ChartExpansion,
    RationalDifferential,
    antiderivative_along,
    chart_expansion,
    chart_value,
    circle,
    contour_by_residues,
    pullback_glue,
    winding_number,
)
from plumbing_periods.differentials.kernels import (
    Genus0Kernel,
    KernelEvaluator,
    a_normalization_check,
    derivative_defect,
    genus0_kernel,
    get_kernel,
    register_kernel,
    symmetry_defect,
)

__all__ = [
    "ChartExpansion",
    "Genus0Kernel",
    "KernelEvaluator",
    "RationalDifferential",
    "a_normalization_check",
    "antiderivative_along",
    "chart_expansion",
    "chart_value",
    "circle",
    "contour_by_residues",
    "derivative_defect",
    "genus0_kernel",
    "get_kernel",
    "pullback_glue",
    "register_kernel",
    "symmetry_defect",
    "winding_number",
]
