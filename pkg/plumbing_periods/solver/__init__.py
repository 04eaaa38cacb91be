from plumbing_periods.solver.jump import (
    GluedFamily,
    JumpData,
    JumpSolution,
    first_order,
    glued_family,
    initial_data,
    iterate,
)
from plumbing_periods.solver.norms import (
    a_norm_residual,
    jump_residual,
    l2_norm,
    seam_norm,
    sp_identity_residual,
    xi_seam_periods,
)
from plumbing_periods.solver.quadrature import QuadratureSolution, backend_difference, quadrature_backend

__all__ = [
    "GluedFamily",
    "JumpData",
    "JumpSolution",
    "QuadratureSolution",
    "a_norm_residual",
    "backend_difference",
    "first_order",
    "glued_family",
    "initial_data",
    "iterate",
    "jump_residual",
    "l2_norm",
    "quadrature_backend",
    "seam_norm",
    "sp_identity_residual",
    "xi_seam_periods",
]
