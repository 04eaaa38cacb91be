from plumbing_periods.periods.expansion import PeriodExpansion, period_expansion
from plumbing_periods.periods.periods import (
    PeriodMatrix,
    a_period,
    expansion_linear,
    fit_slope,
    h_function,
    normalized_basis,
    per_trsf_check,
    period_matrix,
    period_numeric,
    wrap_2pi_i,
)
from plumbing_periods.periods.closed_forms import (
    ReferenceFormula,
    banana_eta,
    banana_tau_terms,
    cross_ratio,
    eval_tot_deg_tau,
    nonseparating_first_order,
    separating_first_order,
    tot_deg_omega,
    tot_deg_tau_expansion,
)
from plumbing_periods.periods.schottky import OracleResult, SchottkyGroup, oracle_for_curve, oracle_tau

__all__ = [
    "OracleResult",
    "PeriodExpansion",
    "PeriodMatrix",
    "ReferenceFormula",
    "SchottkyGroup",
    "a_period",
    "banana_eta",
    "banana_tau_terms",
    "cross_ratio",
    "eval_tot_deg_tau",
    "expansion_linear",
    "fit_slope",
    "h_function",
    "nonseparating_first_order",
    "normalized_basis",
    "oracle_for_curve",
    "oracle_tau",
    "per_trsf_check",
    "period_expansion",
    "period_matrix",
    "period_numeric",
    "separating_first_order",
    "tot_deg_omega",
    "tot_deg_tau_expansion",
    "wrap_2pi_i",
]
