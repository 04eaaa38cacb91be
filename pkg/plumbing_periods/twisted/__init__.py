from plumbing_periods.twisted.higher_order import (
    CONDITIONS,
    CompatibilityReport,
    ScalingParams,
    TwistedData,
    TwistedFamily,
    build_twisted_family,
    check_compatibility,
    modification_differential,
    modified_differential,
    path_product_audit,
    rescaled_restriction_error,
    scaling_to_plumbing,
    t_power_audit,
    twisted_initial_data,
    zero_clusters,
)

__all__ = [
    "CONDITIONS",
    "CompatibilityReport",
    "ScalingParams",
    "TwistedData",
    "TwistedFamily",
    "build_twisted_family",
    "check_compatibility",
    "modification_differential",
    "modified_differential",
    "path_product_audit",
    "rescaled_restriction_error",
    "scaling_to_plumbing",
    "t_power_audit",
    "twisted_initial_data",
    "zero_clusters",
]
