"""Cost and resource accounting"""
from .model import (
    SCALING_COLUMNS,
    CostReport,
    EmpiricalComparison,
    PowerCost,
    ScalingTable,
    analytic_total,
    bound_norm_h2,
    build_cost_report,
    empirical_vs_analytic,
    fit_constants,
    nstar_scaling,
)

__all__ = [
    "SCALING_COLUMNS",
    "CostReport",
    "EmpiricalComparison",
    "PowerCost",
    "ScalingTable",
    "analytic_total",
    "bound_norm_h2",
    "build_cost_report",
    "empirical_vs_analytic",
    "fit_constants",
    "nstar_scaling",
]
