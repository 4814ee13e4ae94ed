"""High-order splitting of the propagator"""
from .schedule import (
    ScheduleApplier,
    SplittingFactor,
    SplittingSchedule,
    SplittingTarget,
    apply_schedule,
    suzuki_schedule,
)
from .budget import (
    CostBound,
    ErrorBudget,
    SplittingErrorMeter,
    error_budget,
    min_steps_for_error,
    optimal_k,
)

__all__ = [
    "CostBound",
    "ErrorBudget",
    "ScheduleApplier",
    "SplittingErrorMeter",
    "SplittingFactor",
    "SplittingSchedule",
    "SplittingTarget",
    "apply_schedule",
    "error_budget",
    "min_steps_for_error",
    "optimal_k",
    "suzuki_schedule",
]
