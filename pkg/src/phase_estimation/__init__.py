"""Statevector simulation of modified phase estimation"""
from .state import InitialState, PropagatorMode, QpeConfig, QpeState, StepPolicy, prepare_initial_state
from .propagators import (
    DiagonalPhasePropagator,
    ExactPowerPropagator,
    Propagator,
    SplittingPowerPropagator,
)
from .pipeline import OutcomeDistribution, QPEPipeline, run_qpe, success_set
from .estimator import (
    EXACT_MODE_THRESHOLD,
    SPLITTING_MODE_THRESHOLD,
    EnergyEstimate,
    SuccessReport,
    estimate_energy,
    relative_error_bound,
    success_report,
)

__all__ = [
    "DiagonalPhasePropagator",
    "EXACT_MODE_THRESHOLD",
    "EnergyEstimate",
    "ExactPowerPropagator",
    "InitialState",
    "OutcomeDistribution",
    "Propagator",
    "PropagatorMode",
    "QPEPipeline",
    "QpeConfig",
    "QpeState",
    "SPLITTING_MODE_THRESHOLD",
    "SplittingPowerPropagator",
    "StepPolicy",
    "SuccessReport",
    "estimate_energy",
    "prepare_initial_state",
    "relative_error_bound",
    "run_qpe",
    "success_report",
    "success_set",
]
