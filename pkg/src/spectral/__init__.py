"""Classical spectral oracle"""
from .oracle import (
    ExactPropagator,
    OverlapSpectrum,
    SpectralOracle,
    SpectralResult,
    exact_propagator_apply,
    ground_state,
    overlap_spectrum,
)
from .analysis import discretization_error_check, perturbation_check

__all__ = [
    "ExactPropagator",
    "OverlapSpectrum",
    "SpectralOracle",
    "SpectralResult",
    "discretization_error_check",
    "exact_propagator_apply",
    "ground_state",
    "overlap_spectrum",
    "perturbation_check",
]
