"""Error types and budget guards"""
from .guards import (
    AdmissibilityError,
    ConfigError,
    ConvergenceError,
    DimensionError,
    DomainError,
    ErrorHandler,
    NormalizationError,
    SimulationError,
    SizeError,
    SizeGuard,
)

__all__ = [
    "AdmissibilityError",
    "ConfigError",
    "ConvergenceError",
    "DimensionError",
    "DomainError",
    "ErrorHandler",
    "NormalizationError",
    "SimulationError",
    "SizeError",
    "SizeGuard",
]
