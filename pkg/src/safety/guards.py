"""Safety and reliability controls: error types, budget guards, error mapping"""
from typing import Dict, Optional
from src.config.logger import setup_logger
from src.config.settings import settings

logger = setup_logger(__name__)


class SimulationError(Exception):
    """Base class for every error raised by the simulator"""


class SizeError(SimulationError):
    """A problem exceeds the configured simulation budget"""


class AdmissibilityError(SimulationError):
    """A potential leaves the admissible class 0 <= V <= 1, |dV/dx_j| <= 1"""


class ConvergenceError(SimulationError):
    """An iterative procedure stopped before reaching its tolerance"""

    def __init__(self, message: str, residual: Optional[float] = None):
        super().__init__(message)
        self.residual = residual


class DomainError(SimulationError):
    """A formula was evaluated outside its domain"""


class DimensionError(SimulationError):
    """A state vector does not match the grid it is applied on"""


class NormalizationError(SimulationError):
    """A state drifted away from unit norm"""


class ConfigError(SimulationError):
    """An experiment configuration failed to parse or validate"""


class SizeGuard:
    """Budget checks shared by the grid, oracle and simulator"""

    @staticmethod
    def check_grid(d: int, q: int, budget: Optional[int] = None) -> int:
        """Return m^d, raising SizeError when it exceeds the grid budget"""
        budget = budget or settings.max_grid_points
        m = 2 ** q - 1
        # Compare in log space first so huge q never builds a huge integer
        if q * d > budget.bit_length() + d or m ** d > budget:
            raise SizeError(
                f"Grid with d={d}, q={q} has (2^{q}-1)^{d} points, budget is {budget}"
            )
        return m ** d

    @staticmethod
    def check_dense(size: int, purpose: str = "dense eigensolve") -> None:
        """Reject dense linear algebra above the dense threshold"""
        if size > settings.dense_threshold:
            raise SizeError(
                f"{purpose} needs m^d={size} <= dense threshold {settings.dense_threshold}"
            )

    @staticmethod
    def check_empirical(size: int) -> None:
        """Reject measured operator-norm errors above the empirical threshold"""
        if size > min(settings.empirical_threshold, settings.dense_threshold):
            raise SizeError(
                f"Measured splitting errors need m^d={size} <= "
                f"{min(settings.empirical_threshold, settings.dense_threshold)}"
            )

    @staticmethod
    def check_state(b: int, q: int, d: int) -> int:
        """Return the amplitude count 2^b * (2^q)^d of a QpeState"""
        amplitudes = 2 ** (b + q * d)
        if amplitudes > settings.max_state_amplitudes:
            raise SizeError(
                f"QPE state with b={b}, q={q}, d={d} has {amplitudes} amplitudes, "
                f"budget is {settings.max_state_amplitudes}"
            )
        return amplitudes


class ErrorHandler:
    """Centralized error handling"""

    # exception type -> (user message, exit code)
    ERROR_MESSAGES = {
        "ConfigError": ("Invalid experiment configuration", 2),
        "ValidationError": ("Invalid experiment configuration", 2),
        "SizeError": ("Problem exceeds the simulation budget", 2),
        "AdmissibilityError": ("Potential is not admissible", 2),
        "DomainError": ("Parameters outside the formula's domain", 2),
        "DimensionError": ("State does not match the grid", 2),
        "FileNotFoundError": ("Configuration file not found", 2),
        "ConvergenceError": ("Eigensolver or step search did not converge", 1),
        "NormalizationError": ("State lost unit norm during simulation", 1),
    }

    @staticmethod
    def handle_exception(exception: Exception, context: str = "") -> Dict:
        """Map an exception to a diagnostic record with an exit code"""
        logger.error(f"Error in {context}: {str(exception)}")

        exception_type = type(exception).__name__
        user_message, exit_code = ErrorHandler.ERROR_MESSAGES.get(
            exception_type, ("An unexpected error occurred", 1)
        )

        diagnostic = {
            "status": "error",
            "message": user_message,
            "details": str(exception),
            "type": exception_type,
            "context": context,
            "exit_code": exit_code,
        }
        residual = getattr(exception, "residual", None)
        if residual is not None:
            diagnostic["residual"] = float(residual)
        return diagnostic
