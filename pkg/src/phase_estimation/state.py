"""Run configuration and the (clock x grid) amplitude state of phase estimation"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from src.config.logger import setup_logger
from src.config.settings import settings
from src.hamiltonian.discretization import QueryConfig
from src.hamiltonian.grid import GridSpec, sine_vector
from src.hamiltonian.potentials import PotentialSpec
from src.safety.guards import ConfigError, DimensionError, NormalizationError, SizeGuard
from src.splitting.budget import optimal_k

logger = setup_logger(__name__)


class PropagatorMode(str, Enum):
    """How W^{2^t} is realized"""
    EXACT = "exact"
    SPLITTING = "splitting"


class StepPolicy(str, Enum):
    """How splitting step counts are chosen per power"""
    EMPIRICAL = "empirical"  # bisect n until the measured error is within eps_t
    ANALYTIC = "analytic"  # n from the N_t bound
    FIXED = "fixed"  # steps * 2^t, constant step size


class InitialState(str, Enum):
    """Grid register at the start of the run"""
    SINE = "sine"  # psi_1^{(x)d}
    GROUND = "ground"  # oracle z_h1


@dataclass(frozen=True)
class QpeConfig:
    """Everything a phase-estimation run depends on"""
    grid: GridSpec
    potential: PotentialSpec
    b: int
    k: Optional[int] = None
    mode: PropagatorMode = PropagatorMode.EXACT
    step_policy: StepPolicy = StepPolicy.EMPIRICAL
    steps: Optional[int] = None
    initial_state: InitialState = InitialState.SINE
    query: Optional[QueryConfig] = None

    def __post_init__(self):
        if self.potential.d != self.grid.d:
            raise ConfigError(f"Potential dimension {self.potential.d} differs from grid dimension {self.grid.d}")
        if self.b < self.grid.q:
            raise ConfigError(f"Clock bits b={self.b} must be >= ceil(log2 1/h) = {self.grid.q}")
        if self.k is not None and self.k < 1:
            raise ConfigError(f"Splitting order index k must be >= 1, got {self.k}")
        if self.step_policy is StepPolicy.FIXED and (self.steps is None or self.steps < 1):
            raise ConfigError("Fixed step policy needs steps >= 1")
        SizeGuard.check_state(self.b, self.grid.q, self.grid.d)

    @property
    def clock_size(self) -> int:
        return 2 ** self.b

    @property
    def resolved_query(self) -> QueryConfig:
        return self.query if self.query is not None else QueryConfig.for_grid(self.grid)

    @property
    def k_star(self) -> float:
        return optimal_k(self.b, self.grid.d).k_star

    @property
    def resolved_k(self) -> int:
        """Configured k, or the integer choice around k*"""
        return self.k if self.k is not None else optimal_k(self.b, self.grid.d).k

    def describe(self) -> dict:
        return {
            "d": self.grid.d,
            "q": self.grid.q,
            "m": self.grid.m,
            "b": self.b,
            "potential": self.potential.describe(),
            "k": self.k,
            "mode": self.mode.value,
            "step_policy": self.step_policy.value,
            "steps": self.steps,
            "initial_state": self.initial_state.value,
            "query_bits": self.resolved_query.bits,
        }


@dataclass
class QpeState:
    """Amplitudes over (clock x, axis registers of 2^q states); index 2^q - 1 of each axis is unused"""
    amplitudes: np.ndarray
    b: int
    grid: GridSpec

    @property
    def vector(self) -> np.ndarray:
        """Flat amplitude vector of length 2^b (2^q)^d, clock index major"""
        return self.amplitudes.reshape(-1)

    @property
    def grid_slices(self) -> tuple:
        return (slice(None),) + (slice(0, self.grid.m),) * self.grid.d

    def grid_block(self, rows: Optional[np.ndarray] = None) -> np.ndarray:
        """Amplitudes on embedded grid states, shape (rows, m^d)"""
        block = self.amplitudes[self.grid_slices]
        if rows is not None:
            block = block[rows]
        return block.reshape(block.shape[0], -1)

    def set_grid_block(self, rows: np.ndarray, block: np.ndarray) -> None:
        if block.shape[-1] != self.grid.size:
            raise DimensionError(f"Grid block has {block.shape[-1]} columns, grid has {self.grid.size} points")
        shaped = block.reshape((block.shape[0],) + self.grid.shape)
        index = (rows,) + (slice(0, self.grid.m),) * self.grid.d
        self.amplitudes[index] = shaped

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def unused_mass(self) -> float:
        """Probability on register states outside the embedded grid"""
        return max(0.0, self.norm() ** 2 - float(np.sum(np.abs(self.amplitudes[self.grid_slices]) ** 2)))

    def check_normalized(self, stage: str) -> float:
        norm = self.norm()
        if abs(norm - 1.0) > settings.norm_tolerance:
            raise NormalizationError(f"State norm {norm:.15f} after {stage}")
        logger.debug(f"Norm after {stage}: {norm:.15f}")
        return norm


def sine_product_state(grid: GridSpec) -> np.ndarray:
    """psi_1^{(x)d} on the (m,)*d grid"""
    axis = sine_vector(grid, 1)
    state = axis
    for _ in range(grid.d - 1):
        state = np.multiply.outer(state, axis)
    return state


def prepare_initial_state(cfg: QpeConfig, ground_vector: Optional[np.ndarray] = None) -> QpeState:
    """|0>^{(x)b} |psi_1>^{(x)d} (or |z_h1> for the ground initial state)"""
    grid = cfg.grid
    amplitudes = np.zeros((cfg.clock_size,) + (grid.register_size,) * grid.d, dtype=complex)

    if cfg.initial_state is InitialState.GROUND:
        if ground_vector is None:
            raise ConfigError("Ground initial state needs the oracle eigenvector")
        grid_state = np.asarray(ground_vector, dtype=float).reshape(grid.shape)
    else:
        grid_state = sine_product_state(grid)

    state = QpeState(amplitudes=amplitudes, b=cfg.b, grid=grid)
    state.set_grid_block(np.array([0]), grid_state.reshape(1, -1))
    state.check_normalized("state preparation")
    return state
