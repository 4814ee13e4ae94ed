"""Modified phase estimation on a statevector"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from src.config.logger import setup_logger
from src.config.settings import settings
from src.cost.model import CostReport, build_cost_report
from src.hamiltonian.discretization import DiscretizedHamiltonian, discretize
from src.phase_estimation.propagators import (
    ExactPowerPropagator,
    Propagator,
    SplittingPowerPropagator,
)
from src.phase_estimation.state import (
    InitialState,
    PropagatorMode,
    QpeConfig,
    QpeState,
    prepare_initial_state,
)
from src.safety.guards import NormalizationError
from src.spectral.oracle import SpectralResult, ground_state

logger = setup_logger(__name__)

# slack on the circular distance so that boundary outcomes survive rounding
SUCCESS_TOLERANCE = 1e-12


def success_set(phase: float, b: int) -> np.ndarray:
    """Outcomes j with circular distance |phase - j 2^-b| <= 2^-b on [0, 1)"""
    size = 2 ** b
    grid = np.arange(size) / size
    distance = np.abs((phase % 1.0) - grid)
    distance = np.minimum(distance, 1.0 - distance)
    return np.nonzero(distance <= 1.0 / size + SUCCESS_TOLERANCE)[0]


@dataclass
class OutcomeDistribution:
    """Exact measurement probabilities of the clock register"""
    probabilities: np.ndarray
    b: int

    @property
    def size(self) -> int:
        return self.probabilities.shape[0]

    @property
    def total(self) -> float:
        return float(np.sum(self.probabilities))

    def map_outcome(self) -> int:
        """Most probable outcome; argmax keeps the smaller index on ties"""
        return int(np.argmax(self.probabilities))

    def success_mass(self, phase: float) -> float:
        return float(np.sum(self.probabilities[success_set(phase, self.b)]))

    def top_k(self, k: Optional[int] = None) -> List[Tuple[int, float]]:
        k = settings.default_top_k if k is None else k
        order = np.lexsort((np.arange(self.size), -self.probabilities))[:k]
        return [(int(j), float(self.probabilities[j])) for j in order]

    def sample(self, shots: Optional[int] = None, seed: int = 0) -> np.ndarray:
        """Seeded outcome counts for demonstration output"""
        shots = settings.demo_shots if shots is None else shots
        rng = np.random.default_rng(seed)
        p = np.clip(self.probabilities, 0.0, None)
        return rng.multinomial(shots, p / p.sum())

    def to_dict(self, top_k: Optional[int] = None) -> Dict:
        return {
            "b": self.b,
            "total": self.total,
            "map_outcome": self.map_outcome(),
            "top_k": [{"j": j, "p": p} for j, p in self.top_k(top_k)],
        }


@dataclass
class StageRecord:
    """Norm of the state after one pipeline stage"""
    stage: str
    norm: float


def hadamard_layer(amplitudes: np.ndarray, b: int) -> np.ndarray:
    """H on each of the b clock qubits (clock index is axis 0, most significant bit first)"""
    rest = amplitudes.shape[1:]
    work = amplitudes.reshape((2,) * b + rest)
    for axis in range(b):
        zero = np.take(work, 0, axis=axis)
        one = np.take(work, 1, axis=axis)
        work = np.stack(((zero + one) / np.sqrt(2.0), (zero - one) / np.sqrt(2.0)), axis=axis)
    return work.reshape(amplitudes.shape)


def inverse_fourier(amplitudes: np.ndarray) -> np.ndarray:
    """QFT^dagger on the clock axis: |x> -> 2^{-b/2} sum_j e^{-2 pi i x j / 2^b} |j>"""
    return np.fft.fft(amplitudes, axis=0, norm="ortho")


class QPEPipeline:
    """Prepare, Hadamard, controlled powers, inverse Fourier transform, measure"""

    def __init__(self, cfg: QpeConfig, propagator: Optional[Propagator] = None):
        self.cfg = cfg
        self.hamiltonian: DiscretizedHamiltonian = discretize(cfg.potential, cfg.grid, cfg.resolved_query)
        self.propagator = propagator if propagator is not None else self._default_propagator()
        self.stages: List[StageRecord] = []
        self.reference: Optional[SpectralResult] = None

    def _default_propagator(self) -> Propagator:
        if self.cfg.mode is PropagatorMode.SPLITTING:
            return SplittingPowerPropagator(
                self.hamiltonian,
                b=self.cfg.b,
                k=self.cfg.resolved_k,
                policy=self.cfg.step_policy,
                steps=self.cfg.steps,
            )
        return ExactPowerPropagator(self.hamiltonian)

    def _record(self, state: QpeState, stage: str) -> None:
        try:
            norm = state.check_normalized(stage)
        except NormalizationError as e:
            logger.error(f"Unitarity check failed: {str(e)}")
            raise
        self.stages.append(StageRecord(stage=stage, norm=norm))

    def prepare(self) -> QpeState:
        ground_vector = None
        if self.cfg.initial_state is InitialState.GROUND:
            self.reference = ground_state(self.hamiltonian)
            ground_vector = self.reference.vector
        state = prepare_initial_state(self.cfg, ground_vector)
        self._record(state, "state preparation")
        return state

    def apply_hadamards(self, state: QpeState) -> QpeState:
        state.amplitudes = hadamard_layer(state.amplitudes, self.cfg.b)
        self._record(state, "hadamard layer")
        return state

    def apply_controlled_powers(self, state: QpeState) -> QpeState:
        """Apply W^{2^t} to the rows whose clock bit t is set"""
        clock = np.arange(self.cfg.clock_size)
        for t in range(self.cfg.b):
            rows = ((clock >> t) & 1).astype(bool)
            block = state.grid_block(rows)
            state.set_grid_block(rows, self.propagator.apply_power(t, block))
            self._record(state, f"controlled power t={t}")
        return state

    def apply_inverse_fourier(self, state: QpeState) -> QpeState:
        state.amplitudes = inverse_fourier(state.amplitudes)
        self._record(state, "inverse fourier transform")
        return state

    def distribution(self, state: QpeState) -> OutcomeDistribution:
        axes = tuple(range(1, state.amplitudes.ndim))
        probabilities = np.sum(np.abs(state.amplitudes) ** 2, axis=axes)
        dist = OutcomeDistribution(probabilities=probabilities, b=self.cfg.b)
        if abs(dist.total - 1.0) > settings.norm_tolerance:
            raise NormalizationError(f"Outcome probabilities sum to {dist.total:.15f}")
        return dist

    def cost_report(self) -> CostReport:
        return build_cost_report(
            b=self.cfg.b,
            d=self.cfg.grid.d,
            q=self.cfg.grid.q,
            mode=self.propagator.name,
            k_used=self.cfg.resolved_k,
            norm_h1=self.hamiltonian.norm_h1,
            norm_h2=self.hamiltonian.norm_h2,
            per_power=self.propagator.power_costs(),
        )

    def run(self) -> Tuple[OutcomeDistribution, CostReport]:
        """Full pipeline; returns the exact outcome distribution and the cost report"""
        self.stages = []
        state = self.prepare()
        state = self.apply_hadamards(state)
        state = self.apply_controlled_powers(state)
        state = self.apply_inverse_fourier(state)
        dist = self.distribution(state)
        report = self.cost_report()
        logger.info(
            f"Phase estimation finished ({self.propagator.name}, b={self.cfg.b}): "
            f"MAP j={dist.map_outcome()}, unused mass={state.unused_mass():.2e}"
        )
        return dist, report


def run_qpe(cfg: QpeConfig, propagator: Optional[Propagator] = None) -> Tuple[OutcomeDistribution, CostReport]:
    """Run modified phase estimation for cfg"""
    return QPEPipeline(cfg, propagator).run()
