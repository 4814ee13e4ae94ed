"""Realizations of the controlled powers W^{2^t}, W = e^{i M_h/(2d)}"""
from abc import ABC, abstractmethod
from typing import Dict, List, Optional

import numpy as np

from src.config.logger import setup_logger
from src.config.settings import settings
from src.cost.model import PowerCost
from src.hamiltonian.discretization import DiscretizedHamiltonian
from src.phase_estimation.state import StepPolicy
from src.safety.guards import DimensionError, SizeError
from src.spectral.oracle import ExactPropagator
from src.splitting.budget import SplittingErrorMeter, error_budget, min_steps_for_error
from src.splitting.schedule import ScheduleApplier, SplittingSchedule, suzuki_schedule

logger = setup_logger(__name__)


class Propagator(ABC):
    """Base class for W^{2^t} on flattened grid blocks of shape (rows, m^d)"""

    name: str = ""

    @abstractmethod
    def apply_power(self, t: int, block: np.ndarray) -> np.ndarray:
        """Apply the approximation of W^{2^t}"""
        pass

    def power_costs(self) -> List[PowerCost]:
        """Per-power exponential counts (empty when no exponentials are used)"""
        return []


class ExactPowerPropagator(Propagator):
    """W^{2^t} = e^{i 2^t M_h/(2d)} from the dense eigendecomposition"""

    name = "exact"

    def __init__(self, hamiltonian: DiscretizedHamiltonian):
        self.exact = ExactPropagator(hamiltonian)

    def apply_power(self, t: int, block: np.ndarray) -> np.ndarray:
        return self.exact.apply(2.0 ** t, block)


class DiagonalPhasePropagator(Propagator):
    """Synthetic diagonal unitary e^{2 pi i phi_g} per grid basis state"""

    name = "diagonal"

    def __init__(self, phases: np.ndarray):
        self.phases = np.asarray(phases, dtype=float)

    def apply_power(self, t: int, block: np.ndarray) -> np.ndarray:
        if block.shape[-1] != self.phases.shape[0]:
            raise DimensionError(f"Block has {block.shape[-1]} columns, {self.phases.shape[0]} phases given")
        return block * np.exp(2j * np.pi * self.phases * 2 ** t)


class SplittingPowerPropagator(Propagator):
    """Suzuki schedules per power with the eps_t budget"""

    name = "splitting"

    def __init__(
        self,
        hamiltonian: DiscretizedHamiltonian,
        b: int,
        k: int,
        policy: StepPolicy = StepPolicy.EMPIRICAL,
        steps: Optional[int] = None,
    ):
        self.hamiltonian = hamiltonian
        self.b = b
        self.k = k
        self.policy = policy
        self.budget = error_budget(b)
        self.applier = ScheduleApplier(hamiltonian)
        self.meter = (
            SplittingErrorMeter(hamiltonian)
            if hamiltonian.size <= min(settings.empirical_threshold, settings.dense_threshold)
            else None
        )
        self.schedules: Dict[int, SplittingSchedule] = {}
        self._costs: List[PowerCost] = []
        for t in range(b):
            self._build_power(t, steps)

    def _build_power(self, t: int, fixed_steps: Optional[int]) -> None:
        epsilon = self.budget.epsilon(t)
        total_time = 2.0 ** t
        measured = None

        if self.policy is StepPolicy.EMPIRICAL:
            if self.meter is None:
                raise SizeError(
                    f"Empirical steps need m^d <= {settings.empirical_threshold}, got {self.hamiltonian.size}"
                )
            steps, measured = self.meter.min_steps(self.k, total_time, epsilon)
        elif self.policy is StepPolicy.ANALYTIC:
            steps, _ = min_steps_for_error(
                self.k, t, epsilon, self.hamiltonian.norm_h1, self.hamiltonian.norm_h2
            )
            if steps > settings.max_splitting_steps:
                raise SizeError(
                    f"Analytic step count {steps} for t={t} exceeds {settings.max_splitting_steps}; "
                    f"use the empirical or fixed step policy for simulation"
                )
        else:
            steps = fixed_steps * 2 ** t

        schedule = suzuki_schedule(self.k, total_time, steps)
        if measured is None and self.meter is not None:
            measured = self.meter.error(self.k, total_time, steps)

        self.schedules[t] = schedule
        self._costs.append(PowerCost(
            t=t,
            time=total_time,
            steps=steps,
            h1_count=schedule.h1_count,
            h2_count=schedule.h2_count,
            epsilon=epsilon,
            measured_error=measured,
        ))
        logger.debug(
            f"Power t={t}: n={steps}, {len(schedule)} factors, eps_t={epsilon:.3e}, measured={measured}"
        )

    def apply_power(self, t: int, block: np.ndarray) -> np.ndarray:
        return self.applier.apply(self.schedules[t], block)

    def power_costs(self) -> List[PowerCost]:
        return list(self._costs)
