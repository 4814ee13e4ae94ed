"""Suzuki splitting schedules for e^{i(H1+H2)T} and their application via sine transforms"""
import json
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, NamedTuple, Tuple

import numpy as np
from scipy import fft

from src.config.logger import setup_logger
from src.hamiltonian.discretization import DiscretizedHamiltonian
from src.safety.guards import DimensionError

logger = setup_logger(__name__)


class SplittingTarget(str, Enum):
    """Which half of M_h/(2d) an exponential acts with"""
    H1 = "H1"
    H2 = "H2"


class SplittingFactor(NamedTuple):
    """One exponential e^{i A z}"""
    target: SplittingTarget
    z: float


@dataclass(frozen=True)
class SplittingSchedule:
    """Ordered factor list approximating e^{i(H1+H2) total_time} with `steps` Suzuki steps"""
    k: int
    total_time: float
    steps: int
    factors: Tuple[SplittingFactor, ...]

    @property
    def h1_count(self) -> int:
        return sum(1 for f in self.factors if f.target is SplittingTarget.H1)

    @property
    def h2_count(self) -> int:
        return sum(1 for f in self.factors if f.target is SplittingTarget.H2)

    def __len__(self) -> int:
        return len(self.factors)

    def coefficient_sums(self) -> Dict[SplittingTarget, float]:
        """Sum of z per target; both equal total_time for a consistent schedule"""
        sums = {SplittingTarget.H1: 0.0, SplittingTarget.H2: 0.0}
        for factor in self.factors:
            sums[factor.target] += factor.z
        return sums

    def is_palindromic(self, tolerance: float = 1e-12) -> bool:
        reverse = self.factors[::-1]
        return all(
            a.target is b.target and abs(a.z - b.z) <= tolerance * max(1.0, abs(a.z))
            for a, b in zip(self.factors, reverse)
        )

    def to_dict(self) -> Dict:
        return {
            "k": self.k,
            "total_time": self.total_time,
            "steps": self.steps,
            "factors": [[f.target.value, f.z] for f in self.factors],
        }

    def to_json(self) -> str:
        """Export as JSON for inspection and replay"""
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_json(cls, text: str) -> "SplittingSchedule":
        payload = json.loads(text)
        factors = tuple(SplittingFactor(SplittingTarget(t), float(z)) for t, z in payload["factors"])
        return cls(k=int(payload["k"]), total_time=float(payload["total_time"]),
                   steps=int(payload["steps"]), factors=factors)


def suzuki_coefficient(k: int) -> float:
    """p_k = 1 / (4 - 4^{1/(2k-1)})"""
    return 1.0 / (4.0 - 4.0 ** (1.0 / (2 * k - 1)))


def factors_per_step(k: int) -> int:
    """Exponentials in one merged S_2k step: 2 * 5^{k-1} + 1"""
    return 2 * 5 ** (k - 1) + 1


def _suzuki_step(k: int, lam: float) -> List[SplittingFactor]:
    """Unmerged factors of S_2k(lam)"""
    if k == 1:
        return [
            SplittingFactor(SplittingTarget.H1, lam / 2.0),
            SplittingFactor(SplittingTarget.H2, lam),
            SplittingFactor(SplittingTarget.H1, lam / 2.0),
        ]
    p = suzuki_coefficient(k)
    outer = _suzuki_step(k - 1, p * lam)
    middle = _suzuki_step(k - 1, (1.0 - 4.0 * p) * lam)
    return outer + outer + middle + outer + outer


def merge_factors(factors: List[SplittingFactor]) -> List[SplittingFactor]:
    """Combine adjacent exponentials of the same target"""
    merged: List[SplittingFactor] = []
    for factor in factors:
        if merged and merged[-1].target is factor.target:
            merged[-1] = SplittingFactor(factor.target, merged[-1].z + factor.z)
        else:
            merged.append(factor)
    return [f for f in merged if f.z != 0.0]


def suzuki_schedule(k: int, total_time: float, steps: int) -> SplittingSchedule:
    """n repetitions of S_2k(total_time / n), adjacent same-target factors merged"""
    if k < 1:
        raise ValueError(f"Splitting order index k must be >= 1, got {k}")
    if steps < 1:
        raise ValueError(f"Step count must be >= 1, got {steps}")

    step = _suzuki_step(k, total_time / steps)
    factors = merge_factors(step * steps)
    schedule = SplittingSchedule(k=k, total_time=float(total_time), steps=steps, factors=tuple(factors))
    logger.debug(
        f"Suzuki schedule k={k}, T={total_time}, n={steps}: "
        f"{schedule.h1_count} H1 + {schedule.h2_count} H2 factors"
    )
    return schedule


def _sine_transform(block: np.ndarray, axes: Tuple[int, ...]) -> np.ndarray:
    """Orthonormal type-I DST over the grid axes; it is its own inverse"""
    if np.iscomplexobj(block):
        return (fft.dstn(block.real, type=1, axes=axes, norm="ortho")
                + 1j * fft.dstn(block.imag, type=1, axes=axes, norm="ortho"))
    return fft.dstn(block, type=1, axes=axes, norm="ortho")


class ScheduleApplier:
    """Apply splitting schedules of one Hamiltonian; H1 factors go through the sine basis"""

    def __init__(self, hamiltonian: DiscretizedHamiltonian):
        self.hamiltonian = hamiltonian
        scale = 1.0 / (2 * hamiltonian.d)
        self._h1 = hamiltonian.laplacian_modes() * scale
        self._h2 = hamiltonian.potential_field() * scale
        self._axes = tuple(range(-hamiltonian.d, 0))

    def _grid_view(self, state: np.ndarray) -> np.ndarray:
        size = self.hamiltonian.size
        if state.shape[-1] != size:
            raise DimensionError(
                f"State has trailing dimension {state.shape[-1]}, grid has {size} points"
            )
        return state.reshape(state.shape[:-1] + self.hamiltonian.grid.shape)

    def apply_factor(self, factor: SplittingFactor, block: np.ndarray) -> np.ndarray:
        """block has the grid shape on its trailing axes"""
        if factor.target is SplittingTarget.H2:
            return block * np.exp(1j * factor.z * self._h2)
        modes = _sine_transform(block, self._axes)
        modes = modes * np.exp(1j * factor.z * self._h1)
        return _sine_transform(modes, self._axes)

    def apply(self, schedule: SplittingSchedule, state: np.ndarray) -> np.ndarray:
        """Apply the factors left to right in schedule order"""
        state = np.asarray(state)
        block = self._grid_view(state).astype(complex)
        for factor in schedule.factors:
            block = self.apply_factor(factor, block)
        return block.reshape(state.shape)

    def matrix(self, schedule: SplittingSchedule) -> np.ndarray:
        """Dense unitary of the schedule (columns are images of basis vectors)"""
        identity = np.eye(self.hamiltonian.size, dtype=complex)
        return self.apply(schedule, identity).T


def apply_schedule(hamiltonian: DiscretizedHamiltonian, schedule: SplittingSchedule, state: np.ndarray) -> np.ndarray:
    """prod_l e^{i A_l z_l} applied to the last axis of state"""
    return ScheduleApplier(hamiltonian).apply(schedule, state)
