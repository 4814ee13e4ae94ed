"""Admissible potential families addressable by name and parameter list"""
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Sequence, Tuple

import numpy as np

from src.config.logger import setup_logger
from src.hamiltonian.grid import GridSpec
from src.safety.guards import AdmissibilityError

logger = setup_logger(__name__)


@dataclass(frozen=True)
class PotentialBounds:
    """Declared sup of V and sup of each first partial derivative"""
    sup_value: float
    sup_gradient: float


class PotentialFamily(ABC):
    """Base class for potential families"""

    name: str = ""

    @abstractmethod
    def evaluate(self, points: np.ndarray, params: Tuple[float, ...]) -> np.ndarray:
        """Evaluate V at points of shape (N, d)"""
        pass

    @abstractmethod
    def bounds(self, params: Tuple[float, ...], d: int) -> PotentialBounds:
        """Declared bounds of V and its first partials"""
        pass

    def default_params(self) -> Tuple[float, ...]:
        return ()


class ZeroPotential(PotentialFamily):
    """V = 0 (pure Laplacian)"""

    name = "zero"

    def evaluate(self, points: np.ndarray, params: Tuple[float, ...]) -> np.ndarray:
        return np.zeros(points.shape[0])

    def bounds(self, params: Tuple[float, ...], d: int) -> PotentialBounds:
        return PotentialBounds(0.0, 0.0)


class ConstantPotential(PotentialFamily):
    """V = c"""

    name = "constant"

    def evaluate(self, points: np.ndarray, params: Tuple[float, ...]) -> np.ndarray:
        return np.full(points.shape[0], float(params[0]))

    def bounds(self, params: Tuple[float, ...], d: int) -> PotentialBounds:
        return PotentialBounds(abs(float(params[0])), 0.0)

    def default_params(self) -> Tuple[float, ...]:
        return (0.5,)


class LinearPotential(PotentialFamily):
    """V = a * (1/d) sum_j x_j, with a = 1 unless given"""

    name = "linear"

    def evaluate(self, points: np.ndarray, params: Tuple[float, ...]) -> np.ndarray:
        slope = float(params[0]) if params else 1.0
        return slope * points.mean(axis=1)

    def bounds(self, params: Tuple[float, ...], d: int) -> PotentialBounds:
        slope = abs(float(params[0])) if params else 1.0
        return PotentialBounds(slope, slope / d)


class SinePotential(PotentialFamily):
    """V = a * prod_j sin(pi x_j); admissible for 0 <= a <= 1/pi"""

    name = "sine"

    def evaluate(self, points: np.ndarray, params: Tuple[float, ...]) -> np.ndarray:
        amplitude = float(params[0]) if params else 1.0 / np.pi
        return amplitude * np.prod(np.sin(np.pi * points), axis=1)

    def bounds(self, params: Tuple[float, ...], d: int) -> PotentialBounds:
        amplitude = abs(float(params[0])) if params else 1.0 / np.pi
        return PotentialBounds(amplitude, amplitude * np.pi)

    def default_params(self) -> Tuple[float, ...]:
        return (1.0 / np.pi,)


class SeparableTrigPotential(PotentialFamily):
    """V = s * prod_j (1/2 + 1/2 sin(pi x_j)); s = 2/pi keeps every partial <= 1"""

    name = "separable_trig"

    def evaluate(self, points: np.ndarray, params: Tuple[float, ...]) -> np.ndarray:
        scale = float(params[0]) if params else 2.0 / np.pi
        return scale * np.prod(0.5 + 0.5 * np.sin(np.pi * points), axis=1)

    def bounds(self, params: Tuple[float, ...], d: int) -> PotentialBounds:
        scale = abs(float(params[0])) if params else 2.0 / np.pi
        return PotentialBounds(scale, scale * np.pi / 2.0)

    def default_params(self) -> Tuple[float, ...]:
        return (2.0 / np.pi,)


@lru_cache(maxsize=64)
def _random_trig_terms(seed: int, terms: int, max_frequency: int, d: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Seeded frequencies, phases and amplitudes scaled into the admissible class"""
    rng = np.random.default_rng(seed)
    frequencies = rng.integers(0, max_frequency + 1, size=(terms, d))
    phases = rng.uniform(0.0, 2.0 * np.pi, size=terms)
    amplitudes = rng.uniform(-1.0, 1.0, size=terms)

    # |V - 1/2| <= sum|a| and |dV/dx_j| <= pi * sum_r |a_r| |n_rj|
    value_scale = 0.5 / np.abs(amplitudes).sum()
    gradient_weight = np.pi * (np.abs(amplitudes)[:, None] * frequencies).sum(axis=0).max()
    gradient_scale = 1.0 / gradient_weight if gradient_weight > 0 else np.inf
    amplitudes = amplitudes * min(value_scale, gradient_scale)

    for array in (frequencies, phases, amplitudes):
        array.setflags(write=False)
    return frequencies, phases, amplitudes


class RandomTrigPotential(PotentialFamily):
    """V = 1/2 + sum_r a_r cos(pi <n_r, x> + phi_r), seeded low-order trigonometric polynomial

    params: (seed, terms=4, max_frequency=2)
    """

    name = "random_trig"

    @staticmethod
    def _terms(params: Tuple[float, ...], d: int):
        seed = int(params[0]) if params else 0
        terms = int(params[1]) if len(params) > 1 else 4
        max_frequency = int(params[2]) if len(params) > 2 else 2
        return _random_trig_terms(seed, terms, max_frequency, d)

    def evaluate(self, points: np.ndarray, params: Tuple[float, ...]) -> np.ndarray:
        frequencies, phases, amplitudes = self._terms(params, points.shape[1])
        arguments = np.pi * points @ frequencies.T + phases
        return 0.5 + np.cos(arguments) @ amplitudes

    def bounds(self, params: Tuple[float, ...], d: int) -> PotentialBounds:
        frequencies, _, amplitudes = self._terms(params, d)
        sup_value = 0.5 + np.abs(amplitudes).sum()
        sup_gradient = np.pi * (np.abs(amplitudes)[:, None] * frequencies).sum(axis=0).max()
        return PotentialBounds(float(sup_value), float(sup_gradient))

    def default_params(self) -> Tuple[float, ...]:
        return (0.0, 4.0, 2.0)


class PotentialFactory:
    """Factory for creating potentials from family names"""

    _families: Dict[str, PotentialFamily] = {
        'zero': ZeroPotential(),
        'constant': ConstantPotential(),
        'linear': LinearPotential(),
        'sine': SinePotential(),
        'separable_trig': SeparableTrigPotential(),
        'random_trig': RandomTrigPotential(),
    }

    @classmethod
    def get_family(cls, name: str) -> PotentialFamily:
        """Get the family registered under name"""
        key = name.lower().strip()
        if key not in cls._families:
            raise ValueError(f"Unsupported potential family: {name}. Known: {', '.join(sorted(cls._families))}")
        return cls._families[key]

    @classmethod
    def create(cls, name: str, params: Sequence[float] = (), d: int = 1) -> "PotentialSpec":
        """Build a PotentialSpec, filling in family defaults when params is empty"""
        family = cls.get_family(name)
        values = tuple(float(p) for p in params) or family.default_params()
        return PotentialSpec(family=family.name, params=values, d=d)

    @classmethod
    def families(cls) -> List[str]:
        return sorted(cls._families)


@dataclass(frozen=True)
class PotentialSpec:
    """A named potential family with its parameters, on [0,1]^d"""
    family: str
    params: Tuple[float, ...] = field(default_factory=tuple)
    d: int = 1

    def evaluate(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.shape[1] != self.d:
            raise ValueError(f"Potential is {self.d}-dimensional, got points of dimension {points.shape[1]}")
        return PotentialFactory.get_family(self.family).evaluate(points, self.params)

    def bounds(self) -> PotentialBounds:
        return PotentialFactory.get_family(self.family).bounds(self.params, self.d)

    def describe(self) -> Dict:
        return {"family": self.family, "params": list(self.params), "d": self.d}

    def check_admissible(self, grid: GridSpec, tolerance: float = 1e-9) -> np.ndarray:
        """Check 0 <= V <= 1 and the finite-difference slope bound on the grid; return V at grid points"""
        if grid.d != self.d:
            raise ValueError(f"Potential dimension {self.d} does not match grid dimension {grid.d}")

        declared = self.bounds()
        if declared.sup_value > 1.0 + tolerance or declared.sup_gradient > 1.0 + tolerance:
            raise AdmissibilityError(
                f"{self.family}{self.params} declares sup V={declared.sup_value:.6g}, "
                f"sup |dV/dx|={declared.sup_gradient:.6g}; both must be <= 1"
            )

        values = self.evaluate(grid.points())
        if values.min() < -tolerance or values.max() > 1.0 + tolerance:
            raise AdmissibilityError(
                f"{self.family}{self.params} leaves [0, 1] on the grid: "
                f"min={values.min():.6g}, max={values.max():.6g}"
            )

        field_values = values.reshape(grid.shape)
        for axis in range(grid.d):
            if grid.m < 2:
                break
            slopes = np.abs(np.diff(field_values, axis=axis)) / grid.h
            if slopes.max() > 1.0 + tolerance:
                raise AdmissibilityError(
                    f"{self.family}{self.params} has finite-difference slope {slopes.max():.6g} along axis {axis}"
                )
        return values
