"""Per-power error budget, exponential-count bounds, step selection and the optimal order k*"""
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Optional, Tuple

import numpy as np

from src.config.logger import setup_logger
from src.config.settings import settings
from src.hamiltonian.discretization import DiscretizedHamiltonian
from src.safety.guards import ConvergenceError, DomainError, SizeError, SizeGuard
from src.spectral.oracle import ExactPropagator
from src.splitting.schedule import ScheduleApplier, factors_per_step, suzuki_schedule

logger = setup_logger(__name__)

GROWTH = 25.0 / 3.0
TOTAL_ERROR_ALLOWANCE = Fraction(1, 20)


@dataclass(frozen=True)
class ErrorBudget:
    """eps_t = 2^{t+1-b} / 40 for t = 0..b-1, kept as exact fractions"""
    b: int
    epsilons: Tuple[Fraction, ...]

    @property
    def total(self) -> Fraction:
        return sum(self.epsilons, Fraction(0))

    def epsilon(self, t: int) -> float:
        return float(self.epsilons[t])

    def as_floats(self) -> Tuple[float, ...]:
        return tuple(float(e) for e in self.epsilons)


@dataclass(frozen=True)
class CostBound:
    """Closed-form exponential counts N_t and their sum for one order k"""
    k: int
    norm_h1: float
    norm_h2: float
    per_power: Dict[int, float] = field(default_factory=dict)
    b: Optional[int] = None

    @property
    def total(self) -> float:
        return float(sum(self.per_power.values()))


@dataclass(frozen=True)
class OptimalOrder:
    """Real-valued k* and the integer order minimizing the total bound"""
    k_star: float
    k: int
    candidates: Dict[int, float]


def error_budget(b: int) -> ErrorBudget:
    """eps_t = 2^{t+1-b}/40; the sum is (2^b - 1) 2^{1-b} / 40 < 1/20"""
    if b < 1:
        raise ValueError(f"Clock bits must be >= 1, got {b}")
    epsilons = tuple(Fraction(2 ** (t + 1), 40 * 2 ** b) for t in range(b))
    budget = ErrorBudget(b=b, epsilons=epsilons)
    if budget.total > TOTAL_ERROR_ALLOWANCE:
        raise AssertionError(f"Error budget {budget.total} exceeds {TOTAL_ERROR_ALLOWANCE}")
    return budget


def power_bound(k: int, t: int, epsilon: float, norm_h1: float, norm_h2: float) -> float:
    """N_t <= 16e ||H1|| 2^t (25/3)^{k-1} (8e 2^t ||H2|| / eps_t)^{1/(2k)}"""
    if epsilon <= 0:
        raise ValueError(f"Error allowance must be positive, got {epsilon}")
    return (16.0 * math.e * norm_h1 * 2.0 ** t * GROWTH ** (k - 1)
            * (8.0 * math.e * 2.0 ** t * norm_h2 / epsilon) ** (1.0 / (2 * k)))


def total_bound(k: int, b: int, norm_h1: float, norm_h2: float) -> float:
    """N <= 16e ||H1|| 2^b (25/3)^{k-1} (160e 2^b ||H2||)^{1/(2k)} under the eps_t schedule"""
    return (16.0 * math.e * norm_h1 * 2.0 ** b * GROWTH ** (k - 1)
            * (160.0 * math.e * 2.0 ** b * norm_h2) ** (1.0 / (2 * k)))


def cost_bound(k: int, b: int, norm_h1: float, norm_h2: float) -> CostBound:
    """N_t for every power t = 0..b-1 with the eps_t schedule"""
    budget = error_budget(b)
    per_power = {t: power_bound(k, t, budget.epsilon(t), norm_h1, norm_h2) for t in range(b)}
    return CostBound(k=k, norm_h1=norm_h1, norm_h2=norm_h2, per_power=per_power, b=b)


class SplittingErrorMeter:
    """Measure ||S_2k(T/n)^n - e^{iHT}||_2 on dense-verifiable grids"""

    def __init__(self, hamiltonian: DiscretizedHamiltonian):
        SizeGuard.check_empirical(hamiltonian.size)
        self.hamiltonian = hamiltonian
        self.exact = ExactPropagator(hamiltonian)
        self.applier = ScheduleApplier(hamiltonian)
        self._targets: Dict[float, np.ndarray] = {}

    def _target(self, total_time: float) -> np.ndarray:
        if total_time not in self._targets:
            self._targets[total_time] = self.exact.matrix(total_time)
        return self._targets[total_time]

    def error(self, k: int, total_time: float, steps: int) -> float:
        """Spectral-norm error of n merged Suzuki steps (one step matrix raised to n)"""
        one_step = self.applier.matrix(suzuki_schedule(k, total_time / steps, 1))
        product = np.linalg.matrix_power(one_step, steps)
        return float(np.linalg.norm(product - self._target(total_time), 2))

    def min_steps(self, k: int, total_time: float, epsilon: float) -> Tuple[int, float]:
        """Smallest n (doubling then bisection) whose measured error is <= epsilon"""
        error = self.error(k, total_time, 1)
        if error <= epsilon:
            return 1, error

        low, high = 1, 2
        while True:
            if high > settings.max_splitting_steps:
                raise ConvergenceError(
                    f"No step count <= {settings.max_splitting_steps} reaches error {epsilon:.3e} "
                    f"(k={k}, T={total_time})",
                    residual=error,
                )
            error = self.error(k, total_time, high)
            if error <= epsilon:
                break
            low, high = high, 2 * high

        best_error = error
        while high - low > 1:
            mid = (low + high) // 2
            mid_error = self.error(k, total_time, mid)
            if mid_error <= epsilon:
                high, best_error = mid, mid_error
            else:
                low = mid
        return high, best_error


def min_steps_for_error(
    k: int,
    t: int,
    epsilon: float,
    norm_h1: float,
    norm_h2: float,
    mode: str = "analytic",
    hamiltonian: Optional[DiscretizedHamiltonian] = None,
    meter: Optional[SplittingErrorMeter] = None,
) -> Tuple[int, CostBound]:
    """Step count for W^{2^t} within epsilon: analytic from N_t, or empirical by bisection"""
    if k < 1 or t < 0 or epsilon <= 0 or norm_h1 < 0 or norm_h2 < 0:
        raise ValueError(f"Invalid step-count inputs k={k}, t={t}, eps={epsilon}")

    bound = power_bound(k, t, epsilon, norm_h1, norm_h2)
    cost = CostBound(k=k, norm_h1=norm_h1, norm_h2=norm_h2, per_power={t: bound})

    if mode == "analytic":
        steps = max(1, math.ceil(bound / factors_per_step(k)))
    elif mode == "empirical":
        if meter is None:
            if hamiltonian is None:
                raise SizeError("Empirical step search needs a dense-verifiable Hamiltonian")
            meter = SplittingErrorMeter(hamiltonian)
        steps, measured = meter.min_steps(k, 2.0 ** t, epsilon)
        logger.debug(f"Empirical steps t={t}, k={k}: n={steps}, error={measured:.3e} <= {epsilon:.3e}")
    else:
        raise ValueError(f"Unknown step mode: {mode}")
    return steps, cost


def optimal_k(b: int, d: int) -> OptimalOrder:
    """k* = sqrt(1/2 log_{25/3}(80e 2^b / d)) and the better of floor/ceil under the total bound"""
    argument = 80.0 * math.e * 2.0 ** b / d
    if argument <= 1.0:
        raise DomainError(f"log_(25/3)(80e 2^b/d) needs 80e 2^b/d > 1, got {argument:.6g}")
    k_star = math.sqrt(0.5 * math.log(argument) / math.log(GROWTH))

    # ||H2|| <= 1/(2d) is the bound k* is derived from; ||H1|| only scales the total
    candidates = sorted({max(1, math.floor(k_star)), max(1, math.ceil(k_star))})
    values = {k: total_bound(k, b, 1.0, 1.0 / (2 * d)) for k in candidates}
    best = min(candidates, key=lambda k: (values[k], k))
    return OptimalOrder(k_star=k_star, k=best, candidates=values)
