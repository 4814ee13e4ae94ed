"""Cost accounting: exponential and query counts, qubits, analytic totals and scaling tables"""
import math
from dataclasses import asdict, dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from src.config.logger import setup_logger
from src.safety.guards import ConfigError, DomainError
from src.splitting.budget import optimal_k, power_bound, total_bound

logger = setup_logger(__name__)

SCALING_COLUMNS = [
    "d", "epsilon", "b", "k", "analyticN", "empiricalN", "queries", "qubits",
    "k_star", "nstar_model", "other_ops",
]


@dataclass(frozen=True)
class PowerCost:
    """Exponentials used for one controlled power W^{2^t}"""
    t: int
    time: float
    steps: int
    h1_count: int
    h2_count: int
    epsilon: float
    measured_error: Optional[float] = None

    @property
    def exponentials(self) -> int:
        return self.h1_count + self.h2_count

    def to_dict(self) -> Dict:
        return asdict(self)


def other_operations(b: int, d: int, q: int, h1_factors: int) -> Dict[str, int]:
    """Modeled non-query operations; state preparation and each H1 factor cost d*q^2 units"""
    unit = d * q * q
    return {
        "preparation": unit,
        "h1_factors": unit * h1_factors,
        "hadamard": b,
        "inverse_qft": b * b,
    }


def bound_norm_h2(norm_h2: float, d: int) -> float:
    """||H2|| used in the analytic bounds; a vanishing potential takes the admissible 1/(2d)"""
    return norm_h2 if norm_h2 > 0 else 1.0 / (2 * d)


@dataclass
class CostReport:
    """Per-power counts of one run plus the analytic bound at the order used"""
    b: int
    d: int
    q: int
    mode: str
    k_used: int
    k_star: float
    norm_h1: float
    norm_h2: float
    analytic_n: float
    per_power: List[PowerCost] = field(default_factory=list)

    @property
    def norm_h2_bound(self) -> float:
        return bound_norm_h2(self.norm_h2, self.d)

    @property
    def h1_total(self) -> int:
        return sum(p.h1_count for p in self.per_power)

    @property
    def h2_total(self) -> int:
        return sum(p.h2_count for p in self.per_power)

    @property
    def empirical_exponentials(self) -> int:
        return self.h1_total + self.h2_total

    @property
    def queries(self) -> int:
        # two queries per H2 exponential (compute, kick back, uncompute)
        return 2 * self.h2_total

    @property
    def qubits(self) -> int:
        return self.b + self.d * self.q

    @property
    def other_ops(self) -> Dict[str, int]:
        return other_operations(self.b, self.d, self.q, self.h1_total)

    @property
    def total_cost(self) -> int:
        return self.queries + sum(self.other_ops.values())

    @property
    def measured_error_total(self) -> Optional[float]:
        errors = [p.measured_error for p in self.per_power]
        if not errors or any(e is None for e in errors):
            return None
        return float(sum(errors))

    def to_dict(self) -> Dict:
        return {
            "b": self.b,
            "d": self.d,
            "q": self.q,
            "mode": self.mode,
            "k_used": self.k_used,
            "k_star": self.k_star,
            "norm_h1": self.norm_h1,
            "norm_h2": self.norm_h2,
            "norm_h2_bound": self.norm_h2_bound,
            "analytic_n": self.analytic_n,
            "per_power": [p.to_dict() for p in self.per_power],
            "h1_total": self.h1_total,
            "h2_total": self.h2_total,
            "empirical_exponentials": self.empirical_exponentials,
            "queries": self.queries,
            "qubits": self.qubits,
            "other_ops": self.other_ops,
            "total_cost": self.total_cost,
            "measured_error_total": self.measured_error_total,
        }


def build_cost_report(
    b: int,
    d: int,
    q: int,
    mode: str,
    k_used: int,
    norm_h1: float,
    norm_h2: float,
    per_power: Sequence[PowerCost] = (),
) -> CostReport:
    """Assemble the CostReport of a run; analytic_n is the total bound at k_used"""
    report = CostReport(
        b=b,
        d=d,
        q=q,
        mode=mode,
        k_used=k_used,
        k_star=optimal_k(b, d).k_star,
        norm_h1=norm_h1,
        norm_h2=norm_h2,
        analytic_n=total_bound(k_used, b, norm_h1, bound_norm_h2(norm_h2, d)),
        per_power=list(per_power),
    )
    logger.debug(
        f"Cost report: {report.empirical_exponentials} exponentials, {report.queries} queries, "
        f"{report.qubits} qubits, analytic N={report.analytic_n:.3e}"
    )
    return report


def analytic_total(
    d: int,
    epsilon: Optional[float],
    b: int,
    k: int,
    norm_h1: Optional[float] = None,
    norm_h2: Optional[float] = None,
) -> float:
    """16e ||H1|| 2^b (25/3)^{k-1} (160e 2^b ||H2||)^{1/(2k)}

    Missing norms fall back to the worst case ||H1|| <= 2 eps^-2 and ||H2|| <= 1/(2d);
    eps defaults to 2^-b.
    """
    if d < 1 or b < 1 or k < 1:
        raise ValueError(f"analytic_total needs d, b, k >= 1, got d={d}, b={b}, k={k}")
    if epsilon is None:
        epsilon = 2.0 ** -b
    if epsilon <= 0:
        raise ValueError(f"Accuracy must be positive, got {epsilon}")
    if norm_h1 is None:
        norm_h1 = 2.0 / epsilon ** 2
    if norm_h2 is None:
        norm_h2 = 1.0 / (2 * d)
    return total_bound(k, b, norm_h1, norm_h2)


def nstar_model(d: int, epsilon: float) -> float:
    """eps^-3 e^{sqrt(ln(1/(d eps)))}, the N* growth up to its constant"""
    argument = 1.0 / (d * epsilon)
    if argument <= 1.0:
        raise DomainError(f"N* model needs d*eps < 1, got d={d}, eps={epsilon}")
    return epsilon ** -3 * math.exp(math.sqrt(math.log(argument)))


@dataclass
class ScalingTable:
    """Scaling rows in (d, eps) with fitted eps-exponents per dimension"""
    frame: pd.DataFrame
    exponents: Dict[int, float]
    b_range: Dict[int, Tuple[int, int]]

    def delta(self, d: int) -> float:
        """Fitted exponent minus 3 for dimension d"""
        return self.exponents[d] - 3.0

    def to_csv(self, path) -> None:
        self.frame.to_csv(path, index=False)


def scaling_row(d: int, epsilon: float, report: Optional[CostReport] = None) -> Dict:
    """One table row; run-derived columns are NaN without a report"""
    b = max(1, math.ceil(math.log2(1.0 / epsilon)))
    order = optimal_k(b, d)
    analytic = analytic_total(d, epsilon, b, order.k)
    q = b
    row = {
        "d": d,
        "epsilon": epsilon,
        "b": b,
        "k": order.k,
        "analyticN": analytic,
        "empiricalN": np.nan,
        "queries": np.nan,
        "qubits": b + d * q,
        "k_star": order.k_star,
        "nstar_model": nstar_model(d, epsilon) if report is None or d * epsilon < 1 else np.nan,
        "other_ops": sum(other_operations(b, d, q, math.ceil(analytic / 2)).values()),
    }
    if report is not None:
        row.update({
            "b": report.b,
            "k": report.k_used,
            "analyticN": report.analytic_n,
            "empiricalN": report.empirical_exponentials,
            "queries": report.queries,
            "qubits": report.qubits,
            "other_ops": sum(report.other_ops.values()),
        })
    return row


def fitted_exponents(frame: pd.DataFrame) -> Tuple[Dict[int, float], Dict[int, Tuple[int, int]]]:
    """Slope of log analyticN against log(1/eps), per dimension"""
    exponents: Dict[int, float] = {}
    ranges: Dict[int, Tuple[int, int]] = {}
    for d, group in frame.groupby("d"):
        if group["epsilon"].nunique() < 2:
            continue
        slope, _ = np.polyfit(np.log(1.0 / group["epsilon"]), np.log(group["analyticN"]), 1)
        exponents[int(d)] = float(slope)
        ranges[int(d)] = (int(group["b"].min()), int(group["b"].max()))
    return exponents, ranges


def nstar_scaling(points: Sequence[Tuple[int, float]]) -> ScalingTable:
    """Analytic totals at the integer-optimal k over (d, eps) points with fitted eps-exponents"""
    rows = [scaling_row(int(d), float(eps)) for d, eps in points]
    frame = pd.DataFrame(rows, columns=SCALING_COLUMNS)
    exponents, ranges = fitted_exponents(frame)
    for d, exponent in exponents.items():
        logger.info(f"Fitted eps-exponent d={d} over b in {ranges[d]}: {exponent:.4f}")
    return ScalingTable(frame=frame, exponents=exponents, b_range=ranges)


def fit_constants(table: ScalingTable) -> Dict[str, float]:
    """Smallest C, C', C~ with N <= C d eps^-(3+delta), qubits <= C' d log2(1/eps), other ops <= C~ d eps^-(3+delta)"""
    frame = table.frame
    constants = {"C": 0.0, "C_prime": 0.0, "C_tilde": 0.0}
    for _, row in frame.iterrows():
        d = int(row["d"])
        eps = float(row["epsilon"])
        exponent = table.exponents.get(d, 3.0)
        scale = d * eps ** -exponent
        constants["C"] = max(constants["C"], float(row["analyticN"]) / scale)
        constants["C_prime"] = max(constants["C_prime"], float(row["qubits"]) / (d * math.log2(1.0 / eps)))
        constants["C_tilde"] = max(constants["C_tilde"], float(row["other_ops"]) / scale)
    return constants


@dataclass(frozen=True)
class EmpiricalComparison:
    """Measured exponential totals against the analytic bound"""
    empirical: int
    analytic: float
    ratio: float
    within_bound: bool
    queries_consistent: bool
    per_power_ratio: Dict[int, float]

    def to_dict(self) -> Dict:
        return asdict(self)


def empirical_vs_analytic(report: CostReport) -> EmpiricalComparison:
    """Slack ratio empirical / analytic for a splitting-mode run"""
    if not report.per_power:
        raise ConfigError("Empirical comparison needs a splitting-mode run with per-power counts")
    per_power_ratio = {}
    for p in report.per_power:
        bound = power_bound(report.k_used, p.t, p.epsilon, report.norm_h1, report.norm_h2_bound)
        per_power_ratio[p.t] = p.exponentials / bound if bound > 0 else math.inf
    empirical = report.empirical_exponentials
    ratio = empirical / report.analytic_n if report.analytic_n > 0 else 0.0
    comparison = EmpiricalComparison(
        empirical=empirical,
        analytic=report.analytic_n,
        ratio=ratio,
        within_bound=empirical <= report.analytic_n,
        queries_consistent=report.queries == 2 * report.h2_total,
        per_power_ratio=per_power_ratio,
    )
    logger.info(f"Empirical/analytic exponentials: {empirical} / {report.analytic_n:.3e} = {ratio:.3e}")
    return comparison
