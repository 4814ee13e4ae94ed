"""Acceptance suites: end-to-end, oracle, splitting, budget, cost and scaling checks"""
from dataclasses import asdict, dataclass, field
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np

from src.config.logger import setup_logger
from src.cost.model import empirical_vs_analytic, nstar_scaling
from src.experiments.fixtures import SuiteInstance, builtin_potential_suite
from src.hamiltonian.discretization import discretize
from src.hamiltonian.grid import build_grid, smallest_laplacian_eigenvalue
from src.hamiltonian.potentials import PotentialFactory
from src.phase_estimation.estimator import (
    EXACT_MODE_THRESHOLD,
    IDEAL_SUCCESS,
    OVERLAP_BOUND,
    SPLITTING_MODE_THRESHOLD,
    estimate_energy,
    phase_of,
)
from src.phase_estimation.pipeline import QPEPipeline
from src.phase_estimation.state import PropagatorMode, QpeConfig, StepPolicy
from src.safety.guards import SimulationError
from src.spectral.analysis import discretization_error_check, perturbation_check
from src.spectral.oracle import ground_state, overlap_spectrum
from src.splitting.budget import TOTAL_ERROR_ALLOWANCE, SplittingErrorMeter, error_budget, optimal_k, total_bound

logger = setup_logger(__name__)

CHAIN_SIZE_LIMIT = 1024
CHAIN_CLOCK_BITS = 6
ORDER_STEPS = (4, 8, 16, 32)
ORDER_SLOPES = {1: 1.7, 2: 3.7}
PROBABILITY_TOLERANCE = 1e-9


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    details: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class ChainRow:
    """Exact and splitting runs of one suite instance"""
    problem: Dict
    d: int
    q: int
    b: int
    exact_mass: float
    splitting_mass: float
    measured_error_total: float
    empirical: int
    analytic: float
    queries: int
    h2_total: int
    qubits: int


def log_log_slope(x: Sequence[float], y: Sequence[float]) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(x, dtype=float)), np.log(np.asarray(y, dtype=float)), 1)
    return float(slope)


class AcceptanceSuite:
    """Criteria 1-9; the exact/splitting run chain is computed once and shared"""

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._chain: Optional[List[ChainRow]] = None

    def instances(self) -> List[SuiteInstance]:
        return builtin_potential_suite(self.seed)

    def chain(self) -> List[ChainRow]:
        if self._chain is None:
            self._chain = [self._chain_row(i) for i in self.instances() if i.grid.size <= CHAIN_SIZE_LIMIT]
        return self._chain

    def _chain_row(self, instance: SuiteInstance) -> ChainRow:
        exact_cfg = QpeConfig(grid=instance.grid, potential=instance.potential, b=CHAIN_CLOCK_BITS)
        exact_pipeline = QPEPipeline(exact_cfg)
        exact_dist, _ = exact_pipeline.run()
        energy = ground_state(exact_pipeline.hamiltonian).energy
        phase = phase_of(energy, instance.grid.d)

        split_cfg = QpeConfig(
            grid=instance.grid,
            potential=instance.potential,
            b=CHAIN_CLOCK_BITS,
            mode=PropagatorMode.SPLITTING,
            step_policy=StepPolicy.EMPIRICAL,
        )
        split_dist, cost = QPEPipeline(split_cfg).run()
        comparison = empirical_vs_analytic(cost)
        return ChainRow(
            problem=instance.describe(),
            d=instance.grid.d,
            q=instance.grid.q,
            b=CHAIN_CLOCK_BITS,
            exact_mass=exact_dist.success_mass(phase),
            splitting_mass=split_dist.success_mass(phase),
            measured_error_total=cost.measured_error_total or 0.0,
            empirical=comparison.empirical,
            analytic=comparison.analytic,
            queries=cost.queries,
            h2_total=cost.h2_total,
            qubits=cost.qubits,
        )

    def zero_potential_end_to_end(self) -> CriterionResult:
        grid = build_grid(1, 8)
        cfg = QpeConfig(grid=grid, potential=PotentialFactory.create("zero", (), 1), b=8)
        dist, _ = QPEPipeline(cfg).run()
        closed_form = smallest_laplacian_eigenvalue(grid)
        estimate = estimate_energy(dist, cfg, closed_form)
        passed = (estimate.success_probability >= IDEAL_SUCCESS
                  and abs(estimate.energy - closed_form) <= estimate.radius)
        return CriterionResult(1, "zero-potential end-to-end", passed, {
            "closed_form": closed_form,
            "estimate": estimate.energy,
            "success_mass": estimate.success_probability,
            "threshold": IDEAL_SUCCESS,
        })

    def overlap_bound(self) -> CriterionResult:
        overlaps = []
        for instance in self.instances():
            spectrum = overlap_spectrum(discretize(instance.potential, instance.grid), 1)
            overlaps.append({"problem": instance.describe(), "overlap": spectrum.ground_overlap})
        worst = min(o["overlap"] for o in overlaps)
        passed = len(overlaps) >= 20 and worst >= OVERLAP_BOUND
        return CriterionResult(2, "overlap bound", passed, {
            "instances": len(overlaps), "worst": worst, "bound": OVERLAP_BOUND, "overlaps": overlaps,
        })

    def success_chain(self) -> CriterionResult:
        rows = self.chain()
        exact_ok = all(r.exact_mass >= EXACT_MODE_THRESHOLD for r in rows)
        split_ok = all(r.splitting_mass >= SPLITTING_MODE_THRESHOLD for r in rows)
        return CriterionResult(3, "success-probability chain", bool(rows) and exact_ok and split_ok, {
            "instances": len(rows),
            "worst_exact": min((r.exact_mass for r in rows), default=None),
            "worst_splitting": min((r.splitting_mass for r in rows), default=None),
        })

    def splitting_order(self) -> CriterionResult:
        hamiltonian = discretize(PotentialFactory.create("linear", (1.0,), 1), build_grid(1, 3))
        meter = SplittingErrorMeter(hamiltonian)
        slopes = {}
        for k in ORDER_SLOPES:
            errors = [meter.error(k, 1.0, n) for n in ORDER_STEPS]
            slopes[k] = log_log_slope([1.0 / n for n in ORDER_STEPS], errors)
        passed = all(slopes[k] >= ORDER_SLOPES[k] for k in ORDER_SLOPES)
        return CriterionResult(4, "splitting order", passed, {"slopes": slopes, "minimum": ORDER_SLOPES})

    def budget_arithmetic(self) -> CriterionResult:
        budgets_ok = all(error_budget(b).total <= TOTAL_ERROR_ALLOWANCE for b in range(1, 13))
        degradations = [
            {
                "problem": r.problem,
                "degradation": r.exact_mass - r.splitting_mass,
                "allowed": 2.0 * r.measured_error_total,
            }
            for r in self.chain()
        ]
        degradation_ok = all(x["degradation"] <= x["allowed"] + PROBABILITY_TOLERANCE for x in degradations)
        return CriterionResult(5, "budget arithmetic", budgets_ok and degradation_ok, {
            "budget_totals": {b: str(error_budget(b).total) for b in range(1, 13)},
            "allowance": str(TOTAL_ERROR_ALLOWANCE),
            "degradations": degradations,
        })

    def discretization_error(self) -> CriterionResult:
        reports = {}
        for family, params in (("zero", ()), ("linear", (1.0,)), ("sine", ())):
            report = discretization_error_check(PotentialFactory.create(family, params, 1), qs=(3, 4, 5, 6, 7))
            reports[family] = {
                "c1": report.c1,
                "spearman_rho": report.spearman_rho,
                "spearman_pvalue": report.spearman_pvalue,
                "reference": report.reference_energy,
                "bounded": report.bounded,
            }
        passed = all(r["bounded"] for r in reports.values())
        return CriterionResult(6, "discretization error", passed, reports)

    def cost_bounds(self) -> CriterionResult:
        rows = self.chain()
        bound_ok = all(r.empirical <= r.analytic for r in rows)
        query_ok = all(r.queries == 2 * r.h2_total for r in rows)
        qubit_ok = all(r.qubits == r.b + r.d * r.q for r in rows)
        b, q = CHAIN_CLOCK_BITS, 3
        qubits = [b + d * q for d in (1, 2, 3, 4)]
        linear_ok = len(set(np.diff(qubits).tolist())) == 1 and qubits[1] - qubits[0] == q
        return CriterionResult(7, "cost bounds", bound_ok and query_ok and qubit_ok and linear_ok, {
            "max_ratio": max((r.empirical / r.analytic for r in rows), default=None),
            "queries_consistent": query_ok,
            "qubits_by_d": qubits,
        })

    def scaling_fit(self) -> CriterionResult:
        table = nstar_scaling([(1, 2.0 ** -b) for b in range(6, 13)])
        exponent = table.exponents[1]
        mismatches = []
        for d in (1, 2, 3):
            for b in range(6, 13):
                brute = min(range(1, 7), key=lambda k: (total_bound(k, b, 1.0, 1.0 / (2 * d)), k))
                chosen = optimal_k(b, d).k
                if brute != chosen:
                    mismatches.append({"d": d, "b": b, "brute_force": brute, "optimal_k": chosen})
        passed = 3.0 < exponent < 3.5 and not mismatches
        return CriterionResult(8, "scaling fit", passed, {
            "exponent": exponent, "b_range": table.b_range[1], "mismatches": mismatches,
        })

    def perturbation_identity(self) -> CriterionResult:
        report = perturbation_check(
            PotentialFactory.create("sine", (0.1,), 1),
            PotentialFactory.create("zero", (), 1),
            build_grid(1, 5),
        )
        return CriterionResult(9, "perturbation identity", report.quadratic, report.to_dict())

    def criteria(self) -> Dict[int, Callable[[], CriterionResult]]:
        return {
            1: self.zero_potential_end_to_end,
            2: self.overlap_bound,
            3: self.success_chain,
            4: self.splitting_order,
            5: self.budget_arithmetic,
            6: self.discretization_error,
            7: self.cost_bounds,
            8: self.scaling_fit,
            9: self.perturbation_identity,
        }

    def run(self, numbers: Optional[Sequence[int]] = None) -> List[CriterionResult]:
        """Run the selected criteria; an exception fails its criterion instead of aborting the suite"""
        available = self.criteria()
        selected = sorted(available) if not numbers else list(numbers)
        results = []
        for number in selected:
            if number not in available:
                raise ValueError(f"Unknown criterion {number}; known: 1-{max(available)}")
            try:
                result = available[number]()
            except SimulationError as e:
                logger.error(f"Criterion {number} raised {type(e).__name__}: {str(e)}")
                result = CriterionResult(number, available[number].__name__, False, {"error": str(e)})
            logger.info(f"Criterion {number} ({result.name}): {'pass' if result.passed else 'FAIL'}")
            results.append(result)
        return results


def run_acceptance(numbers: Optional[Sequence[int]] = None, seed: int = 0) -> List[CriterionResult]:
    return AcceptanceSuite(seed).run(numbers)
