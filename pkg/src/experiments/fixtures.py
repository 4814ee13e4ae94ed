"""Derived oracle values stored as JSON fixtures"""
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, List, Optional, Union

from src.config.logger import setup_logger
from src.config.settings import settings
from src.cost.model import analytic_total, empirical_vs_analytic
from src.hamiltonian.discretization import discretize
from src.hamiltonian.grid import GridSpec, build_grid
from src.hamiltonian.potentials import PotentialFactory, PotentialSpec
from src.phase_estimation.pipeline import run_qpe
from src.phase_estimation.state import PropagatorMode, QpeConfig, StepPolicy
from src.safety.guards import SizeGuard
from src.spectral.oracle import ground_state, overlap_spectrum
from src.splitting.budget import SplittingErrorMeter

logger = setup_logger(__name__)

ORDER_STEPS = (1, 2, 4, 8, 16, 32, 64)


@dataclass(frozen=True)
class SuiteInstance:
    """One admissible potential on one grid"""
    potential: PotentialSpec
    grid: GridSpec

    def describe(self) -> Dict:
        return {**self.potential.describe(), "q": self.grid.q, "m": self.grid.m}


def builtin_potential_suite(seed: int = 0) -> List[SuiteInstance]:
    """Built-in families over d = 1, 2, 3 with seeded random trigonometric members; every m^d <= 4096"""
    grids = {1: 4, 2: 3, 3: 3}
    instances: List[SuiteInstance] = []
    for d, q in grids.items():
        grid = build_grid(d, q)
        members = [
            PotentialFactory.create("zero", (), d),
            PotentialFactory.create("constant", (0.5,), d),
            PotentialFactory.create("linear", (1.0,), d),
            PotentialFactory.create("sine", (), d),
            PotentialFactory.create("separable_trig", (), d),
            PotentialFactory.create("random_trig", (seed + d, 4, 2), d),
            PotentialFactory.create("random_trig", (seed + 100 + d, 6, 3), d),
        ]
        instances.extend(SuiteInstance(potential, grid) for potential in members)

    # larger grids for oracle-only checks
    instances.append(SuiteInstance(PotentialFactory.create("linear", (1.0,), 2), build_grid(2, 6)))
    instances.append(SuiteInstance(PotentialFactory.create("random_trig", (seed + 7, 4, 2), 3), build_grid(3, 4)))
    return instances


class FixtureStore:
    """Read and write fixture suites as sorted, indented JSON"""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else settings.fixtures_path

    def file_for(self, suite: str) -> Path:
        return self.path / f"{suite}.json"

    def save(self, suite: str, payload: Dict) -> Path:
        self.path.mkdir(parents=True, exist_ok=True)
        target = self.file_for(suite)
        target.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        logger.info(f"Saved fixture suite '{suite}' to {target}")
        return target

    def load(self, suite: str) -> Dict:
        target = self.file_for(suite)
        if not target.exists():
            raise FileNotFoundError(f"Fixture suite '{suite}' not found at {target}")
        with open(target, "r", encoding="utf-8") as f:
            return json.load(f)

    def suites(self) -> List[str]:
        if not self.path.exists():
            return []
        return sorted(p.stem for p in self.path.glob("*.json"))


def overlap_fixture(seed: int) -> Dict:
    """E_h1 and |d1|^2 per built-in instance"""
    entries = []
    for instance in builtin_potential_suite(seed):
        SizeGuard.check_dense(instance.grid.size, "overlap fixture")
        hamiltonian = discretize(instance.potential, instance.grid)
        spectrum = overlap_spectrum(hamiltonian)
        entries.append({
            "problem": instance.describe(),
            "E_h1": float(spectrum.energies[0]),
            "overlap": spectrum.ground_overlap,
        })
    return {"suite": "overlap", "seed": seed, "entries": entries}


def order_fixture(seed: int) -> Dict:
    """Operator-norm splitting error against step count for k = 1, 2 (d=1, q=3, V=x, T=1)"""
    hamiltonian = discretize(PotentialFactory.create("linear", (1.0,), 1), build_grid(1, 3))
    meter = SplittingErrorMeter(hamiltonian)
    curves = {}
    for k in (1, 2):
        curves[str(k)] = [
            {"steps": n, "lambda": 1.0 / n, "error": meter.error(k, 1.0, n)} for n in ORDER_STEPS
        ]
    return {"suite": "order", "seed": seed, "total_time": 1.0, "curves": curves}


def oracle_fixture(seed: int) -> Dict:
    """Ground energies of the small reference problems"""
    problems = [
        ("zero", (), 1, 3),
        ("constant", (1.0,), 1, 3),
        ("linear", (1.0,), 1, 4),
        ("linear", (1.0,), 2, 2),
    ]
    entries = []
    for family, params, d, q in problems:
        potential = PotentialFactory.create(family, params, d)
        grid = build_grid(d, q)
        hamiltonian = discretize(potential, grid)
        result = ground_state(hamiltonian)
        entries.append({
            "problem": {**potential.describe(), "q": q, "m": grid.m},
            "E_h1": result.energy,
            "overlap": overlap_spectrum(hamiltonian).ground_overlap,
        })
    return {"suite": "oracle", "seed": seed, "entries": entries}


def cost_fixture(seed: int) -> Dict:
    """Analytic total for d=1, q=3, b=8, k=2 and the slack ratio of one splitting run"""
    grid = build_grid(1, 3)
    zero = discretize(PotentialFactory.create("zero", (), 1), grid)
    analytic = analytic_total(1, None, 8, 2, norm_h1=zero.norm_h1, norm_h2=0.5)

    cfg = QpeConfig(
        grid=grid,
        potential=PotentialFactory.create("linear", (1.0,), 1),
        b=6,
        k=1,
        mode=PropagatorMode.SPLITTING,
        step_policy=StepPolicy.EMPIRICAL,
    )
    _, report = run_qpe(cfg)
    comparison = empirical_vs_analytic(report)
    return {
        "suite": "cost",
        "seed": seed,
        "analytic_total": {"d": 1, "q": 3, "b": 8, "k": 2, "norm_h1": zero.norm_h1, "norm_h2": 0.5,
                           "value": analytic},
        "slack": {"d": 1, "q": 3, "b": 6, "k": 1, "empirical": comparison.empirical,
                  "analytic": comparison.analytic, "ratio": comparison.ratio,
                  "steps": [p.steps for p in report.per_power]},
    }


FIXTURE_SUITES: Dict[str, Callable[[int], Dict]] = {
    "overlap": overlap_fixture,
    "order": order_fixture,
    "oracle": oracle_fixture,
    "cost": cost_fixture,
}


def make_fixtures(suite: str, store: Optional[FixtureStore] = None, seed: int = 0) -> List[Path]:
    """Compute and store one suite, or every suite for 'all'"""
    store = store or FixtureStore()
    names = sorted(FIXTURE_SUITES) if suite == "all" else [suite]
    paths = []
    for name in names:
        if name not in FIXTURE_SUITES:
            raise ValueError(f"Unknown fixture suite: {name}. Known: {', '.join(sorted(FIXTURE_SUITES))}, all")
        paths.append(store.save(name, FIXTURE_SUITES[name](seed)))
    return paths
