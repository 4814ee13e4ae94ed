"""Perturbation identity and discretization-error checks built on the spectral oracle"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import pandas as pd
from scipy import stats

from src.config.logger import setup_logger
from src.hamiltonian.discretization import QueryConfig, discretize
from src.hamiltonian.grid import GridSpec, build_grid
from src.hamiltonian.potentials import PotentialSpec
from src.spectral.oracle import ground_state

logger = setup_logger(__name__)

# 4 +- 50%
QUADRATIC_RATIO_RANGE = (2.0, 6.0)


@dataclass(frozen=True)
class PerturbationReport:
    """First-order identity residual E(V) - [E(Vbar) + sum (v - vbar) z^2] and its halving ratio"""
    energy: float
    base_energy: float
    first_order: float
    residual: float
    halved_residual: float
    perturbation_size: float
    ratio: Optional[float]
    quadratic: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def perturbation_check(
    potential: PotentialSpec,
    base: PotentialSpec,
    grid: GridSpec,
    zero_tolerance: float = 1e-10,
) -> PerturbationReport:
    """Check that the first-order perturbation residual is O(||V - Vbar||^2)"""
    # Untruncated queries: truncation noise would swamp a second-order residual
    exact = QueryConfig()
    perturbed = discretize(potential, grid, exact)
    unperturbed = discretize(base, grid, exact)

    reference = ground_state(unperturbed)
    weights = reference.vector ** 2
    difference = perturbed.v - unperturbed.v

    def residual_for(values: np.ndarray) -> float:
        energy = ground_state(unperturbed.with_values(values)).energy
        return energy - (reference.energy + float(np.dot(values - unperturbed.v, weights)))

    energy = ground_state(perturbed).energy
    first_order = float(np.dot(difference, weights))
    residual = energy - (reference.energy + first_order)
    halved = residual_for(unperturbed.v + 0.5 * difference)

    scale = zero_tolerance * max(1.0, abs(reference.energy))
    if abs(halved) <= scale:
        ratio = None
        quadratic = abs(residual) <= 4.0 * scale
    else:
        ratio = residual / halved
        quadratic = QUADRATIC_RATIO_RANGE[0] <= ratio <= QUADRATIC_RATIO_RANGE[1]

    report = PerturbationReport(
        energy=energy,
        base_energy=reference.energy,
        first_order=first_order,
        residual=float(residual),
        halved_residual=float(halved),
        perturbation_size=float(np.abs(difference).max()) if difference.size else 0.0,
        ratio=None if ratio is None else float(ratio),
        quadratic=bool(quadratic),
    )
    logger.info(
        f"Perturbation residual {report.residual:.3e}, halved {report.halved_residual:.3e}, ratio {report.ratio}"
    )
    return report


@dataclass(frozen=True)
class DiscretizationErrorReport:
    """|E1 - E_h1| / (d h) across mesh refinements"""
    table: pd.DataFrame
    reference_energy: float
    reference_method: str
    c1: float
    spearman_rho: float
    spearman_pvalue: float

    @property
    def bounded(self) -> bool:
        """No significantly positive trend of the ratio with q"""
        return not (self.spearman_rho > 0 and self.spearman_pvalue < 0.05)


def continuum_reference(potential: PotentialSpec, finest_q: int) -> tuple:
    """E1 reference: d pi^2 for V = 0, else Richardson extrapolation of two finer grids"""
    if potential.family == "zero":
        return potential.d * np.pi ** 2, "exact"
    exact = QueryConfig()
    coarse = ground_state(discretize(potential, build_grid(potential.d, finest_q + 1), exact)).energy
    fine = ground_state(discretize(potential, build_grid(potential.d, finest_q + 2), exact)).energy
    # the central-difference stencil is second order in h
    return (4.0 * fine - coarse) / 3.0, "richardson"


def discretization_error_check(potential: PotentialSpec, qs: Sequence[int] = (3, 4, 5, 6, 7)) -> DiscretizationErrorReport:
    """Tabulate |E1 - E_h1|/(d h) for each q and test that it stays bounded"""
    reference, method = continuum_reference(potential, max(qs))

    rows = []
    for q in qs:
        grid = build_grid(potential.d, q)
        energy = ground_state(discretize(potential, grid, QueryConfig())).energy
        rows.append({
            "q": q,
            "h": grid.h,
            "energy": energy,
            "reference": reference,
            "ratio": abs(reference - energy) / (potential.d * grid.h),
        })
    table = pd.DataFrame(rows)

    rho, pvalue = stats.spearmanr(table["q"], table["ratio"])
    report = DiscretizationErrorReport(
        table=table,
        reference_energy=float(reference),
        reference_method=method,
        c1=float(table["ratio"].max()),
        spearman_rho=float(rho),
        spearman_pvalue=float(pvalue),
    )
    logger.info(f"Discretization error: fitted c1={report.c1:.4g}, Spearman rho={report.spearman_rho:.3f}")
    return report
