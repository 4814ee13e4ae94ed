"""Energy estimate from the clock outcome and success-probability reporting"""
import math
from dataclasses import asdict, dataclass
from typing import Dict, List, Optional

from src.config.logger import setup_logger
from src.hamiltonian.grid import GridSpec, smallest_laplacian_eigenvalue
from src.phase_estimation.pipeline import OutcomeDistribution, success_set
from src.phase_estimation.state import PropagatorMode, QpeConfig

logger = setup_logger(__name__)

OVERLAP_BOUND = 1.0 - 1.0 / (3.0 * math.pi ** 2 - 2.0) ** 2
IDEAL_SUCCESS = 8.0 / math.pi ** 2
EXACT_MODE_THRESHOLD = IDEAL_SUCCESS * OVERLAP_BOUND
SPLITTING_MODE_THRESHOLD = 2.0 / 3.0


def energy_of(j: int, b: int, d: int) -> float:
    """Ehat = 4 pi d j 2^-b"""
    return 4.0 * math.pi * d * j * 2.0 ** -b


def phase_of(energy: float, d: int) -> float:
    """Eigenphase of W = e^{i M_h/(2d)} in [0, 1)"""
    return (energy / (4.0 * math.pi * d)) % 1.0


def estimate_radius(b: int, d: int) -> float:
    return 4.0 * math.pi * d * 2.0 ** -b


def relative_error_bound(grid: GridSpec, b: int) -> float:
    """4 pi d 2^-b / (4 d h^-2 sin^2(pi h/2)), bounding |1 - Ehat/E_h1| on the success set"""
    return estimate_radius(b, grid.d) / smallest_laplacian_eigenvalue(grid)


@dataclass(frozen=True)
class EnergyEstimate:
    j: int
    energy: float
    b: int
    d: int
    success_probability: Optional[float] = None
    reference_energy: Optional[float] = None
    phase: Optional[float] = None

    @property
    def radius(self) -> float:
        return estimate_radius(self.b, self.d)

    @property
    def abs_error(self) -> Optional[float]:
        if self.reference_energy is None:
            return None
        return abs(self.reference_energy - self.energy)

    @property
    def rel_error(self) -> Optional[float]:
        if self.reference_energy is None or self.reference_energy == 0:
            return None
        return abs(1.0 - self.energy / self.reference_energy)

    @property
    def within_radius(self) -> Optional[bool]:
        if self.abs_error is None:
            return None
        return self.abs_error <= self.radius + 1e-12

    @property
    def c2(self) -> Optional[float]:
        """Fitted constant in |E_h1 - Ehat| <= c2 d 2^-b"""
        if self.abs_error is None:
            return None
        return self.abs_error / (self.d * 2.0 ** -self.b)

    def to_dict(self) -> Dict:
        payload = asdict(self)
        payload.update({
            "radius": self.radius,
            "abs_error": self.abs_error,
            "rel_error": self.rel_error,
            "within_radius": self.within_radius,
            "c2": self.c2,
        })
        return payload


def estimate_energy(
    dist: OutcomeDistribution,
    cfg: QpeConfig,
    reference_energy: Optional[float] = None,
) -> EnergyEstimate:
    """MAP outcome j and Ehat = 4 pi d j 2^-b; success mass when the oracle energy is given"""
    j = dist.map_outcome()
    d = cfg.grid.d
    phase = None
    success = None
    if reference_energy is not None:
        phase = phase_of(reference_energy, d)
        success = dist.success_mass(phase)
    estimate = EnergyEstimate(
        j=j,
        energy=energy_of(j, cfg.b, d),
        b=cfg.b,
        d=d,
        success_probability=success,
        reference_energy=reference_energy,
        phase=phase,
    )
    logger.info(f"Energy estimate j={j}: Ehat={estimate.energy:.6f} (reference {reference_energy})")
    return estimate


@dataclass(frozen=True)
class SuccessReport:
    mode: str
    success_mass: float
    threshold: float
    passed: bool
    phase: float
    reference_energy: float
    success_set: List[int]
    map_in_success_set: bool

    def to_dict(self) -> Dict:
        return asdict(self)


def threshold_for(mode: PropagatorMode) -> float:
    if mode is PropagatorMode.SPLITTING:
        return SPLITTING_MODE_THRESHOLD
    return EXACT_MODE_THRESHOLD


def success_report(dist: OutcomeDistribution, reference_energy: float, cfg: QpeConfig) -> SuccessReport:
    """Success mass against the mode threshold"""
    phase = phase_of(reference_energy, cfg.grid.d)
    indices = success_set(phase, cfg.b)
    mass = dist.success_mass(phase)
    threshold = threshold_for(cfg.mode)
    report = SuccessReport(
        mode=cfg.mode.value,
        success_mass=mass,
        threshold=threshold,
        passed=mass >= threshold,
        phase=phase,
        reference_energy=reference_energy,
        success_set=[int(j) for j in indices],
        map_in_success_set=dist.map_outcome() in set(indices.tolist()),
    )
    if not report.passed:
        logger.warning(f"Success mass {mass:.6f} below threshold {threshold:.6f} ({cfg.mode.value} mode)")
    return report
