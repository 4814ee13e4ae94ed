"""Finite-difference discretization M_h = -Delta_h + V_h and the H1/H2 split"""
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.sparse as sp

from src.config.logger import setup_logger
from src.config.settings import settings
from src.hamiltonian.grid import GridSpec, laplacian_spectrum
from src.hamiltonian.potentials import PotentialSpec
from src.safety.guards import SizeGuard

logger = setup_logger(__name__)


@dataclass(frozen=True)
class QueryConfig:
    """Fixed-point width of potential queries; bits=None means untruncated evaluations"""
    bits: Optional[int] = None

    @classmethod
    def for_grid(cls, grid: GridSpec) -> "QueryConfig":
        return cls(bits=settings.default_query_bits(grid.q))

    @property
    def resolution(self) -> float:
        return 0.0 if self.bits is None else 2.0 ** -self.bits

    def truncate(self, values: np.ndarray) -> np.ndarray:
        """Round toward zero onto the 2^-bits lattice"""
        if self.bits is None:
            return np.asarray(values, dtype=float)
        scale = 2.0 ** self.bits
        return np.trunc(np.asarray(values, dtype=float) * scale) / scale


@dataclass(frozen=True, eq=False)
class DiscretizedHamiltonian:
    """The split pair H1 = -Delta_h/(2d), H2 = V_h/(2d) on a grid"""
    grid: GridSpec
    v: np.ndarray
    norm_h1: float
    norm_h2: float
    potential: Optional[PotentialSpec] = None
    query: QueryConfig = field(default_factory=QueryConfig)

    def __post_init__(self):
        self.v.setflags(write=False)

    @property
    def d(self) -> int:
        return self.grid.d

    @property
    def size(self) -> int:
        return self.grid.size

    def potential_field(self) -> np.ndarray:
        """Potential values on the (m,)*d grid"""
        return self.v.reshape(self.grid.shape)

    def laplacian_modes(self) -> np.ndarray:
        """Eigenvalues of -Delta_h arranged on the (m,)*d sine-mode grid"""
        return laplacian_spectrum(self.grid)

    def laplacian_matrix(self) -> sp.csr_matrix:
        """Sparse -Delta_h as a Kronecker sum of 1-D second differences"""
        g = self.grid
        second = sp.diags(
            [-np.ones(g.m - 1), 2.0 * np.ones(g.m), -np.ones(g.m - 1)], [-1, 0, 1], shape=(g.m, g.m)
        ) / g.h ** 2
        identity = sp.identity(g.m, format="csr")
        out = sp.csr_matrix((g.size, g.size))
        for axis in range(g.d):
            term = None
            for j in range(g.d):
                factor = second if j == axis else identity
                term = factor if term is None else sp.kron(term, factor, format="csr")
            out = out + term
        return out.tocsr()

    def matrix(self) -> sp.csr_matrix:
        """Sparse M_h = -Delta_h + V_h"""
        return (self.laplacian_matrix() + sp.diags(self.v)).tocsr()

    def dense_matrix(self) -> np.ndarray:
        """Dense M_h (dense threshold applies)"""
        SizeGuard.check_dense(self.size, "dense assembly of M_h")
        return self.matrix().toarray()

    def matrix_norm(self) -> float:
        """Upper bound on ||M_h||_2 from the split norms"""
        return 2.0 * self.d * (self.norm_h1 + self.norm_h2)

    def with_values(self, v: np.ndarray) -> "DiscretizedHamiltonian":
        """Same grid and query model with new potential values"""
        values = np.array(v, dtype=float)
        return DiscretizedHamiltonian(
            grid=self.grid,
            v=values,
            norm_h1=self.norm_h1,
            norm_h2=float(values.max()) / (2 * self.d) if values.size else 0.0,
            potential=None,
            query=self.query,
        )


def laplacian_norm_bound(grid: GridSpec) -> float:
    """Largest eigenvalue of -Delta_h/(2d): (2/h^2) sin^2(m pi h / 2)"""
    return 2.0 / grid.h ** 2 * np.sin(grid.m * np.pi * grid.h / 2.0) ** 2


def discretize(potential: PotentialSpec, grid: GridSpec, query: Optional[QueryConfig] = None) -> DiscretizedHamiltonian:
    """Evaluate V at the interior points, truncate per the query model and split M_h"""
    query = query if query is not None else QueryConfig.for_grid(grid)
    values = potential.check_admissible(grid)
    v = query.truncate(values)

    hamiltonian = DiscretizedHamiltonian(
        grid=grid,
        v=v,
        norm_h1=float(laplacian_norm_bound(grid)),
        norm_h2=float(v.max()) / (2 * grid.d),
        potential=potential,
        query=query,
    )
    logger.info(
        f"Discretized {potential.family}{potential.params} on d={grid.d}, m={grid.m}: "
        f"||H1||={hamiltonian.norm_h1:.6g}, ||H2||={hamiltonian.norm_h2:.6g}, bits={query.bits}"
    )
    return hamiltonian
