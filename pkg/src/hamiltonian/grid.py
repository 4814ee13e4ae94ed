"""Uniform interior grids on the unit cube and the discrete Laplacian spectrum"""
from dataclasses import dataclass
from typing import Sequence, Tuple, Union

import numpy as np

from src.config.logger import setup_logger
from src.safety.guards import SizeGuard

logger = setup_logger(__name__)


@dataclass(frozen=True)
class GridSpec:
    """Interior grid with m = 2^q - 1 points per axis and mesh width h = 1/(m+1)"""
    d: int
    q: int
    m: int
    h: float

    @property
    def size(self) -> int:
        """Number of interior grid points m^d"""
        return self.m ** self.d

    @property
    def register_size(self) -> int:
        """Basis states per axis register (2^q, one unused)"""
        return 2 ** self.q

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.m,) * self.d

    def axis_points(self) -> np.ndarray:
        """Coordinates j*h, j = 1..m"""
        return np.arange(1, self.m + 1) * self.h

    def points(self) -> np.ndarray:
        """All interior points, shape (m^d, d), row-major multi-index order"""
        axis = self.axis_points()
        mesh = np.meshgrid(*([axis] * self.d), indexing="ij")
        return np.stack([c.reshape(-1) for c in mesh], axis=-1)


@dataclass(frozen=True)
class LaplacianEigenpair:
    """Eigenpair of -Delta_h described by its per-axis sine vectors"""
    k: Tuple[int, ...]
    eigenvalue: float
    axis_vectors: Tuple[np.ndarray, ...]

    def vector(self) -> np.ndarray:
        """Materialize the tensor product (row-major flattening)"""
        out = self.axis_vectors[0]
        for axis_vector in self.axis_vectors[1:]:
            out = np.kron(out, axis_vector)
        return out


def build_grid(d: int, q: int) -> GridSpec:
    """Build the grid with m = 2^q - 1 interior points per axis"""
    if d < 1 or q < 1:
        raise ValueError(f"Grid needs d >= 1 and q >= 1, got d={d}, q={q}")
    SizeGuard.check_grid(d, q)
    grid = GridSpec(d=d, q=q, m=2 ** q - 1, h=2.0 ** -q)
    logger.debug(f"Built grid d={d}, q={q}, m={grid.m}, m^d={grid.size}")
    return grid


def sine_vector(grid: GridSpec, k: int = 1) -> np.ndarray:
    """Coordinates sqrt(2h) sin(j k pi h), j = 1..m"""
    j = np.arange(1, grid.m + 1)
    return np.sqrt(2.0 * grid.h) * np.sin(j * k * np.pi * grid.h)


def laplacian_eigenvalues_1d(grid: GridSpec) -> np.ndarray:
    """4 h^-2 sin^2(k pi h / 2) for k = 1..m"""
    k = np.arange(1, grid.m + 1)
    return 4.0 / grid.h ** 2 * np.sin(k * np.pi * grid.h / 2.0) ** 2


def laplacian_spectrum(grid: GridSpec) -> np.ndarray:
    """Eigenvalues of -Delta_h on the (m,)*d mode grid, in sine-transform order"""
    axis = laplacian_eigenvalues_1d(grid)
    spectrum = np.zeros(grid.shape)
    for j in range(grid.d):
        shape = [1] * grid.d
        shape[j] = grid.m
        spectrum = spectrum + axis.reshape(shape)
    return spectrum


def smallest_laplacian_eigenvalue(grid: GridSpec) -> float:
    """4 d h^-2 sin^2(pi h / 2)"""
    return 4.0 * grid.d / grid.h ** 2 * np.sin(np.pi * grid.h / 2.0) ** 2


def laplacian_eigenpair(grid: GridSpec, k: Union[int, Sequence[int]]) -> LaplacianEigenpair:
    """Closed-form eigenpair of -Delta_h for the multi-index k"""
    index = (int(k),) if isinstance(k, (int, np.integer)) else tuple(int(x) for x in k)
    if len(index) != grid.d:
        raise IndexError(f"Multi-index {index} has {len(index)} entries, grid has d={grid.d}")
    if any(kj < 1 or kj > grid.m for kj in index):
        raise IndexError(f"Multi-index {index} outside 1..{grid.m}")

    eigenvalue = float(sum(4.0 / grid.h ** 2 * np.sin(kj * np.pi * grid.h / 2.0) ** 2 for kj in index))
    vectors = tuple(sine_vector(grid, kj) for kj in index)
    return LaplacianEigenpair(k=index, eigenvalue=eigenvalue, axis_vectors=vectors)
