"""Classical spectral oracle: ground state, overlap spectrum and exact propagators of M_h"""
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as la
import scipy.sparse.linalg as spla

from src.config.logger import setup_logger
from src.config.settings import settings
from src.hamiltonian.discretization import DiscretizedHamiltonian
from src.hamiltonian.grid import sine_vector
from src.safety.guards import ConvergenceError, DimensionError, SizeGuard

logger = setup_logger(__name__)


@dataclass(frozen=True, eq=False)
class SpectralResult:
    """Smallest eigenpair of M_h"""
    energy: float
    vector: np.ndarray
    method: str  # "dense" | "iterative"
    residual: float


@dataclass(frozen=True, eq=False)
class OverlapSpectrum:
    """Coefficients d_k = <z_{h,k} | psi_1^{(x)d}> against the lowest eigenvectors"""
    coefficients: np.ndarray
    energies: np.ndarray

    @property
    def ground_overlap(self) -> float:
        """|d_1|^2"""
        return float(abs(self.coefficients[0]) ** 2)

    @property
    def captured_weight(self) -> float:
        """sum_k |d_k|^2 over the computed coefficients"""
        return float(np.sum(np.abs(self.coefficients) ** 2))


def fix_sign(vector: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude entry positive"""
    pivot = vector[np.argmax(np.abs(vector))]
    return vector if pivot >= 0 else -vector


def initial_sine_state(hamiltonian: DiscretizedHamiltonian) -> np.ndarray:
    """psi_1^{(x)d}, flattened row-major"""
    axis = sine_vector(hamiltonian.grid, 1)
    state = axis
    for _ in range(hamiltonian.d - 1):
        state = np.kron(state, axis)
    return state


class EigenSolver(ABC):
    """Base class for eigensolvers of M_h"""

    method: str = ""

    @abstractmethod
    def lowest(self, hamiltonian: DiscretizedHamiltonian, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """Lowest `count` eigenvalues (ascending) and eigenvectors (columns)"""
        pass


class DenseEigenSolver(EigenSolver):
    """Dense symmetric eigensolve (LAPACK via scipy.linalg.eigh)"""

    method = "dense"

    def lowest(self, hamiltonian: DiscretizedHamiltonian, count: int) -> Tuple[np.ndarray, np.ndarray]:
        SizeGuard.check_dense(hamiltonian.size)
        values, vectors = la.eigh(hamiltonian.dense_matrix(), subset_by_index=[0, count - 1])
        return values, vectors


class ShiftInvertLanczosSolver(EigenSolver):
    """Shift-invert Lanczos (ARPACK) around the Laplacian lower bound"""

    method = "iterative"

    def __init__(self, tolerance: Optional[float] = None, max_iterations: Optional[int] = None):
        self.tolerance = settings.eigen_tolerance if tolerance is None else tolerance
        self.max_iterations = max_iterations or settings.max_iterations

    def lowest(self, hamiltonian: DiscretizedHamiltonian, count: int) -> Tuple[np.ndarray, np.ndarray]:
        matrix = hamiltonian.matrix().tocsc()
        if hamiltonian.size <= count + 1:
            # ARPACK needs k < n - 1
            values, vectors = la.eigh(matrix.toarray(), subset_by_index=[0, count - 1])
            return values, vectors

        # M_h is positive definite, so the eigenvalues nearest 0 are the smallest
        start = initial_sine_state(hamiltonian)
        try:
            values, vectors = spla.eigsh(
                matrix,
                k=count,
                sigma=0.0,
                which="LM",
                v0=start,
                tol=self.tolerance,
                maxiter=self.max_iterations,
            )
        except spla.ArpackNoConvergence as e:
            residual = None
            if e.eigenvalues is not None and len(e.eigenvalues):
                z = e.eigenvectors[:, 0]
                residual = float(np.linalg.norm(matrix @ z - e.eigenvalues[0] * z))
            logger.error(f"Lanczos did not converge after {self.max_iterations} iterations")
            raise ConvergenceError(
                f"Shift-invert Lanczos did not converge after {self.max_iterations} iterations",
                residual=residual,
            ) from e
        order = np.argsort(values)
        return values[order], vectors[:, order]


class SpectralOracle:
    """Manage eigensolves of one discretized Hamiltonian"""

    def __init__(self, hamiltonian: DiscretizedHamiltonian, method: str = "auto"):
        """Pick the dense path up to the dense threshold, the iterative path above it"""
        self.hamiltonian = hamiltonian
        if method == "auto":
            method = "dense" if hamiltonian.size <= settings.dense_threshold else "iterative"
        if method == "dense":
            self.solver: EigenSolver = DenseEigenSolver()
        elif method == "iterative":
            self.solver = ShiftInvertLanczosSolver()
        else:
            raise ValueError(f"Unknown eigensolver method: {method}")

    def residual(self, energy: float, vector: np.ndarray) -> float:
        return float(np.linalg.norm(self.hamiltonian.matrix() @ vector - energy * vector))

    def ground_state(self) -> SpectralResult:
        """Smallest eigenpair with residual check and sign convention"""
        values, vectors = self.solver.lowest(self.hamiltonian, 1)
        energy = float(values[0])
        vector = fix_sign(vectors[:, 0] / np.linalg.norm(vectors[:, 0]))
        residual = self.residual(energy, vector)

        limit = settings.residual_factor * self.hamiltonian.matrix_norm()
        if residual > limit:
            raise ConvergenceError(
                f"Ground-state residual {residual:.3e} exceeds {limit:.3e}", residual=residual
            )
        logger.info(
            f"Ground state via {self.solver.method} path: E_h1={energy:.12g}, residual={residual:.2e}"
        )
        return SpectralResult(energy=energy, vector=vector, method=self.solver.method, residual=residual)

    def lowest(self, count: int) -> Tuple[np.ndarray, np.ndarray]:
        """Lowest `count` sign-fixed eigenpairs (dense path only)"""
        if count < 1 or count > self.hamiltonian.size:
            raise ValueError(f"count must lie in 1..{self.hamiltonian.size}, got {count}")
        values, vectors = DenseEigenSolver().lowest(self.hamiltonian, count)
        vectors = np.column_stack([fix_sign(vectors[:, i]) for i in range(count)])
        return values, vectors


def ground_state(hamiltonian: DiscretizedHamiltonian, method: str = "auto") -> SpectralResult:
    """Smallest eigenvalue E_h1 and eigenvector z_h1 of M_h"""
    return SpectralOracle(hamiltonian, method=method).ground_state()


def overlap_spectrum(hamiltonian: DiscretizedHamiltonian, count: Optional[int] = None) -> OverlapSpectrum:
    """Coefficients of psi_1^{(x)d} against the lowest `count` eigenvectors of M_h

    count=1 only needs z_h1 and may use the iterative path; larger counts are dense.
    """
    count = min(settings.overlap_count, hamiltonian.size) if count is None else count
    if count < 1 or count > hamiltonian.size:
        raise ValueError(f"count must lie in 1..{hamiltonian.size}, got {count}")

    psi = initial_sine_state(hamiltonian)
    if count == 1:
        result = ground_state(hamiltonian)
        energies, vectors = np.array([result.energy]), result.vector[:, None]
    else:
        energies, vectors = SpectralOracle(hamiltonian, method="dense").lowest(count)

    coefficients = vectors.T @ psi
    spectrum = OverlapSpectrum(coefficients=coefficients, energies=energies)
    logger.info(f"Overlap |d1|^2={spectrum.ground_overlap:.9f} over {count} eigenvectors")
    return spectrum


class ExactPropagator:
    """e^{i t M_h/(2d)} from one full eigendecomposition, read-only after construction"""

    def __init__(self, hamiltonian: DiscretizedHamiltonian):
        SizeGuard.check_dense(hamiltonian.size, "exact propagator")
        self.hamiltonian = hamiltonian
        self.energies, self.vectors = la.eigh(hamiltonian.dense_matrix())
        self.energies.setflags(write=False)
        self.vectors.setflags(write=False)

    def _check(self, state: np.ndarray) -> None:
        if state.shape[-1] != self.hamiltonian.size:
            raise DimensionError(
                f"State has trailing dimension {state.shape[-1]}, grid has {self.hamiltonian.size} points"
            )

    def phases(self, time: float) -> np.ndarray:
        return np.exp(1j * time * self.energies / (2 * self.hamiltonian.d))

    def apply(self, time: float, state: np.ndarray) -> np.ndarray:
        """Apply to the last axis of state (any leading batch shape)"""
        state = np.asarray(state)
        self._check(state)
        coefficients = state @ self.vectors
        return (coefficients * self.phases(time)) @ self.vectors.T

    def matrix(self, time: float) -> np.ndarray:
        """Dense unitary e^{i t M_h/(2d)}"""
        return (self.vectors * self.phases(time)) @ self.vectors.T


def exact_propagator_apply(hamiltonian: DiscretizedHamiltonian, time: float, state: np.ndarray) -> np.ndarray:
    """e^{i t M_h/(2d)} s via the dense eigendecomposition of M_h"""
    return ExactPropagator(hamiltonian).apply(time, state)
