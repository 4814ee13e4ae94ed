"""Grids, potentials and the discretized Hamiltonian"""
from .grid import GridSpec, LaplacianEigenpair, build_grid, laplacian_eigenpair, sine_vector
from .potentials import PotentialFactory, PotentialSpec
from .discretization import DiscretizedHamiltonian, QueryConfig, discretize

__all__ = [
    "DiscretizedHamiltonian",
    "GridSpec",
    "LaplacianEigenpair",
    "PotentialFactory",
    "PotentialSpec",
    "QueryConfig",
    "build_grid",
    "discretize",
    "laplacian_eigenpair",
    "sine_vector",
]
