"""Shared fixtures for the simulator test suite"""
import pytest

from src.hamiltonian.discretization import QueryConfig, discretize
from src.hamiltonian.grid import build_grid
from src.hamiltonian.potentials import PotentialFactory


@pytest.fixture
def grid_d1_q3():
    return build_grid(1, 3)


@pytest.fixture
def grid_d2_q2():
    return build_grid(2, 2)


@pytest.fixture
def zero_potential():
    return PotentialFactory.create("zero", (), 1)


@pytest.fixture
def linear_potential():
    return PotentialFactory.create("linear", (1.0,), 1)


@pytest.fixture
def zero_hamiltonian(grid_d1_q3, zero_potential):
    return discretize(zero_potential, grid_d1_q3)


@pytest.fixture
def linear_hamiltonian(grid_d1_q3, linear_potential):
    return discretize(linear_potential, grid_d1_q3)


@pytest.fixture
def linear_hamiltonian_exact(grid_d1_q3, linear_potential):
    """V = x without query truncation"""
    return discretize(linear_potential, grid_d1_q3, QueryConfig())


@pytest.fixture
def isolated_output(tmp_path, monkeypatch):
    """Point report and fixture paths at a temporary directory"""
    from src.config.settings import settings

    monkeypatch.setattr(settings, "reports_path", tmp_path / "reports")
    monkeypatch.setattr(settings, "fixtures_path", tmp_path / "fixtures")
    return tmp_path
