"""Tests for the perturbation identity and discretization-error checks"""
import numpy as np
import pytest

from src.hamiltonian.grid import build_grid
from src.hamiltonian.potentials import PotentialFactory
from src.spectral.analysis import (
    QUADRATIC_RATIO_RANGE,
    continuum_reference,
    discretization_error_check,
    perturbation_check,
)


class TestPerturbationCheck:
    def test_residual_is_second_order(self):
        report = perturbation_check(
            PotentialFactory.create("sine", (0.1,), 1),
            PotentialFactory.create("zero", (), 1),
            build_grid(1, 5),
        )
        assert report.quadratic
        assert QUADRATIC_RATIO_RANGE[0] <= report.ratio <= QUADRATIC_RATIO_RANGE[1]
        assert abs(report.residual) < 1e-2 * abs(report.first_order)
        assert report.perturbation_size == pytest.approx(0.1, rel=1e-2)

    def test_constant_shift_has_no_residual(self):
        report = perturbation_check(
            PotentialFactory.create("constant", (0.25,), 1),
            PotentialFactory.create("zero", (), 1),
            build_grid(1, 4),
        )
        assert report.first_order == pytest.approx(0.25)
        assert report.ratio is None
        assert report.quadratic


class TestDiscretizationError:
    def test_zero_potential_reference_is_exact(self):
        reference, method = continuum_reference(PotentialFactory.create("zero", (), 2), 5)
        assert method == "exact"
        assert reference == pytest.approx(2 * np.pi ** 2)

    def test_zero_potential_ratio_bounded(self):
        report = discretization_error_check(PotentialFactory.create("zero", (), 1), qs=(3, 4, 5))
        assert report.reference_method == "exact"
        assert list(report.table["q"]) == [3, 4, 5]
        assert report.bounded
        assert report.c1 == pytest.approx(report.table["ratio"].max())
        # the energy error is O(h^2), so the ratio shrinks with q
        assert report.spearman_rho < 0

    def test_linear_potential_uses_extrapolation(self):
        report = discretization_error_check(PotentialFactory.create("linear", (1.0,), 1), qs=(3, 4, 5))
        assert report.reference_method == "richardson"
        assert report.bounded
        assert np.all(report.table["energy"] < report.reference_energy)
