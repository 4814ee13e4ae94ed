"""Acceptance criteria end to end"""
import pytest

from src.experiments.acceptance import AcceptanceSuite, log_log_slope, run_acceptance
from src.experiments.fixtures import SuiteInstance
from src.hamiltonian.grid import build_grid
from src.hamiltonian.potentials import PotentialFactory
from src.phase_estimation.estimator import EXACT_MODE_THRESHOLD, SPLITTING_MODE_THRESHOLD


@pytest.fixture(scope="module")
def suite():
    return AcceptanceSuite(seed=0)


def test_log_log_slope():
    assert log_log_slope([1, 2, 4], [1, 4, 16]) == pytest.approx(2.0)


def test_unknown_criterion():
    with pytest.raises(ValueError):
        run_acceptance([10])


class TestFastCriteria:
    def test_splitting_order(self, suite):
        result = suite.splitting_order()
        assert result.passed, result.details

    def test_scaling_fit(self, suite):
        result = suite.scaling_fit()
        assert result.passed, result.details
        assert result.details["mismatches"] == []

    def test_perturbation_identity(self, suite):
        assert suite.perturbation_identity().passed

    def test_zero_potential_end_to_end(self, suite):
        result = suite.zero_potential_end_to_end()
        assert result.passed, result.details

    def test_zero_potential_chain_row(self, suite):
        row = suite._chain_row(SuiteInstance(PotentialFactory.create("zero", (), 1), build_grid(1, 4)))
        assert row.exact_mass >= EXACT_MODE_THRESHOLD
        assert row.splitting_mass >= SPLITTING_MODE_THRESHOLD
        assert row.exact_mass - row.splitting_mass <= 2 * row.measured_error_total + 1e-9
        assert 0 < row.empirical <= row.analytic
        assert row.queries == 2 * row.h2_total
        assert row.qubits == 6 + 4


@pytest.mark.slow
class TestSlowCriteria:
    def test_overlap_bound(self, suite):
        result = suite.overlap_bound()
        assert result.passed
        assert result.details["instances"] >= 20

    def test_success_chain(self, suite):
        result = suite.success_chain()
        assert result.passed, result.details

    def test_budget_arithmetic(self, suite):
        result = suite.budget_arithmetic()
        assert result.passed, result.details

    def test_discretization_error(self, suite):
        assert suite.discretization_error().passed

    def test_cost_bounds(self, suite):
        result = suite.cost_bounds()
        assert result.passed, result.details
        assert result.details["qubits_by_d"] == [9, 12, 15, 18]
