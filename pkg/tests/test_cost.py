"""Tests for cost accounting, analytic totals and scaling tables"""
import math

import numpy as np
import pytest

from src.cost.model import (
    SCALING_COLUMNS,
    PowerCost,
    build_cost_report,
    analytic_total,
    bound_norm_h2,
    empirical_vs_analytic,
    fit_constants,
    nstar_model,
    nstar_scaling,
    other_operations,
    scaling_row,
)
from src.hamiltonian.grid import build_grid
from src.hamiltonian.potentials import PotentialFactory
from src.phase_estimation.pipeline import run_qpe
from src.phase_estimation.state import PropagatorMode, QpeConfig
from src.safety.guards import ConfigError, DomainError
from src.splitting.budget import total_bound


def make_report(per_power=()):
    return build_cost_report(b=3, d=1, q=3, mode="splitting", k_used=1, norm_h1=123.13, norm_h2=0.4375,
                             per_power=per_power)


POWERS = [
    PowerCost(t=0, time=1.0, steps=2, h1_count=3, h2_count=2, epsilon=1 / 160, measured_error=1e-3),
    PowerCost(t=1, time=2.0, steps=4, h1_count=5, h2_count=4, epsilon=1 / 80, measured_error=2e-3),
    PowerCost(t=2, time=4.0, steps=8, h1_count=9, h2_count=8, epsilon=1 / 40, measured_error=4e-3),
]


class TestCostReport:
    def test_counts(self):
        report = make_report(POWERS)
        assert report.h1_total == 17
        assert report.h2_total == 14
        assert report.empirical_exponentials == 31
        assert report.queries == 28
        assert report.qubits == 3 + 3
        assert report.measured_error_total == pytest.approx(7e-3)
        assert report.analytic_n == pytest.approx(total_bound(1, 3, 123.13, 0.4375))
        assert report.k_star > 0

    def test_other_operations(self):
        assert other_operations(b=4, d=2, q=3, h1_factors=5) == {
            "preparation": 18, "h1_factors": 90, "hadamard": 4, "inverse_qft": 16,
        }
        report = make_report(POWERS)
        assert report.total_cost == report.queries + sum(report.other_ops.values())

    def test_missing_measurement(self):
        partial = POWERS[:2] + [PowerCost(t=2, time=4.0, steps=8, h1_count=9, h2_count=8, epsilon=1 / 40)]
        assert make_report(partial).measured_error_total is None
        assert make_report().measured_error_total is None

    def test_to_dict(self):
        payload = make_report(POWERS).to_dict()
        assert payload["queries"] == 28
        assert payload["per_power"][1]["steps"] == 4


class TestAnalyticTotal:
    def test_explicit_norms(self):
        value = analytic_total(1, None, 8, 2, norm_h1=118.44, norm_h2=0.5)
        assert value == pytest.approx(total_bound(2, 8, 118.44, 0.5))

    def test_worst_case_norms(self):
        eps = 2.0 ** -6
        assert analytic_total(2, eps, 6, 2) == pytest.approx(total_bound(2, 6, 2 / eps ** 2, 0.25))

    @pytest.mark.parametrize("args", [(0, None, 6, 1), (1, None, 0, 1), (1, None, 6, 0), (1, -0.1, 6, 1)])
    def test_invalid_inputs(self, args):
        with pytest.raises(ValueError):
            analytic_total(*args)


class TestNStarModel:
    def test_value(self):
        eps = 2.0 ** -8
        assert nstar_model(1, eps) == pytest.approx(eps ** -3 * math.exp(math.sqrt(math.log(256))))

    def test_domain(self):
        with pytest.raises(DomainError):
            nstar_model(4, 0.25)


class TestScaling:
    def test_one_dimensional_exponent(self):
        table = nstar_scaling([(1, 2.0 ** -b) for b in range(6, 13)])
        assert list(table.frame.columns) == SCALING_COLUMNS
        assert len(table.frame) == 7
        assert 3.0 < table.exponents[1] < 3.5
        assert table.b_range[1] == (6, 12)
        assert table.delta(1) == pytest.approx(table.exponents[1] - 3.0)

    def test_fitted_constants_bound_rows(self):
        table = nstar_scaling([(d, 2.0 ** -b) for d in (1, 2) for b in range(6, 10)])
        constants = fit_constants(table)
        for _, row in table.frame.iterrows():
            d, eps = int(row["d"]), float(row["epsilon"])
            scale = d * eps ** -table.exponents[d]
            assert row["analyticN"] <= constants["C"] * scale * (1 + 1e-12)
            assert row["qubits"] <= constants["C_prime"] * d * math.log2(1 / eps) * (1 + 1e-12)
            assert row["other_ops"] <= constants["C_tilde"] * scale * (1 + 1e-12)

    def test_row_without_report(self):
        row = scaling_row(2, 2.0 ** -7)
        assert row["b"] == 7
        assert row["qubits"] == 7 + 2 * 7
        assert np.isnan(row["empiricalN"])

    def test_row_from_report(self):
        row = scaling_row(1, 2.0 ** -3, make_report(POWERS))
        assert row["empiricalN"] == 31
        assert row["queries"] == 28
        assert row["k"] == 1


class TestEmpiricalComparison:
    def test_requires_per_power_counts(self):
        with pytest.raises(ConfigError):
            empirical_vs_analytic(make_report())

    def test_splitting_run_within_bound(self):
        cfg = QpeConfig(
            grid=build_grid(1, 3),
            potential=PotentialFactory.create("linear", (1.0,), 1),
            b=3,
            k=1,
            mode=PropagatorMode.SPLITTING,
        )
        _, report = run_qpe(cfg)
        comparison = empirical_vs_analytic(report)
        assert comparison.within_bound
        assert comparison.queries_consistent
        assert 0 < comparison.ratio < 1
        assert sorted(comparison.per_power_ratio) == [0, 1, 2]
        assert all(r < 1 for r in comparison.per_power_ratio.values())

    def test_zero_potential_splitting_run(self):
        cfg = QpeConfig(
            grid=build_grid(1, 3),
            potential=PotentialFactory.create("zero", (), 1),
            b=3,
            k=1,
            mode=PropagatorMode.SPLITTING,
        )
        _, report = run_qpe(cfg)
        assert report.norm_h2 == 0.0
        assert report.norm_h2_bound == pytest.approx(0.5)
        assert report.analytic_n == pytest.approx(total_bound(1, 3, report.norm_h1, 0.5))

        comparison = empirical_vs_analytic(report)
        assert comparison.within_bound
        assert comparison.queries_consistent
        assert report.queries == 2 * report.h2_total > 0
        assert all(0 < r < 1 for r in comparison.per_power_ratio.values())


@pytest.mark.parametrize("norm_h2, d, expected", [(0.0, 1, 0.5), (0.0, 3, 1 / 6), (0.2, 2, 0.2)])
def test_bound_norm_h2(norm_h2, d, expected):
    assert bound_norm_h2(norm_h2, d) == pytest.approx(expected)
