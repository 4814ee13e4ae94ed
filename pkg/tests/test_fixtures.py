"""Tests for fixture suites and their storage"""
from pathlib import Path

import pytest

from src.experiments.fixtures import (
    FIXTURE_SUITES,
    FixtureStore,
    builtin_potential_suite,
    cost_fixture,
    make_fixtures,
    oracle_fixture,
    order_fixture,
)
from src.phase_estimation.estimator import OVERLAP_BOUND


STORED = FixtureStore(Path(__file__).resolve().parent.parent / "data" / "fixtures")


@pytest.fixture
def store(tmp_path):
    return FixtureStore(tmp_path / "fixtures")


class TestBuiltinSuite:
    def test_size_and_dimensions(self):
        suite = builtin_potential_suite(0)
        assert len(suite) >= 20
        assert {i.grid.d for i in suite} == {1, 2, 3}
        assert all(i.grid.size <= 4096 for i in suite)

    def test_seeded(self):
        assert [i.describe() for i in builtin_potential_suite(5)] == [i.describe() for i in builtin_potential_suite(5)]
        assert [i.describe() for i in builtin_potential_suite(5)] != [i.describe() for i in builtin_potential_suite(6)]


class TestFixtureStore:
    def test_rerun_is_byte_identical(self, store):
        first = make_fixtures("oracle", store, seed=3)[0].read_bytes()
        second = make_fixtures("oracle", store, seed=3)[0].read_bytes()
        assert first == second
        assert store.suites() == ["oracle"]
        assert store.load("oracle")["seed"] == 3

    def test_unknown_suite(self, store):
        with pytest.raises(ValueError):
            make_fixtures("spectra", store)

    def test_missing_suite(self, store):
        assert store.suites() == []
        with pytest.raises(FileNotFoundError):
            store.load("order")

    def test_oracle_entries(self, store):
        make_fixtures("oracle", store)
        entries = store.load("oracle")["entries"]
        zero = entries[0]
        assert zero["problem"]["family"] == "zero"
        assert zero["E_h1"] == pytest.approx(9.74343, abs=1e-5)
        assert zero["overlap"] == pytest.approx(1.0)
        assert [e["problem"]["family"] for e in entries] == ["zero", "constant", "linear", "linear"]


class TestSuiteContents:
    def test_order_curves(self):
        curves = order_fixture(0)["curves"]
        assert sorted(curves) == ["1", "2"]
        for points in curves.values():
            errors = [p["error"] for p in points if p["steps"] >= 4]
            assert all(later < earlier for earlier, later in zip(errors, errors[1:]))

    def test_cost_slack(self):
        payload = cost_fixture(0)
        assert payload["analytic_total"]["value"] > 0
        assert 0 < payload["slack"]["ratio"] < 1

    @pytest.mark.slow
    def test_overlap_suite(self, store):
        make_fixtures("overlap", store)
        entries = store.load("overlap")["entries"]
        assert len(entries) == len(builtin_potential_suite(0))
        assert min(e["overlap"] for e in entries) >= OVERLAP_BOUND

    @pytest.mark.slow
    def test_all_suites(self, store):
        paths = make_fixtures("all", store)
        assert [p.stem for p in paths] == sorted(FIXTURE_SUITES)


class TestStoredFixtures:
    """Fresh computations against the committed data/fixtures files"""

    def test_committed_suites(self):
        assert {"cost", "oracle"} <= set(STORED.suites())

    def test_oracle_energies(self):
        stored = STORED.load("oracle")["entries"]
        fresh = oracle_fixture(0)["entries"]
        assert len(fresh) == len(stored)
        for computed, expected in zip(fresh, stored):
            assert computed["problem"] == expected["problem"]
            assert computed["E_h1"] == pytest.approx(expected["E_h1"], rel=1e-9)
            assert computed["overlap"] == pytest.approx(expected["overlap"], abs=1e-9)

    def test_linear_reference_energy(self):
        linear = STORED.load("oracle")["entries"][2]
        assert linear["problem"] == {"family": "linear", "params": [1.0], "d": 1, "q": 4, "m": 15}
        assert linear["E_h1"] == pytest.approx(10.336821448, abs=1e-8)

    def test_cost_values(self):
        stored = STORED.load("cost")
        fresh = cost_fixture(0)
        assert fresh["analytic_total"]["value"] == pytest.approx(stored["analytic_total"]["value"], rel=1e-12)
        assert fresh["analytic_total"]["norm_h1"] == pytest.approx(stored["analytic_total"]["norm_h1"], rel=1e-12)

        slack = fresh["slack"]
        assert slack["steps"] == stored["slack"]["steps"]
        assert slack["empirical"] == stored["slack"]["empirical"]
        assert slack["analytic"] == pytest.approx(stored["slack"]["analytic"], rel=1e-12)
        assert slack["ratio"] == pytest.approx(stored["slack"]["ratio"], rel=1e-12)
