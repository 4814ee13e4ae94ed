"""Tests for run configuration and the clock x grid state"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from src.hamiltonian.grid import build_grid, sine_vector
from src.hamiltonian.potentials import PotentialFactory
from src.phase_estimation.state import (
    InitialState,
    PropagatorMode,
    QpeConfig,
    StepPolicy,
    prepare_initial_state,
    sine_product_state,
)
from src.safety.guards import ConfigError, DimensionError, NormalizationError, SizeError


def make_config(d=1, q=3, b=4, **kwargs):
    return QpeConfig(grid=build_grid(d, q), potential=PotentialFactory.create("linear", (1.0,), d), b=b, **kwargs)


class TestQpeConfig:
    def test_defaults(self):
        cfg = make_config()
        assert cfg.mode is PropagatorMode.EXACT
        assert cfg.step_policy is StepPolicy.EMPIRICAL
        assert cfg.clock_size == 16
        assert cfg.resolved_query.bits == 7

    def test_resolved_order(self):
        assert make_config(b=8).resolved_k == 2
        assert make_config(b=8, k=3).resolved_k == 3
        assert make_config(b=8).k_star == pytest.approx(1.605, abs=1e-3)

    def test_dimension_mismatch(self):
        with pytest.raises(ConfigError):
            QpeConfig(grid=build_grid(2, 3), potential=PotentialFactory.create("zero", (), 1), b=4)

    def test_clock_shorter_than_mesh(self):
        with pytest.raises(ConfigError):
            make_config(q=4, b=3)

    def test_fixed_policy_needs_steps(self):
        with pytest.raises(ConfigError):
            make_config(step_policy=StepPolicy.FIXED)
        assert make_config(step_policy=StepPolicy.FIXED, steps=2).steps == 2

    def test_invalid_order(self):
        with pytest.raises(ConfigError):
            make_config(k=0)

    def test_state_budget(self):
        with pytest.raises(SizeError):
            make_config(d=3, q=6, b=8)

    def test_describe(self):
        described = make_config(mode=PropagatorMode.SPLITTING, k=1).describe()
        assert described["mode"] == "splitting"
        assert described["m"] == 7
        assert described["query_bits"] == 7
        assert described["potential"]["family"] == "linear"


class TestInitialState:
    def test_sine_state_on_zero_clock(self):
        state = prepare_initial_state(make_config())
        assert state.amplitudes.shape == (16, 8)
        np.testing.assert_allclose(state.amplitudes[0, :7], sine_vector(build_grid(1, 3), 1))
        assert state.amplitudes[0, 7] == 0
        assert np.all(state.amplitudes[1:] == 0)
        assert state.unused_mass() == pytest.approx(0.0, abs=1e-15)

    def test_two_dimensional_layout(self):
        cfg = make_config(d=2, q=2, b=2)
        state = prepare_initial_state(cfg)
        assert state.amplitudes.shape == (4, 4, 4)
        np.testing.assert_allclose(state.grid_block()[0], sine_product_state(cfg.grid).reshape(-1))

    def test_ground_state_needs_vector(self):
        with pytest.raises(ConfigError):
            prepare_initial_state(make_config(initial_state=InitialState.GROUND))

    def test_ground_state_vector(self):
        vector = np.eye(7)[3]
        state = prepare_initial_state(make_config(initial_state=InitialState.GROUND), vector)
        assert state.amplitudes[0, 3] == 1


class TestQpeState:
    def test_block_round_trip(self):
        state = prepare_initial_state(make_config())
        rows = np.arange(16) % 2 == 1
        state.set_grid_block(rows, np.full((8, 7), 0.1))
        assert state.grid_block(rows).shape == (8, 7)
        assert np.all(state.grid_block(rows) == 0.1)
        assert np.all(state.amplitudes[rows, 7] == 0)

    def test_block_dimension_check(self):
        state = prepare_initial_state(make_config())
        with pytest.raises(DimensionError):
            state.set_grid_block(np.array([0]), np.ones((1, 8)))

    def test_normalization_check(self):
        state = prepare_initial_state(make_config())
        state.amplitudes = state.amplitudes * 1.001
        with pytest.raises(NormalizationError):
            state.check_normalized("scaled")


@given(d=st.integers(min_value=1, max_value=3), q=st.integers(min_value=1, max_value=4))
def test_sine_product_state_normalized(d, q):
    grid = build_grid(d, q)
    state = sine_product_state(grid)
    assert state.shape == grid.shape
    assert np.linalg.norm(state) == pytest.approx(1.0, abs=1e-12)
