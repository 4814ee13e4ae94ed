"""Tests for the phase-estimation statevector pipeline"""
import numpy as np
import pytest

from src.hamiltonian.grid import build_grid, smallest_laplacian_eigenvalue
from src.hamiltonian.potentials import PotentialFactory
from src.phase_estimation.estimator import IDEAL_SUCCESS, SPLITTING_MODE_THRESHOLD, phase_of
from src.phase_estimation.pipeline import (
    OutcomeDistribution,
    QPEPipeline,
    hadamard_layer,
    inverse_fourier,
    run_qpe,
    success_set,
)
from src.phase_estimation.propagators import (
    DiagonalPhasePropagator,
    ExactPowerPropagator,
    SplittingPowerPropagator,
)
from src.phase_estimation.state import InitialState, PropagatorMode, QpeConfig, StepPolicy
from src.safety.guards import DimensionError, SizeError
from src.phase_estimation.estimator import estimate_energy, estimate_radius, success_report
from src.spectral.oracle import ground_state, overlap_spectrum


def make_config(family="linear", params=(1.0,), d=1, q=3, b=5, **kwargs):
    return QpeConfig(grid=build_grid(d, q), potential=PotentialFactory.create(family, params, d), b=b, **kwargs)


class TestSuccessSet:
    def test_interior_phase(self):
        assert success_set(0.5, 3).tolist() == [3, 4, 5]

    def test_wraparound(self):
        assert success_set(0.99, 3).tolist() == [0, 7]

    def test_boundary_outcomes_included(self):
        assert success_set(0.125, 3).tolist() == [0, 1, 2]


class TestClockTransforms:
    def test_hadamard_layer_uniform(self):
        amplitudes = np.zeros((8, 2), dtype=complex)
        amplitudes[0, 1] = 1.0
        spread = hadamard_layer(amplitudes, 3)
        np.testing.assert_allclose(spread[:, 1], np.full(8, 1 / np.sqrt(8)))
        np.testing.assert_allclose(hadamard_layer(spread, 3), amplitudes, atol=1e-15)

    def test_inverse_fourier_reads_phase(self):
        x = np.arange(32)
        amplitudes = (np.exp(2j * np.pi * 5 / 32 * x) / np.sqrt(32))[:, None]
        result = inverse_fourier(amplitudes)
        assert np.abs(result[5, 0]) == pytest.approx(1.0)


class TestOutcomeDistribution:
    def test_map_prefers_smaller_index_on_ties(self):
        dist = OutcomeDistribution(np.array([0.1, 0.4, 0.4, 0.1]), b=2)
        assert dist.map_outcome() == 1
        assert dist.top_k(3) == [(1, 0.4), (2, 0.4), (0, 0.1)]

    def test_sampling_is_seeded(self):
        dist = OutcomeDistribution(np.array([0.25, 0.25, 0.5, 0.0]), b=2)
        first = dist.sample(shots=100, seed=7)
        assert first.sum() == 100
        assert first[3] == 0
        np.testing.assert_array_equal(first, dist.sample(shots=100, seed=7))

    def test_to_dict(self):
        payload = OutcomeDistribution(np.array([0.5, 0.5]), b=1).to_dict(top_k=1)
        assert payload == {"b": 1, "total": 1.0, "map_outcome": 0, "top_k": [{"j": 0, "p": 0.5}]}


class TestDiagonalHook:
    def test_representable_phase_is_certain(self):
        cfg = make_config(b=5)
        dist, report = run_qpe(cfg, DiagonalPhasePropagator(np.full(7, 5 / 32)))
        assert dist.probabilities[5] == pytest.approx(1.0, abs=1e-12)
        assert dist.map_outcome() == 5
        assert report.mode == "diagonal"
        assert report.per_power == []

    def test_mixture_of_phases(self):
        cfg = make_config(b=4)
        outcomes = np.array([1, 3, 3, 7, 0, 15, 9])
        dist, _ = run_qpe(cfg, DiagonalPhasePropagator(outcomes / 16))
        weights = QPEPipeline(cfg).prepare().grid_block()[0]
        expected = np.zeros(16)
        np.add.at(expected, outcomes, np.abs(weights) ** 2)
        np.testing.assert_allclose(dist.probabilities, expected, atol=1e-12)

    def test_dimension_check(self):
        with pytest.raises(DimensionError):
            DiagonalPhasePropagator(np.zeros(3)).apply_power(0, np.ones((2, 7)))


class TestExactMode:
    def test_zero_potential_estimate(self):
        cfg = make_config(family="zero", params=(), b=8)
        dist, _ = run_qpe(cfg)
        phase = phase_of(smallest_laplacian_eigenvalue(cfg.grid), 1)
        assert dist.success_mass(phase) >= 0.8106
        assert abs(4 * np.pi * dist.map_outcome() / 256 - 9.74343) <= 0.0491

    def test_stage_norms_recorded(self):
        pipeline = QPEPipeline(make_config(b=4))
        pipeline.run()
        assert len(pipeline.stages) == 4 + 3
        assert all(s.norm == pytest.approx(1.0, abs=1e-10) for s in pipeline.stages)
        assert isinstance(pipeline.propagator, ExactPowerPropagator)

    def test_ground_initial_state(self):
        cfg = make_config(b=5, initial_state=InitialState.GROUND)
        pipeline = QPEPipeline(cfg)
        dist, _ = pipeline.run()
        assert pipeline.reference is not None
        assert dist.success_mass(phase_of(pipeline.reference.energy, 1)) >= IDEAL_SUCCESS - 1e-9

    @pytest.mark.parametrize("family, params, d, q, b", [
        ("linear", (1.0,), 1, 3, 5),
        ("sine", (), 1, 4, 6),
        ("linear", (1.0,), 2, 2, 5),
    ])
    def test_mass_factorizes_over_overlap(self, family, params, d, q, b):
        sine = QPEPipeline(make_config(family, params, d=d, q=q, b=b))
        sine_dist, _ = sine.run()
        ground = QPEPipeline(make_config(family, params, d=d, q=q, b=b, initial_state=InitialState.GROUND))
        ground_dist, _ = ground.run()

        phase = phase_of(ground.reference.energy, d)
        overlap = overlap_spectrum(sine.hamiltonian).ground_overlap
        assert sine_dist.success_mass(phase) >= overlap * ground_dist.success_mass(phase) - 1e-9

    def test_linear_potential_estimate_within_radius(self):
        cfg = make_config(q=4, b=8)
        pipeline = QPEPipeline(cfg)
        dist, _ = pipeline.run()
        reference = ground_state(pipeline.hamiltonian).energy
        estimate = estimate_energy(dist, cfg, reference)
        assert abs(estimate.energy - reference) <= 4 * np.pi * 2.0 ** -8
        assert estimate.within_radius


class TestSplittingMode:
    def test_empirical_policy(self):
        cfg = make_config(b=4, k=1, mode=PropagatorMode.SPLITTING)
        pipeline = QPEPipeline(cfg)
        dist, report = pipeline.run()
        assert isinstance(pipeline.propagator, SplittingPowerPropagator)
        assert [p.t for p in report.per_power] == [0, 1, 2, 3]
        assert all(p.measured_error <= p.epsilon for p in report.per_power)
        assert report.queries == 2 * report.h2_total
        phase = phase_of(ground_state(pipeline.hamiltonian).energy, 1)
        assert dist.success_mass(phase) >= SPLITTING_MODE_THRESHOLD

    def test_fixed_policy(self):
        cfg = make_config(b=3, k=1, mode=PropagatorMode.SPLITTING, step_policy=StepPolicy.FIXED, steps=2)
        _, report = run_qpe(cfg)
        assert [p.steps for p in report.per_power] == [2, 4, 8]
        assert [p.h2_count for p in report.per_power] == [2, 4, 8]
        assert all(p.measured_error is not None for p in report.per_power)

    def test_analytic_policy_step_cap(self):
        cfg = make_config(b=5, k=1, mode=PropagatorMode.SPLITTING, step_policy=StepPolicy.ANALYTIC)
        with pytest.raises(SizeError):
            QPEPipeline(cfg)

    def test_empirical_policy_needs_small_grid(self):
        cfg = make_config(d=2, q=6, b=6, k=1, mode=PropagatorMode.SPLITTING)
        with pytest.raises(SizeError):
            QPEPipeline(cfg)

    def test_mass_close_to_exact_mode(self):
        exact_cfg = make_config(b=6)
        exact = QPEPipeline(exact_cfg)
        exact_dist, _ = exact.run()
        split_dist, report = run_qpe(make_config(b=6, k=1, mode=PropagatorMode.SPLITTING))

        phase = phase_of(ground_state(exact.hamiltonian).energy, 1)
        exact_mass = exact_dist.success_mass(phase)
        split_mass = split_dist.success_mass(phase)
        assert abs(exact_mass - split_mass) <= 0.1
        assert exact_mass - split_mass <= 2 * report.measured_error_total + 1e-9

    def test_two_dimensional_success_report(self):
        cfg = make_config(d=2, q=2, b=6, mode=PropagatorMode.SPLITTING)
        pipeline = QPEPipeline(cfg)
        dist, _ = pipeline.run()
        report = success_report(dist, ground_state(pipeline.hamiltonian).energy, cfg)
        assert report.threshold == SPLITTING_MODE_THRESHOLD
        assert report.success_mass >= 2 / 3
        assert report.passed
        assert estimate_radius(6, 2) == pytest.approx(8 * np.pi / 64)
