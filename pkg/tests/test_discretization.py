"""Tests for the finite-difference discretization and query truncation"""
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from src.hamiltonian.discretization import QueryConfig, discretize, laplacian_norm_bound
from src.hamiltonian.grid import build_grid, laplacian_spectrum
from src.hamiltonian.potentials import PotentialFactory
from src.safety.guards import SizeError


class TestQueryConfig:
    def test_rounds_toward_zero(self):
        truncated = QueryConfig(bits=2).truncate(np.array([0.3, 0.99, 0.25, -0.3]))
        np.testing.assert_array_equal(truncated, [0.25, 0.75, 0.25, -0.25])

    def test_untruncated(self):
        values = np.array([0.123456789])
        np.testing.assert_array_equal(QueryConfig().truncate(values), values)
        assert QueryConfig().resolution == 0.0

    def test_default_bits_follow_mesh(self):
        assert QueryConfig.for_grid(build_grid(1, 3)).bits == 7


class TestDiscretize:
    def test_split_norms(self, linear_hamiltonian):
        assert linear_hamiltonian.norm_h1 == pytest.approx(123.13, abs=0.01)
        assert linear_hamiltonian.norm_h2 == pytest.approx(linear_hamiltonian.v.max() / 2)

    @pytest.mark.parametrize("d, q", [(1, 3), (2, 3), (3, 2)])
    def test_norm_bound_is_top_of_spectrum(self, d, q):
        grid = build_grid(d, q)
        assert laplacian_norm_bound(grid) == pytest.approx(laplacian_spectrum(grid).max() / (2 * d))

    def test_matrix_is_laplacian_plus_diagonal(self, linear_hamiltonian):
        matrix = linear_hamiltonian.matrix().toarray()
        m, h = 7, 0.125
        assert matrix.shape == (m, m)
        np.testing.assert_allclose(matrix, matrix.T)
        np.testing.assert_allclose(np.diag(matrix), 2.0 / h ** 2 + linear_hamiltonian.v)
        np.testing.assert_allclose(np.diag(matrix, 1), -1.0 / h ** 2)

    def test_truncation_applied(self, linear_hamiltonian, linear_hamiltonian_exact):
        gap = linear_hamiltonian_exact.v - linear_hamiltonian.v
        assert np.all(gap >= 0.0)
        assert np.all(gap < 2.0 ** -7)

    def test_values_read_only(self, linear_hamiltonian):
        with pytest.raises(ValueError):
            linear_hamiltonian.v[0] = 0.0

    def test_dense_guard(self):
        hamiltonian = discretize(PotentialFactory.create("zero", (), 2), build_grid(2, 7))
        with pytest.raises(SizeError):
            hamiltonian.dense_matrix()

    def test_with_values(self, zero_hamiltonian):
        shifted = zero_hamiltonian.with_values(np.full(7, 0.5))
        assert shifted.norm_h2 == pytest.approx(0.25)
        assert shifted.norm_h1 == zero_hamiltonian.norm_h1
        assert zero_hamiltonian.v.max() == 0.0


@given(
    values=arrays(np.float64, (16,), elements=st.floats(min_value=0.0, max_value=1.0)),
    bits=st.integers(min_value=1, max_value=20),
)
def test_truncation_error_below_resolution(values, bits):
    query = QueryConfig(bits=bits)
    truncated = query.truncate(values)
    assert np.all(truncated <= values)
    assert np.all(values - truncated < query.resolution)
