import numpy as np
import pytest
from numpy.testing import assert_allclose

from couplersim.engine import (
    ConvergenceFailure,
    DimensionMismatch,
    NonFinite,
    NotHermitian,
    expm_general,
    expm_hermitian,
    is_unitary,
    phase_distance,
)

from helpers import random_hermitian, random_unitary


class TestExpmHermitian:
    def test_zero_hamiltonian(self):
        assert_allclose(expm_hermitian(np.zeros((3, 3)), 1.7), np.eye(3), atol=1e-15)

    def test_two_level_pi_pulse(self):
        g = 0.8
        h = np.array([[0, g], [g, 0]], dtype=complex)
        u = expm_hermitian(h, np.pi / g)
        assert_allclose(u, -np.eye(2), atol=1e-14)

    def test_diagonal_case(self):
        w, t = 1.3, 0.6
        u = expm_hermitian(np.diag([0.0, w]), t)
        assert_allclose(u, np.diag([1.0, np.exp(-1j * w * t)]), atol=1e-15)

    def test_rejects_non_hermitian(self):
        with pytest.raises(NotHermitian):
            expm_hermitian(np.array([[0, 1], [0, 0]], dtype=complex), 1.0)

    @pytest.mark.parametrize("n", [2, 5, 16])
    def test_unitary_for_large_angles(self, rng, n):
        # ||t H|| up to 50
        h = random_hermitian(rng, n, scale=5.0)
        u = expm_hermitian(h, 10.0)
        assert is_unitary(u, 1e-10)


class TestExpmGeneral:
    def test_zero_matrix(self):
        assert_allclose(expm_general(np.zeros((4, 4))), np.eye(4), atol=1e-15)

    def test_nilpotent_series_terminates(self):
        x = 3.7 - 0.2j
        a = np.array([[0, x], [0, 0]], dtype=complex)
        assert_allclose(expm_general(a), np.array([[1, x], [0, 1]]), atol=1e-15)

    def test_inverse_identity(self, rng):
        for _ in range(5):
            a = rng.normal(size=(6, 6)) + 1j * rng.normal(size=(6, 6))
            a *= 2.0 / np.linalg.norm(a)
            prod = expm_general(a) @ expm_general(-a)
            assert np.linalg.norm(prod - np.eye(6)) <= 1e-10

    def test_commuting_factorization(self, rng):
        # Polynomials in one matrix commute, so exp(A+B) = exp(A) exp(B).
        a = rng.normal(size=(5, 5)) + 1j * rng.normal(size=(5, 5))
        a /= np.linalg.norm(a)
        b = 0.4 * a @ a - 0.7 * a
        lhs = expm_general(a + b)
        rhs = expm_general(a) @ expm_general(b)
        assert np.linalg.norm(lhs - rhs) <= 1e-10

    def test_matches_eigendecomposition_oracle(self, rng):
        h = random_hermitian(rng, 8, scale=3.0)
        t = 1.3
        assert np.linalg.norm(expm_general(-1j * t * h) - expm_hermitian(h, t)) <= 1e-10

    def test_rejects_non_finite(self):
        bad = np.array([[0.0, np.inf], [0.0, 0.0]])
        with pytest.raises(NonFinite):
            expm_general(bad)

    def test_large_norm_input_still_accurate(self):
        # Forces many squarings.
        h = np.array([[0, 40.0], [40.0, 0]], dtype=complex)
        u = expm_general(-1j * h)
        assert is_unitary(u, 1e-10)
        assert_allclose(u[0, 0], np.cos(40.0), atol=1e-11)


class TestPhaseDistance:
    def test_identical_operators(self, rng):
        u = random_unitary(rng, 4)
        aligned = phase_distance(u, u)
        assert aligned.distance == pytest.approx(0.0, abs=1e-13)
        assert aligned.phase == pytest.approx(0.0, abs=1e-13)

    def test_global_phase_removed(self):
        u = np.eye(3)
        aligned = phase_distance(u, np.exp(1j * np.pi / 3) * u)
        assert aligned.distance == pytest.approx(0.0, abs=1e-14)
        assert aligned.phase == pytest.approx(-np.pi / 3)

    def test_degenerate_trace_branch(self):
        aligned = phase_distance(np.diag([1.0, 1.0]), np.diag([1.0, -1.0]))
        assert aligned.phase == 0.0
        assert aligned.distance == pytest.approx(2.0)

    def test_distance_squared_identity(self, rng):
        for _ in range(10):
            u = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            v = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
            aligned = phase_distance(u, v)
            expected_sq = (
                np.linalg.norm(u) ** 2
                + np.linalg.norm(v) ** 2
                - 2.0 * abs(np.trace(v.conj().T @ u))
            )
            assert aligned.distance**2 == pytest.approx(expected_sq, abs=1e-12)

    def test_zero_iff_equal_up_to_phase(self, rng):
        u = random_unitary(rng, 5)
        assert phase_distance(u, np.exp(0.7j) * u).distance <= 1e-13
        v = random_unitary(rng, 5)
        # Distinct random unitaries are not phase related.
        assert phase_distance(u, v).distance > 1e-3

    def test_dimension_mismatch(self):
        with pytest.raises(DimensionMismatch):
            phase_distance(np.eye(2), np.eye(3))


def test_is_unitary():
    assert is_unitary(np.eye(3))
    assert not is_unitary(np.diag([1.0, 0.5]), tol=1e-10)
