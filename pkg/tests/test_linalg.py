import numpy as np
import pytest
import scipy.linalg
from hypothesis import given, settings
from hypothesis import strategies as st

from asymmetry import linalg
from asymmetry.errors import DimensionMismatch, InvalidState, NotHermitian, NotPSD

from conftest import PAULI_X, PAULI_Y, PAULI_Z, random_matrix, random_psd

seeds = st.integers(0, 2**32 - 1)


def test_hermitian_eig_diagonal():
    w, V = linalg.hermitian_eig(np.diag([1.0, 2.0]))
    assert np.allclose(w, [1, 2])
    assert np.abs(np.abs(V) - np.eye(2)).max() < 1e-12


def test_hermitian_eig_pauli_x():
    w, _ = linalg.hermitian_eig(PAULI_X)
    assert np.allclose(w, [-1, 1])


def test_hermitian_eig_errors():
    with pytest.raises(NotHermitian):
        linalg.hermitian_eig(np.array([[0, 1], [0, 0]]))
    with pytest.raises(DimensionMismatch):
        linalg.hermitian_eig(np.ones((2, 3)))


def test_hermitian_eig_residuals_random(rng):
    for _ in range(200):
        d = int(rng.integers(1, 65))
        H = linalg.random_hermitian(d, rng)
        w, V = linalg.hermitian_eig(H)
        assert np.all(np.diff(w) >= 0)
        resid = np.linalg.norm((V * w) @ V.conj().T - H)
        assert resid <= 1e-10 * max(1.0, np.linalg.norm(H))
        assert np.abs(V.conj().T @ V - np.eye(d)).max() <= 1e-10


def test_matrix_power_examples(rng):
    assert np.allclose(linalg.matrix_power(np.eye(3), 0.37), np.eye(3))
    assert np.abs(linalg.matrix_power(np.diag([4.0, 0.0]), 0.5) - np.diag([2.0, 0.0])).max() < 1e-14
    rho = random_psd(6, rng)
    for s in (0.25, 0.5, 0.8, 1.7):
        prod = linalg.matrix_power(rho, s) @ linalg.matrix_power(rho, 1 - s)
        assert np.linalg.norm(prod - rho) < 1e-9
    assert np.abs(linalg.matrix_power(rho, 1) - rho).max() < 1e-10


def test_matrix_power_matches_scipy(rng):
    # independent route: Schur-based fractional power
    rho = random_psd(5, rng)
    for s in (0.3, 2.5):
        assert np.abs(linalg.matrix_power(rho, s) - scipy.linalg.fractional_matrix_power(rho, s)).max() < 1e-9


def test_matrix_power_clips_roundoff_and_rejects_negative():
    out = linalg.matrix_power(np.diag([1.0, -5e-11]), 0.5)
    assert np.allclose(out, np.diag([1.0, 0.0]))
    with pytest.raises(NotPSD):
        linalg.matrix_power(np.diag([1.0, -1e-3]), 0.5)


def test_trace_norm_examples(rng):
    assert abs(linalg.trace_norm(np.eye(5)) - 5) < 1e-12
    # (i/2) sigma_y = [[0, 1/2], [-1/2, 0]] has singular values 1/2, 1/2
    assert abs(linalg.trace_norm(0.5j * PAULI_Y) - 1.0) < 1e-12
    M = random_matrix(6, rng)
    U, V = linalg.random_unitary(6, rng), linalg.random_unitary(6, rng)
    assert abs(linalg.trace_norm(U @ M @ V) - linalg.trace_norm(M)) < 1e-9
    with pytest.raises(DimensionMismatch):
        linalg.trace_norm(np.ones((2, 3)))


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 10))
def test_trace_norm_triangle(seed, d):
    rng = np.random.default_rng(seed)
    A, B = random_matrix(d, rng), random_matrix(d, rng)
    assert linalg.trace_norm(A + B) <= linalg.trace_norm(A) + linalg.trace_norm(B) + 1e-9


def test_entropy_examples():
    assert linalg.von_neumann_entropy(np.diag([1.0, 0.0])) == 0.0
    assert abs(linalg.von_neumann_entropy(np.eye(2) / 2) - 1.0) < 1e-12
    assert abs(linalg.von_neumann_entropy(np.eye(4) / 4) - 2.0) < 1e-12
    with pytest.raises(InvalidState):
        linalg.von_neumann_entropy(np.diag([0.7, 0.7]))
    with pytest.raises(InvalidState):
        linalg.von_neumann_entropy(np.diag([1.5, -0.5]))


@settings(max_examples=50, deadline=None)
@given(seeds, st.integers(1, 8))
def test_entropy_unitary_invariance_and_range(seed, d):
    rng = np.random.default_rng(seed)
    rho = random_psd(d, rng)
    U = linalg.random_unitary(d, rng)
    S = linalg.von_neumann_entropy(rho)
    assert abs(linalg.von_neumann_entropy(U @ rho @ U.conj().T) - S) < 1e-9
    assert -1e-12 <= S <= np.log2(d) + 1e-12


def test_kron_examples(rng):
    assert np.array_equal(linalg.kron(np.eye(2), np.eye(2)), np.eye(4))
    assert np.array_equal(linalg.kron(PAULI_Z, np.diag([1, 0])), np.diag([1, 0, -1, 0]))
    A, B = random_matrix(3, rng), random_matrix(4, rng)
    assert abs(np.trace(linalg.kron(A, B)) - np.trace(A) * np.trace(B)) < 1e-9


def test_partial_trace(rng):
    a, b = random_psd(2, rng), random_psd(3, rng)
    assert np.abs(linalg.partial_trace(np.kron(a, b), [2, 3], [0]) - a).max() < 1e-12
    assert np.abs(linalg.partial_trace(np.kron(a, b), [2, 3], [1]) - b).max() < 1e-12
    bell = np.array([1, 0, 0, 1]) / np.sqrt(2)
    assert np.abs(linalg.partial_trace(np.outer(bell, bell), [2, 2], [0]) - np.eye(2) / 2).max() < 1e-12
    M = random_matrix(12, rng)
    assert abs(linalg.partial_trace(M, [2, 3, 2], [])[0, 0] - np.trace(M)) < 1e-10
    # middle factor of a three-party product
    c = random_psd(2, rng)
    assert np.abs(linalg.partial_trace(np.kron(np.kron(a, b), c), [2, 3, 2], [1]) - b).max() < 1e-12
    assert np.abs(linalg.partial_trace(np.kron(np.kron(a, b), c), [2, 3, 2], [0, 2]) - np.kron(a, c)).max() < 1e-12
    with pytest.raises(DimensionMismatch):
        linalg.partial_trace(M, [5, 2], [0])


def test_unitary_from_generator(rng):
    assert np.allclose(linalg.unitary_from_generator(PAULI_Z / 2, 0.0), np.eye(2))
    # eigenphases e^{-i pi} for both +-1/2: spin-1/2 double cover
    assert np.abs(linalg.unitary_from_generator(PAULI_Z / 2, 2 * np.pi) + np.eye(2)).max() < 1e-12
    L = linalg.random_hermitian(5, rng)
    U1, U2 = linalg.unitary_from_generator(L, 0.3), linalg.unitary_from_generator(L, -1.1)
    assert np.abs(U1 @ U2 - linalg.unitary_from_generator(L, -0.8)).max() < 1e-9
    assert np.abs(U1.conj().T @ U1 - np.eye(5)).max() < 1e-10
    assert np.abs(U1 - scipy.linalg.expm(-0.3j * L)).max() < 1e-10
    with pytest.raises(NotHermitian):
        linalg.unitary_from_generator(np.array([[0, 1], [0, 0]]), 1.0)
