import numpy as np
import pytest
from scipy.linalg import expm

from qzoom.linalg import (
    check_hermitian,
    density_matrix,
    eigh,
    expm_unitary,
    partial_trace,
    partial_transpose,
    trace_norm,
)


def random_hermitian(rng, n, complex_=True):
    A = rng.normal(size=(n, n))
    if complex_:
        A = A + 1j * rng.normal(size=(n, n))
    return 0.5 * (A + A.conj().T)


def test_check_hermitian_accepts_and_rejects():
    H = random_hermitian(np.random.default_rng(0), 5)
    check_hermitian(H)
    with pytest.raises(ValueError):
        check_hermitian(np.array([[0.0, 1.0], [0.0, 0.0]]))


def test_eigh_sorted_and_reconstructs():
    rng = np.random.default_rng(1)
    H = random_hermitian(rng, 6)
    w, v = eigh(H)
    assert np.all(np.diff(w) >= 0)
    np.testing.assert_allclose((v * w) @ v.conj().T, H, atol=1e-12)


def test_expm_unitary_matches_scipy():
    rng = np.random.default_rng(2)
    H = random_hermitian(rng, 5)
    for t in (0.0, 0.3, 1.7):
        U = expm_unitary(H, t)
        np.testing.assert_allclose(U @ U.conj().T, np.eye(5), atol=1e-12)
        np.testing.assert_allclose(U, expm(-1j * t * H), atol=1e-12)


def test_partial_trace_product_state():
    a = np.array([1.0, 2.0]) / np.sqrt(5)
    b = np.array([3.0, 1.0j]) / np.sqrt(10)
    psi = np.kron(a, b)
    rho = density_matrix(psi)
    np.testing.assert_allclose(partial_trace(rho, [0]), np.outer(a, a.conj()), atol=1e-12)
    np.testing.assert_allclose(partial_trace(rho, [1]), np.outer(b, b.conj()), atol=1e-12)


def test_partial_trace_bell_state_is_maximally_mixed():
    psi = np.zeros(4)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    rho = density_matrix(psi)
    for site in (0, 1):
        np.testing.assert_allclose(partial_trace(rho, [site]), 0.5 * np.eye(2), atol=1e-12)


def test_partial_trace_keep_order():
    rng = np.random.default_rng(3)
    psi = rng.normal(size=8) + 1j * rng.normal(size=8)
    psi /= np.linalg.norm(psi)
    rho = density_matrix(psi)
    r01 = partial_trace(rho, [0, 1])
    r10 = partial_trace(rho, [1, 0])
    swap = np.zeros((4, 4))
    for a in range(2):
        for b in range(2):
            swap[2 * b + a, 2 * a + b] = 1.0
    np.testing.assert_allclose(r10, swap @ r01 @ swap.T, atol=1e-12)


def test_partial_transpose_bell_negativity():
    psi = np.zeros(4)
    psi[0] = psi[3] = 1 / np.sqrt(2)
    rho = density_matrix(psi)
    pt = partial_transpose(rho, subsystem=1)
    w, _ = eigh(pt)
    assert abs(w[0] + 0.5) < 1e-12
    assert abs(trace_norm(pt) - 2.0) < 1e-12


def test_trace_norm_of_density_matrix_is_one():
    rng = np.random.default_rng(4)
    psi = rng.normal(size=4)
    psi /= np.linalg.norm(psi)
    assert abs(trace_norm(density_matrix(psi)) - 1.0) < 1e-12
