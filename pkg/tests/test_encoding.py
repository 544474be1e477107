import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qzoom.encoding import (
    Encoding,
    QuboInstance,
    build_clock_qubo,
    build_eigen_qubo,
    decode,
    decode_complex,
    objective_value,
    project_hamiltonian,
)


def all_bitstrings(n):
    m = np.arange(2**n)
    return ((m[:, None] >> np.arange(n)) & 1).astype(int)


def test_bit_weights():
    enc = Encoding(n_bits=3, zoom=0, centers=np.zeros(1))
    np.testing.assert_allclose(enc.bit_weights, [0.25, 0.5, -1.0])
    enc2 = Encoding(n_bits=3, zoom=2, centers=np.zeros(1))
    np.testing.assert_allclose(enc2.bit_weights, [0.0625, 0.125, -0.25])


def test_decode_range_and_nesting():
    """Every value reachable at zoom z+1 lies inside the zoom-z window."""
    enc0 = Encoding(n_bits=2, zoom=0, centers=np.zeros(1))
    vals0 = sorted(decode(b, enc0)[0] for b in all_bitstrings(2))
    assert vals0 == [-1.0, -0.5, 0.0, 0.5]
    enc1 = Encoding(n_bits=2, zoom=1, centers=np.zeros(1))
    for b in all_bitstrings(2):
        assert min(vals0) <= decode(b, enc1)[0] <= max(vals0)


def test_decode_complex_layout():
    enc = Encoding(n_bits=1, zoom=0, centers=np.array([0.25, -0.5]))
    # one coefficient, bit block = (real bit, imag bit); K=1 weight is -1
    np.testing.assert_allclose(decode_complex(np.array([0, 0]), enc), [0.25 - 0.5j])
    np.testing.assert_allclose(decode_complex(np.array([1, 0]), enc), [-0.75 - 0.5j])
    np.testing.assert_allclose(decode_complex(np.array([0, 1]), enc), [0.25 - 1.5j])


def test_decode_validates_length():
    enc = Encoding(n_bits=2, zoom=0, centers=np.zeros(3))
    with pytest.raises(ValueError):
        decode(np.zeros(5, dtype=int), enc)


def test_from_dense_folds_and_drops_dust():
    Q = np.array([[1.0, 2.0], [3.0, 4.0]])
    q = QuboInstance.from_dense(Q)
    assert q.coeffs == {(0, 0): 1.0, (0, 1): 5.0, (1, 1): 4.0}
    Qd = np.array([[1.0, 1e-16], [0.0, 4.0]])
    assert (0, 1) not in QuboInstance.from_dense(Qd).coeffs


def test_energy_and_vectorized_energies_agree():
    rng = np.random.default_rng(5)
    q = QuboInstance.from_dense(np.triu(rng.normal(size=(6, 6))))
    B = all_bitstrings(6)
    e_vec = q.energies(B)
    for bits, e in zip(B, e_vec):
        assert abs(q.energy(bits) - e) < 1e-12


def test_text_round_trip():
    rng = np.random.default_rng(6)
    q = QuboInstance.from_dense(np.triu(rng.normal(size=(5, 5))))
    q2 = QuboInstance.from_text(q.to_text(), 5)
    assert q2.coeffs == q.coeffs


def test_qubo_validation():
    with pytest.raises(ValueError):
        QuboInstance(2, {(1, 0): 1.0})
    with pytest.raises(ValueError):
        QuboInstance(2, {(0, 1): np.nan})


def test_project_hamiltonian_lifts_state():
    H = np.diag([-1.0, 0.0, 1.0])
    psi = np.array([1.0, 0.0, 0.0])
    Hp = project_hamiltonian(H, [psi], [10.0])
    w = np.linalg.eigvalsh(Hp)
    assert abs(w[0] - 0.0) < 1e-12 and abs(w[-1] - 9.0) < 1e-12
    with pytest.raises(ValueError):
        project_hamiltonian(H, [2.0 * psi], [10.0])


def test_eigen_qubo_energy_equals_objective_difference():
    rng = np.random.default_rng(7)
    for _ in range(20):
        dim = int(rng.integers(1, 4))
        K = int(rng.integers(1, 4))
        z = int(rng.integers(0, 4))
        A = rng.normal(size=(dim, dim))
        h = 0.5 * (A + A.T)
        centers = rng.normal(scale=0.5, size=dim)
        enc = Encoding(n_bits=K, zoom=z, centers=centers)
        q = build_eigen_qubo(h, enc)
        f0 = objective_value(centers, h)
        for bits in all_bitstrings(q.n_vars):
            want = objective_value(decode(bits, enc), h) - f0
            assert abs(q.energy(bits) - want) < 1e-10


def test_clock_qubo_energy_equals_objective_difference():
    rng = np.random.default_rng(8)
    for _ in range(10):
        dim = int(rng.integers(1, 3))
        K = int(rng.integers(1, 3))
        z = int(rng.integers(0, 4))
        A = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        C = 0.5 * (A + A.conj().T)
        centers = rng.normal(scale=0.5, size=2 * dim)
        enc = Encoding(n_bits=K, zoom=z, centers=centers)
        q = build_clock_qubo(C, enc)
        cc = centers.reshape(dim, 2)
        f0 = objective_value(cc[:, 0] + 1j * cc[:, 1], C)
        for bits in all_bitstrings(q.n_vars):
            want = objective_value(decode_complex(bits, enc), C) - f0
            assert abs(q.energy(bits) - want) < 1e-10


@settings(max_examples=50, deadline=None)
@given(
    seed=st.integers(0, 2**32 - 1),
    dim=st.integers(1, 3),
    n_bits=st.integers(1, 3),
    zoom=st.integers(0, 5),
)
def test_eigen_qubo_identity_property(seed, dim, n_bits, zoom):
    rng = np.random.default_rng(seed)
    A = rng.normal(size=(dim, dim))
    h = 0.5 * (A + A.T)
    centers = rng.normal(scale=0.5, size=dim)
    enc = Encoding(n_bits=n_bits, zoom=zoom, centers=centers)
    q = build_eigen_qubo(h, enc)
    f0 = objective_value(centers, h)
    bits = (rng.integers(0, 2, size=q.n_vars)).astype(int)
    want = objective_value(decode(bits, enc), h) - f0
    assert abs(q.energy(bits) - want) < 1e-10


def test_clock_qubo_with_real_operator_matches_eigen_qubo():
    """A purely real Hermitian operator reduces to the real builder on the
    interleaved (re, im, re, im, ...) block-diagonal expansion."""
    rng = np.random.default_rng(9)
    dim, K, z = 3, 2, 1
    A = rng.normal(size=(dim, dim))
    C = 0.5 * (A + A.T)
    centers = rng.normal(scale=0.5, size=2 * dim)
    enc_c = Encoding(n_bits=K, zoom=z, centers=centers)
    q_clock = build_clock_qubo(C.astype(complex), enc_c)

    h_il = np.kron(C, np.eye(2))  # interleaved (re0, im0, re1, im1, ...) block
    enc_r = Encoding(n_bits=K, zoom=z, centers=centers)
    q_real = build_eigen_qubo(h_il, enc_r)
    assert q_clock.n_vars == q_real.n_vars
    assert set(q_clock.coeffs) == set(q_real.coeffs)
    for key in q_clock.coeffs:
        assert abs(q_clock.coeffs[key] - q_real.coeffs[key]) < 1e-12


def test_eigen_qubo_rejects_center_mismatch():
    enc = Encoding(n_bits=2, zoom=0, centers=np.zeros(3))
    with pytest.raises(ValueError):
        build_eigen_qubo(np.eye(2), enc)
    with pytest.raises(ValueError):
        build_clock_qubo(np.eye(2, dtype=complex), Encoding(n_bits=2, zoom=0, centers=np.zeros(3)))
