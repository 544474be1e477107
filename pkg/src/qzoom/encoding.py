"""Fixed-point QUBO encoding of quadratic objectives and bitstring decoding.

A wavefunction coefficient is represented by K bits with a signed fixed-point
weight vector; at zoom level z every weight shrinks by 2^-z and the decoded
value is an offset from a per-coefficient center carried over from the
previous zoom step:

    a = center - 2^{-z} q_K + sum_{i<K} q_i / 2^{K-i+z}

The builders turn an (already eta-shifted) symmetric matrix h, or Hermitian
clock operator C, into a QUBO whose energy at any bitstring equals the
objective-function difference F(a(bits)) - F(centers) exactly; the constant
offset F(centers) is dropped, so QUBO energies must never be compared across
zoom levels.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import check_hermitian


@dataclass(frozen=True)
class Encoding:
    """Bit layout for one zoom step.

    centers has length dim for real problems and 2*dim for complex ones,
    one (re, im) block per coefficient, mirroring the bit layout.
    """

    n_bits: int
    zoom: int = 0
    centers: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def __post_init__(self) -> None:
        if self.n_bits < 1:
            raise ValueError("need at least one bit per coefficient")
        if self.zoom < 0:
            raise ValueError("zoom level must be nonnegative")
        object.__setattr__(self, "centers", np.asarray(self.centers, dtype=float))

    @property
    def bit_weights(self) -> np.ndarray:
        """Signed weights w_i, i = 1..K: w_i = 2^{i-K-z}, except w_K = -2^{-z}."""
        K, z = self.n_bits, self.zoom
        w = 2.0 ** (np.arange(1, K + 1) - K - z)
        w[-1] = -(2.0**-z)
        return w


def decode(bits: np.ndarray, enc: Encoding) -> np.ndarray:
    """Decode a bitstring of length K*dim into real coefficients."""
    bits = np.asarray(bits)
    dim = enc.centers.size
    if bits.size != enc.n_bits * dim:
        raise ValueError(f"expected {enc.n_bits * dim} bits, got {bits.size}")
    q = bits.reshape(dim, enc.n_bits)
    return enc.centers + q @ enc.bit_weights


def decode_complex(bits: np.ndarray, enc: Encoding) -> np.ndarray:
    """Decode a bitstring of length 2K*dim into complex coefficients.

    Within each coefficient's 2K-bit block, the first K bits decode the real
    part and the second K bits the imaginary part.
    """
    bits = np.asarray(bits)
    if enc.centers.size % 2:
        raise ValueError("complex encoding needs an even-length center array")
    dim = enc.centers.size // 2
    if bits.size != 2 * enc.n_bits * dim:
        raise ValueError(f"expected {2 * enc.n_bits * dim} bits, got {bits.size}")
    q = bits.reshape(dim, 2, enc.n_bits)
    c = enc.centers.reshape(dim, 2)
    parts = c + q @ enc.bit_weights
    return parts[:, 0] + 1j * parts[:, 1]


class QuboInstance:
    """Upper-triangular QUBO coefficients: energy(q) = sum_{i<=j} Q_ij q_i q_j."""

    def __init__(self, n_vars: int, coeffs: dict[tuple[int, int], float]):
        if n_vars < 1:
            raise ValueError("empty QUBO instance")
        for (i, j), v in coeffs.items():
            if not (0 <= i <= j < n_vars):
                raise ValueError(f"coefficient index ({i}, {j}) out of range")
            if not np.isfinite(v):
                raise ValueError("non-finite QUBO coefficient")
        self.n_vars = n_vars
        self.coeffs = dict(coeffs)

    @classmethod
    def from_dense(cls, Q: np.ndarray) -> "QuboInstance":
        """Fold a full coefficient matrix: Q'_ij = Q_ij + Q_ji (i<j), Q'_ii = Q_ii.

        Entries below 1e-14 of the largest magnitude are floating-point dust
        (e.g. from Fourier-built operators) and are dropped so they cannot
        poison scale-derived annealing schedules.
        """
        Q = np.asarray(Q, dtype=float)
        n = Q.shape[0]
        folded = Q + Q.T
        cut = 1e-14 * max(np.abs(Q).max(), np.abs(folded).max())
        coeffs: dict[tuple[int, int], float] = {}
        for i in range(n):
            if abs(Q[i, i]) > cut:
                coeffs[(i, i)] = float(Q[i, i])
            for j in range(i + 1, n):
                if abs(folded[i, j]) > cut:
                    coeffs[(i, j)] = float(folded[i, j])
        return cls(n, coeffs)

    def dense_terms(self) -> tuple[np.ndarray, np.ndarray]:
        """Linear diagonal d and symmetric zero-diagonal coupling matrix M."""
        d = np.zeros(self.n_vars)
        M = np.zeros((self.n_vars, self.n_vars))
        for (i, j), v in self.coeffs.items():
            if i == j:
                d[i] = v
            else:
                M[i, j] = v
                M[j, i] = v
        return d, M

    def energy(self, bits: np.ndarray) -> float:
        bits = np.asarray(bits, dtype=float)
        d, M = self.dense_terms()
        return float(bits @ d + 0.5 * bits @ (M @ bits))

    def energies(self, bit_rows: np.ndarray) -> np.ndarray:
        """Energies of many bitstrings (rows) at once."""
        B = np.asarray(bit_rows, dtype=float)
        d, M = self.dense_terms()
        return B @ d + 0.5 * np.einsum("ri,ri->r", B, B @ M.T)

    def to_text(self) -> str:
        """One `i j value` line per stored coefficient (0-based, sorted)."""
        lines = [f"{i} {j} {float(self.coeffs[(i, j)])!r}" for i, j in sorted(self.coeffs)]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str, n_vars: int) -> "QuboInstance":
        coeffs = {}
        for line in text.strip().splitlines():
            i, j, v = line.split()
            coeffs[(int(i), int(j))] = float(v)
        return cls(n_vars, coeffs)


def project_hamiltonian(
    H: np.ndarray, states: list[np.ndarray], mus: list[float]
) -> np.ndarray:
    """Add chemical-potential projectors: H + sum_n mu_n |psi_n><psi_n|."""
    if len(states) != len(mus):
        raise ValueError("states and chemical potentials must pair up")
    out = np.array(H, dtype=float, copy=True)
    for psi, mu in zip(states, mus):
        psi = np.asarray(psi, dtype=float).ravel()
        if abs(np.linalg.norm(psi) - 1.0) > 1e-8:
            raise ValueError("projected states must be normalized")
        out += mu * np.outer(psi, psi)
    return out


def build_eigen_qubo(h: np.ndarray, enc: Encoding) -> QuboInstance:
    """QUBO for minimizing sum a_a a_b h_ab over the encoded grid around centers.

    h must already carry the eta shift (h = H - eta*I).  The quadratic part is
    w_i w_j h_ab; the terms linear in the bits (center cross terms) are folded
    onto the diagonal via q = q^2.
    """
    h = np.asarray(h, dtype=float)
    dim = h.shape[0]
    if enc.centers.size != dim:
        raise ValueError("center array length must match the matrix dimension")
    w = enc.bit_weights
    Q = np.kron(h, np.outer(w, w))
    lin = 2.0 * np.repeat(enc.centers @ h, enc.n_bits) * np.tile(w, dim)
    Q[np.diag_indices_from(Q)] += lin
    return QuboInstance.from_dense(Q)


def build_clock_qubo(C: np.ndarray, enc: Encoding) -> QuboInstance:
    """QUBO for the complex objective sum conj(a_a) a_b C_ab.

    C must be Hermitian (already eta-shifted).  Variables are laid out
    coefficient-major with a 2K block per coefficient (K real bits then K
    imaginary bits).  Real-real and imag-imag blocks carry Re C, the
    real-imag cross blocks carry -+ Im C, and the center cross terms land on
    the diagonal exactly as in the real builder.
    """
    C = check_hermitian(np.asarray(C, dtype=complex))
    dim = C.shape[0]
    if enc.centers.size != 2 * dim:
        raise ValueError("complex centers must have length 2*dim")
    Cre, Cim = C.real, C.imag
    w = enc.bit_weights
    ww = np.outer(w, w)
    K = enc.n_bits
    blk_same = np.zeros((2 * K, 2 * K))
    blk_same[:K, :K] = ww
    blk_same[K:, K:] = ww
    blk_cross = np.zeros((2 * K, 2 * K))
    blk_cross[:K, K:] = -ww
    blk_cross[K:, :K] = ww
    Q = np.kron(Cre, blk_same) + np.kron(Cim, blk_cross)

    c = enc.centers.reshape(dim, 2)
    c_re, c_im = c[:, 0], c[:, 1]
    lin_re = 2.0 * (c_re @ Cre + c_im @ Cim)  # coefficient of w_i on real bits
    lin_im = 2.0 * (c_im @ Cre - c_re @ Cim)  # ... on imaginary bits
    lin = np.empty(2 * K * dim)
    lin.reshape(dim, 2, K)[:, 0, :] = lin_re[:, None] * w
    lin.reshape(dim, 2, K)[:, 1, :] = lin_im[:, None] * w
    Q[np.diag_indices_from(Q)] += lin
    return QuboInstance.from_dense(Q)


def objective_value(a: np.ndarray, h: np.ndarray) -> float:
    """F(a) = sum conj(a_a) a_b h_ab (real part; exactly real for Hermitian h)."""
    a = np.asarray(a)
    return float(np.real(a.conj() @ (np.asarray(h) @ a)))
