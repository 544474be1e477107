"""Model Hamiltonians: digitized scalar field, SU(3) plaquette, neutrino flavor.

Three families of explicit matrices:

* a single-site scalar field (harmonic / anharmonic / double-well oscillator)
  digitized on a uniform field grid, with the conjugate-momentum operator built
  through a discrete Fourier transform so the digitization error is
  exponentially small in the number of grid points;
* the one-plaquette SU(3) Yang-Mills Hamiltonian in the color-parity basis,
  truncated to four states and written in two-qubit Pauli form;
* the N-neutrino two-flavor Hamiltonian with one-body vacuum mixing and
  two-body forward-scattering terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_hermite, gammaln

_I2 = np.eye(2)
_X = np.array([[0.0, 1.0], [1.0, 0.0]])
_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]])
_Z = np.array([[1.0, 0.0], [0.0, -1.0]])


def _kron(*ops: np.ndarray) -> np.ndarray:
    out = ops[0]
    for op in ops[1:]:
        out = np.kron(out, op)
    return out


@dataclass(frozen=True)
class ScalarFieldSpec:
    """Single-site scalar field digitization parameters (lattice units)."""

    m0_sq: float = 1.0
    lam: float = 0.0  # quartic coupling, enters as lam/4! * phi^4
    phi_max: float = 5.0
    n_s: int = 64

    def __post_init__(self) -> None:
        if self.n_s < 2:
            raise ValueError("n_s must be at least 2")
        if self.phi_max <= 0:
            raise ValueError("phi_max must be positive")
        if self.lam < 0:
            raise ValueError("lam must be nonnegative")

    @property
    def delta_phi(self) -> float:
        return 2.0 * self.phi_max / (self.n_s - 1)

    @property
    def delta_k(self) -> float:
        return 2.0 * np.pi / (self.n_s * self.delta_phi)


def field_grid(spec: ScalarFieldSpec) -> tuple[np.ndarray, np.ndarray]:
    """Field grid phi_b = -phi_max + b*delta_phi and the symmetric momentum grid.

    The momentum grid k_g = (g - (n_s-1)/2) * delta_k is symmetric about zero
    with spacing 2*pi/(n_s*delta_phi); its extreme values sit half a spacing
    inside +-pi/delta_phi.
    """
    b = np.arange(spec.n_s)
    phi = -spec.phi_max + spec.delta_phi * b
    k = (b - (spec.n_s - 1) / 2.0) * spec.delta_k
    return phi, k


def scalar_site_hamiltonian(spec: ScalarFieldSpec) -> np.ndarray:
    """H = Pi^2/2 + (m0^2/2) phi^2 + (lam/4!) phi^4 on the digitized grid.

    Pi^2 is diagonal in the conjugate-momentum basis; the change of basis is
    the unitary F[b, g] = exp(i phi_b k_g)/sqrt(n_s).  The back-transformed
    operator is Hermitian with a numerically negligible imaginary residue,
    which is dropped, and the result is explicitly symmetrized.
    """
    phi, k = field_grid(spec)
    F = np.exp(1j * np.outer(phi, k)) / np.sqrt(spec.n_s)
    pi2 = (F * k**2) @ F.conj().T
    residue = np.abs(pi2.imag).max()
    if residue > 1e-10:
        raise ValueError(f"momentum operator imaginary residue too large: {residue:.3e}")
    H = 0.5 * pi2.real + np.diag(0.5 * spec.m0_sq * phi**2 + spec.lam / 24.0 * phi**4)
    return 0.5 * (H + H.T)


def ho_exact(n: int, phi: np.ndarray | float) -> np.ndarray:
    """Continuum harmonic-oscillator eigenfunction at unit mass and frequency.

    Psi_n(phi) = (2^n n!)^{-1/2} pi^{-1/4} exp(-phi^2/2) H_n(phi).
    """
    if n < 0:
        raise ValueError("level must be nonnegative")
    phi = np.asarray(phi, dtype=float)
    log_norm = -0.5 * (n * np.log(2.0) + gammaln(n + 1)) - 0.25 * np.log(np.pi)
    return np.exp(log_norm - 0.5 * phi**2) * eval_hermite(n, phi)


def parity_basis(n_s: int, parity: str) -> np.ndarray:
    """Orthonormal basis (columns) of the +-1 eigenspace of grid reflection."""
    if n_s % 2:
        raise ValueError("parity projection requires an even number of grid points")
    if parity not in ("even", "odd"):
        raise ValueError("parity must be 'even' or 'odd'")
    sign = 1.0 if parity == "even" else -1.0
    half = n_s // 2
    P = np.zeros((n_s, half))
    for b in range(half):
        P[b, b] = 1.0 / np.sqrt(2.0)
        P[n_s - 1 - b, b] = sign / np.sqrt(2.0)
    return P


def parity_project(H: np.ndarray, parity: str) -> np.ndarray:
    """Restrict H (on a reflection-symmetric grid) to the even or odd sector."""
    P = parity_basis(H.shape[0], parity)
    Hp = P.T @ H @ P
    return 0.5 * (Hp + Hp.T)


def su3_plaquette_hamiltonian(
    g: float, flip_magnetic_sign: bool = False
) -> tuple[np.ndarray, np.ndarray]:
    """One-plaquette SU(3) Hamiltonian on two qubits; returns (H, H_E).

    Basis ordering |00>,|01>,|10>,|11> = |1>,|3+>,|6+>,|8>.  H_E collects the
    g^2 (electric) terms and is diagonal with entries (0, 8/3, 20/3, 6)*g^2.
    `flip_magnetic_sign` negates the magnetic block; it exists only so a test
    can reject that convention against the exact persistence probabilities.
    """
    if g == 0:
        raise ValueError("coupling g must be nonzero")
    g2 = g * g
    H_E = g2 * (
        23.0 / 6.0 * _kron(_I2, _I2)
        - 2.5 * _kron(_Z, _I2)
        - 0.5 * _kron(_I2, _Z)
        - 5.0 / 6.0 * _kron(_Z, _Z)
    )
    H_B = -0.5 / g2 * (
        np.sqrt(2.0) * _kron(_I2, _X)
        + np.sqrt(2.0) * _kron(_X, 0.5 * (_I2 - _Z))
        + 0.5 * _kron(_X, _X)
        + 0.5 * _kron(_Y, _Y).real
        + 0.25 * _kron(_I2 + _Z, _I2 - _Z)
        - 6.0 * _kron(_I2, _I2)
    )
    if flip_magnetic_sign:
        H_B = -H_B
    return H_E + H_B, H_E


@dataclass(frozen=True)
class NeutrinoSpec:
    """Two-flavor N-neutrino system in a monochromatic anisotropic beam.

    The one-body strength defaults to delta_i = 2*kappa for every neutrino
    (monochromatic beam, E_i = dm^2/(4 kappa)); all times are in units of
    1/kappa.  The angle between beams i and j is
    arccos(zeta) * |i-j| / (N-1).
    """

    n_sites: int = 4
    theta_v: float = 0.195
    zeta: float = 0.9
    kappa: float = 1.0
    delta: tuple[float, ...] | None = None
    # initial flavor per site: first half electron, second half muon
    flavors: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise ValueError("need at least two neutrinos")
        if not (-1.0 < self.zeta <= 1.0):
            raise ValueError("zeta must lie in (-1, 1]")
        if self.delta is not None and len(self.delta) != self.n_sites:
            raise ValueError("delta must have one entry per site")
        if self.flavors is not None:
            if len(self.flavors) != self.n_sites:
                raise ValueError("flavors must have one entry per site")
            if any(f not in ("e", "mu") for f in self.flavors):
                raise ValueError("flavors must be 'e' or 'mu'")

    @property
    def deltas(self) -> np.ndarray:
        if self.delta is not None:
            return np.asarray(self.delta, dtype=float)
        return np.full(self.n_sites, 2.0 * self.kappa)

    @property
    def initial_flavors(self) -> tuple[str, ...]:
        if self.flavors is not None:
            return self.flavors
        half = self.n_sites // 2
        return ("e",) * (self.n_sites - half) + ("mu",) * half

    def beam_angle(self, i: int, j: int) -> float:
        return np.arccos(self.zeta) * abs(i - j) / (self.n_sites - 1)


def _site_op(n: int, site: int, op: np.ndarray) -> np.ndarray:
    ops = [_I2] * n
    ops[site] = op
    return _kron(*ops)


def neutrino_hamiltonian(spec: NeutrinoSpec) -> np.ndarray:
    """H = (1/2) sum_i (-d_i cos2t sz_i + d_i sin2t sx_i)
          + kappa sum_{i<j} (1 - cos theta_ij) sigma_i . sigma_j

    The sy x sy contributions are real, so the result is real symmetric.
    Site 0 is the most significant qubit in the 2^N computational basis.
    """
    n = spec.n_sites
    d = spec.deltas
    dim = 2**n
    H = np.zeros((dim, dim))
    c2, s2 = np.cos(2 * spec.theta_v), np.sin(2 * spec.theta_v)
    for i in range(n):
        H += 0.5 * (-d[i] * c2 * _site_op(n, i, _Z) + d[i] * s2 * _site_op(n, i, _X))
    for i in range(n):
        for j in range(i + 1, n):
            w = spec.kappa * (1.0 - np.cos(spec.beam_angle(i, j)))
            H += w * (
                _site_op(n, i, _X) @ _site_op(n, j, _X)
                + (_site_op(n, i, _Y) @ _site_op(n, j, _Y)).real
                + _site_op(n, i, _Z) @ _site_op(n, j, _Z)
            )
    return 0.5 * (H + H.T)


def neutrino_initial_state(spec: NeutrinoSpec) -> np.ndarray:
    """Computational basis state for the configured initial flavors.

    Electron flavor is the sz=+1 (qubit |0>) state, muon flavor sz=-1 (|1>).
    """
    idx = 0
    for f in spec.initial_flavors:
        idx = 2 * idx + (0 if f == "e" else 1)
    psi = np.zeros(2**spec.n_sites)
    psi[idx] = 1.0
    return psi
