"""Physical observables computed from exact or annealed states."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .linalg import eigh, partial_trace, partial_transpose, trace_norm

PROB_CLAMP = 1e-9
ENTROPY_FLOOR = 1e-14


def rayleigh(psi: np.ndarray, H: np.ndarray) -> float:
    """<psi|H|psi> for a normalized psi; the imaginary residue must be tiny."""
    psi = np.asarray(psi).ravel()
    if psi.size != H.shape[0]:
        raise ValueError("state and operator dimensions do not match")
    val = psi.conj() @ (np.asarray(H) @ psi)
    if abs(np.imag(val)) > 1e-10:
        raise ValueError("expectation value has a non-negligible imaginary part")
    return float(np.real(val))


def persistence(psi_t: np.ndarray, psi_in: np.ndarray) -> float:
    """Survival probability |<psi_in|psi_t>|^2."""
    return float(abs(np.vdot(psi_in, psi_t)) ** 2)


def electric_energy(psi_t: np.ndarray, H_E: np.ndarray) -> float:
    """Expectation of the electric (g^2) part of the plaquette Hamiltonian."""
    return rayleigh(psi_t, H_E)


def _clamp_probability(p: float) -> float:
    if p < -PROB_CLAMP or p > 1.0 + PROB_CLAMP:
        raise ValueError(f"probability {p} outside [0, 1] beyond tolerance")
    return min(max(p, 0.0), 1.0)


def flavor_probability(psi_t: np.ndarray, site: int, initial_flavor: str) -> float:
    """Flavor-transition probability of one neutrino.

    P = (1/2) <1 -+ sz_site>, sign - for an initial electron flavor and + for
    an initial muon flavor.  Site 0 is the most significant qubit.
    """
    psi_t = np.asarray(psi_t).ravel()
    n = int(round(np.log2(psi_t.size)))
    if 2**n != psi_t.size or not (0 <= site < n):
        raise ValueError("bad site index for the given state dimension")
    if initial_flavor not in ("e", "mu"):
        raise ValueError("initial_flavor must be 'e' or 'mu'")
    idx = np.arange(psi_t.size)
    sz = 1.0 - 2.0 * ((idx >> (n - 1 - site)) & 1)  # +1 on |0>, -1 on |1>
    sign = -1.0 if initial_flavor == "e" else 1.0
    p = 0.5 * float(np.real(np.sum(np.abs(psi_t) ** 2 * (1.0 + sign * sz))))
    return _clamp_probability(p)


def entanglement_entropy(psi_t: np.ndarray, site: int) -> float:
    """Single-site entanglement entropy in bits, via the reduced density matrix."""
    psi_t = np.asarray(psi_t).ravel()
    rho = np.outer(psi_t, psi_t.conj())
    rho_i = partial_trace(rho, [site])
    lam, _ = eigh(rho_i)
    lam = lam[lam > ENTROPY_FLOOR]
    return float(-(lam * np.log2(lam)).sum())


def log_negativity(psi_t: np.ndarray, site_i: int, site_j: int) -> float:
    """Logarithmic negativity of a site pair, in bits (clamped at 0)."""
    if site_i == site_j:
        raise ValueError("need two distinct sites")
    psi_t = np.asarray(psi_t).ravel()
    rho = np.outer(psi_t, psi_t.conj())
    rho_ij = partial_trace(rho, [site_i, site_j])
    tn = trace_norm(partial_transpose(rho_ij, subsystem=1))
    if tn <= 1.0 + 1e-12:
        return 0.0
    return float(np.log2(tn))


@dataclass
class ObservableSeries:
    """A labeled time series with optional 68% confidence band."""

    times: np.ndarray
    values: np.ndarray
    label: str
    lo68: np.ndarray | None = None
    hi68: np.ndarray | None = None

    def __post_init__(self) -> None:
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.shape != self.values.shape:
            raise ValueError("times and values must have equal length")

    def to_csv(self) -> str:
        lo = self.lo68 if self.lo68 is not None else self.values
        hi = self.hi68 if self.hi68 is not None else self.values
        lines = ["t,value,lo68,hi68"]
        for t, v, a, b in zip(self.times, self.values, lo, hi):
            lines.append(f"{float(t)!r},{float(v)!r},{float(a)!r},{float(b)!r}")
        return "\n".join(lines) + "\n"
