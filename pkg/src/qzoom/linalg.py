"""Dense Hermitian linear-algebra kernels.

Everything in the package that needs an exact answer (spectra, unitary
propagators, reduced density matrices) routes through the eigendecomposition
implemented here.  Matrices are plain numpy arrays: real symmetric or complex
Hermitian, always dense -- the problem sizes in scope are at most a few
thousand states.
"""

from __future__ import annotations

import numpy as np

HERMITICITY_TOL = 1e-12


def _as_square(H: np.ndarray) -> np.ndarray:
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {H.shape}")
    if not np.all(np.isfinite(H.real)) or (
        np.iscomplexobj(H) and not np.all(np.isfinite(H.imag))
    ):
        raise ValueError("matrix contains non-finite entries")
    return H


def check_hermitian(H: np.ndarray, tol: float = HERMITICITY_TOL) -> np.ndarray:
    """Validate that H is Hermitian (symmetric if real) within tol."""
    H = _as_square(H)
    dev = np.abs(H - H.conj().T).max()
    if dev > tol * max(1.0, np.abs(H).max()):
        raise ValueError(f"matrix is not Hermitian (deviation {dev:.3e})")
    return H


def eigh(H: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenvalues (ascending) and orthonormal eigenvector columns of H."""
    H = check_hermitian(H)
    return np.linalg.eigh(H)


def expm_unitary(H: np.ndarray, t: float) -> np.ndarray:
    """Unitary propagator U = exp(-i t H) via eigendecomposition."""
    w, v = eigh(H)
    return (v * np.exp(-1j * t * w)) @ v.conj().T


def density_matrix(psi: np.ndarray) -> np.ndarray:
    """Pure-state density matrix |psi><psi| for a normalized psi."""
    psi = np.asarray(psi).ravel()
    norm = np.linalg.norm(psi)
    if norm < 1e-12:
        raise ValueError("zero-norm state")
    psi = psi / norm
    return np.outer(psi, psi.conj())


def _num_qubits(dim: int) -> int:
    n = int(round(np.log2(dim)))
    if 2**n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    return n


def partial_trace(rho: np.ndarray, keep: list[int] | tuple[int, ...]) -> np.ndarray:
    """Trace out all qubits except those in `keep` (0-based site indices).

    The row/column order of the result follows the order given in `keep`.
    """
    rho = _as_square(rho)
    n = _num_qubits(rho.shape[0])
    keep = list(keep)
    if not keep or any(k < 0 or k >= n for k in keep) or len(set(keep)) != len(keep):
        raise ValueError(f"keep must be a nonempty subset of 0..{n - 1}")
    traced = [k for k in range(n) if k not in keep]
    t = rho.reshape((2,) * (2 * n))
    # axis pairs (k, n + k) index bra/ket of site k
    perm = keep + traced + [n + k for k in keep] + [n + k for k in traced]
    t = t.transpose(perm)
    d_keep, d_tr = 2 ** len(keep), 2 ** len(traced)
    t = t.reshape(d_keep, d_tr, d_keep, d_tr)
    return np.einsum("aibi->ab", t)


def partial_transpose(rho: np.ndarray, subsystem: int = 1) -> np.ndarray:
    """Partial transpose of a two-qubit density matrix on one subsystem (0 or 1)."""
    rho = _as_square(rho)
    if rho.shape[0] != 4:
        raise ValueError("partial_transpose expects a 4x4 two-qubit matrix")
    if subsystem not in (0, 1):
        raise ValueError("subsystem must be 0 or 1")
    r = rho.reshape(2, 2, 2, 2)
    if subsystem == 0:
        r = r.transpose(2, 1, 0, 3)
    else:
        r = r.transpose(0, 3, 2, 1)
    return r.reshape(4, 4)


def trace_norm(M: np.ndarray) -> float:
    """Sum of absolute eigenvalues of a Hermitian matrix."""
    w, _ = eigh(M)
    return float(np.abs(w).sum())
