"""Feynman-clock assembly and time evolution through the complex QUBO path.

The clock operator acts on compound states |psi_t>|t>; its unique zero-energy
ground state encodes the whole discrete history psi_{t+1} = U psi_t starting
from the penalized input state.  Layout is slice-major: slice t occupies rows
t*n_s .. t*n_s + n_s - 1.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from .linalg import expm_unitary
from .solver import SolveParams, SolveTrace, align_phase, refine, solve_clock_state

UNITARITY_TOL = 1e-10
SLICE_NORM_TOL = 1e-6


@dataclass(frozen=True)
class ClockProblem:
    propagator: np.ndarray  # single-step unitary U = exp(-i dt H)
    n_slices: int
    psi_in: np.ndarray
    dt: float

    def __post_init__(self) -> None:
        U = np.asarray(self.propagator, dtype=complex)
        n = U.shape[0]
        if np.abs(U @ U.conj().T - np.eye(n)).max() > UNITARITY_TOL:
            raise ValueError("propagator is not unitary")
        if self.n_slices < 2:
            raise ValueError("need at least two time slices")
        psi = np.asarray(self.psi_in, dtype=complex).ravel()
        if psi.size != n:
            raise ValueError("input state dimension must match the propagator")
        if abs(np.linalg.norm(psi) - 1.0) > 1e-10:
            raise ValueError("input state must be normalized")
        object.__setattr__(self, "propagator", U)
        object.__setattr__(self, "psi_in", psi)

    @property
    def n_basis(self) -> int:
        return self.propagator.shape[0]


def build_clock(problem: ClockProblem) -> np.ndarray:
    """Hermitian positive-semidefinite clock operator of dim n_slices * n_basis.

    C = C0 + (1/2) sum_t ( I(x)|t><t| - U(x)|t+1><t| - U+(x)|t><t+1|
                           + I(x)|t+1><t+1| )
    with the penalty C0 = (I - |psi_in><psi_in|)(x)|0><0| selecting the input
    state on the first slice.
    """
    U = problem.propagator
    ns, nt = problem.n_basis, problem.n_slices
    C = np.zeros((nt * ns, nt * ns), dtype=complex)

    def blk(t, tp):
        return (slice(t * ns, (t + 1) * ns), slice(tp * ns, (tp + 1) * ns))

    C[blk(0, 0)] += np.eye(ns) - np.outer(problem.psi_in, problem.psi_in.conj())
    eye = np.eye(ns)
    for t in range(nt - 1):
        C[blk(t, t)] += 0.5 * eye
        C[blk(t + 1, t + 1)] += 0.5 * eye
        C[blk(t + 1, t)] += -0.5 * U
        C[blk(t, t + 1)] += -0.5 * U.conj().T
    return C


def exact_history(problem: ClockProblem) -> np.ndarray:
    """The zero-energy ground state: sum_t U^t|psi_in>(x)|t> / sqrt(n_slices)."""
    ns, nt = problem.n_basis, problem.n_slices
    out = np.zeros(nt * ns, dtype=complex)
    psi = problem.psi_in.copy()
    for t in range(nt):
        out[t * ns : (t + 1) * ns] = psi
        psi = problem.propagator @ psi
    return out / np.sqrt(nt)


def extract_slices(compound: np.ndarray, n_slices: int, n_basis: int) -> list[np.ndarray]:
    """Split a compound history state into per-slice normalized states.

    Each slice is renormalized and phase-aligned (largest-magnitude component
    real positive).  A near-zero slice norm means the clock solve failed.
    """
    compound = np.asarray(compound, dtype=complex).ravel()
    if compound.size != n_slices * n_basis:
        raise ValueError("compound state dimension mismatch")
    slices = []
    for t in range(n_slices):
        block = compound[t * n_basis : (t + 1) * n_basis]
        nrm = np.linalg.norm(block)
        if nrm < SLICE_NORM_TOL:
            raise ValueError(f"slice {t} has near-zero norm; clock solve failed")
        slices.append(align_phase(block / nrm))
    return slices


def evolve(
    H_phys: np.ndarray,
    dt: float,
    n_slices: int,
    psi_in: np.ndarray,
    params: SolveParams,
    refinements: int = 0,
    refine_depth: int = 6,
) -> tuple[list[np.ndarray], SolveTrace]:
    """Time-evolve psi_in through an annealed clock solve.

    Builds U by exact exponentiation, assembles the clock operator, and solves
    it through the complex QUBO path.  Each optional refinement pass restarts
    the zoom loop around the best solution so far, with the window extended
    `refine_depth` halvings past the previous maximum zoom -- the re-anchored
    centers are what lets the solution sharpen below the earlier bit
    resolution.  Returns the per-slice states of the best run together with
    the final solve trace.
    """
    U = expm_unitary(np.asarray(H_phys), dt)
    problem = ClockProblem(propagator=U, n_slices=n_slices, psi_in=psi_in, dt=dt)
    C = build_clock(problem)
    trace = solve_clock_state(C, params)
    z_hi = params.z_max
    for _ in range(refinements):
        z_lo = max(z_hi - 2, 1)
        z_hi = z_hi + refine_depth
        rp = replace(params, z_init=z_lo, z_max=z_hi)
        trace = refine(C, trace.best_wavefunction(), rp, complex_problem=True)
    slices = extract_slices(trace.best_wavefunction(), n_slices, problem.n_basis)
    return slices, trace
