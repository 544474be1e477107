"""Seeded Metropolis simulated-annealing QUBO sampler and brute-force oracle.

Each read is the endpoint of an independent Metropolis chain: a uniformly
random initial bitstring, then `sweeps` passes visiting every variable in
index order and flipping with probability min(1, exp(-beta dE)), with beta
following a geometric schedule.  Every read draws from its own counter-based
random stream keyed by (scattered seed XOR read index), so results are
byte-identical for the same inputs regardless of how reads would be
scheduled, and nearby seeds give unrelated streams.

The hot loop is compiled with numba; `_anneal_reference` is a line-for-line
pure-Python twin used in tests to certify the energy bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .encoding import QuboInstance

_MASK = (1 << 64) - 1
_GOLDEN = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB


@dataclass(frozen=True)
class AnnealSchedule:
    """Geometric inverse-temperature schedule."""

    beta_start: float
    beta_end: float
    sweeps: int = 1000

    def __post_init__(self) -> None:
        if self.beta_start <= 0 or self.beta_end <= 0:
            raise ValueError("inverse temperatures must be positive")
        if self.beta_start > self.beta_end:
            raise ValueError("beta_start must not exceed beta_end")
        if self.sweeps < 1:
            raise ValueError("need at least one sweep")

    def betas(self) -> np.ndarray:
        if self.sweeps == 1:
            return np.array([self.beta_end])
        t = np.arange(self.sweeps) / (self.sweeps - 1)
        return self.beta_start * (self.beta_end / self.beta_start) ** t


@dataclass(frozen=True)
class AnnealRead:
    bits: tuple[int, ...]
    qubo_energy: float
    multiplicity: int


def default_schedule(q: QuboInstance, sweeps: int = 1000) -> AnnealSchedule:
    """Schedule derived from the instance's energy scales.

    beta_start = ln 2 / dE_max with dE_max the largest symmetrized row L1
    norm; beta_end = ln 1000 / dE_min with dE_min the smallest nonzero
    coefficient magnitude.  Scaling the QUBO by c > 0 scales both bounds by
    1/c, leaving the acceptance dynamics invariant.
    """
    d, M = q.dense_terms()
    S = M + np.diag(d)
    row_l1 = np.abs(S).sum(axis=1)
    de_max = row_l1.max()
    mags = [abs(v) for v in q.coeffs.values() if v != 0.0]
    if de_max == 0.0 or not mags:
        raise ValueError("cannot derive a schedule for an all-zero instance")
    return AnnealSchedule(
        beta_start=math.log(2.0) / de_max,
        beta_end=math.log(1000.0) / min(mags),
        sweeps=sweeps,
    )


@njit(cache=True)
def _mix64(z):
    """splitmix64 output mixing; also used to scatter per-read stream keys."""
    z = (z ^ (z >> np.uint64(30))) * np.uint64(_MIX1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(_MIX2)
    return z ^ (z >> np.uint64(31))


@njit(cache=True)
def _next_uniform(state):
    """splitmix64 step; returns (new_state, uniform in [0, 1))."""
    state = state + np.uint64(_GOLDEN)
    z = _mix64(state)
    return state, (z >> np.uint64(11)) * (1.0 / 9007199254740992.0)


@njit(cache=True)
def _anneal_kernel(d, M, betas, num_reads, seed):
    n = d.size
    out = np.zeros((num_reads, n), dtype=np.int8)
    f = np.zeros(n)
    seed_key = _mix64(np.uint64(seed))
    for r in range(num_reads):
        # scatter the seed before XORing in the read index, then mix again:
        # otherwise nearby seeds produce permutations of the same streams
        state = _mix64(seed_key ^ np.uint64(r))
        bits = out[r]
        for i in range(n):
            state, u = _next_uniform(state)
            bits[i] = 1 if u < 0.5 else 0
        f[:] = 0.0
        for i in range(n):
            if bits[i]:
                for j in range(n):
                    f[j] += M[i, j]
        for s in range(betas.size):
            beta = betas[s]
            for i in range(n):
                sgn = 1.0 - 2.0 * bits[i]
                de = sgn * (d[i] + f[i])
                state, u = _next_uniform(state)
                if de <= 0.0 or u < np.exp(-beta * de):
                    bits[i] = 1 - bits[i]
                    for j in range(n):
                        f[j] += sgn * M[i, j]
    return out


def _py_mix64(z: int) -> int:
    z = ((z ^ (z >> 30)) * _MIX1) & _MASK
    z = ((z ^ (z >> 27)) * _MIX2) & _MASK
    return z ^ (z >> 31)


def _py_next_uniform(state: int) -> tuple[int, float]:
    state = (state + _GOLDEN) & _MASK
    return state, (_py_mix64(state) >> 11) * (1.0 / 9007199254740992.0)


def _anneal_reference(d, M, betas, num_reads, seed):
    """Pure-Python twin of the compiled kernel (tests only).

    Asserts at every accepted flip that the incremental energy agrees with a
    full recomputation.
    """
    n = d.size
    out = np.zeros((num_reads, n), dtype=np.int8)

    def full_energy(bits):
        b = bits.astype(float)
        return b @ d + 0.5 * b @ (M @ b)

    seed_key = _py_mix64(seed & _MASK)
    for r in range(num_reads):
        state = _py_mix64(seed_key ^ r)
        bits = out[r]
        for i in range(n):
            state, u = _py_next_uniform(state)
            bits[i] = 1 if u < 0.5 else 0
        f = M.T @ bits.astype(float)
        energy = full_energy(bits)
        for beta in betas:
            for i in range(n):
                sgn = 1.0 - 2.0 * bits[i]
                de = sgn * (d[i] + f[i])
                state, u = _py_next_uniform(state)
                if de <= 0.0 or u < np.exp(-beta * de):
                    bits[i] = 1 - bits[i]
                    f += sgn * M[i]
                    energy += de
                    assert abs(energy - full_energy(bits)) <= 1e-9 * (1 + abs(energy))
    return out


def sample(
    q: QuboInstance,
    num_reads: int,
    sched: AnnealSchedule | None = None,
    seed: int = 0,
    _kernel=None,
) -> list[AnnealRead]:
    """Run num_reads independent anneals and aggregate identical bitstrings.

    Reads are returned sorted by energy, then lexicographically by bits.
    Energies are recomputed exactly from the instance, never trusted from the
    chain's incremental bookkeeping.
    """
    if num_reads < 1:
        raise ValueError("need at least one read")
    if sched is None:
        sched = default_schedule(q)
    d, M = q.dense_terms()
    kernel = _kernel if _kernel is not None else _anneal_kernel
    bits = kernel(d, M, sched.betas(), num_reads, np.uint64(seed & _MASK))
    uniq, counts = np.unique(bits, axis=0, return_counts=True)
    B = uniq.astype(float)
    energies = B @ d + 0.5 * np.einsum("ri,ri->r", B, B @ M)
    reads = [
        AnnealRead(tuple(int(x) for x in row), float(e), int(c))
        for row, e, c in zip(uniq, energies, counts)
    ]
    reads.sort(key=lambda rd: (rd.qubo_energy, rd.bits))
    return reads


def brute_force(q: QuboInstance) -> tuple[tuple[int, ...], float]:
    """Exact global optimum by enumeration; ties broken lexicographically."""
    n = q.n_vars
    if n > 24:
        raise ValueError("brute force limited to 24 variables")
    best_bits = None
    best_e = np.inf
    chunk = 1 << min(n, 16)
    shifts = n - 1 - np.arange(n)  # variable 0 as MSB: integer order == lex order
    for start in range(0, 1 << n, chunk):
        m = np.arange(start, start + chunk, dtype=np.int64)
        B = ((m[:, None] >> shifts) & 1).astype(np.int8)
        e = q.energies(B)
        k = int(np.argmin(e))
        if e[k] < best_e:
            best_e = float(e[k])
            best_bits = tuple(int(x) for x in B[k])
    return best_bits, best_e
