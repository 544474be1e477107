"""Adaptive zooming eigensolver: zoom loop, excited-state ladder, multigrid.

One zoom step builds a QUBO around the current coefficient centers, samples
it, decodes every read, and selects the candidate with the lowest Rayleigh
quotient against the (projected, unshifted) Hamiltonian.  The current center
itself is always admitted as a candidate -- it is what the all-zero bitstring
decodes to -- which makes the per-run energy sequence non-increasing.  The
next step halves the reachable window around the selected coefficients.

Runs are repeated with derived seeds; cross-run statistics (min, median,
nearest-rank 16th/84th percentiles) summarize the ensemble.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from scipy.interpolate import CubicSpline

from . import models
from .encoding import (
    Encoding,
    build_clock_qubo,
    build_eigen_qubo,
    decode,
    decode_complex,
    project_hamiltonian,
)
from .sampler import AnnealSchedule, default_schedule, sample

NULL_NORM_TOL = 1e-6


class SolverError(RuntimeError):
    pass


@dataclass(frozen=True)
class SolveParams:
    """Knobs for one adaptive solve."""

    n_bits: int = 3
    eta: float = 0.0
    num_reads: int = 1000
    z_init: int = 0
    z_max: int = 14
    mus: tuple[float, ...] = ()
    projected_states: tuple = ()
    initial_centers: np.ndarray | None = None
    seed: int = 0
    num_runs: int = 1
    sweeps: int = 64
    # feed back the raw decoded minimum (False) or the normalized vector (True)
    normalize_centers: bool = False

    def __post_init__(self) -> None:
        if not (0 <= self.z_init <= self.z_max):
            raise ValueError("need 0 <= z_init <= z_max")
        if self.num_reads < 1 or self.num_runs < 1:
            raise ValueError("num_reads and num_runs must be positive")
        if len(self.mus) != len(self.projected_states):
            raise ValueError("mus and projected_states must pair up")


@dataclass(frozen=True)
class ZoomRecord:
    zoom: int
    energy: float
    wavefunction: np.ndarray  # normalized, sign/phase aligned
    centers: np.ndarray  # raw coefficients fed to the next step


@dataclass
class SolveTrace:
    """Per-run, per-zoom history of one adaptive solve."""

    runs: list[list[ZoomRecord]]

    @property
    def zooms(self) -> np.ndarray:
        return np.array([rec.zoom for rec in self.runs[0]])

    def energies(self) -> np.ndarray:
        """(num_runs, num_zooms) energy array."""
        return np.array([[rec.energy for rec in run] for run in self.runs])

    def final_energies(self) -> np.ndarray:
        return self.energies()[:, -1]

    def best_run(self) -> list[ZoomRecord]:
        return min(self.runs, key=lambda run: run[-1].energy)

    def best_energy(self) -> float:
        return float(self.final_energies().min())

    def best_wavefunction(self) -> np.ndarray:
        return self.best_run()[-1].wavefunction

    def statistics(self) -> dict[str, np.ndarray]:
        return run_statistics(self.energies())


def nearest_rank(sorted_values: np.ndarray, pct: float) -> np.ndarray:
    """Nearest-rank percentile: element ceil(pct/100 * N) (1-based) of each row."""
    n = sorted_values.shape[-1]
    idx = max(int(np.ceil(pct / 100.0 * n)), 1) - 1
    return sorted_values[..., idx]


def run_statistics(energies: np.ndarray) -> dict[str, np.ndarray]:
    """Per-zoom min / median / 16th / 84th percentiles across runs."""
    energies = np.atleast_2d(np.asarray(energies, dtype=float))
    s = np.sort(energies, axis=0).T  # (zooms, runs)
    return {
        "min": s[:, 0].copy(),
        "median": nearest_rank(s, 50.0),
        "p16": nearest_rank(s, 16.0),
        "p84": nearest_rank(s, 84.0),
    }


def align_sign(psi: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component positive (real problems)."""
    k = int(np.argmax(np.abs(psi)))
    return -psi if psi[k] < 0 else psi


def align_phase(psi: np.ndarray) -> np.ndarray:
    """Rotate the global phase so the largest-magnitude component is real positive."""
    k = int(np.argmax(np.abs(psi)))
    ph = psi[k] / abs(psi[k])
    return psi / ph


def _run_seed(seed: int, run: int, zoom: int) -> int:
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(run, zoom))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _zoom_loop(
    op: np.ndarray,
    params: SolveParams,
    run: int,
    complex_problem: bool,
) -> list[ZoomRecord]:
    """One run of the zoom loop over a real symmetric or complex Hermitian op."""
    dim = op.shape[0]
    width = 2 * dim if complex_problem else dim
    if params.initial_centers is None:
        centers = np.zeros(width)
    else:
        centers = np.asarray(params.initial_centers, dtype=float).copy()
        if centers.size != width:
            raise ValueError(f"initial centers must have length {width}")
    shifted = op - params.eta * np.eye(dim)
    records: list[ZoomRecord] = []
    for z in range(params.z_init, params.z_max + 1):
        enc = Encoding(n_bits=params.n_bits, zoom=z, centers=centers)
        if complex_problem:
            qubo = build_clock_qubo(shifted, enc)
        else:
            qubo = build_eigen_qubo(shifted, enc)
        sched = default_schedule(qubo, sweeps=params.sweeps)
        reads = sample(qubo, params.num_reads, sched, seed=_run_seed(params.seed, run, z))
        bit_rows = np.array([r.bits for r in reads], dtype=float)
        w = enc.bit_weights
        if complex_problem:
            parts = centers.reshape(dim, 2) + bit_rows.reshape(-1, dim, 2, params.n_bits) @ w
            A = parts[:, :, 0] + 1j * parts[:, :, 1]
        else:
            A = centers + bit_rows.reshape(-1, dim, params.n_bits) @ w
        norms = np.linalg.norm(A, axis=1)
        safe = np.maximum(norms, NULL_NORM_TOL)
        rq = np.real(np.einsum("ri,ri->r", A.conj(), A @ op.T)) / safe**2
        best = None
        for k, r in enumerate(reads):
            if norms[k] < NULL_NORM_TOL:
                continue
            key = (float(rq[k]), r.bits)
            if best is None or key < best[0]:
                best = (key, A[k])
        # the current center: what the all-zero bitstring decodes to
        decoder = decode_complex if complex_problem else decode
        a0 = decoder(np.zeros(qubo.n_vars, dtype=int), enc)
        if np.linalg.norm(a0) >= NULL_NORM_TOL:
            e0 = float(np.real(a0.conj() @ (op @ a0)) / np.linalg.norm(a0) ** 2)
            key0 = (e0, ())
            if best is None or key0 < best[0]:
                best = (key0, a0)
        if best is None:
            raise SolverError(
                f"all {params.num_reads} reads decoded to (near-)null vectors at "
                f"zoom step {z}; consider a larger eta shift"
            )
        (energy, _), a_best = best
        psi = a_best / np.linalg.norm(a_best)
        psi = align_phase(psi) if complex_problem else align_sign(psi)
        sel = psi if params.normalize_centers else a_best
        centers = (
            np.column_stack([sel.real, sel.imag]).ravel()
            if complex_problem
            else np.asarray(sel, dtype=float)
        )
        records.append(ZoomRecord(zoom=z, energy=energy, wavefunction=psi, centers=centers))
    return records


def _solve(op: np.ndarray, params: SolveParams, complex_problem: bool) -> SolveTrace:
    runs = [
        _zoom_loop(op, params, run, complex_problem) for run in range(params.num_runs)
    ]
    return SolveTrace(runs=runs)


def solve_state(H: np.ndarray, params: SolveParams) -> SolveTrace:
    """Adaptive solve for the lowest state of a real symmetric Hamiltonian.

    Chemical-potential projectors from params are added first; selection and
    reported energies are Rayleigh quotients against that projected (but not
    eta-shifted) operator.
    """
    H_proj = project_hamiltonian(
        H, [np.asarray(s) for s in params.projected_states], list(params.mus)
    )
    return _solve(H_proj, params, complex_problem=False)


def solve_clock_state(C: np.ndarray, params: SolveParams) -> SolveTrace:
    """Adaptive solve for the lowest state of a complex Hermitian operator."""
    if params.initial_centers is not None and np.iscomplexobj(params.initial_centers):
        cc = np.asarray(params.initial_centers)
        params = replace(
            params, initial_centers=np.column_stack([cc.real, cc.imag]).ravel()
        )
    if not params.normalize_centers:
        params = replace(params, normalize_centers=True)
    return _solve(np.asarray(C, dtype=complex), params, complex_problem=True)


def solve_spectrum(
    H: np.ndarray,
    n_states: int,
    etas: list[float],
    mus: list[float],
    params: SolveParams,
) -> list[SolveTrace]:
    """Excited-state ladder: solve, project the found state up, repeat.

    etas has one entry per state; mus[n] is the chemical potential attached to
    state n once found (its last entry is unused).
    """
    if n_states < 1:
        raise ValueError("need at least one state")
    if len(etas) < n_states or len(mus) < n_states:
        raise ValueError("need an eta and a mu per state")
    traces: list[SolveTrace] = []
    proj_states: list[np.ndarray] = list(params.projected_states)
    proj_mus: list[float] = list(params.mus)
    for n in range(n_states):
        p = replace(
            params,
            eta=etas[n],
            mus=tuple(proj_mus),
            projected_states=tuple(proj_states),
            seed=params.seed + n,
        )
        trace = solve_state(H, p)
        traces.append(trace)
        proj_states.append(trace.best_wavefunction())
        proj_mus.append(mus[n])
    return traces


def multigrid_lift(
    coarse: np.ndarray,
    coarse_spec: models.ScalarFieldSpec,
    fine_spec: models.ScalarFieldSpec,
) -> np.ndarray:
    """Cubic-spline interpolation of a coarse-grid wavefunction to a finer grid."""
    if fine_spec.n_s != 2 * coarse_spec.n_s or fine_spec.phi_max != coarse_spec.phi_max:
        raise ValueError("fine grid must double the coarse grid at fixed phi_max")
    phi_c, _ = models.field_grid(coarse_spec)
    phi_f, _ = models.field_grid(fine_spec)
    lifted = CubicSpline(phi_c, np.asarray(coarse, dtype=float), bc_type="natural")(phi_f)
    return lifted / np.linalg.norm(lifted)


def refine(
    op: np.ndarray,
    previous: np.ndarray,
    params: SolveParams,
    complex_problem: bool = False,
) -> SolveTrace:
    """Rerun the zoom loop from a previous solution with a narrowed window.

    Requires z_init > 0 so the coefficient window around the previous solution
    is already contracted.  Because the incumbent is always a candidate, the
    energy cannot increase.
    """
    if params.z_init < 1:
        raise ValueError("refinement requires z_init > 0")
    previous = np.asarray(previous)
    if complex_problem:
        params = replace(params, initial_centers=previous)
        return solve_clock_state(op, params)
    params = replace(params, initial_centers=previous.astype(float))
    return _solve(np.asarray(op, dtype=float), params, complex_problem=False)
