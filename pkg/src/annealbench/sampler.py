"""Simulated-annealing sampler: the desk-scale stand-in for an annealing QPU.

Every read is an independent restart: uniform random spins, then
``num_sweeps`` Metropolis sweeps (single-spin flips visited in a fresh
random permutation each sweep) under a geometric inverse-temperature
schedule from beta_hot to beta_cold.  Reads own disjoint RNG streams
derived from (seed, read index), so a SampleSet is bit-identical for a
fixed seed no matter how calls are scheduled.

Wall-clock `elapsed` is the access-time analog used by the TTS metric; it
is measured, never reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from ._kernel import init_read, local_fields, sweep_phase
from .embedding import PhysicalProblem
from .models import IsingModel

__all__ = [
    "SamplerParams",
    "SampleSet",
    "map_anneal_time",
    "sample",
    "SimulatedAnnealer",
]

DEFAULT_SWEEPS_PER_US = 10.0


@dataclass(frozen=True)
class SamplerParams:
    num_reads: int = 1000
    num_sweeps: int = 1000
    beta_hot: float = 0.1
    beta_cold: float = 10.0
    seed: int = 0

    def __post_init__(self):
        if self.num_reads < 1:
            raise ValueError("num_reads must be >= 1")
        if self.num_sweeps < 1:
            raise ValueError("num_sweeps must be >= 1")
        if not 0 < self.beta_hot < self.beta_cold:
            raise ValueError("need 0 < beta_hot < beta_cold")
        if not 0 <= self.seed < 2**63:
            raise ValueError("seed must fit in a nonnegative 63-bit integer")


@dataclass(frozen=True)
class SampleSet:
    """Raw physical reads plus timing.

    `energies` are re-evaluated exactly from the reads and the physical
    model; `incremental_energies` carries the kernel's running-sum values
    for bookkeeping diagnostics.
    """

    reads: np.ndarray
    energies: np.ndarray
    elapsed: float
    params: SamplerParams
    qubits: tuple[int, ...]
    incremental_energies: np.ndarray | None = None


def map_anneal_time(annealing_time_us: float, sweeps_per_us: float = DEFAULT_SWEEPS_PER_US) -> int:
    """Sweep count standing in for a hardware annealing time (convention:
    round(time * sweeps_per_us), at least one sweep)."""
    if annealing_time_us <= 0:
        raise ValueError("annealing time must be positive")
    return max(1, int(round(annealing_time_us * sweeps_per_us)))


def _model_arrays(model: IsingModel):
    """Dense h plus symmetric CSR adjacency of the couplings."""
    n = model.n
    h = np.zeros(n)
    for i, w in model.h.items():
        h[i] = w
    nbrs: list[list[tuple[int, float]]] = [[] for _ in range(n)]
    for (a, b), w in model.j.items():
        nbrs[a].append((b, w))
        nbrs[b].append((a, w))
    indptr = np.zeros(n + 1, dtype=np.int64)
    indices = np.empty(sum(len(x) for x in nbrs), dtype=np.int32)
    weights = np.empty(indices.shape[0])
    pos = 0
    for i in range(n):
        nbrs[i].sort()
        indptr[i + 1] = indptr[i] + len(nbrs[i])
        for j, w in nbrs[i]:
            indices[pos] = j
            weights[pos] = w
            pos += 1
    pa = np.array([a for a, _ in model.j], dtype=np.int64)
    pb = np.array([b for _, b in model.j], dtype=np.int64)
    pw = np.array([w for w in model.j.values()])
    return h, indptr, indices, weights, (pa, pb, pw)


def _exact_energies(reads: np.ndarray, h: np.ndarray, pairs, offset: float) -> np.ndarray:
    s = reads.astype(np.float64)
    pa, pb, pw = pairs
    e = s @ h + offset
    if len(pw):
        e = e + (s[:, pa] * s[:, pb]) @ pw
    return e


def sample(problem: PhysicalProblem, params: SamplerParams) -> SampleSet:
    """Run num_reads independent anneal-readout cycles on a physical problem."""
    model = problem.model
    h, indptr, indices, weights, pairs = _model_arrays(model)
    n = model.n
    betas = np.geomspace(params.beta_hot, params.beta_cold, params.num_sweeps)

    reads = np.empty((params.num_reads, n), dtype=np.int8)
    incremental = np.empty(params.num_reads)
    spins = np.empty(n)
    fields = np.empty(n)
    perm = np.empty(n, dtype=np.int64)
    state = np.empty(4, dtype=np.uint64)

    t0 = time.perf_counter()
    for r in range(params.num_reads):
        init_read(state, spins, perm, params.seed, r)
        e0 = local_fields(indptr, indices, weights, h, spins, fields)
        delta = sweep_phase(indptr, indices, weights, betas, spins, fields, perm, state)
        reads[r, :] = spins.astype(np.int8)
        incremental[r] = e0 + delta
    elapsed = time.perf_counter() - t0

    energies = _exact_energies(reads, h, pairs, model.offset)
    return SampleSet(
        reads=reads,
        energies=energies,
        elapsed=elapsed,
        params=params,
        qubits=problem.qubits,
        incremental_energies=incremental + model.offset,
    )


class SimulatedAnnealer:
    """In-process backend satisfying the sampler contract."""

    def sample(self, problem: PhysicalProblem, params: SamplerParams) -> SampleSet:
        return sample(problem, params)
