"""Benchmark metrics: approximation ratios with the broken-reads-score-zero
rule, chain-break proportion, ground-state probability, time-to-solution,
fair-sampling entropy, chain-break run structure, and density-bin curves.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import entropy as _scipy_entropy

from .graphs import Graph
from .models import max_clique_qubo, max_cut_ising

__all__ = [
    "LogicalSample",
    "ExperimentRecord",
    "FairSamplingIneligible",
    "approximation_ratio",
    "mean_approximation_ratio",
    "chain_break_proportion",
    "ground_state_probability",
    "time_to_solution",
    "fair_sampling_entropy",
    "chain_break_runs",
    "aggregate_by_density_bin",
    "success_any",
    "batch_objectives",
]

PROBLEM_KINDS = ("clique", "cut")


class FairSamplingIneligible(ValueError):
    """Run does not meet the fair-sampling eligibility rules."""


@dataclass(frozen=True)
class LogicalSample:
    """One unembedded read: a logical spin vector, or a broken-chain flag.

    `assignment` is None exactly when `broken`; `broken_chains` lists
    (logical variable, physical spin pattern in chain order).
    """

    assignment: tuple[int, ...] | None
    broken: bool
    broken_chains: tuple[tuple[int, tuple[int, ...]], ...] = ()

    def __post_init__(self):
        if self.broken and self.assignment is not None:
            raise ValueError("broken reads carry no assignment")
        if not self.broken and self.assignment is None:
            raise ValueError("non-broken reads need an assignment")


@dataclass
class ExperimentRecord:
    """One grid cell's metrics row (one graph, chain strength, anneal time)."""

    graph_id: str
    density: float
    density_bin: int
    problem: str
    topology: str
    chain_strength: float
    annealing_time_us: float
    num_sweeps: int
    num_reads: int
    mean_ar: float
    chain_break_proportion: float
    gsp: float | None
    tts_seconds: float | None
    elapsed_seconds: float
    seed: int
    optimum: int
    optimum_exact: bool
    ground_state_counts: dict[str, int] | None = None
    schema_version: int = 1

    def __post_init__(self):
        if not 0.0 <= self.mean_ar <= 1.0:
            raise ValueError(f"mean_ar {self.mean_ar} outside [0, 1]")
        if not 0.0 <= self.chain_break_proportion <= 1.0:
            raise ValueError(f"chain_break_proportion outside [0, 1]")
        if self.gsp is not None and not 0.0 <= self.gsp <= 1.0:
            raise ValueError(f"gsp {self.gsp} outside [0, 1]")


def _clique_objective(assignment: tuple[int, ...], g: Graph) -> float:
    """Eq-7-style QUBO energy of the spin sample read as binaries."""
    x = [(s + 1) // 2 for s in assignment]
    return max_clique_qubo(g).energy(x)


def _cut_objective(assignment: tuple[int, ...], g: Graph) -> int:
    e = max_cut_ising(g).energy(assignment)
    return int(round((g.num_edges - e) / 2))


def approximation_ratio(s: LogicalSample, kind: str, g: Graph, optimum: int) -> float:
    """Sample objective divided by the optimum; broken reads score 0.

    Clique: ratio = max(0, E_qubo / (-omega)); equals (clique size)/omega for
    valid cliques and clamps at 0 when complement-edge penalties push the
    energy to 0 or above.  Cut: ratio = cut / optimum, clamped to 1 (the top
    clamp only matters when the optimum is a non-exact reference value).
    """
    if kind not in PROBLEM_KINDS:
        raise ValueError(f"unknown problem kind {kind!r}")
    if optimum <= 0:
        raise ValueError("optimum must be positive")
    if s.broken:
        return 0.0
    if kind == "clique":
        return max(0.0, _clique_objective(s.assignment, g) / (-float(optimum)))
    return min(1.0, max(0.0, _cut_objective(s.assignment, g) / float(optimum)))


def batch_objectives(samples: list[LogicalSample], kind: str, g: Graph) -> np.ndarray:
    """Objective value per read, vectorized; broken reads get NaN.

    For clique the objective is the QUBO energy (lower is better); for cut
    it is the cut size (higher is better).
    """
    if kind not in PROBLEM_KINDS:
        raise ValueError(f"unknown problem kind {kind!r}")
    out = np.full(len(samples), np.nan)
    live = [(idx, s.assignment) for idx, s in enumerate(samples) if not s.broken]
    if not live:
        return out
    rows = np.array([a for _, a in live], dtype=np.float64)
    if kind == "clique":
        x = (rows + 1.0) / 2.0
        lin = -x.sum(axis=1)
        q = np.zeros((g.n, g.n))
        present = set(g.edges)
        for u in range(g.n):
            for v in range(u + 1, g.n):
                if (u, v) not in present:
                    q[u, v] = 2.0
        vals = lin + np.einsum("ri,ij,rj->r", x, q, x)
    else:
        a = np.zeros((g.n, g.n))
        for u, v in g.edges:
            a[u, v] = 1.0
        e = np.einsum("ri,ij,rj->r", rows, a, rows)
        vals = (g.num_edges - e) / 2.0
    for (idx, _), v in zip(live, vals):
        out[idx] = v
    return out


def mean_approximation_ratio(
    samples: list[LogicalSample], kind: str, g: Graph, optimum: int
) -> float:
    """Arithmetic mean of per-read ratios over all reads, broken counted as 0."""
    if not samples:
        raise ValueError("no samples")
    if optimum <= 0:
        raise ValueError("optimum must be positive")
    vals = batch_objectives(samples, kind, g)
    if kind == "clique":
        ratios = np.maximum(0.0, vals / (-float(optimum)))
    else:
        ratios = np.clip(vals / float(optimum), 0.0, 1.0)
    ratios = np.where(np.isnan(ratios), 0.0, ratios)
    return float(ratios.mean())


def chain_break_proportion(samples: list[LogicalSample]) -> float:
    """Fraction of reads containing at least one broken chain."""
    if not samples:
        raise ValueError("no samples")
    return sum(1 for s in samples if s.broken) / len(samples)


def ground_state_probability(
    samples: list[LogicalSample],
    kind: str,
    g: Graph,
    optimum: int,
    denominator: str = "all",
) -> float:
    """Fraction of reads that exactly attain the optimum.

    Broken reads never count toward the numerator.  The denominator is all
    reads by default; pass denominator="nonbroken" for the alternative
    normalization (both are defensible readings of the protocol).
    """
    if not samples:
        raise ValueError("no samples")
    if optimum <= 0:
        raise ValueError("optimum must be positive")
    if denominator not in ("all", "nonbroken"):
        raise ValueError("denominator must be 'all' or 'nonbroken'")
    vals = batch_objectives(samples, kind, g)
    if kind == "clique":
        hits = int(np.sum(vals == -float(optimum)))
    else:
        hits = int(np.sum(vals == float(optimum)))
    denom = len(samples) if denominator == "all" else sum(1 for s in samples if not s.broken)
    return hits / denom if denom else 0.0


def time_to_solution(elapsed_seconds: float, num_reads: int, p: float) -> float | None:
    """Expected time to hit the optimum with 99% confidence.

    p = 1 degenerates to one read's share of the elapsed time; p = 0 has no
    defined value and returns None (callers omit such cells).
    """
    if elapsed_seconds <= 0:
        raise ValueError("elapsed time must be positive")
    if num_reads < 1:
        raise ValueError("num_reads must be >= 1")
    if not 0.0 <= p <= 1.0:
        raise ValueError("success fraction must lie in [0, 1]")
    per_read = elapsed_seconds / num_reads
    if p == 0.0:
        return None
    if p == 1.0:
        return per_read
    return per_read * math.log(1.0 - 0.99) / math.log(1.0 - p)


def fair_sampling_entropy(ground_state_counts) -> float:
    """Base-2 Shannon entropy of the sampled ground-state distribution.

    Eligibility follows the benchmark protocol: the graph must have k in
    {2..5} optima (zero counts for unsampled optima are fine) and the total
    number of ground-state reads must be at least 30.  Ineligible inputs
    raise FairSamplingIneligible.
    """
    if hasattr(ground_state_counts, "values"):
        counts = [int(c) for c in ground_state_counts.values()]
    else:
        counts = [int(c) for c in ground_state_counts]
    if any(c < 0 for c in counts):
        raise ValueError("counts must be nonnegative")
    k = len(counts)
    total = sum(counts)
    if not 2 <= k <= 5:
        raise FairSamplingIneligible(
            f"ineligible for fair-sampling analysis: {k} optima (need 2..5)"
        )
    if total < 30:
        raise FairSamplingIneligible(
            f"ineligible for fair-sampling analysis: {total} ground-state reads (need >= 30)"
        )
    return float(_scipy_entropy(counts, base=2))


def chain_break_runs(pattern) -> int:
    """Number of maximal constant runs in one broken chain's spin pattern."""
    vals = list(pattern)
    if not vals:
        raise ValueError("empty pattern")
    if all(v == vals[0] for v in vals):
        raise ValueError("unanimous pattern is not a broken chain")
    runs = 1
    for prev, cur in zip(vals, vals[1:]):
        if cur != prev:
            runs += 1
    return runs


@dataclass(frozen=True)
class CurvePoint:
    problem: str
    annealing_time_us: float
    chain_strength: float
    density_bin: int
    mean_ar: float
    mean_cbp: float
    n_graphs: int


def aggregate_by_density_bin(records: list[ExperimentRecord]) -> list[CurvePoint]:
    """Mean AR / chain-break curves per (chain strength, anneal time, bin)."""
    kinds = {r.problem for r in records}
    if len(kinds) > 1:
        raise ValueError(f"records mix problem kinds: {sorted(kinds)}")
    groups: dict[tuple[float, float, int], list[ExperimentRecord]] = {}
    for r in records:
        groups.setdefault(
            (r.chain_strength, r.annealing_time_us, r.density_bin), []
        ).append(r)
    out = []
    for (cs, at, b), grp in sorted(groups.items()):
        out.append(
            CurvePoint(
                problem=grp[0].problem,
                annealing_time_us=at,
                chain_strength=cs,
                density_bin=b,
                mean_ar=sum(r.mean_ar for r in grp) / len(grp),
                mean_cbp=sum(r.chain_break_proportion for r in grp) / len(grp),
                n_graphs=len(grp),
            )
        )
    return out


def success_any(records: list[ExperimentRecord]) -> bool:
    """Whether any read anywhere in the grid hit the exact optimum.

    Only meaningful when the optimum is exact; records with unknown GSP are
    ignored.
    """
    return any(r.gsp is not None and r.gsp > 0 and r.optimum_exact for r in records)
