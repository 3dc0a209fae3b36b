"""Ground-truth solvers: complete maximum-clique enumeration and exact /
heuristic maximum cut.

The clique enumerator is a Bron-Kerbosch search with pivoting over bitset
neighborhoods (Python integers as bitsets), pruned to maximum-size cliques.
Worst-case time is exponential, but n=52 random instances finish quickly.

The exact cut oracle walks assignments in Gray-code order with incremental
cut updates, fixing vertex 0's side (cuts are counted up to the global spin
flip).  Above the size threshold it refuses; use reference_cut there.
"""

from __future__ import annotations

import numpy as np

from .graphs import Graph

__all__ = [
    "all_maximum_cliques",
    "max_cut_exact",
    "reference_cut",
    "InstanceTooLargeError",
]

MAX_CUT_EXACT_THRESHOLD = 26


class InstanceTooLargeError(ValueError):
    """Instance too large for the exact oracle."""


def _neighbor_masks(g: Graph) -> list[int]:
    masks = [0] * g.n
    for u, v in g.edges:
        masks[u] |= 1 << v
        masks[v] |= 1 << u
    return masks


def all_maximum_cliques(g: Graph) -> tuple[int, frozenset[frozenset[int]]]:
    """Return (w(G), the complete set of cliques of that maximum size)."""
    nbr = _neighbor_masks(g)
    best_size = 0
    best: list[int] = []

    def bits(mask: int):
        while mask:
            low = mask & -mask
            yield low.bit_length() - 1
            mask ^= low

    def expand(clique_mask: int, size: int, cand: int, excl: int):
        nonlocal best_size, best
        if cand == 0 and excl == 0:
            if size > best_size:
                best_size = size
                best = [clique_mask]
            elif size == best_size:
                best.append(clique_mask)
            return
        # bound: even taking every candidate cannot reach the incumbent
        if size + cand.bit_count() < best_size:
            return
        # pivot on the candidate/excluded vertex covering most candidates
        pivot = -1
        pivot_cover = -1
        for u in bits(cand | excl):
            cover = (cand & nbr[u]).bit_count()
            if cover > pivot_cover:
                pivot_cover = cover
                pivot = u
        for v in bits(cand & ~nbr[pivot]):
            vbit = 1 << v
            expand(clique_mask | vbit, size + 1, cand & nbr[v], excl & nbr[v])
            cand ^= vbit
            excl |= vbit

    expand(0, 0, (1 << g.n) - 1, 0)
    cliques = frozenset(frozenset(i for i in range(g.n) if m >> i & 1) for m in best)
    return best_size, cliques


def max_cut_exact(g: Graph, threshold: int = MAX_CUT_EXACT_THRESHOLD) -> tuple[int, tuple[int, ...]]:
    """Exact maximum cut and a witness assignment (0/1 per vertex).

    Enumerates the 2^(n-1) bipartitions with vertex 0 fixed, flipping one
    vertex per step in Gray-code order and updating the cut incrementally.
    """
    n = g.n
    if n > threshold:
        raise InstanceTooLargeError(
            f"instance too large for exact oracle: n={n} > threshold={threshold}"
        )
    nbr = _neighbor_masks(g)
    deg = [m.bit_count() for m in nbr]

    side = 0  # bitmask of vertices in part 1; vertex 0 stays in part 0
    cut = 0
    best_cut = 0
    best_side = 0
    for k in range(1, 1 << (n - 1)):
        v = (k & -k).bit_length()  # flips vertex v in {1..n-1}
        vbit = 1 << v
        in_side = side & vbit
        opposite = side if not in_side else ~side
        cross = (nbr[v] & opposite).bit_count()
        cut += deg[v] - 2 * cross
        side ^= vbit
        if cut > best_cut:
            best_cut = cut
            best_side = side
    witness = tuple((best_side >> i) & 1 for i in range(n))
    return best_cut, witness


def _cut_value(g: Graph, x: np.ndarray) -> int:
    total = 0
    for u, v in g.edges:
        if x[u] != x[v]:
            total += 1
    return total


def reference_cut(g: Graph, budget: int = 50, restarts: int = 200, seed: int = 0) -> tuple[int, bool]:
    """Best cut from multi-restart single-flip local search; never exact.

    Each restart starts from a random bipartition and runs up to `budget`
    first-improvement sweeps.  Returns (cut, False): the flag records that
    the value is a reference lower bound, not certified optimal.
    """
    n = g.n
    rng = np.random.default_rng(seed)
    a = np.zeros((n, n))
    for u, v in g.edges:
        a[u, v] = 1.0
        a[v, u] = 1.0
    m = g.num_edges
    best = 0
    for _ in range(restarts):
        s = np.where(rng.random(n) < 0.5, 1.0, -1.0)
        local = a @ s
        for _sweep in range(budget):
            improved = False
            for v in range(n):
                # flipping v changes the edge sum by -2 s_v local_v
                gain = s[v] * local[v]
                if gain > 0:
                    s[v] = -s[v]
                    local += 2.0 * s[v] * a[:, v]
                    improved = True
            if not improved:
                break
        edge_sum = 0.5 * float(s @ (a @ s))
        cut = int(round((m - edge_sum) / 2.0))
        if cut > best:
            best = cut
    return best, False
