"""Erdos-Renyi problem instances: generation, density binning, serialization.

All randomness flows through numpy's PCG64 (``numpy.random.default_rng``)
seeded explicitly, so identical (n, p, seed) always yields the identical
edge set on any platform.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "Graph",
    "generate_gnp",
    "density",
    "density_bin",
    "complement",
    "save_graph",
    "load_graph",
]


@dataclass(frozen=True)
class Graph:
    """Undirected simple graph on vertices 0..n-1 with a canonical edge set.

    Edges are stored as a sorted tuple of (u, v) pairs with u < v; the
    adjacency view is derived once and cached.
    """

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("graph needs at least one vertex")
        seen = set()
        for u, v in self.edges:
            if not (0 <= u < v < self.n):
                raise ValueError(f"edge ({u}, {v}) is not canonical for n={self.n}")
            if (u, v) in seen:
                raise ValueError(f"duplicate edge ({u}, {v})")
            seen.add((u, v))
        if self.edges != tuple(sorted(self.edges)):
            object.__setattr__(self, "edges", tuple(sorted(self.edges)))

    @classmethod
    def from_edges(cls, n: int, edges) -> "Graph":
        """Build a Graph from any iterable of (u, v) pairs, canonicalizing order."""
        canon = sorted({(min(u, v), max(u, v)) for u, v in edges})
        for u, v in canon:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
        return cls(n=n, edges=tuple(canon))

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self._edge_set

    @cached_property
    def _edge_set(self) -> frozenset[tuple[int, int]]:
        return frozenset(self.edges)


def generate_gnp(n: int, p: float, seed: int) -> Graph:
    """Sample G(n, p), then attach each isolated vertex to one random partner.

    Each of the C(n, 2) vertex pairs is included independently with
    probability p (pairs visited in lexicographic order).  Any vertex left
    with degree zero is then repaired by adding a single edge to a uniformly
    chosen other vertex, in ascending vertex order, using the same generator
    stream.  Deterministic for a fixed seed.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    if not 0.0 < p < 1.0:
        raise ValueError("edge probability must lie strictly between 0 and 1")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    mask = rng.random(iu.shape[0]) < p
    edges = {(int(u), int(v)) for u, v in zip(iu[mask], ju[mask])}

    deg = [0] * n
    for u, v in edges:
        deg[u] += 1
        deg[v] += 1
    for v in range(n):
        if deg[v] == 0:
            u = int(rng.integers(0, n - 1))
            if u >= v:
                u += 1
            e = (min(u, v), max(u, v))
            edges.add(e)
            deg[u] += 1
            deg[v] += 1
    return Graph(n=n, edges=tuple(sorted(edges)))


def density(g: Graph) -> float:
    """|E| / C(n, 2)."""
    if g.n < 2:
        raise ValueError("density needs at least two vertices")
    return g.num_edges / (g.n * (g.n - 1) / 2)


def density_bin(d: float, *, lo: float = 0.05, hi: float = 0.95, bins: int = 10) -> int:
    """Index of the linearly spaced density interval covering d, clamped to [0, bins-1].

    The default 10 intervals span [0.05, 0.95]; values outside clamp to the
    end bins.  A small epsilon guards exact interval boundaries against
    floating-point representation of the bin width.
    """
    if not 0.0 <= d <= 1.0:
        raise ValueError("density must lie in [0, 1]")
    width = (hi - lo) / bins
    idx = math.floor((d - lo) / width + 1e-9)
    return max(0, min(bins - 1, idx))


def complement(g: Graph) -> Graph:
    """Graph on the same vertices whose edges are exactly the missing pairs."""
    present = set(g.edges)
    comp = [
        (u, v)
        for u in range(g.n)
        for v in range(u + 1, g.n)
        if (u, v) not in present
    ]
    return Graph(n=g.n, edges=tuple(comp))


def save_graph(g: Graph, path) -> None:
    """Write the plain-text edge list: header line "n m", then one "u v" per line."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{g.n} {g.num_edges}\n")
        for u, v in g.edges:
            fh.write(f"{u} {v}\n")


def load_graph(path) -> Graph:
    """Read the edge-list format written by save_graph."""
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().split()
        if len(header) != 2:
            raise ValueError(f"{path}: malformed header, expected 'n m'")
        n, m = int(header[0]), int(header[1])
        edges = []
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(f"{path}:{lineno}: expected 'u v'")
            edges.append((int(parts[0]), int(parts[1])))
    if len(edges) != m:
        raise ValueError(f"{path}: header claims {m} edges, found {len(edges)}")
    return Graph.from_edges(n, edges)
