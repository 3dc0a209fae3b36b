"""Chimera, Pegasus, and Zephyr hardware lattices with optional defects.

Linear qubit id conventions (stable across runs, frozen by golden files):

    chimera(m):  id = (row * m + col) * 8 + shore * 4 + k
        row, col in [0, m); shore 0 couples vertically (row to row+1),
        shore 1 horizontally; k in [0, 4).

    pegasus(m):  id = ((u * m + w) * 12 + k) * (m - 1) + z
        u in {0, 1} (0 = vertical), w in [0, m), k in [0, 12), z in [0, m-1).
        Wires of track k start at parallel offset 12 z + offset_u(k), span 12
        units; offsets are [2]*4 + [6]*4 + [10]*4 for vertical wires and
        [6]*4 + [10]*4 + [2]*4 for horizontal ones.  Internal couplers join
        crossing wires, odd couplers join the twin tracks (2a, 2a+1),
        external couplers join consecutive colinear wires.

    zephyr(m), tile t = 4:  id = (((u * (2m + 1) + w) * 4 + k) * 2 + j) * m + z
        u in {0, 1}, w in [0, 2m], k in [0, 4), j in {0, 1}, z in [0, m).
        A wire spans 2t = 8 units starting at 4 * (2z + j); the two j-rails
        interleave half-overlapped, so internal couplers join each wire to
        both rail wires over each crossing position, odd couplers join
        overlapping colinear wires, external couplers join end-to-end wires
        on the same rail.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

__all__ = [
    "Topology",
    "chimera",
    "pegasus",
    "zephyr",
    "apply_defects",
    "save_topology",
    "load_topology",
]

PEGASUS_OFFSETS = (
    (2, 2, 2, 2, 6, 6, 6, 6, 10, 10, 10, 10),  # vertical (u = 0)
    (6, 6, 6, 6, 10, 10, 10, 10, 2, 2, 2, 2),  # horizontal (u = 1)
)
ZEPHYR_TILE = 4


def _canon(a: int, b: int) -> tuple[int, int]:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class Topology:
    family: str
    shape: tuple[int, ...]
    qubits: frozenset[int]
    couplers: frozenset[tuple[int, int]]
    defect_qubits: frozenset[int] = field(default_factory=frozenset)
    defect_couplers: frozenset[tuple[int, int]] = field(default_factory=frozenset)

    def __post_init__(self):
        for a, b in self.couplers:
            if a >= b:
                raise ValueError(f"coupler ({a}, {b}) not canonical")
            if a not in self.qubits or b not in self.qubits:
                raise ValueError(f"coupler ({a}, {b}) references a missing qubit")

    @cached_property
    def adjacency(self) -> dict[int, frozenset[int]]:
        nbrs: dict[int, set[int]] = {q: set() for q in self.qubits}
        for a, b in self.couplers:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return {q: frozenset(s) for q, s in nbrs.items()}

    def has_coupler(self, a: int, b: int) -> bool:
        return _canon(a, b) in self.couplers

    @property
    def num_qubits(self) -> int:
        return len(self.qubits)

    @property
    def num_couplers(self) -> int:
        return len(self.couplers)


def chimera(m: int) -> Topology:
    """m x m grid of K_{4,4} unit cells: 8 m^2 qubits, 16 m^2 + 8 m (m-1) couplers."""
    if m < 1:
        raise ValueError("chimera size must be >= 1")

    def qid(row: int, col: int, shore: int, k: int) -> int:
        return (row * m + col) * 8 + shore * 4 + k

    couplers = set()
    for row in range(m):
        for col in range(m):
            for a in range(4):
                for b in range(4):
                    couplers.add(_canon(qid(row, col, 0, a), qid(row, col, 1, b)))
            if row + 1 < m:
                for k in range(4):
                    couplers.add(_canon(qid(row, col, 0, k), qid(row + 1, col, 0, k)))
            if col + 1 < m:
                for k in range(4):
                    couplers.add(_canon(qid(row, col, 1, k), qid(row, col + 1, 1, k)))
    qubits = frozenset(range(8 * m * m))
    return Topology("chimera", (m,), qubits, frozenset(couplers))


def chimera_qubit_id(m: int, row: int, col: int, shore: int, k: int) -> int:
    """Linear id of a Chimera qubit (documented convention)."""
    return (row * m + col) * 8 + shore * 4 + k


def pegasus(m: int) -> Topology:
    """Full Pegasus lattice P_m: 24 m (m - 1) qubits."""
    if m < 2:
        raise ValueError("pegasus size must be >= 2")
    off_v, off_h = PEGASUS_OFFSETS

    def qid(u: int, w: int, k: int, z: int) -> int:
        return ((u * m + w) * 12 + k) * (m - 1) + z

    couplers = set()
    for u in (0, 1):
        for w in range(m):
            for k in range(12):
                for z in range(m - 1):
                    if z + 1 < m - 1:
                        couplers.add(_canon(qid(u, w, k, z), qid(u, w, k, z + 1)))  # external
                    if k % 2 == 0:
                        couplers.add(_canon(qid(u, w, k, z), qid(u, w, k + 1, z)))  # odd twin
    # internal couplers: vertical wire (0,w,k,z) spans perpendicular positions
    # [12 z + off_v[k], 12 z + off_v[k] + 12) and sits at position 12 w + k.
    for w in range(m):
        for k in range(12):
            x = 12 * w + k
            for z in range(m - 1):
                y0 = 12 * z + off_v[k]
                for y in range(y0, y0 + 12):
                    wh, kh = divmod(y, 12)
                    if not 0 <= wh < m:
                        continue
                    zh = (x - off_h[kh]) // 12
                    if 0 <= zh < m - 1:
                        couplers.add(_canon(qid(0, w, k, z), qid(1, wh, kh, zh)))
    qubits = frozenset(range(24 * m * (m - 1)))
    return Topology("pegasus", (m,), qubits, frozenset(couplers))


def zephyr(m: int) -> Topology:
    """Full Zephyr lattice Z_m with tile parameter t = 4: 16 m (2m + 1) qubits."""
    if m < 1:
        raise ValueError("zephyr size must be >= 1")
    t = ZEPHYR_TILE
    span = 2 * m + 1

    def qid(u: int, w: int, k: int, j: int, z: int) -> int:
        return (((u * span + w) * t + k) * 2 + j) * m + z

    couplers = set()
    for u in (0, 1):
        for w in range(span):
            for k in range(t):
                for z in range(m):
                    if z + 1 < m:
                        couplers.add(_canon(qid(u, w, k, 0, z), qid(u, w, k, 0, z + 1)))  # external
                        couplers.add(_canon(qid(u, w, k, 1, z), qid(u, w, k, 1, z + 1)))
                    couplers.add(_canon(qid(u, w, k, 0, z), qid(u, w, k, 1, z)))  # odd
                    if z + 1 < m:
                        couplers.add(_canon(qid(u, w, k, 1, z), qid(u, w, k, 0, z + 1)))  # odd
    # internal: vertical wire (0,w,k,j,z) sits at position 4 w + k and spans
    # parallel positions [4 (2z + j), 4 (2z + j) + 8); crossing horizontal
    # wires are the two rail wires covering that position on each track.
    for w in range(span):
        for k in range(t):
            x = t * w + k
            for j in (0, 1):
                for z in range(m):
                    y0 = t * (2 * z + j)
                    for y in range(y0, y0 + 2 * t):
                        wh, kh = divmod(y, t)
                        if not 0 <= wh < span:
                            continue
                        for seg in (w - 1, w):  # 2 z' + j' covering position x
                            if not 0 <= seg < 2 * m:
                                continue
                            zh, jh = seg // 2, seg % 2
                            couplers.add(
                                _canon(qid(0, w, k, j, z), qid(1, wh, kh, jh, zh))
                            )
    qubits = frozenset(range(16 * m * span))
    return Topology("zephyr", (m,), qubits, frozenset(couplers))


def apply_defects(t: Topology, remove_qubits=(), remove_couplers=()) -> Topology:
    """Remove qubits (with their incident couplers) and individual couplers."""
    dead = set(remove_qubits)
    unknown = dead - t.qubits
    if unknown:
        raise ValueError(f"unknown qubits: {sorted(unknown)}")
    dead_couplers = {_canon(a, b) for a, b in remove_couplers}
    unknown_c = dead_couplers - t.couplers
    if unknown_c:
        raise ValueError(f"unknown couplers: {sorted(unknown_c)}")
    incident = {c for c in t.couplers if c[0] in dead or c[1] in dead}
    return Topology(
        family=t.family,
        shape=t.shape,
        qubits=frozenset(t.qubits - dead),
        couplers=frozenset(t.couplers - dead_couplers - incident),
        defect_qubits=frozenset(t.defect_qubits | dead),
        defect_couplers=frozenset(t.defect_couplers | dead_couplers | incident),
    )


def build(family: str, m: int) -> Topology:
    """Construct an ideal lattice by family name."""
    if family == "chimera":
        return chimera(m)
    if family == "pegasus":
        return pegasus(m)
    if family == "zephyr":
        return zephyr(m)
    raise ValueError(f"unknown topology family {family!r}")


def save_topology(t: Topology, path) -> None:
    doc = {
        "schema_version": 1,
        "family": t.family,
        "shape": list(t.shape),
        "qubits": sorted(t.qubits),
        "couplers": sorted([a, b] for a, b in t.couplers),
        "defect_qubits": sorted(t.defect_qubits),
        "defect_couplers": sorted([a, b] for a, b in t.defect_couplers),
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_topology(path) -> Topology:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON (line {exc.lineno}): {exc.msg}") from exc
    try:
        family = doc["family"]
        shape = tuple(int(x) for x in doc["shape"])
        qubits = frozenset(int(q) for q in doc["qubits"])
        couplers = frozenset(_canon(int(a), int(b)) for a, b in doc["couplers"])
        defect_qubits = frozenset(int(q) for q in doc.get("defect_qubits", []))
        defect_couplers = frozenset(
            _canon(int(a), int(b)) for a, b in doc.get("defect_couplers", [])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed topology document: {exc}") from exc
    try:
        return Topology(family, shape, qubits, couplers, defect_qubits, defect_couplers)
    except ValueError as exc:
        raise ValueError(f"{path}: {exc}") from exc
