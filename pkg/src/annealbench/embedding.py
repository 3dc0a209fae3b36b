"""Clique minor embeddings: construction (Chimera), validation, translation
of logical Isings onto hardware with chain couplings, and unembedding of
physical reads with broken-chain detection.

Broken chains are never repaired: a read whose chain disagrees internally is
flagged and scores zero downstream.  No majority vote.
"""

from __future__ import annotations

import json
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .metrics import LogicalSample
from .models import IsingModel
from .topology import Topology, build as build_topology, chimera

__all__ = [
    "Embedding",
    "PhysicalProblem",
    "ValidationReport",
    "chimera_clique_embedding",
    "validate_embedding",
    "chain_stats",
    "embed_problem",
    "unembed",
    "save_embedding",
    "load_embedding",
]


@dataclass(frozen=True)
class Embedding:
    """Map from logical variable to an ordered chain of physical qubits."""

    chains: tuple[tuple[int, ...], ...]
    target: Topology

    @property
    def size(self) -> int:
        return len(self.chains)

    def chain(self, var: int) -> tuple[int, ...]:
        return self.chains[var]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[str, ...]

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class PhysicalProblem:
    """A logical Ising translated onto hardware.

    `model` is indexed by dense physical slots; `qubits[slot]` gives the
    hardware qubit id.  `scale` is the factor that was applied to bring the
    largest coefficient magnitude to 1, and `noise_sigma` the standard
    deviation of the Gaussian perturbation added after rescaling.
    """

    model: IsingModel
    qubits: tuple[int, ...]
    embedding: Embedding
    chain_strength: float
    scale: float
    noise_sigma: float

    @property
    def slot_of(self) -> dict[int, int]:
        return {q: s for s, q in enumerate(self.qubits)}


def chimera_clique_embedding(n: int, m: int) -> Embedding:
    """Standard triangular K_n embedding on chimera(m); every chain has
    length ceil(n/4) + 1.

    Variable i = 4g + a follows a bent path: the horizontal qubits of cell
    row g, columns 0..g (shore 1, index a), turning at the diagonal cell
    into the vertical qubits of column g, rows g..ceil(n/4)-1 (shore 0,
    index a).
    """
    if n < 1:
        raise ValueError("clique size must be positive")
    if n > 4 * m:
        raise ValueError(f"K_{n} does not fit on chimera({m}): need n <= {4 * m}")
    k = -(-n // 4)  # cells per side of the block
    topo = chimera(m)

    def qid(row: int, col: int, shore: int, idx: int) -> int:
        return (row * m + col) * 8 + shore * 4 + idx

    chains = []
    for i in range(n):
        g, a = divmod(i, 4)
        path = [qid(g, c, 1, a) for c in range(g + 1)]
        path += [qid(r, g, 0, a) for r in range(g, k)]
        chains.append(tuple(path))
    return Embedding(chains=tuple(chains), target=topo)


def _required_pairs(logical, size: int):
    if isinstance(logical, int):
        return ((i, j) for i in range(logical) for j in range(i + 1, logical))
    return iter(logical.edges)


def validate_embedding(e: Embedding, logical) -> ValidationReport:
    """Check disjointness, chain connectivity, and inter-chain couplers.

    `logical` is either a Graph (its edges are the required interactions) or
    an integer N for an all-to-all K_N embedding.
    """
    topo = e.target
    violations: list[str] = []

    owner: dict[int, int] = {}
    for var, chain in enumerate(e.chains):
        if not chain:
            violations.append(f"chain {var} is empty")
            continue
        for q in chain:
            if q not in topo.qubits:
                violations.append(f"chain {var} uses missing qubit {q}")
            elif q in owner and owner[q] != var:
                violations.append(f"chains {owner[q]} and {var} overlap at qubit {q}")
            else:
                owner[q] = var

    adj = topo.adjacency
    for var, chain in enumerate(e.chains):
        members = set(chain)
        if not members or any(q not in topo.qubits for q in chain):
            continue
        seen = {chain[0]}
        queue = deque([chain[0]])
        while queue:
            q = queue.popleft()
            for nb in adj[q]:
                if nb in members and nb not in seen:
                    seen.add(nb)
                    queue.append(nb)
        if seen != members:
            violations.append(f"disconnected chain {var}")

    chain_sets = [set(c) for c in e.chains]
    logical_n = logical if isinstance(logical, int) else logical.n
    if logical_n != len(e.chains):
        violations.append(
            f"embedding has {len(e.chains)} chains but logical problem has {logical_n} variables"
        )
    else:
        for i, j in _required_pairs(logical, logical_n):
            coupled = any(
                topo.has_coupler(a, b) for a in chain_sets[i] for b in chain_sets[j]
            )
            if not coupled:
                violations.append(f"no coupler between chains {i} and {j}")

    return ValidationReport(ok=not violations, violations=tuple(violations))


def chain_stats(e: Embedding) -> tuple[int, float, int]:
    """(min, mean, max) over chain lengths."""
    if not e.chains:
        raise ValueError("embedding has no chains")
    lengths = [len(c) for c in e.chains]
    return min(lengths), sum(lengths) / len(lengths), max(lengths)


def _inter_chain_couplers(e: Embedding) -> dict[tuple[int, int], list[tuple[int, int]]]:
    """All topology couplers joining each pair of chains."""
    owner: dict[int, int] = {}
    for var, chain in enumerate(e.chains):
        for q in chain:
            owner[q] = var
    pairs: dict[tuple[int, int], list[tuple[int, int]]] = {}
    for a, b in e.target.couplers:
        va = owner.get(a)
        vb = owner.get(b)
        if va is None or vb is None or va == vb:
            continue
        key = (va, vb) if va < vb else (vb, va)
        pairs.setdefault(key, []).append((a, b))
    return pairs


def _intra_chain_couplers(e: Embedding) -> list[tuple[int, int]]:
    out = []
    for chain in e.chains:
        members = set(chain)
        for q in chain:
            for nb in e.target.adjacency[q]:
                if nb in members and q < nb:
                    out.append((q, nb))
    return out


def embed_problem(
    logical: IsingModel,
    e: Embedding,
    t: Topology,
    chain_strength: float,
    noise_sigma: float = 0.0,
    seed: int = 0,
) -> PhysicalProblem:
    """Translate a logical Ising onto the hardware graph.

    Rules, applied in order:
      (a) each field h_i is split uniformly over the chain's qubits;
      (b) each coupling J_ij is split uniformly over every available
          physical coupler between chains i and j;
      (c) every coupler internal to a chain is set to -chain_strength;
      (d) the whole physical model is rescaled by 1 / max|coefficient| so
          the largest magnitude is 1 (the fixed programmable range);
      (e) independent Gaussian noise of standard deviation noise_sigma is
          added to every post-rescaling coefficient (one draw per job).

    Deterministic for a fixed seed.
    """
    if chain_strength <= 0:
        raise ValueError("chain strength must be positive")
    if logical.n != len(e.chains):
        raise ValueError(
            f"logical model has {logical.n} variables, embedding has {len(e.chains)} chains"
        )
    if e.target is not t and (e.target.qubits != t.qubits or e.target.couplers != t.couplers):
        e = Embedding(chains=e.chains, target=t)

    qubits = tuple(q for chain in e.chains for q in chain)
    slot = {q: s for s, q in enumerate(qubits)}

    h_phys = np.zeros(len(qubits))
    j_phys: dict[tuple[int, int], float] = {}

    for var, chain in enumerate(e.chains):
        hv = logical.h.get(var, 0.0)
        if hv:
            share = hv / len(chain)
            for q in chain:
                h_phys[slot[q]] += share

    inter = _inter_chain_couplers(e)
    for (i, j), w in logical.j.items():
        if w == 0.0:
            continue
        couplers = inter.get((i, j))
        if not couplers:
            raise ValueError(f"no coupler available for logical edge ({i}, {j})")
        share = w / len(couplers)
        for a, b in couplers:
            key = (slot[a], slot[b]) if slot[a] < slot[b] else (slot[b], slot[a])
            j_phys[key] = j_phys.get(key, 0.0) + share

    for a, b in _intra_chain_couplers(e):
        key = (slot[a], slot[b]) if slot[a] < slot[b] else (slot[b], slot[a])
        j_phys[key] = j_phys.get(key, 0.0) - chain_strength

    max_mag = max(
        [abs(v) for v in j_phys.values()] + [float(np.max(np.abs(h_phys))) if len(qubits) else 0.0]
    )
    scale = 1.0 / max_mag if max_mag > 0 else 1.0
    h_phys = h_phys * scale
    j_phys = {k: v * scale for k, v in j_phys.items()}

    if noise_sigma < 0:
        raise ValueError("noise_sigma must be >= 0")
    if noise_sigma > 0:
        rng = np.random.default_rng(seed)
        h_phys = h_phys + rng.normal(0.0, noise_sigma, len(h_phys))
        keys = sorted(j_phys)
        noise = rng.normal(0.0, noise_sigma, len(keys))
        j_phys = {k: j_phys[k] + dn for k, dn in zip(keys, noise)}

    model = IsingModel(
        n=len(qubits),
        h={i: float(v) for i, v in enumerate(h_phys) if v != 0.0},
        j=j_phys,
        offset=0.0,
    )
    return PhysicalProblem(
        model=model,
        qubits=qubits,
        embedding=e,
        chain_strength=chain_strength,
        scale=scale,
        noise_sigma=noise_sigma,
    )


def unembed(samples, e: Embedding) -> list[LogicalSample]:
    """Collapse physical reads to logical samples; flag broken chains.

    A chain is unanimous when all its qubits agree; any disagreement marks
    the whole read broken (the spin pattern of every broken chain is kept,
    in chain order, for run-structure analysis).  No repair is applied.
    """
    slot = {q: s for s, q in enumerate(samples.qubits)}
    chain_slots = [np.array([slot[q] for q in chain]) for chain in e.chains]
    out: list[LogicalSample] = []
    reads = np.asarray(samples.reads)
    for row in reads:
        assignment: list[int] = []
        broken_chains: list[tuple[int, tuple[int, ...]]] = []
        for var, slots in enumerate(chain_slots):
            vals = row[slots]
            first = int(vals[0])
            if np.all(vals == first):
                assignment.append(first)
            else:
                broken_chains.append((var, tuple(int(v) for v in vals)))
        if broken_chains:
            out.append(
                LogicalSample(
                    assignment=None,
                    broken=True,
                    broken_chains=tuple(broken_chains),
                )
            )
        else:
            out.append(
                LogicalSample(
                    assignment=tuple(assignment), broken=False, broken_chains=()
                )
            )
    return out


def save_embedding(e: Embedding, path) -> None:
    doc = {
        "schema_version": 1,
        "family": e.target.family,
        "shape": list(e.target.shape),
        "chains": {str(i): list(chain) for i, chain in enumerate(e.chains)},
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh)


def load_embedding(path, target: Topology) -> Embedding:
    """Load a clique embedding and enforce every invariant against `target`.

    The file must name the same topology family and shape, chains must be
    disjoint and connected, and every pair of chains must share a coupler
    (files store all-to-all embeddings).
    """
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValueError(f"{path}: not valid JSON (line {exc.lineno}): {exc.msg}") from exc
    try:
        family = doc["family"]
        shape = tuple(int(x) for x in doc["shape"])
        raw = doc["chains"]
        chains = tuple(
            tuple(int(q) for q in raw[str(i)]) for i in range(len(raw))
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"{path}: malformed embedding document: {exc}") from exc
    if family != target.family or shape != tuple(target.shape):
        raise ValueError(
            f"{path}: embedding targets {family}{shape}, got {target.family}{tuple(target.shape)}"
        )
    e = Embedding(chains=chains, target=target)
    report = validate_embedding(e, len(chains))
    if not report.ok:
        detail = "; ".join(report.violations[:5])
        raise ValueError(f"{path}: invalid embedding: {detail}")
    return e
