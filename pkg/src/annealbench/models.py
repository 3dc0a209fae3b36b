"""QUBO / Ising problem models, builders for the two benchmark problems,
domain conversions, and energy evaluation.

Conventions:
    QUBO energy over x in {0,1}^n:
        E(x) = offset + sum_i linear[i] * x_i + sum_{i<j} quadratic[(i,j)] * x_i * x_j
    Ising energy over s in {-1,+1}^n:
        E(s) = offset + sum_i h[i] * s_i + sum_{i<j} j[(i,j)] * s_i * s_j

Quadratic keys are canonicalized with i < j; coefficients are 64-bit floats
(embedding and rescaling downstream produce non-integral values even though
the benchmark problems themselves are integral).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .graphs import Graph, complement

__all__ = [
    "QuboModel",
    "IsingModel",
    "max_clique_qubo",
    "max_cut_ising",
    "spin_binary_cut_objective",
    "qubo_to_ising",
    "ising_to_qubo",
    "evaluate",
    "model_to_json",
    "model_from_json",
]


def _canon_quadratic(quadratic: dict, n: int) -> dict[tuple[int, int], float]:
    canon: dict[tuple[int, int], float] = {}
    for (i, j), w in quadratic.items():
        if i == j:
            raise ValueError(f"quadratic key ({i}, {j}) has equal endpoints")
        if not (0 <= i < n and 0 <= j < n):
            raise ValueError(f"quadratic key ({i}, {j}) out of range for n={n}")
        key = (i, j) if i < j else (j, i)
        canon[key] = canon.get(key, 0.0) + float(w)
    return canon


def _check_linear(linear: dict, n: int) -> dict[int, float]:
    for i in linear:
        if not 0 <= i < n:
            raise ValueError(f"linear key {i} out of range for n={n}")
    return {int(i): float(w) for i, w in linear.items()}


@dataclass(frozen=True)
class QuboModel:
    """Quadratic polynomial over binary variables 0..n-1."""

    n: int
    linear: dict[int, float] = field(default_factory=dict)
    quadratic: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("model needs at least one variable")
        object.__setattr__(self, "linear", _check_linear(self.linear, self.n))
        object.__setattr__(self, "quadratic", _canon_quadratic(self.quadratic, self.n))

    def energy(self, x) -> float:
        x = _check_assignment(x, self.n, (0, 1))
        e = self.offset
        for i, w in self.linear.items():
            e += w * x[i]
        for (i, j), w in self.quadratic.items():
            e += w * x[i] * x[j]
        return e


@dataclass(frozen=True)
class IsingModel:
    """Linear fields h and couplings J over spin variables 0..n-1."""

    n: int
    h: dict[int, float] = field(default_factory=dict)
    j: dict[tuple[int, int], float] = field(default_factory=dict)
    offset: float = 0.0

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("model needs at least one variable")
        object.__setattr__(self, "h", _check_linear(self.h, self.n))
        object.__setattr__(self, "j", _canon_quadratic(self.j, self.n))

    def energy(self, s) -> float:
        s = _check_assignment(s, self.n, (-1, 1))
        e = self.offset
        for i, w in self.h.items():
            e += w * s[i]
        for (i, j_), w in self.j.items():
            e += w * s[i] * s[j_]
        return e


def _check_assignment(vec, n: int, domain: tuple[int, int]):
    arr = list(vec)
    if len(arr) != n:
        raise ValueError(f"assignment has length {len(arr)}, model has {n} variables")
    for v in arr:
        if v != domain[0] and v != domain[1]:
            raise ValueError(f"value {v!r} outside domain {domain}")
    return arr


def max_clique_qubo(g: Graph) -> QuboModel:
    """Maximum-clique QUBO: -1 on every vertex, +2 on every complement edge.

    The minimum energy is -w(G) (the maximum clique size), attained exactly
    at indicator vectors of maximum cliques.
    """
    comp = complement(g)
    return QuboModel(
        n=g.n,
        linear={i: -1.0 for i in range(g.n)},
        quadratic={(u, v): 2.0 for u, v in comp.edges},
        offset=0.0,
    )


def max_cut_ising(g: Graph) -> IsingModel:
    """Maximum-cut Ising: +1 coupling on every edge, no fields.

    For an assignment s, cut(s) = (|E| - energy(s)) / 2, so the minimum
    energy equals |E| - 2 * maxcut(G).
    """
    return IsingModel(
        n=g.n,
        h={},
        j={(u, v): 1.0 for u, v in g.edges},
        offset=0.0,
    )


def spin_binary_cut_objective(z, g: Graph) -> int:
    """Cut objective on boolean variables: sum over edges of (2 z_u - 1)(2 z_v - 1).

    Equals the max-cut Ising energy at s = 2 z - 1.
    """
    z = _check_assignment(z, g.n, (0, 1))
    total = 0
    for u, v in g.edges:
        total += (2 * z[u] - 1) * (2 * z[v] - 1)
    return total


def qubo_to_ising(q: QuboModel) -> IsingModel:
    """Energy-preserving change of variables x = (s + 1) / 2."""
    h: dict[int, float] = {}
    j: dict[tuple[int, int], float] = {}
    offset = q.offset
    for i, w in q.linear.items():
        h[i] = h.get(i, 0.0) + w / 2.0
        offset += w / 2.0
    for (a, b), w in q.quadratic.items():
        j[(a, b)] = j.get((a, b), 0.0) + w / 4.0
        h[a] = h.get(a, 0.0) + w / 4.0
        h[b] = h.get(b, 0.0) + w / 4.0
        offset += w / 4.0
    return IsingModel(n=q.n, h=h, j=j, offset=offset)


def ising_to_qubo(m: IsingModel) -> QuboModel:
    """Energy-preserving change of variables s = 2 x - 1."""
    linear: dict[int, float] = {}
    quadratic: dict[tuple[int, int], float] = {}
    offset = m.offset
    for i, w in m.h.items():
        linear[i] = linear.get(i, 0.0) + 2.0 * w
        offset -= w
    for (a, b), w in m.j.items():
        quadratic[(a, b)] = quadratic.get((a, b), 0.0) + 4.0 * w
        linear[a] = linear.get(a, 0.0) - 2.0 * w
        linear[b] = linear.get(b, 0.0) - 2.0 * w
        offset += w
    return QuboModel(n=m.n, linear=linear, quadratic=quadratic, offset=offset)


def evaluate(model, assignment) -> float:
    """Energy of an assignment in the model's own variable domain."""
    if isinstance(model, QuboModel):
        return model.energy(assignment)
    if isinstance(model, IsingModel):
        return model.energy(assignment)
    raise TypeError(f"not a model: {type(model).__name__}")


def all_energies(model) -> np.ndarray:
    """Energies of every assignment, indexed by the integer whose bit i is
    variable i (bit 0 -> x_0).  Spin models map bit=1 to s=+1.

    Exhaustive: costs O(2^n * n^2 / 64) via matrix products; intended for
    n <= ~20 oracle checks.
    """
    n = model.n
    if n > 24:
        raise ValueError("exhaustive enumeration limited to n <= 24")
    codes = np.arange(1 << n, dtype=np.uint32)
    bits = ((codes[:, None] >> np.arange(n, dtype=np.uint32)) & 1).astype(np.float64)
    if isinstance(model, QuboModel):
        vals = bits
        lin, quad = model.linear, model.quadratic
    else:
        vals = 2.0 * bits - 1.0
        lin, quad = model.h, model.j
    lvec = np.zeros(n)
    for i, w in lin.items():
        lvec[i] = w
    e = vals @ lvec + model.offset
    for (i, j), w in quad.items():
        e += w * vals[:, i] * vals[:, j]
    return e


def model_to_json(model) -> str:
    """Serialize a model with its domain tag ("binary" for QUBO, "spin" for Ising)."""
    if isinstance(model, QuboModel):
        domain, lin, quad = "binary", model.linear, model.quadratic
    elif isinstance(model, IsingModel):
        domain, lin, quad = "spin", model.h, model.j
    else:
        raise TypeError(f"not a model: {type(model).__name__}")
    doc = {
        "domain": domain,
        "n": model.n,
        "linear": {str(i): w for i, w in sorted(lin.items())},
        "quadratic": [[i, j, w] for (i, j), w in sorted(quad.items())],
        "offset": model.offset,
    }
    return json.dumps(doc)


def model_from_json(text: str):
    """Inverse of model_to_json."""
    doc = json.loads(text)
    try:
        domain = doc["domain"]
        n = int(doc["n"])
        linear = {int(k): float(v) for k, v in doc["linear"].items()}
        quadratic = {(int(i), int(j)): float(w) for i, j, w in doc["quadratic"]}
        offset = float(doc.get("offset", 0.0))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed model document: {exc}") from exc
    if domain == "binary":
        return QuboModel(n=n, linear=linear, quadratic=quadratic, offset=offset)
    if domain == "spin":
        return IsingModel(n=n, h=linear, j=quadratic, offset=offset)
    raise ValueError(f"unknown domain tag {domain!r}")
