"""Grid-search driver: configuration, cell execution, JSONL persistence,
CSV exports, and the fair-sampling / success-table analyses.

A run is a cross product (graph x chain strength x annealing time).  Every
cell derives its own 64-bit seed from the master seed and the cell key, so
a completed run is reproducible from the config alone and an interrupted
run resumes by skipping cells already present in the output file.

Config files are flat ``key = value`` text; '#' starts a comment.  Keys and
defaults are documented in ExperimentConfig and the README.
"""

from __future__ import annotations

import hashlib
import json
import sys
import threading
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

from .embedding import (
    Embedding,
    chimera_clique_embedding,
    embed_problem,
    load_embedding,
    unembed,
    validate_embedding,
)
from .graphs import Graph, density, density_bin, generate_gnp
from .metrics import (
    ExperimentRecord,
    FairSamplingIneligible,
    batch_objectives,
    chain_break_proportion,
    fair_sampling_entropy,
    mean_approximation_ratio,
    time_to_solution,
)
from .models import max_clique_qubo, max_cut_ising, qubo_to_ising
from .oracles import (
    MAX_CUT_EXACT_THRESHOLD,
    all_maximum_cliques,
    max_cut_exact,
    reference_cut,
)
from .sampler import (
    DEFAULT_SWEEPS_PER_US,
    SamplerParams,
    map_anneal_time,
    sample,
)
from .topology import build as build_topology

__all__ = [
    "ExperimentConfig",
    "parse_config",
    "run_grid",
    "load_records",
    "export_curves",
    "export_tts",
    "fair_sampling_report",
    "success_table",
    "derive_seed",
]

SCHEMA_VERSION = 1

CURVES_HEADER = "problem,annealing_time_us,chain_strength,density_bin,mean_ar,mean_cbp,n_graphs"
TTS_HEADER = "graph_id,density,annealing_time_us,chain_strength,tts_seconds"
TTS_OPTIMAL_HEADER = "graph_id,density,tts_seconds,annealing_time_us,chain_strength"

# ground-state identity counts are stored only when the optimum set is small
MAX_STORED_OPTIMA = 8


@dataclass
class ExperimentConfig:
    problem: str = "clique"
    graphs: int = 20
    n: int = 52
    p_min: float = 0.05
    p_max: float = 0.95
    topology: str = "chimera"
    topology_size: int = 16
    embedding: str = "generated"  # or a path to an embedding JSON file
    chain_strengths: tuple[float, ...] = (0.5, 1.0, 2.0, 4.0, 8.0, 12.0)
    annealing_times_us: tuple[float, ...] = (1.0, 10.0, 100.0, 1000.0, 2000.0)
    num_reads: int = 1000
    sweeps_per_us: float = DEFAULT_SWEEPS_PER_US
    beta_hot: float = 0.1
    beta_cold: float = 10.0
    noise_sigma: float = 0.03
    seed: int = 0
    out: str = "records.jsonl"
    cut_oracle_threshold: int = MAX_CUT_EXACT_THRESHOLD
    reference_restarts: int = 200
    reference_budget: int = 50

    def __post_init__(self):
        if self.problem not in ("clique", "cut"):
            raise ValueError(f"unknown problem kind {self.problem!r}")
        if self.graphs < 1 or self.n < 2 or self.num_reads < 1:
            raise ValueError("counts must be positive")
        if not self.chain_strengths or not self.annealing_times_us:
            raise ValueError("grids must be nonempty")
        if any(c <= 0 for c in self.chain_strengths):
            raise ValueError("chain strengths must be positive")
        if any(t <= 0 for t in self.annealing_times_us):
            raise ValueError("annealing times must be positive")


_CONFIG_TYPES = {
    "problem": str,
    "graphs": int,
    "n": int,
    "p_min": float,
    "p_max": float,
    "topology": str,
    "topology_size": int,
    "embedding": str,
    "num_reads": int,
    "sweeps_per_us": float,
    "beta_hot": float,
    "beta_cold": float,
    "noise_sigma": float,
    "seed": int,
    "out": str,
    "cut_oracle_threshold": int,
    "reference_restarts": int,
    "reference_budget": int,
}


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat key = value config format."""
    kwargs = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"config line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key == "schema_version":
            if int(value) != SCHEMA_VERSION:
                raise ValueError(f"unsupported config schema_version {value}")
        elif key in ("chain_strengths", "annealing_times_us"):
            kwargs[key] = tuple(float(v) for v in value.split(","))
        elif key in _CONFIG_TYPES:
            kwargs[key] = _CONFIG_TYPES[key](value)
        else:
            raise ValueError(f"config line {lineno}: unknown key {key!r}")
    return ExperimentConfig(**kwargs)


def derive_seed(master: int, *parts) -> int:
    """Documented 64-bit mix: blake2b of the joined cell key, keyed by the
    master seed, truncated to 63 bits (keeps seeds int64-safe)."""
    payload = "|".join(str(p) for p in parts).encode()
    digest = hashlib.blake2b(payload, digest_size=8, key=str(master).encode()).digest()
    return int.from_bytes(digest, "little") & 0x7FFFFFFFFFFFFFFF


def _cell_key(graph_id: str, cs: float, at: float) -> tuple[str, float, float]:
    return (graph_id, float(cs), float(at))


def instance_set(cfg: ExperimentConfig) -> list[tuple[str, Graph, float]]:
    """The run's graphs: per-index density uniform in (p_min, p_max), each
    generated from its own derived seed."""
    import numpy as np

    out = []
    for idx in range(cfg.graphs):
        rng = np.random.default_rng(derive_seed(cfg.seed, "density", idx))
        p = float(rng.uniform(cfg.p_min, cfg.p_max))
        g = generate_gnp(cfg.n, p, seed=derive_seed(cfg.seed, "graph", idx))
        out.append((f"g{idx:04d}", g, density(g)))
    return out


def _prepare_optimum(cfg: ExperimentConfig, g: Graph, graph_id: str):
    """(optimum, exact, optima-key list or None) for one instance."""
    if cfg.problem == "clique":
        size, cliques = all_maximum_cliques(g)
        keys = None
        if len(cliques) <= MAX_STORED_OPTIMA:
            keys = sorted("+".join(str(v) for v in sorted(c)) for c in cliques)
        return size, True, keys
    if g.n <= cfg.cut_oracle_threshold:
        cut, _witness = max_cut_exact(g, cfg.cut_oracle_threshold)
        return cut, True, None
    cut, _exact = reference_cut(
        g,
        budget=cfg.reference_budget,
        restarts=cfg.reference_restarts,
        seed=derive_seed(cfg.seed, "refcut", graph_id),
    )
    return cut, False, None


def _run_cell(cfg, topo, emb, graph_id, g, dens, optimum, exact, optima_keys, cs, at):
    import numpy as np

    cell_seed = derive_seed(cfg.seed, "cell", graph_id, cs, at)
    if cfg.problem == "clique":
        logical = qubo_to_ising(max_clique_qubo(g))
    else:
        logical = max_cut_ising(g)
    problem = embed_problem(
        logical,
        emb,
        topo,
        chain_strength=cs,
        noise_sigma=cfg.noise_sigma,
        seed=derive_seed(cfg.seed, "noise", graph_id, cs, at),
    )
    num_sweeps = map_anneal_time(at, cfg.sweeps_per_us)
    params = SamplerParams(
        num_reads=cfg.num_reads,
        num_sweeps=num_sweeps,
        beta_hot=cfg.beta_hot,
        beta_cold=cfg.beta_cold,
        seed=cell_seed,
    )
    ss = sample(problem, params)
    logical_samples = unembed(ss, emb)

    mean_ar = mean_approximation_ratio(logical_samples, cfg.problem, g, optimum)
    cbp = chain_break_proportion(logical_samples)

    gsp = None
    tts = None
    counts = None
    if exact:
        objectives = batch_objectives(logical_samples, cfg.problem, g)
        target = -float(optimum) if cfg.problem == "clique" else float(optimum)
        hit_mask = objectives == target
        gsp = float(np.sum(hit_mask)) / len(logical_samples)
        tts = time_to_solution(ss.elapsed, cfg.num_reads, gsp) if ss.elapsed > 0 else None
        if optima_keys is not None:
            counts = {k: 0 for k in optima_keys}
            for s, hit in zip(logical_samples, hit_mask):
                if not hit:
                    continue
                members = "+".join(
                    str(i) for i, v in enumerate(s.assignment) if v == 1
                )
                if members in counts:
                    counts[members] += 1
    return ExperimentRecord(
        graph_id=graph_id,
        density=dens,
        density_bin=density_bin(dens),
        problem=cfg.problem,
        topology=f"{cfg.topology}{cfg.topology_size}",
        chain_strength=float(cs),
        annealing_time_us=float(at),
        num_sweeps=num_sweeps,
        num_reads=cfg.num_reads,
        mean_ar=mean_ar,
        chain_break_proportion=cbp,
        gsp=gsp,
        tts_seconds=tts,
        elapsed_seconds=ss.elapsed,
        seed=cell_seed,
        optimum=int(optimum),
        optimum_exact=exact,
        ground_state_counts=counts,
    )


def run_grid(cfg: ExperimentConfig, threads: int = 1, quiet: bool = True) -> list[ExperimentRecord]:
    """Execute the whole grid, appending one JSONL line per finished cell.

    Cells already present in the output file are skipped (crash-resumable);
    embedding or validation failures produce an error line for that cell
    and the run continues.
    """
    topo = build_topology(cfg.topology, cfg.topology_size)
    if cfg.embedding == "generated":
        if cfg.topology != "chimera":
            raise ValueError(
                "generated embeddings are only available for chimera; "
                "supply an embedding file for other families"
            )
        emb = chimera_clique_embedding(cfg.n, cfg.topology_size)
    else:
        emb = load_embedding(cfg.embedding, topo)
    if emb.size != cfg.n:
        raise ValueError(f"embedding has {emb.size} chains, config wants n={cfg.n}")
    report = validate_embedding(emb, cfg.n)
    if not report.ok:
        raise ValueError(f"embedding invalid: {report.violations[0]}")

    instances = instance_set(cfg)
    prepared = {
        graph_id: _prepare_optimum(cfg, g, graph_id) for graph_id, g, _ in instances
    }

    done: set = set()
    existing, _errors, _warnings = load_records(cfg.out, missing_ok=True)
    for r in existing:
        done.add(_cell_key(r.graph_id, r.chain_strength, r.annealing_time_us))

    work = []
    for graph_id, g, dens in instances:
        optimum, exact, keys = prepared[graph_id]
        for cs in cfg.chain_strengths:
            for at in cfg.annealing_times_us:
                if _cell_key(graph_id, cs, at) in done:
                    continue
                work.append((graph_id, g, dens, optimum, exact, keys, cs, at))

    lock = threading.Lock()
    records: list[ExperimentRecord] = list(existing)

    def execute(item):
        graph_id, g, dens, optimum, exact, keys, cs, at = item
        try:
            rec = _run_cell(cfg, topo, emb, graph_id, g, dens, optimum, exact, keys, cs, at)
        except Exception as exc:  # noqa: BLE001 - cell failures must not kill the run
            line = json.dumps(
                {
                    "schema_version": SCHEMA_VERSION,
                    "error": str(exc),
                    "graph_id": graph_id,
                    "chain_strength": float(cs),
                    "annealing_time_us": float(at),
                }
            )
            with lock:
                with open(cfg.out, "a", encoding="utf-8") as fh:
                    fh.write(line + "\n")
            if not quiet:
                print(f"cell {graph_id}/{cs}/{at} failed: {exc}", file=sys.stderr)
            return None
        with lock:
            with open(cfg.out, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(asdict(rec)) + "\n")
            records.append(rec)
        if not quiet:
            print(
                f"{rec.graph_id} cs={rec.chain_strength} t={rec.annealing_time_us}us "
                f"ar={rec.mean_ar:.3f} cbp={rec.chain_break_proportion:.3f}"
            )
        return rec

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(execute, work))
    else:
        for item in work:
            execute(item)

    records.sort(key=lambda r: (r.graph_id, r.chain_strength, r.annealing_time_us))
    return records


def load_records(path, missing_ok: bool = False):
    """Read a JSONL record file.

    Returns (records, error_cells, warnings); malformed lines become
    warnings with their line numbers and are otherwise skipped.
    """
    records: list[ExperimentRecord] = []
    errors: list[dict] = []
    warnings: list[str] = []
    try:
        fh = open(path, "r", encoding="utf-8")
    except FileNotFoundError:
        if missing_ok:
            return records, errors, warnings
        raise
    with fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                doc = json.loads(line)
            except json.JSONDecodeError as exc:
                warnings.append(f"{path}:{lineno}: unparseable record ({exc.msg})")
                continue
            if "error" in doc:
                errors.append(doc)
                continue
            try:
                doc.pop("schema_version", None)
                records.append(ExperimentRecord(**doc))
            except (TypeError, ValueError) as exc:
                warnings.append(f"{path}:{lineno}: bad record ({exc})")
    return records, errors, warnings


def export_curves(records_path, out_path) -> list[str]:
    """Plot-ready long-format CSV of density-bin mean curves.

    Returns the warning list from reading the records file.
    """
    from .metrics import aggregate_by_density_bin

    records, _errors, warnings = load_records(records_path)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(CURVES_HEADER + "\n")
        if records:
            for pt in aggregate_by_density_bin(records):
                fh.write(
                    f"{pt.problem},{pt.annealing_time_us:g},{pt.chain_strength:g},"
                    f"{pt.density_bin},{pt.mean_ar!r},{pt.mean_cbp!r},{pt.n_graphs}\n"
                )
    return warnings


def export_tts(records_path, out_path) -> list[str]:
    """Per-cell TTS rows (cells with undefined TTS are omitted) plus a
    sibling *_optimal.csv with each graph's best grid point."""
    import os

    records, _errors, warnings = load_records(records_path)
    rows = [r for r in records if r.tts_seconds is not None]
    rows.sort(key=lambda r: (r.graph_id, r.annealing_time_us, r.chain_strength))
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(TTS_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r.graph_id},{r.density!r},{r.annealing_time_us:g},"
                f"{r.chain_strength:g},{r.tts_seconds!r}\n"
            )
    best: dict[str, ExperimentRecord] = {}
    for r in rows:
        cur = best.get(r.graph_id)
        if cur is None or r.tts_seconds < cur.tts_seconds:
            best[r.graph_id] = r
    root, ext = os.path.splitext(str(out_path))
    optimal_path = f"{root}_optimal{ext or '.csv'}"
    with open(optimal_path, "w", encoding="utf-8") as fh:
        fh.write(TTS_OPTIMAL_HEADER + "\n")
        for graph_id in sorted(best):
            r = best[graph_id]
            fh.write(
                f"{r.graph_id},{r.density!r},{r.tts_seconds!r},"
                f"{r.annealing_time_us:g},{r.chain_strength:g}\n"
            )
    return warnings


def fair_sampling_report(records: list[ExperimentRecord], min_ground: int = 30):
    """Entropy of the sampled ground-state distribution, per graph.

    For each graph the grid cell with the highest GSP is analyzed.  Rows are
    (graph_id, k, total_ground_reads, entropy_bits or None, note); graphs
    failing the eligibility rules carry the ineligibility note instead of a
    value.
    """
    by_graph: dict[str, list[ExperimentRecord]] = {}
    for r in records:
        if r.problem != "clique" or r.ground_state_counts is None:
            continue
        by_graph.setdefault(r.graph_id, []).append(r)
    rows = []
    for graph_id in sorted(by_graph):
        cells = by_graph[graph_id]
        pick = max(cells, key=lambda r: (r.gsp or 0.0, -r.chain_strength, -r.annealing_time_us))
        counts = pick.ground_state_counts
        k = len(counts)
        total = sum(counts.values())
        try:
            value = fair_sampling_entropy(counts)
            rows.append((graph_id, k, total, value, ""))
        except FairSamplingIneligible as exc:
            rows.append((graph_id, k, total, None, str(exc)))
    return rows


def success_table(records: list[ExperimentRecord]):
    """Per-graph flag: did any read in any grid cell hit the exact optimum."""
    from .metrics import success_any

    by_graph: dict[str, list[ExperimentRecord]] = {}
    for r in records:
        by_graph.setdefault(r.graph_id, []).append(r)
    return [(graph_id, success_any(grp)) for graph_id, grp in sorted(by_graph.items())]
