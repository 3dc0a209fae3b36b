"""Command-line front end.

Subcommands: generate, topology, embed, run, analyze, export.  Exit code 0
on success; failures print one `error: ...` line to stderr and exit 1
(argparse usage errors exit 2).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import harness
from .embedding import chain_stats, chimera_clique_embedding, load_embedding, save_embedding, validate_embedding
from .graphs import density, generate_gnp, load_graph, save_graph
from .oracles import all_maximum_cliques, max_cut_exact, InstanceTooLargeError
from .topology import build as build_topology, load_topology, save_topology


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=0, help="master seed")
    parser.add_argument("--config", type=Path, help="config file path")
    parser.add_argument("--out", type=Path, help="output path")
    parser.add_argument("--threads", type=int, default=1, help="worker threads")
    parser.add_argument("--quiet", action="store_true", help="suppress progress output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="annealbench",
        description="Benchmark harness for minor-embedded clique/cut sampling",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate random problem graphs")
    _add_common(p)
    p.add_argument("--n", type=int, default=52)
    p.add_argument("--count", type=int, default=1)
    p.add_argument("--p", type=float, help="edge probability (default: uniform per graph)")
    p.add_argument("--p-min", type=float, default=0.05)
    p.add_argument("--p-max", type=float, default=0.95)

    p = sub.add_parser("topology", help="emit or validate hardware lattices")
    _add_common(p)
    p.add_argument("--family", choices=["chimera", "pegasus", "zephyr"])
    p.add_argument("--size", type=int)
    p.add_argument("--check", type=Path, help="validate a topology JSON file")

    p = sub.add_parser("embed", help="generate, load, or check clique embeddings")
    _add_common(p)
    p.add_argument("--family", choices=["chimera", "pegasus", "zephyr"], default="chimera")
    p.add_argument("--size", type=int, default=16)
    p.add_argument("--n", type=int, help="clique size to generate (chimera only)")
    p.add_argument("--load", type=Path, help="embedding JSON file to load")
    p.add_argument("--check", action="store_true", help="validate and exit nonzero on failure")
    p.add_argument("--stats", action="store_true", help="print chain-length stats")

    p = sub.add_parser("run", help="execute a grid search from a config file")
    _add_common(p)

    p = sub.add_parser("analyze", help="oracles, success table, fair sampling")
    _add_common(p)
    p.add_argument("--exact", type=Path, help="graph edge-list file: print oracle values")
    p.add_argument("--success-table", type=Path, help="records JSONL: per-graph success flags")
    p.add_argument("--fair-sampling", type=Path, help="records JSONL: entropy report")
    p.add_argument("--min-ground", type=int, default=30)

    p = sub.add_parser("export", help="write analysis CSVs from a records file")
    _add_common(p)
    p.add_argument("--curves", type=Path, help="records JSONL for density-bin curves")
    p.add_argument("--tts", type=Path, help="records JSONL for TTS tables")

    return parser


def _cmd_generate(args) -> int:
    import numpy as np

    out_dir = Path(args.out) if args.out else Path(".")
    out_dir.mkdir(parents=True, exist_ok=True)
    for idx in range(args.count):
        if args.p is not None:
            p = args.p
        else:
            rng = np.random.default_rng(harness.derive_seed(args.seed, "density", idx))
            p = float(rng.uniform(args.p_min, args.p_max))
        g = generate_gnp(args.n, p, seed=harness.derive_seed(args.seed, "graph", idx))
        path = out_dir / f"g{idx:04d}.edges"
        save_graph(g, path)
        if not args.quiet:
            print(f"{path} n={g.n} m={g.num_edges} density={density(g):.4f}")
    return 0


def _cmd_topology(args) -> int:
    if args.check:
        t = load_topology(args.check)
        size = "x".join(str(s) for s in t.shape)
        print(f"{t.family}({size}): {t.num_qubits} qubits, {t.num_couplers} couplers")
        return 0
    if not args.family or not args.size:
        raise ValueError("topology needs --family and --size (or --check FILE)")
    t = build_topology(args.family, args.size)
    if args.out:
        save_topology(t, args.out)
    print(f"{t.family}({args.size}): {t.num_qubits} qubits, {t.num_couplers} couplers")
    return 0


def _cmd_embed(args) -> int:
    topo = build_topology(args.family, args.size)
    if args.load:
        emb = load_embedding(args.load, topo)
    elif args.n:
        if args.family != "chimera":
            raise ValueError("embedding generation is implemented for chimera only")
        emb = chimera_clique_embedding(args.n, args.size)
    else:
        raise ValueError("embed needs --load FILE or --n SIZE")
    report = validate_embedding(emb, emb.size)
    if args.stats or not args.check:
        lo, mean, hi = chain_stats(emb)
        print(f"{emb.size} chains on {args.family}({args.size}): lengths (min {lo}, mean {mean:.2f}, max {hi})")
    if args.check:
        if not report.ok:
            for v in report.violations[:10]:
                print(f"violation: {v}", file=sys.stderr)
            return 1
        print("embedding valid")
    if args.out:
        save_embedding(emb, args.out)
    return 0


def _cmd_run(args) -> int:
    if not args.config:
        raise ValueError("run needs --config FILE")
    cfg = harness.parse_config(Path(args.config).read_text(encoding="utf-8"))
    if args.out:
        cfg.out = str(args.out)
    records = harness.run_grid(cfg, threads=args.threads, quiet=args.quiet)
    if not args.quiet:
        print(f"{len(records)} records in {cfg.out}")
    return 0


def _cmd_analyze(args) -> int:
    did = False
    if args.exact:
        g = load_graph(args.exact)
        size, cliques = all_maximum_cliques(g)
        print(f"maximum clique: size {size}, {len(cliques)} optima")
        try:
            cut, _ = max_cut_exact(g)
            print(f"maximum cut: {cut} (exact)")
        except InstanceTooLargeError as exc:
            print(f"maximum cut: {exc}")
        did = True
    if args.success_table:
        records, _, warnings = harness.load_records(args.success_table)
        for w in warnings:
            print(w, file=sys.stderr)
        table = harness.success_table(records)
        hits = sum(1 for _, ok in table if ok)
        for graph_id, ok in table:
            print(f"{graph_id} {'yes' if ok else 'no'}")
        print(f"solved {hits}/{len(table)}")
        did = True
    if args.fair_sampling:
        records, _, warnings = harness.load_records(args.fair_sampling)
        for w in warnings:
            print(w, file=sys.stderr)
        for graph_id, k, total, value, note in harness.fair_sampling_report(
            records, min_ground=args.min_ground
        ):
            if value is None:
                print(f"{graph_id} k={k} ground={total} ineligible ({note})")
            else:
                print(f"{graph_id} k={k} ground={total} entropy={value:.4f}")
        did = True
    if not did:
        raise ValueError("analyze needs --exact, --success-table, or --fair-sampling")
    return 0


def _cmd_export(args) -> int:
    if not args.curves and not args.tts:
        raise ValueError("export needs --curves RECORDS or --tts RECORDS")
    if args.curves:
        out = args.out or Path("curves.csv")
        warnings = harness.export_curves(args.curves, out)
        for w in warnings:
            print(w, file=sys.stderr)
        if not args.quiet:
            print(f"wrote {out}")
    if args.tts:
        out = args.out or Path("tts.csv")
        warnings = harness.export_tts(args.tts, out)
        for w in warnings:
            print(w, file=sys.stderr)
        if not args.quiet:
            print(f"wrote {out}")
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "topology": _cmd_topology,
    "embed": _cmd_embed,
    "run": _cmd_run,
    "analyze": _cmd_analyze,
    "export": _cmd_export,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ValueError, OSError, InstanceTooLargeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
