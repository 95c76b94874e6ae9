"""Command-line entry point for reproducible obfuscation runs.

Exit codes: 0 success, 2 usage error, 3 data/format error, 4 degree gate
violated under --check. Every command writes a run manifest as its last
output; `dprr replay` re-runs a manifest and reproduces the data files
byte-for-byte (timing columns of bench output excepted).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import __version__
from .analysis import (bench_scaling, check_degree_gates, degree_report,
                       write_degree_csv, write_scaling_csv)
from .graphs import GraphCollection, generate_ba
from .io import (DatasetFormatError, ParseError, load_edge_list_auto,
                 parse_tudataset, write_edge_list, write_tudataset)
from .mechanisms import relationship_dp_level
from .noisy import load_noisy_graph, save_noisy_graph
from .protocol import PrivacyConfig, run_protocol
from .rng import RngStream

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_DATA = 3
EXIT_GATE = 4

PAD = 5  # zero padding for per-graph output filenames

CLI_MECHANISMS = {
    "dprr": "dprr",
    "rr": "rr",
    "locallap": "local_lap",
    "nonpriv-part": "nonpriv_part",
    "nonpriv-full": "nonpriv_full",
}


def _default_seed() -> int:
    return int(os.environ.get("DPRR_SEED", "0"))


def _write_manifest(out_dir: Path, command: str, args: dict, extra: dict | None = None) -> None:
    manifest = {
        "tool": "dprr",
        "version": __version__,
        "command": command,
        "args": args,
    }
    if extra:
        manifest.update(extra)
    (out_dir / "manifest.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=1) + "\n"
    )


def _graph_filename(index: int) -> str:
    return f"graph_{index:0{PAD}d}"


def _load_collection(path: Path, fmt: str, name: str | None,
                     directed: bool = False) -> GraphCollection:
    if fmt == "auto":
        if path.is_dir() and list(path.glob("*_A.txt")):
            fmt = "tudataset"
        else:
            fmt = "edgelist"
    if fmt == "tudataset":
        if name is None:
            a_files = sorted(path.glob("*_A.txt"))
            if not a_files:
                raise DatasetFormatError(f"no *_A.txt in {path}")
            name = a_files[0].name[:-len("_A.txt")]
        return parse_tudataset(path, name)
    # edge-list file or directory of graph_*.edges
    if path.is_dir():
        files = sorted(path.glob("graph_*.edges"))
        if not files:
            raise DatasetFormatError(f"no graph_*.edges files in {path}")
        graphs = tuple(load_edge_list_auto(f, directed=directed or None) for f in files)
        labels = None
        labels_file = path / "labels.txt"
        if labels_file.is_file():
            labels = tuple(int(l) for l in labels_file.read_text().split())
        return GraphCollection(graphs=graphs, labels=labels, name=path.name)
    g = load_edge_list_auto(path, directed=directed or None)
    return GraphCollection(graphs=(g,), name=path.stem)


# ---------------------------------------------------------------------------
# commands


def cmd_generate(args: argparse.Namespace) -> int:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    m_values = args.m
    labels: list[int] = []
    index = 0
    for cls, m in enumerate(m_values):
        for _ in range(args.count):
            g = generate_ba(args.n, m, RngStream(args.seed, (index,)))
            write_edge_list(g, out / f"{_graph_filename(index)}.edges")
            labels.append(cls)
            index += 1
    if len(m_values) > 1:
        (out / "labels.txt").write_text("\n".join(str(l) for l in labels) + "\n")
    _write_manifest(out, "generate", {
        "model": args.model, "n": args.n, "m": m_values, "count": args.count,
        "seed": args.seed, "out": str(out),
    }, {"graphs": index})
    print(f"wrote {index} graphs to {out}")
    return EXIT_OK


def cmd_obfuscate(args: argparse.Namespace) -> int:
    collection = _load_collection(Path(args.input), args.format, args.name,
                                  directed=args.directed)
    mechanism = CLI_MECHANISMS[args.mechanism]
    if mechanism == "local_lap" and any(g.directed for g in collection.graphs):
        print("error: locallap requires undirected input", file=sys.stderr)
        return EXIT_USAGE
    if mechanism == "nonpriv_part" and args.rho == 0:
        print("error: nonpriv-part requires --rho > 0", file=sys.stderr)
        return EXIT_USAGE
    n_max = args.n_max if args.n_max is not None else collection.max_nodes()
    role_seed = args.role_seed if args.role_seed is not None else args.seed

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    cfg = PrivacyConfig(
        mechanism=mechanism, epsilon=args.epsilon, alpha=args.alpha,
        rho=args.rho, role_seed=role_seed, n_max=n_max,
        symmetrize=args.symmetrize,
    )
    total_in = 0
    total_out = 0
    effective = None
    for gid, g in enumerate(collection.graphs):
        noisy = run_protocol(g, cfg, RngStream(args.seed, (gid,)), graph_id=gid)
        stem = _graph_filename(gid)
        save_noisy_graph(noisy, out / f"{stem}.edges", out / f"{stem}.meta.json",
                         include_user_meta=args.user_meta)
        total_in += g.num_edges()
        total_out += noisy.total_ones()
        effective = noisy.provenance.get("effective_epsilon")
    if collection.labels is not None:
        (out / "labels.txt").write_text(
            "\n".join(str(l) for l in collection.labels) + "\n")

    if mechanism == "rr" and total_out > 10 * max(1, total_in):
        print(f"warning: rr output has {total_out} ones for {total_in} input edges "
              "(dense quadratic-cost artifact)", file=sys.stderr)

    manifest_extra = {"n_max": n_max, "graphs": len(collection.graphs)}
    if effective is not None:
        manifest_extra["effective_epsilon"] = effective
        print(f"effective epsilon per private user: {effective:.6g}")
        if args.rho == 0 and not args.directed:
            print(f"relationship DP level (undirected, common setting): "
                  f"{relationship_dp_level(effective):.6g}")
    _write_manifest(out, "obfuscate", {
        "input": str(args.input), "format": args.format, "name": args.name,
        "mechanism": args.mechanism, "epsilon": args.epsilon,
        "alpha": args.alpha, "rho": args.rho, "symmetrize": args.symmetrize,
        "seed": args.seed, "role_seed": role_seed, "n_max": args.n_max,
        "directed": args.directed, "user_meta": args.user_meta,
        "out": str(out),
    }, manifest_extra)
    print(f"wrote {len(collection.graphs)} noisy graphs to {out}")
    return EXIT_OK


def cmd_stats(args: argparse.Namespace) -> int:
    collection = _load_collection(Path(args.input), args.format, args.name)
    if not (0 <= args.graph_index < len(collection.graphs)):
        print(f"error: graph index {args.graph_index} out of range", file=sys.stderr)
        return EXIT_USAGE
    g = collection.graphs[args.graph_index]
    mechanism = CLI_MECHANISMS[args.mechanism]
    cfg = PrivacyConfig(
        mechanism=mechanism, epsilon=args.epsilon, alpha=args.alpha,
        rho=args.rho, role_seed=args.seed, n_max=collection.max_nodes(),
    )
    report = degree_report(g, cfg, args.trials, RngStream(args.seed, (args.graph_index,)))

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_degree_csv(report, out / "degree_report.csv")
    violations = check_degree_gates(report)
    summary = {
        "mechanism": args.mechanism,
        "epsilon": args.epsilon,
        "trials": args.trials,
        "n": report.n,
        "n_max": report.n_max,
        "epsilon_1": report.epsilon_1,
        "mean_bias": report.mean_bias,
        "mean_abs_error": report.mean_abs_error,
        "variance_bound": report.variance_bound,
        "gate_violations": len(violations),
    }
    (out / "summary.json").write_text(json.dumps(summary, sort_keys=True, indent=1) + "\n")
    _write_manifest(out, "stats", {
        "input": str(args.input), "format": args.format, "name": args.name,
        "graph_index": args.graph_index, "mechanism": args.mechanism,
        "epsilon": args.epsilon, "alpha": args.alpha, "rho": args.rho,
        "trials": args.trials, "seed": args.seed, "check": args.check,
        "out": str(out),
    })
    print(f"mean bias {report.mean_bias:+.4f}, mean |error| {report.mean_abs_error:.4f}")
    if args.check and violations:
        for v in violations[:20]:
            print(f"gate violation: {v}", file=sys.stderr)
        print(f"{len(violations)} gate violations", file=sys.stderr)
        return EXIT_GATE
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    mechanisms = [CLI_MECHANISMS[m] for m in args.mechanisms.split(",")]
    base = None
    if args.gamma_list:
        sizes = [float(x) for x in args.gamma_list.split(",")]
        mode = "subsample"
        collection = _load_collection(Path(args.input), args.format, args.name)
        base = collection.graphs[args.graph_index]
    else:
        sizes = [int(x) for x in args.sizes.split(",")]
        mode = "ba"
    if sizes != sorted(sizes):
        print("error: sizes must be ascending", file=sys.stderr)
        return EXIT_USAGE
    records = bench_scaling(
        mode, sizes, mechanisms, trials=args.trials, seed=args.seed, m=args.m,
        base=base, epsilon=args.epsilon, measure_memory=args.memory,
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_scaling_csv(records, out / "bench.csv")
    _write_manifest(out, "bench", {
        "sizes": args.sizes, "gamma_list": args.gamma_list, "m": args.m,
        "mechanisms": args.mechanisms, "trials": args.trials,
        "epsilon": args.epsilon, "seed": args.seed, "memory": args.memory,
        "input": args.input, "format": args.format, "name": args.name,
        "graph_index": args.graph_index, "out": str(out),
    })
    for r in records:
        print(f"{r.mechanism} n={r.n}: edges {r.output_edges:.0f}, {r.seconds:.4f}s")
    return EXIT_OK


def cmd_export(args: argparse.Namespace) -> int:
    run_dir = Path(args.input)
    manifest_path = run_dir / "manifest.json"
    symmetrize_mode = "none"
    if manifest_path.is_file():
        manifest = json.loads(manifest_path.read_text())
        symmetrize_mode = manifest.get("args", {}).get("symmetrize", "none")

    edge_files = sorted(run_dir.glob("graph_*.edges"))
    if not edge_files:
        raise DatasetFormatError(f"no graph_*.edges files in {run_dir}")
    labels_file = run_dir / "labels.txt"
    if not labels_file.is_file():
        raise DatasetFormatError(
            f"{run_dir}: labels.txt required to export a TUDataset collection")
    labels = tuple(int(l) for l in labels_file.read_text().split())

    if symmetrize_mode == "none":
        print("warning: run was not symmetrized; exporting the union view",
              file=sys.stderr)
    graphs = []
    for f in edge_files:
        meta = f.parent / (f.name[:-len(".edges")] + ".meta.json")
        if meta.is_file():
            noisy = load_noisy_graph(f, meta)
            graphs.append(noisy.to_graph("union"))
        else:
            # plain edge lists load as undirected, which already is the union view
            graphs.append(load_edge_list_auto(f))
    if len(labels) != len(graphs):
        raise DatasetFormatError(
            f"{run_dir}: {len(labels)} labels for {len(graphs)} graphs")
    collection = GraphCollection(graphs=tuple(graphs), labels=labels, name=args.dataset_name)

    out = Path(args.out)
    write_tudataset(collection, out, args.dataset_name)
    _write_manifest(out, "export", {
        "input": str(args.input), "export_format": args.export_format,
        "dataset_name": args.dataset_name, "out": str(out),
    })
    print(f"exported {len(graphs)} graphs to {out}")
    return EXIT_OK


def cmd_replay(args: argparse.Namespace) -> int:
    manifest = json.loads(Path(args.manifest).read_text())
    stored = dict(manifest["args"])
    if args.out:
        stored["out"] = args.out
    handler = _HANDLERS[manifest["command"]]
    return handler(argparse.Namespace(**stored))


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dprr",
        description="Edge-LDP graph obfuscation: degree-preserving randomized "
                    "response, baselines, and analysis tools.",
    )
    parser.add_argument("--version", action="version", version=f"dprr {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate synthetic graphs")
    p.add_argument("--model", choices=["ba"], default="ba")
    p.add_argument("--n", type=int, required=True, help="nodes per graph")
    p.add_argument("--m", type=int, action="append", required=True,
                   help="edges per new node; repeat for one class per value")
    p.add_argument("--count", type=int, default=1, help="graphs per class")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("obfuscate", help="run the one-round protocol on a collection")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=["auto", "tudataset", "edgelist"], default="auto")
    p.add_argument("--name", default=None, help="TUDataset name prefix")
    p.add_argument("--mechanism", choices=sorted(CLI_MECHANISMS), required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--symmetrize", choices=["none", "union", "intersection"],
                   default="none")
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--role-seed", type=int, default=None,
                   help="fix role assignment independently of --seed")
    p.add_argument("--n-max", type=int, default=None,
                   help="override the collection-wide max node count")
    p.add_argument("--directed", action="store_true")
    p.add_argument("--user-meta", action="store_true",
                   help="include per-user d*/q in the metadata sidecars")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_obfuscate)

    p = sub.add_parser("stats", help="degree-preservation report over repeated runs")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--format", choices=["auto", "tudataset", "edgelist"], default="auto")
    p.add_argument("--name", default=None)
    p.add_argument("--graph-index", type=int, default=0)
    p.add_argument("--mechanism", choices=sorted(CLI_MECHANISMS), required=True)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--alpha", type=float, default=0.9)
    p.add_argument("--rho", type=float, default=0.0)
    p.add_argument("--trials", type=int, required=True)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--check", action="store_true",
                   help="exit 4 if the bias/variance gates are violated")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_stats)

    p = sub.add_parser("bench", help="obfuscation scaling benchmark")
    p.add_argument("--sizes", default=None, help="ascending node counts, e.g. 1000,2000,4000")
    p.add_argument("--m", type=int, default=3)
    p.add_argument("--gamma-list", default=None,
                   help="ascending sampling rates for dataset subsampling")
    p.add_argument("--in", dest="input", default=None)
    p.add_argument("--format", choices=["auto", "tudataset", "edgelist"], default="auto")
    p.add_argument("--name", default=None)
    p.add_argument("--graph-index", type=int, default=0)
    p.add_argument("--mechanisms", default="dprr,rr")
    p.add_argument("--trials", type=int, default=3)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--seed", type=int, default=_default_seed())
    p.add_argument("--memory", action="store_true", help="trace allocation peaks")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("export", help="write a noisy run back in TUDataset format")
    p.add_argument("--in", dest="input", required=True, help="obfuscate output directory")
    p.add_argument("--format", dest="export_format", choices=["tudataset"],
                   default="tudataset")
    p.add_argument("--dataset-name", default="NOISY")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_export)

    p = sub.add_parser("replay", help="re-run a recorded manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None, help="redirect outputs to a new directory")
    p.set_defaults(func=cmd_replay)

    return parser


_HANDLERS = {
    "generate": cmd_generate,
    "obfuscate": cmd_obfuscate,
    "stats": cmd_stats,
    "bench": cmd_bench,
    "export": cmd_export,
}


def _validate(args: argparse.Namespace, parser: argparse.ArgumentParser) -> None:
    if args.command == "generate":
        if any(m < 1 for m in args.m) or args.n < 2 or any(m >= args.n for m in args.m):
            parser.error("need 1 <= m < n")
        if args.count < 1:
            parser.error("count must be at least 1")
    elif args.command == "stats":
        if args.trials < 1:
            parser.error("trials must be at least 1")
    elif args.command == "bench":
        if (args.sizes is None) == (args.gamma_list is None):
            parser.error("exactly one of --sizes and --gamma-list is required")
        if args.gamma_list and args.input is None:
            parser.error("--gamma-list requires --in")
        if args.trials < 1:
            parser.error("trials must be at least 1")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _validate(args, parser)
    try:
        return args.func(args)
    except (DatasetFormatError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
