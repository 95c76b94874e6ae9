"""Command line for training and mechanism comparison on exported datasets."""

from __future__ import annotations

import argparse
import sys

from .compare import compare_mechanisms, write_report
from .train import GinConfig, SplitSpec, grid_search, train_and_eval


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(prog="gnn-harness")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train once and report test accuracy/AUC")
    p.add_argument("--in", dest="input", required=True, help="TUDataset directory")
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--hidden", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-2)
    p.add_argument("--dropout", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--split-seed", type=int, default=0)
    p.add_argument("--fractions", default="0.65,0.15,0.20")
    p.add_argument("--grid", choices=["none", "desk", "full"], default="none")

    p = sub.add_parser("compare", help="accuracy ordering across exported runs")
    p.add_argument("--run", action="append", required=True,
                   metavar="NAME=DIR", help="repeatable: run name and dataset dir")
    p.add_argument("--layers", type=int, default=2)
    p.add_argument("--hidden", type=int, default=32)
    p.add_argument("--lr", type=float, default=1e-2)
    p.add_argument("--dropout", type=float, default=0.5)
    p.add_argument("--epochs", type=int, default=500)
    p.add_argument("--split-seeds", default="0,1,2,3,4")
    p.add_argument("--fractions", default="0.65,0.15,0.20")
    p.add_argument("--out", required=True)

    args = parser.parse_args(argv)
    fractions = tuple(float(x) for x in args.fractions.split(","))

    if args.command == "train":
        split = SplitSpec(*fractions, seed=args.split_seed)
        if args.grid != "none":
            cfg = grid_search(args.input, split, full=args.grid == "full",
                              dropout=args.dropout)
            print(f"grid pick: layers={cfg.num_layers} hidden={cfg.hidden} lr={cfg.lr}")
        else:
            cfg = GinConfig(num_layers=args.layers, hidden=args.hidden,
                            lr=args.lr, dropout=args.dropout, epochs=args.epochs)
        acc, auc = train_and_eval(args.input, cfg, split)
        print(f"accuracy {acc:.4f}  auc {auc:.4f}")
        return 0

    runs = {}
    for spec in args.run:
        name, _, path = spec.partition("=")
        if not path:
            parser.error(f"--run expects NAME=DIR, got {spec!r}")
        runs[name] = path
    cfg = GinConfig(num_layers=args.layers, hidden=args.hidden, lr=args.lr,
                    dropout=args.dropout, epochs=args.epochs)
    seeds = [int(s) for s in args.split_seeds.split(",")]
    results = compare_mechanisms(runs, cfg, seeds, fractions)
    write_report(results, args.out)
    for r in sorted(results, key=lambda r: -r.accuracy_mean):
        print(f"{r.name:16s} acc {r.accuracy_mean:.4f} +- {r.accuracy_std:.4f}   "
              f"auc {r.auc_mean:.4f} +- {r.auc_std:.4f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
