"""Mechanism comparison: repeated-split accuracy/AUC ordering report."""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .data import Dataset, load_tudataset
from .train import GinConfig, SplitSpec, train_and_eval


@dataclass(frozen=True)
class RunResult:
    name: str
    accuracies: tuple[float, ...]
    aucs: tuple[float, ...]

    @property
    def accuracy_mean(self) -> float:
        return float(np.mean(self.accuracies))

    @property
    def accuracy_std(self) -> float:
        return float(np.std(self.accuracies, ddof=1)) if len(self.accuracies) > 1 else 0.0

    @property
    def auc_mean(self) -> float:
        vals = [a for a in self.aucs if not np.isnan(a)]
        return float(np.mean(vals)) if vals else float("nan")

    @property
    def auc_std(self) -> float:
        vals = [a for a in self.aucs if not np.isnan(a)]
        return float(np.std(vals, ddof=1)) if len(vals) > 1 else 0.0


def compare_mechanisms(runs: Mapping[str, "str | Path"], cfg: GinConfig,
                       split_seeds: Sequence[int],
                       fractions: tuple[float, float, float] = (0.65, 0.15, 0.20),
                       ) -> list[RunResult]:
    """Train on every exported run with shared split seeds.

    All runs must cover the same collection: same graph count and identical
    label sequences, so a split seed selects the same train/val/test graphs
    everywhere.
    """
    datasets: dict[str, Dataset] = {
        name: load_tudataset(path) for name, path in runs.items()}
    reference = next(iter(datasets.values()))
    for name, ds in datasets.items():
        if len(ds) != len(reference) or not np.array_equal(ds.labels, reference.labels):
            raise ValueError(f"run {name!r} does not match the reference collection")

    results = []
    for name, ds in datasets.items():
        accs = []
        aucs = []
        for seed in split_seeds:
            split = SplitSpec(*fractions, seed=seed)
            acc, auc = train_and_eval(ds, cfg, split)
            accs.append(acc)
            aucs.append(auc)
        results.append(RunResult(name, tuple(accs), tuple(aucs)))
    return results


def write_report(results: Sequence[RunResult], out_dir: "str | Path") -> None:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    with open(out_dir / "ordering.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["run", "accuracy_mean", "accuracy_std", "auc_mean", "auc_std",
                    "splits"])
        for r in results:
            w.writerow([r.name, f"{r.accuracy_mean:.4f}", f"{r.accuracy_std:.4f}",
                        f"{r.auc_mean:.4f}", f"{r.auc_std:.4f}", len(r.accuracies)])
    summary = {
        r.name: {
            "accuracy_mean": r.accuracy_mean,
            "accuracy_std": r.accuracy_std,
            "auc_mean": r.auc_mean,
            "auc_std": r.auc_std,
            "accuracies": list(r.accuracies),
            "aucs": list(r.aucs),
        }
        for r in results
    }
    (out_dir / "summary.json").write_text(json.dumps(summary, indent=1, sort_keys=True) + "\n")
