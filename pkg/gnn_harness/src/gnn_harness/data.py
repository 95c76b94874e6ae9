"""TUDataset ingestion for graph classification.

Reads the exported on-disk format directly (edge file with 1-based global
"row, col" lines, graph indicator, graph labels); this harness has no code
dependency on the obfuscation tool that produced the files.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch


@dataclass(frozen=True)
class GraphRecord:
    """One graph: node count and a directed edge index (both orientations)."""

    n: int
    edge_index: torch.Tensor  # shape [2, E], int64

    def permuted(self, perm: np.ndarray) -> "GraphRecord":
        """Relabel nodes by `perm` (new index of old node i is perm[i])."""
        mapping = torch.as_tensor(perm, dtype=torch.int64)
        return GraphRecord(self.n, mapping[self.edge_index])


@dataclass(frozen=True)
class Dataset:
    name: str
    graphs: tuple[GraphRecord, ...]
    labels: np.ndarray  # int64, one per graph

    @property
    def num_classes(self) -> int:
        return int(np.unique(self.labels).size)

    def __len__(self) -> int:
        return len(self.graphs)


def _find_name(dataset_dir: Path) -> str:
    a_files = sorted(dataset_dir.glob("*_A.txt"))
    if not a_files:
        raise FileNotFoundError(f"no *_A.txt in {dataset_dir}")
    return a_files[0].name[: -len("_A.txt")]


def load_tudataset(dataset_dir: "str | Path", name: str | None = None) -> Dataset:
    dataset_dir = Path(dataset_dir)
    if name is None:
        name = _find_name(dataset_dir)
    indicator = np.loadtxt(dataset_dir / f"{name}_graph_indicator.txt", dtype=np.int64,
                           ndmin=1)
    labels_raw = np.loadtxt(dataset_dir / f"{name}_graph_labels.txt", dtype=np.int64,
                            ndmin=1)
    a_path = dataset_dir / f"{name}_A.txt"
    if a_path.read_text().strip():
        pairs = np.loadtxt(a_path, dtype=np.int64, delimiter=",", ndmin=2)
    else:
        pairs = np.empty((0, 2), dtype=np.int64)

    graph_ids = np.unique(indicator)
    sizes = {int(g): int((indicator == g).sum()) for g in graph_ids}
    # local 0-based index of each global node within its graph
    local = np.zeros(indicator.size, dtype=np.int64)
    counters: dict[int, int] = {}
    for idx, g in enumerate(indicator):
        g = int(g)
        local[idx] = counters.get(g, 0)
        counters[g] = local[idx] + 1

    edges_by_graph: dict[int, list[tuple[int, int]]] = {int(g): [] for g in graph_ids}
    for u, v in pairs:
        gu = int(indicator[u - 1])
        edges_by_graph[gu].append((int(local[u - 1]), int(local[v - 1])))

    graphs = []
    for g in sorted(sizes):
        edges = edges_by_graph[g]
        if edges:
            ei = torch.tensor(edges, dtype=torch.int64).t().contiguous()
        else:
            ei = torch.empty((2, 0), dtype=torch.int64)
        graphs.append(GraphRecord(sizes[g], ei))

    # classes may be labeled arbitrarily (e.g. -1/1); remap to 0..C-1
    classes, labels = np.unique(labels_raw, return_inverse=True)
    if labels.size != len(graphs):
        raise ValueError(f"{name}: {labels.size} labels for {len(graphs)} graphs")
    return Dataset(name=name, graphs=tuple(graphs), labels=labels.astype(np.int64))


def shuffled_labels(dataset: Dataset, seed: int) -> Dataset:
    """Same graphs with labels permuted uniformly; chance-level control."""
    rng = np.random.default_rng(seed)
    return Dataset(dataset.name, dataset.graphs, rng.permutation(dataset.labels))


class Batch:
    """Concatenation of several graphs with per-node graph assignment."""

    def __init__(self, graphs: list[GraphRecord], labels: np.ndarray):
        sizes = [g.n for g in graphs]
        offsets = np.concatenate([[0], np.cumsum(sizes[:-1])]).astype(np.int64)
        self.num_graphs = len(graphs)
        self.num_nodes = int(sum(sizes))
        self.x = torch.ones((self.num_nodes, 1))  # constant initial feature
        self.graph_id = torch.repeat_interleave(
            torch.arange(self.num_graphs), torch.tensor(sizes))
        parts = [g.edge_index + off for g, off in zip(graphs, offsets) if g.edge_index.numel()]
        self.edge_index = (torch.cat(parts, dim=1) if parts
                           else torch.empty((2, 0), dtype=torch.int64))
        self.y = torch.as_tensor(labels, dtype=torch.int64)
