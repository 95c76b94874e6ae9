"""Dataset ingestion and export.

Two on-disk formats are supported:

* TUDataset: ``<name>_A.txt`` (one edge per line, "row, col", 1-based global
  node ids), ``<name>_graph_indicator.txt`` (line k holds the 1-based graph
  id of global node k), ``<name>_graph_labels.txt`` (line g holds the integer
  label of graph g).
* Edge list: one "i j" pair per line, 0-based, '#' comment lines ignored.
"""

from __future__ import annotations

import logging
from pathlib import Path

from .graphs import Graph, GraphCollection

logger = logging.getLogger(__name__)


class DatasetFormatError(ValueError):
    """A dataset file is missing or structurally invalid."""


class ParseError(ValueError):
    """A single line failed to parse; message carries the line number."""


def _read_lines(path: Path) -> list[str]:
    if not path.is_file():
        raise DatasetFormatError(f"missing dataset file: {path}")
    return path.read_text().splitlines()


def parse_tudataset(dataset_dir: "str | Path", name: str) -> GraphCollection:
    """Load a TUDataset directory into per-graph 0-based sparse graphs.

    Every node mentioned in the indicator file is kept, even if isolated.
    Self-loop lines are dropped and repeated directed lines deduplicated;
    both are tallied in the returned collection's warning count.
    """
    dataset_dir = Path(dataset_dir)
    indicator = _read_lines(dataset_dir / f"{name}_graph_indicator.txt")
    adjacency = _read_lines(dataset_dir / f"{name}_A.txt")
    label_lines = _read_lines(dataset_dir / f"{name}_graph_labels.txt")

    # global node -> (graph id, local 0-based index)
    graph_of: list[int] = []
    local_of: list[int] = []
    sizes: dict[int, int] = {}
    for lineno, raw in enumerate(indicator, start=1):
        if not raw.strip():
            continue
        try:
            gid = int(raw)
        except ValueError:
            raise ParseError(f"{name}_graph_indicator.txt:{lineno}: not an integer: {raw!r}")
        graph_of.append(gid)
        local_of.append(sizes.get(gid, 0))
        sizes[gid] = sizes.get(gid, 0) + 1
    if not sizes:
        raise DatasetFormatError(f"{name}_graph_indicator.txt declares no nodes")
    n_nodes = len(graph_of)

    edge_sets: dict[int, set[tuple[int, int]]] = {gid: set() for gid in sizes}
    seen_directed: set[tuple[int, int]] = set()
    warnings = 0
    for lineno, raw in enumerate(adjacency, start=1):
        line = raw.strip()
        if not line:
            continue
        parts = line.replace(",", " ").split()
        if len(parts) != 2:
            raise ParseError(f"{name}_A.txt:{lineno}: expected 'row, col', got {raw!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"{name}_A.txt:{lineno}: non-integer node id: {raw!r}")
        if not (1 <= u <= n_nodes and 1 <= v <= n_nodes):
            raise ParseError(
                f"{name}_A.txt:{lineno}: node id out of range 1..{n_nodes}: {raw!r}"
            )
        if u == v:
            warnings += 1
            continue
        if (u, v) in seen_directed:
            warnings += 1
            continue
        seen_directed.add((u, v))
        gu, gv = graph_of[u - 1], graph_of[v - 1]
        if gu != gv:
            raise ParseError(
                f"{name}_A.txt:{lineno}: edge joins graphs {gu} and {gv}"
            )
        a, b = local_of[u - 1], local_of[v - 1]
        edge_sets[gu].add((min(a, b), max(a, b)))

    labels: list[int] = []
    for lineno, raw in enumerate(label_lines, start=1):
        if not raw.strip():
            continue
        try:
            labels.append(int(raw))
        except ValueError:
            raise ParseError(f"{name}_graph_labels.txt:{lineno}: not an integer: {raw!r}")
    gids = sorted(sizes)
    if len(labels) != len(gids):
        raise DatasetFormatError(
            f"{name}: {len(labels)} labels for {len(gids)} graphs"
        )

    graphs = tuple(Graph(sizes[gid], edge_sets[gid]) for gid in gids)
    if warnings:
        logger.warning("%s: dropped %d duplicate/self-loop edge lines", name, warnings)
    return GraphCollection(graphs=graphs, labels=tuple(labels), name=name, warnings=warnings)


def write_tudataset(collection: GraphCollection, out_dir: "str | Path", name: str) -> None:
    """Write a collection in TUDataset format with canonical ordering.

    Undirected edges are emitted in both orientations, sorted by global
    (row, col), so identical collections always produce identical bytes.
    """
    if collection.labels is None:
        raise DatasetFormatError(f"{name}: cannot export a collection without labels")
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    a_lines: list[str] = []
    indicator: list[str] = []
    offset = 0
    for gidx, g in enumerate(collection.graphs, start=1):
        indicator.extend([str(gidx)] * g.n)
        directed_pairs = set()
        for i, j in g.edges:
            directed_pairs.add((offset + i + 1, offset + j + 1))
            if not g.directed:
                directed_pairs.add((offset + j + 1, offset + i + 1))
        a_lines.extend(f"{u}, {v}" for u, v in sorted(directed_pairs))
        offset += g.n

    (out_dir / f"{name}_A.txt").write_text("\n".join(a_lines) + ("\n" if a_lines else ""))
    (out_dir / f"{name}_graph_indicator.txt").write_text("\n".join(indicator) + "\n")
    (out_dir / f"{name}_graph_labels.txt").write_text(
        "\n".join(str(l) for l in collection.labels) + "\n"
    )


def parse_edge_list(path: "str | Path", n: int, directed: bool = False) -> Graph:
    """Read "i j" pairs (0-based); indices at or above n are rejected."""
    path = Path(path)
    if not path.is_file():
        raise DatasetFormatError(f"missing edge list: {path}")
    edges: set[tuple[int, int]] = set()
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(f"{path.name}:{lineno}: expected 'i j', got {raw!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"{path.name}:{lineno}: non-integer node index: {raw!r}")
        if not (0 <= i < n and 0 <= j < n):
            raise ParseError(f"{path.name}:{lineno}: index out of range for n={n}: {raw!r}")
        if i == j:
            raise ParseError(f"{path.name}:{lineno}: self-loop not allowed: {raw!r}")
        edges.add((i, j))
    return Graph(n, edges, directed=directed)


def write_edge_list(g: Graph, path: "str | Path") -> None:
    """Write a graph as sorted "i j" lines with an "# n=<n>" header."""
    lines = [f"# n={g.n}", f"# directed={int(g.directed)}"]
    lines.extend(f"{i} {j}" for i, j in sorted(g.edges))
    Path(path).write_text("\n".join(lines) + "\n")


def read_edge_list_header(path: "str | Path") -> tuple[int | None, bool]:
    """Recover (n, directed) from write_edge_list header comments, if present."""
    n: int | None = None
    directed = False
    with open(path) as fh:
        for raw in fh:
            line = raw.strip()
            if not line.startswith("#"):
                break
            body = line.lstrip("#").strip()
            if body.startswith("n="):
                n = int(body[2:])
            elif body.startswith("directed="):
                directed = bool(int(body[9:]))
    return n, directed


def load_edge_list_auto(path: "str | Path", n: int | None = None,
                        directed: bool | None = None) -> Graph:
    """Edge list loader that falls back to header metadata, then max index + 1."""
    header_n, header_directed = read_edge_list_header(path)
    if n is None:
        n = header_n
    if directed is None:
        directed = header_directed
    if n is None:
        max_idx = -1
        for raw in Path(path).read_text().splitlines():
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            i, j = line.split()
            max_idx = max(max_idx, int(i), int(j))
        n = max_idx + 1
    return parse_edge_list(path, n=n, directed=directed)
