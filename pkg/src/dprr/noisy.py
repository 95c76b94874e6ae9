"""Server-side noisy graph assembled from per-user noisy neighbor lists."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from pathlib import Path

from .graphs import Graph


@dataclass(frozen=True)
class UserMeta:
    """Per-user obfuscation audit record."""

    user: int
    role: str = "private"  # "private" | "non_private"
    epsilon: float = math.inf  # effective edge-LDP budget spent by this user
    epsilon_1: float | None = None
    epsilon_2: float | None = None
    d_star: float | None = None
    q: float | None = None
    p: float | None = None


@dataclass(frozen=True)
class NoisyGraph:
    """Noisy adjacency rows plus per-user metadata and run provenance.

    Rows are per-user directed reports (row i is user i's published bit set);
    the relation is symmetric only after union/intersection symmetrization.
    """

    n: int
    rows: tuple[frozenset[int], ...]
    users: tuple[UserMeta, ...]
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        if len(self.rows) != self.n or len(self.users) != self.n:
            raise ValueError("rows/users length must equal n")
        for i, row in enumerate(self.rows):
            if i in row:
                raise ValueError(f"diagonal bit set in row {i}")

    def noisy_degree(self, i: int) -> int:
        return len(self.rows[i])

    def total_ones(self) -> int:
        return sum(len(r) for r in self.rows)

    def to_graph(self, mode: str = "union") -> Graph:
        """Collapse directed rows to an undirected Graph (union or intersection)."""
        edges = set()
        for i, row in enumerate(self.rows):
            for j in row:
                a, b = min(i, j), max(i, j)
                if mode == "union":
                    edges.add((a, b))
                elif mode == "intersection":
                    if i in self.rows[j]:
                        edges.add((a, b))
                else:
                    raise ValueError(f"unknown symmetrization mode {mode!r}")
        return Graph(self.n, edges, directed=False)


def save_noisy_graph(noisy: NoisyGraph, edges_path: "str | Path",
                     meta_path: "str | Path", include_user_meta: bool = False) -> None:
    """Serialize rows as sorted "i j" lines plus a JSON metadata sidecar.

    Floats are written with full repr precision so reload is lossless.
    """
    lines = [f"# n={noisy.n}"]
    for i, row in enumerate(noisy.rows):
        lines.extend(f"{i} {j}" for j in sorted(row))
    Path(edges_path).write_text("\n".join(lines) + "\n")

    meta = {"n": noisy.n, "provenance": dict(noisy.provenance)}
    if include_user_meta:
        meta["users"] = [asdict(u) for u in noisy.users]
    Path(meta_path).write_text(
        json.dumps(meta, sort_keys=True, indent=1, default=_json_default) + "\n"
    )


def _json_default(value):
    if isinstance(value, (frozenset, set, tuple)):
        return sorted(value) if isinstance(value, (frozenset, set)) else list(value)
    raise TypeError(f"not JSON serializable: {type(value)}")


def load_noisy_graph(edges_path: "str | Path", meta_path: "str | Path") -> NoisyGraph:
    meta = json.loads(Path(meta_path).read_text())
    n = meta["n"]
    rows: list[set[int]] = [set() for _ in range(n)]
    for raw in Path(edges_path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        i, j = (int(x) for x in line.split())
        rows[i].add(j)
    users = tuple(
        UserMeta(**{**u, "epsilon": float(u["epsilon"])})
        for u in meta.get("users", [])
    ) or tuple(UserMeta(user=i) for i in range(n))
    return NoisyGraph(
        n=n,
        rows=tuple(frozenset(r) for r in rows),
        users=users,
        provenance=meta.get("provenance", {}),
    )
