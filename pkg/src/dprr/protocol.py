"""One-round user-to-server obfuscation protocol.

Each user's neighbor list passes through a local randomizer exactly once
(no server feedback), and the server assembles the returned rows into a
noisy graph. Supports a common setting (all users private at the same
budget) and a customized setting where a fraction rho of users publish
their rows unobfuscated.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass

from . import mechanisms
from .graphs import Graph, neighbor_list
from .noisy import NoisyGraph, UserMeta
from .rng import RngStream

logger = logging.getLogger(__name__)

MECHANISMS = ("dprr", "rr", "local_lap", "nonpriv_part", "nonpriv_full")
SYMMETRIZE_MODES = ("none", "union", "intersection")


@dataclass(frozen=True)
class PrivacyConfig:
    """Protocol-level configuration for obfuscating one collection."""

    mechanism: str
    epsilon: float = 1.0
    alpha: float = 0.9  # budget split fraction, degree-preserving mechanism only
    rho: float = 0.0  # proportion of non-private users
    role_seed: int = 0
    n_max: int | None = None  # max node count across the collection
    symmetrize: str = "none"

    def __post_init__(self):
        if self.mechanism not in MECHANISMS:
            raise ValueError(f"unknown mechanism {self.mechanism!r}")
        if self.symmetrize not in SYMMETRIZE_MODES:
            raise ValueError(f"unknown symmetrize mode {self.symmetrize!r}")
        if not 0.0 <= self.rho <= 1.0:
            raise ValueError(f"rho must be in [0, 1], got {self.rho}")
        needs_budget = self.mechanism in ("dprr", "rr", "local_lap") and self.rho < 1.0
        if needs_budget and self.epsilon <= 0:
            raise ValueError(f"epsilon must be positive for private users, got {self.epsilon}")
        if not 0.0 < self.alpha < 1.0:
            raise ValueError(f"alpha must be in (0, 1), got {self.alpha}")


@dataclass(frozen=True)
class RoleVector:
    """Per-node private / non-private assignment for one graph."""

    n: int
    non_private: frozenset[int]

    def is_private(self, i: int) -> bool:
        return i not in self.non_private

    @property
    def private(self) -> frozenset[int]:
        return frozenset(i for i in range(self.n) if i not in self.non_private)


def assign_roles(n: int, rho: float, rng: "RngStream | int") -> RoleVector:
    """Flag exactly round(rho * n) users as non-private, uniformly at random."""
    if not 0.0 <= rho <= 1.0:
        raise ValueError(f"rho must be in [0, 1], got {rho}")
    stream = RngStream(rng) if isinstance(rng, int) else rng
    k = int(math.floor(rho * n + 0.5))
    if k == 0:
        chosen: frozenset[int] = frozenset()
    elif k >= n:
        chosen = frozenset(range(n))
    else:
        gen = stream.generator()
        chosen = frozenset(int(v) for v in gen.choice(n, size=k, replace=False))
    return RoleVector(n=n, non_private=chosen)


def _passthrough_meta(i: int) -> UserMeta:
    return UserMeta(user=i, role="non_private", epsilon=math.inf)


def run_protocol(g: Graph, cfg: PrivacyConfig, rng: RngStream,
                 graph_id: int = 0) -> NoisyGraph:
    """Obfuscate one graph under the configured mechanism and roles.

    Private users' rows pass through the mechanism's randomizer with budgets
    derived from cfg; non-private users' rows are published bit-for-bit.
    `nonpriv_part` instead discards private users and returns the induced
    subgraph on non-private users, densely renumbered with the node map kept
    in provenance. Roles depend only on (role_seed, graph_id), so different
    mechanisms at the same role seed obfuscate the same user split.
    """
    n_max = cfg.n_max if cfg.n_max is not None else g.n
    roles = assign_roles(g.n, cfg.rho, RngStream(cfg.role_seed, (graph_id,)))
    provenance = {
        "mechanism": cfg.mechanism,
        "epsilon": cfg.epsilon,
        "alpha": cfg.alpha,
        "rho": cfg.rho,
        "role_seed": cfg.role_seed,
        "n_max": n_max,
        "symmetrize": cfg.symmetrize,
        "seed": rng.seed,
        "stream": list(rng.key),
        "graph_id": graph_id,
    }

    if cfg.mechanism == "nonpriv_full":
        rows = tuple(g.neighbors(i) for i in range(g.n))
        users = tuple(_passthrough_meta(i) for i in range(g.n))
        noisy = NoisyGraph(g.n, rows, users, provenance)

    elif cfg.mechanism == "nonpriv_part":
        if not roles.non_private:
            logger.warning("nonpriv_part with no non-private users yields an empty graph")
        sub, node_map = g.induced_subgraph(roles.non_private)
        rows = tuple(sub.neighbors(i) for i in range(sub.n))
        users = tuple(_passthrough_meta(i) for i in range(sub.n))
        provenance["node_map"] = list(node_map)
        noisy = NoisyGraph(sub.n, rows, users, provenance)

    elif cfg.mechanism == "local_lap":
        if g.directed:
            raise ValueError("local_lap requires an undirected graph")
        noisy = mechanisms._local_lap_masked(g, cfg.epsilon, rng, private=roles.private)
        merged = {**noisy.provenance, **provenance,
                  "epsilon_1": cfg.epsilon / 10.0, "epsilon_2": 9.0 * cfg.epsilon / 10.0,
                  "effective_epsilon": cfg.epsilon}
        noisy = NoisyGraph(noisy.n, noisy.rows, noisy.users, merged)

    elif cfg.mechanism == "rr":
        p = mechanisms.rr_keep_prob(cfg.epsilon)
        rows = []
        users = []
        for i in range(g.n):
            if roles.is_private(i):
                out = mechanisms.warner_rr(neighbor_list(g, i), p, rng.child(i))
                rows.append(out.bits)
                users.append(UserMeta(user=i, role="private", epsilon=cfg.epsilon, p=p))
            else:
                rows.append(g.neighbors(i))
                users.append(_passthrough_meta(i))
        provenance["effective_epsilon"] = cfg.epsilon
        noisy = NoisyGraph(g.n, tuple(rows), tuple(users), provenance)

    else:  # dprr
        split = mechanisms.allocate_budget(cfg.epsilon, n_max, cfg.alpha)
        rows = []
        users = []
        for i in range(g.n):
            if roles.is_private(i):
                res = mechanisms.dprr(neighbor_list(g, i), split, rng.child(i))
                rows.append(res.noisy_bits)
                users.append(UserMeta(
                    user=i, role="private", epsilon=split.effective_epsilon,
                    epsilon_1=split.epsilon_1, epsilon_2=split.epsilon_2,
                    d_star=res.d_star, q=res.q, p=res.p,
                ))
            else:
                rows.append(g.neighbors(i))
                users.append(_passthrough_meta(i))
        provenance.update(
            epsilon_1=split.epsilon_1,
            epsilon_2=split.epsilon_2,
            effective_epsilon=split.effective_epsilon,
        )
        noisy = NoisyGraph(g.n, tuple(rows), tuple(users), provenance)

    if cfg.symmetrize != "none":
        noisy = symmetrize(noisy, cfg.symmetrize)
    return noisy


def symmetrize(noisy: NoisyGraph, mode: str) -> NoisyGraph:
    """Make the edge relation symmetric: union keeps an edge if either
    endpoint reported it, intersection only if both did."""
    if mode not in ("union", "intersection"):
        raise ValueError(f"unknown symmetrize mode {mode!r}")
    rows: list[set[int]] = [set() for _ in range(noisy.n)]
    for i, row in enumerate(noisy.rows):
        for j in row:
            if mode == "union" or i in noisy.rows[j]:
                rows[i].add(j)
                rows[j].add(i)
    provenance = {**noisy.provenance, "symmetrize": mode}
    return NoisyGraph(noisy.n, tuple(frozenset(r) for r in rows), noisy.users, provenance)
