"""Local randomizers and privacy budget allocation.

All randomizers operate on one user's neighbor list and are pure functions
of (inputs, random stream). The degree-preserving randomizer composes a
Laplace degree estimate, a per-user edge-sampling probability, Warner's
randomized response, and edge sampling; its per-bit output law is

    Pr(bit -> 1) = p * q   if the input bit is 1,
                   (1-p) * q  otherwise,

with p the RR keep probability and q the tuned sampling probability.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .graphs import Graph, NeighborList, neighbor_list
from .noisy import NoisyGraph, UserMeta
from .rng import RngStream, as_generator

__all__ = [
    "BudgetSplit",
    "DprrRowResult",
    "allocate_budget",
    "laplace_sample",
    "noisy_degree",
    "rr_keep_prob",
    "sampling_prob",
    "warner_rr",
    "edge_sampling",
    "dprr",
    "rr_baseline",
    "local_lap",
    "locallap_edge_count",
    "per_bit_likelihood_ratio",
    "relationship_dp_level",
]


# ---------------------------------------------------------------------------
# budget accounting


@dataclass(frozen=True)
class BudgetSplit:
    """Split of one edge-LDP budget between the Laplace and RR stages.

    The total spent is always epsilon_1 + epsilon_2 by sequential
    composition; `effective_epsilon` recomputes it and is never stored.
    """

    epsilon_total: float
    epsilon_1: float
    epsilon_2: float
    alpha: float = 0.9

    def __post_init__(self):
        if self.epsilon_1 <= 0 or self.epsilon_2 <= 0:
            raise ValueError(
                f"budget shares must be positive, got ({self.epsilon_1}, {self.epsilon_2})"
            )

    @property
    def effective_epsilon(self) -> float:
        return self.epsilon_1 + self.epsilon_2


def allocate_budget(epsilon: float, n_max: int, alpha: float = 0.9,
                    strict: bool = False) -> BudgetSplit:
    """Allocate (epsilon_1, epsilon_2) from a nominal budget.

    epsilon_1 = max(sqrt(8 / (n_max - 1)), (1 - alpha) * epsilon) keeps the
    noisy-degree variance bounded by (n_max - 1) / 2 while leaving most of
    the budget (epsilon_2 = alpha * epsilon) to the RR stage. When the
    square-root floor binds, epsilon_1 + epsilon_2 exceeds the nominal
    epsilon; the default mode reports the effective total rather than hiding
    it. Strict mode instead sets epsilon_2 = epsilon - epsilon_1 and fails
    if nothing is left.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if n_max < 2:
        raise ValueError(f"n_max must be at least 2, got {n_max}")
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must be in (0, 1), got {alpha}")
    floor = math.sqrt(8.0 / (n_max - 1))
    epsilon_1 = max(floor, (1.0 - alpha) * epsilon)
    if strict:
        epsilon_2 = epsilon - epsilon_1
        if epsilon_2 <= 0:
            raise ValueError(
                f"infeasible budget: epsilon={epsilon} <= floor {floor:.6g} for n_max={n_max}"
            )
    else:
        epsilon_2 = alpha * epsilon
    return BudgetSplit(epsilon, epsilon_1, epsilon_2, alpha)


# ---------------------------------------------------------------------------
# scalar primitives


def _laplace_from_uniform(scale: float, u: float) -> float:
    # inverse CDF of Laplace(0, scale); u in [0, 1)
    u = max(u, 5e-324)
    if u < 0.5:
        return scale * math.log(2.0 * u)
    return -scale * math.log(2.0 * (1.0 - u))


def _laplace_vector(scale: float, size: int, gen: np.random.Generator) -> np.ndarray:
    u = np.maximum(gen.random(size), np.finfo(float).tiny)
    return np.where(u < 0.5, scale * np.log(2.0 * u), -scale * np.log(2.0 * (1.0 - u)))


def laplace_sample(scale: float, rng: "RngStream | np.random.Generator") -> float:
    """One draw from Laplace(0, scale) via inverse-CDF on a uniform draw."""
    if scale <= 0:
        raise ValueError(f"scale must be positive, got {scale}")
    return _laplace_from_uniform(scale, float(as_generator(rng).random()))


def noisy_degree(d: int, epsilon_1: float,
                 rng: "RngStream | np.random.Generator") -> float:
    """Private degree estimate d + Lap(1/epsilon_1); never clamped here.

    Degree has global sensitivity 1 under a one-bit change of the neighbor
    list, so this spends exactly epsilon_1 of edge-LDP budget.
    """
    if d < 0:
        raise ValueError(f"degree must be non-negative, got {d}")
    if epsilon_1 <= 0:
        raise ValueError(f"epsilon_1 must be positive, got {epsilon_1}")
    return d + laplace_sample(1.0 / epsilon_1, rng)


def rr_keep_prob(epsilon_2: float) -> float:
    """Warner RR keep probability p = e^eps2 / (e^eps2 + 1) in [0.5, 1)."""
    if epsilon_2 < 0:
        raise ValueError(f"epsilon_2 must be non-negative, got {epsilon_2}")
    # 1 / (1 + e^-eps) is overflow-safe for large budgets
    return 1.0 / (1.0 + math.exp(-epsilon_2))


def sampling_prob(d_star: float, p: float, n: int) -> float:
    """Edge-sampling probability tuned so the noisy degree stays near d.

    q_raw = d* / (d*(2p - 1) + (n - 1)(1 - p)), then projected onto [0, 1].
    A non-positive denominator can only occur for d* so negative that the
    numerator is negative as well, so the projection returns 0 there.
    """
    if n < 2:
        raise ValueError(f"row length must be at least 2, got {n}")
    if not 0.5 <= p <= 1.0:
        raise ValueError(f"keep probability must be in [0.5, 1], got {p}")
    denom = d_star * (2.0 * p - 1.0) + (n - 1) * (1.0 - p)
    if denom <= 0.0:
        return 0.0
    return min(1.0, max(0.0, d_star / denom))


# ---------------------------------------------------------------------------
# row randomizers


def warner_rr(row: NeighborList, p: float,
              rng: "RngStream | np.random.Generator") -> NeighborList:
    """Flip each off-diagonal bit independently with probability 1 - p.

    Materializes one dense boolean row transiently, so a full-graph sweep
    costs Theta(n^2); that is the documented price of plain RR.
    """
    if not 0.5 <= p <= 1.0:
        raise ValueError(f"keep probability must be in [0.5, 1], got {p}")
    gen = as_generator(rng)
    bits = np.zeros(row.n, dtype=bool)
    if row.bits:
        bits[np.fromiter(row.bits, dtype=np.int64)] = True
    out = bits ^ (gen.random(row.n) >= p)
    out[row.owner] = False
    return NeighborList(row.owner, frozenset(int(j) for j in np.flatnonzero(out)), row.n)


def edge_sampling(row: NeighborList, q: float,
                  rng: "RngStream | np.random.Generator") -> NeighborList:
    """Keep each 1 independently with probability q; 0s never become 1."""
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"sampling probability must be in [0, 1], got {q}")
    if q == 1.0:
        return row
    if q == 0.0:
        return NeighborList(row.owner, frozenset(), row.n)
    gen = as_generator(rng)
    kept = frozenset(j for j in sorted(row.bits) if gen.random() < q)
    return NeighborList(row.owner, kept, row.n)


@dataclass(frozen=True)
class DprrRowResult:
    """Noisy row plus the realized obfuscation parameters for auditing."""

    owner: int
    n: int
    noisy_bits: frozenset[int]
    d_star: float
    q: float
    p: float

    def __post_init__(self):
        if self.owner in self.noisy_bits:
            raise ValueError(f"diagonal bit set for owner {self.owner}")
        if not 0.0 <= self.q <= 1.0:
            raise ValueError(f"q out of [0, 1]: {self.q}")

    @property
    def noisy_degree(self) -> int:
        return len(self.noisy_bits)


def _sample_distinct_excluded(gen: np.random.Generator, n: int,
                              excluded: frozenset[int], k: int) -> set[int]:
    """k distinct indices uniform over {0..n-1} minus `excluded`."""
    n_free = n - len(excluded)
    if k >= n_free:
        return set(range(n)) - set(excluded)
    if k > n_free // 2:
        free = np.setdiff1d(np.arange(n), np.fromiter(excluded, dtype=np.int64))
        pick = gen.choice(free, size=k, replace=False)
        return {int(x) for x in pick}
    out: set[int] = set()
    while len(out) < k:
        j = int(gen.integers(n))
        if j not in excluded and j not in out:
            out.add(j)
    return out


def dprr(row: NeighborList, split: BudgetSplit,
         rng: "RngStream | np.random.Generator") -> DprrRowResult:
    """Degree-preserving randomized response for one neighbor list.

    Pipeline: noisy degree d* (Laplace, epsilon_1) -> sampling probability q
    -> RR (epsilon_2) -> edge sampling with q. The RR and sampling stages
    are drawn in one fused pass from their joint per-bit law, which keeps
    the cost O(d + output) per row instead of O(n) while leaving the output
    distribution identical to running the two stages in sequence.
    """
    if row.n < 2:
        raise ValueError(f"row length must be at least 2, got {row.n}")
    gen = as_generator(rng)
    d = row.degree
    d_star = d + _laplace_from_uniform(1.0 / split.epsilon_1, float(gen.random()))
    p = rr_keep_prob(split.epsilon_2)
    q = sampling_prob(d_star, p, row.n)

    keep_prob = p * q  # input 1 survives both stages
    appear_prob = (1.0 - p) * q  # input 0 flipped then sampled
    kept = {j for j in sorted(row.bits) if gen.random() < keep_prob}
    n_zeros = row.n - 1 - d
    new: set[int] = set()
    if n_zeros > 0 and appear_prob > 0.0:
        k = int(gen.binomial(n_zeros, appear_prob))
        if k:
            new = _sample_distinct_excluded(gen, row.n, row.bits | {row.owner}, k)
    return DprrRowResult(
        owner=row.owner,
        n=row.n,
        noisy_bits=frozenset(kept | new),
        d_star=d_star,
        q=q,
        p=p,
    )


# ---------------------------------------------------------------------------
# whole-graph mechanisms


def rr_baseline(g: Graph, epsilon: float, rng: RngStream) -> NoisyGraph:
    """Warner's RR on every bit of every neighbor list (flip prob 1/(e^eps+1))."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    p = rr_keep_prob(epsilon)
    rows = []
    users = []
    for i in range(g.n):
        noisy = warner_rr(neighbor_list(g, i), p, rng.child(i))
        rows.append(noisy.bits)
        users.append(UserMeta(user=i, role="private", epsilon=epsilon, p=p))
    return NoisyGraph(
        n=g.n,
        rows=tuple(rows),
        users=tuple(users),
        provenance={"mechanism": "rr", "epsilon": epsilon, "p": p,
                    "seed": rng.seed, "stream": list(rng.key)},
    )


def locallap_edge_count(d_stars) -> int:
    """Noisy edge-count target T = max(0, round_half_away(sum(d*) / 2))."""
    half = sum(d_stars) / 2.0
    rounded = math.floor(half + 0.5) if half >= 0 else math.ceil(half - 0.5)
    return max(0, rounded)


def local_lap(g: Graph, epsilon: float, rng: RngStream) -> NoisyGraph:
    """Local Laplace baseline: noisy degrees fix an edge budget T, then the
    T largest Laplace-perturbed upper-triangular entries become edges.

    Budget split is fixed at epsilon_1 = epsilon/10 for the degree estimate
    and epsilon_2 = 9*epsilon/10 for the per-entry scores. Each user
    perturbs her own row's upper-triangular entries, so the protocol stays
    one-round. Output rows are symmetric by construction.
    """
    if epsilon <= 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if g.directed:
        raise ValueError("local_lap requires an undirected graph")
    return _local_lap_masked(g, epsilon, rng, private=None)


def _local_lap_masked(g: Graph, epsilon: float, rng: RngStream,
                      private: frozenset[int] | None) -> NoisyGraph:
    """local_lap with optional non-private passthrough users.

    Pairs (i, j) with i < j are scored only when owner i is private; a
    mixed pair owned by a non-private user is already public through her
    exact row, so no budget is spent re-releasing it.
    """
    n = g.n
    epsilon_1 = epsilon / 10.0
    epsilon_2 = 9.0 * epsilon / 10.0
    scale_d = 1.0 / epsilon_1
    scale_s = 1.0 / epsilon_2
    priv = sorted(range(n)) if private is None else sorted(private)
    priv_set = frozenset(priv)

    d_stars = {}
    for i in priv:
        gen = rng.child(i, 0).generator()
        d_stars[i] = g.degree(i) + _laplace_from_uniform(scale_d, float(gen.random()))
    t_target = locallap_edge_count(d_stars.values())

    # streaming top-T selection over noisy scores, O(n + T) memory
    cap = max(1, t_target)
    pool_s = np.empty(0)
    pool_i = np.empty(0, dtype=np.int64)
    pool_j = np.empty(0, dtype=np.int64)
    for i in priv:
        width = n - 1 - i
        if width <= 0:
            continue
        gen = rng.child(i, 1).generator()
        scores = _laplace_vector(scale_s, width, gen)
        js = np.arange(i + 1, n)
        neigh = np.fromiter((j for j in g.neighbors(i) if j > i), dtype=np.int64,
                            count=-1) if g.neighbors(i) else np.empty(0, dtype=np.int64)
        if neigh.size:
            scores[neigh - (i + 1)] += 1.0
        if width > cap:
            top = np.argpartition(scores, width - cap)[width - cap:]
            scores, js = scores[top], js[top]
        pool_s = np.concatenate([pool_s, scores])
        pool_i = np.concatenate([pool_i, np.full(js.size, i, dtype=np.int64)])
        pool_j = np.concatenate([pool_j, js])
        if pool_s.size > 4 * cap:
            top = np.argpartition(pool_s, pool_s.size - 2 * cap)[pool_s.size - 2 * cap:]
            pool_s, pool_i, pool_j = pool_s[top], pool_i[top], pool_j[top]

    t_final = min(t_target, pool_s.size)
    # ties broken by lexicographic (i, j); measure zero under continuous noise
    order = np.lexsort((pool_j, pool_i, -pool_s))[:t_final]

    rows: list[set[int]] = [set() for _ in range(n)]
    for i in range(n):
        if i not in priv_set:
            rows[i] = set(g.neighbors(i))
    for idx in order:
        a, b = int(pool_i[idx]), int(pool_j[idx])
        rows[a].add(b)
        if b in priv_set:
            rows[b].add(a)

    users = tuple(
        UserMeta(user=i, role="private", epsilon=epsilon_1 + epsilon_2,
                 epsilon_1=epsilon_1, epsilon_2=epsilon_2, d_star=d_stars[i])
        if i in priv_set
        else UserMeta(user=i, role="non_private")
        for i in range(n)
    )
    return NoisyGraph(
        n=n,
        rows=tuple(frozenset(r) for r in rows),
        users=users,
        provenance={"mechanism": "local_lap", "epsilon": epsilon,
                    "epsilon_1": epsilon_1, "epsilon_2": epsilon_2,
                    "edge_target": t_target, "seed": rng.seed,
                    "stream": list(rng.key)},
    )


# ---------------------------------------------------------------------------
# analytic privacy helpers


def per_bit_likelihood_ratio(mechanism: str, *, epsilon: float | None = None,
                             epsilon_2: float | None = None,
                             q: float | None = None,
                             p: float | None = None) -> float:
    """Worst-case single-bit likelihood ratio of a randomizer's output.

    Maximum over output values s in {0, 1} and over both directions of
    Pr(s | bit=1) / Pr(s | bit=0). Degenerate parameters (p of exactly 0
    or 1 with informative output) signal an infinite ratio.
    """
    if mechanism == "rr":
        p, cp = _keep_and_complement(p, epsilon, "rr requires epsilon or p")
        if p <= 0.0 or cp <= 0.0:
            return math.inf
        return max(p / cp, cp / p)
    if mechanism == "dprr-given-q":
        p, cp = _keep_and_complement(p, epsilon_2,
                                     "dprr-given-q requires epsilon_2 or p")
        if q is None or not 0.0 <= q <= 1.0:
            raise ValueError(f"dprr-given-q requires q in [0, 1], got {q}")
        if q == 0.0:
            return 1.0  # output is the all-zero row regardless of input
        if p <= 0.0 or cp <= 0.0:
            return math.inf
        # q cancels in the 1-output branch: p*q / ((1-p)*q) = p / (1-p)
        one_branch = max(p / cp, cp / p)
        # 1 - p*q rewritten without cancellation: (1-q) + q*(1-p)
        zero_given_1 = (1.0 - q) + q * cp
        zero_given_0 = (1.0 - q) + q * p
        zero_branch = max(zero_given_1 / zero_given_0, zero_given_0 / zero_given_1)
        return max(one_branch, zero_branch)
    raise ValueError(f"unknown mechanism {mechanism!r}")


def _keep_and_complement(p: float | None, epsilon: float | None,
                         message: str) -> tuple[float, float]:
    # deriving 1-p from epsilon as 1/(1+e^eps) keeps the likelihood ratio
    # accurate when p is within a few ulps of 1
    if p is not None:
        return p, 1.0 - p
    if epsilon is None:
        raise ValueError(message)
    if epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {epsilon}")
    return 1.0 / (1.0 + math.exp(-epsilon)), 1.0 / (1.0 + math.exp(epsilon))


def relationship_dp_level(edge_ldp_epsilon: float) -> float:
    """Budget at which one undirected edge is protected across both endpoints.

    One edge occupies one bit in each endpoint's neighbor list, so the
    edge-LDP guarantee composes to twice the per-user budget.
    """
    if edge_ldp_epsilon < 0:
        raise ValueError(f"epsilon must be non-negative, got {edge_ldp_epsilon}")
    return 2.0 * edge_ldp_epsilon
