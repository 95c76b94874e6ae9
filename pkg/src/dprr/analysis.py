"""Degree-preservation reports, closed-form edge-count oracles, per-class
degree histograms, and obfuscation scaling benchmarks."""

from __future__ import annotations

import csv
import statistics
import time
import tracemalloc
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .graphs import Graph, GraphCollection, generate_ba, subsample_nodes
from .mechanisms import BudgetSplit, allocate_budget, rr_keep_prob, sampling_prob
from .protocol import PrivacyConfig, run_protocol
from .rng import RngStream


@dataclass(frozen=True)
class UserDegreeStats:
    user: int
    d: int
    mean_d_tilde: float
    var_d_tilde: float  # sample variance over trials (0 for a single trial)
    d_star: float | None  # realization from the first trial
    q: float | None


@dataclass(frozen=True)
class DegreeReport:
    """Per-user noisy-degree statistics aggregated over protocol trials."""

    users: tuple[UserDegreeStats, ...]
    trials: int
    mechanism: str
    n: int
    n_max: int
    epsilon: float
    epsilon_1: float | None
    mean_bias: float
    mean_abs_error: float

    @property
    def variance_bound(self) -> float | None:
        """Reference bound (n_max - 1)/4 + 2/epsilon_1^2, recomputed on access."""
        if self.epsilon_1 is None:
            return None
        return (self.n_max - 1) / 4.0 + 2.0 / self.epsilon_1**2


def _epsilon_1_of(cfg: PrivacyConfig, n_max: int) -> float | None:
    if cfg.mechanism == "dprr":
        return allocate_budget(cfg.epsilon, max(n_max, 2), cfg.alpha).epsilon_1
    if cfg.mechanism == "local_lap":
        return cfg.epsilon / 10.0
    return None


def degree_report(g: Graph, cfg: PrivacyConfig, trials: int,
                  rng: RngStream) -> DegreeReport:
    """Run the protocol `trials` times with independent streams and compare
    each user's noisy degree to her original degree."""
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    n_max = cfg.n_max if cfg.n_max is not None else g.n

    sums = np.zeros(g.n)
    sumsq = np.zeros(g.n)
    counted = np.zeros(g.n, dtype=np.int64)
    first_dstar: list[float | None] = [None] * g.n
    first_q: list[float | None] = [None] * g.n
    for t in range(trials):
        noisy = run_protocol(g, cfg, rng.child(t))
        node_map = noisy.provenance.get("node_map")
        for i in range(noisy.n):
            orig = node_map[i] if node_map is not None else i
            dt = noisy.noisy_degree(i)
            sums[orig] += dt
            sumsq[orig] += dt * dt
            counted[orig] += 1
            if t == 0:
                first_dstar[orig] = noisy.users[i].d_star
                first_q[orig] = noisy.users[i].q

    users = []
    biases = []
    for i in range(g.n):
        if counted[i] == 0:
            continue  # dropped by nonpriv_part in every trial
        c = int(counted[i])
        mean = sums[i] / c
        var = (sumsq[i] - sums[i] ** 2 / c) / (c - 1) if c > 1 else 0.0
        users.append(UserDegreeStats(
            user=i, d=g.degree(i), mean_d_tilde=float(mean),
            var_d_tilde=float(max(var, 0.0)),
            d_star=first_dstar[i], q=first_q[i],
        ))
        biases.append(mean - g.degree(i))
    return DegreeReport(
        users=tuple(users),
        trials=trials,
        mechanism=cfg.mechanism,
        n=g.n,
        n_max=n_max,
        epsilon=cfg.epsilon,
        epsilon_1=_epsilon_1_of(cfg, n_max),
        mean_bias=float(np.mean(biases)) if biases else 0.0,
        mean_abs_error=float(np.mean(np.abs(biases))) if biases else 0.0,
    )


def check_degree_gates(report: DegreeReport, *, bias_fraction: float = 0.15,
                       variance_factor: float = 1.2,
                       low_degree_fraction: float = 0.05) -> list[str]:
    """Empirical degree-preservation gates; returns violation messages.

    Bias gate: |mean(d~) - d| <= max(1, bias_fraction * d) for users with
    d <= low_degree_fraction * n. Variance gate: per-user sample variance
    <= variance_factor * ((n_max - 1)/4 + 2/epsilon_1^2) when the bound
    applies.
    """
    violations = []
    cutoff = low_degree_fraction * report.n
    for u in report.users:
        if u.d <= cutoff:
            tol = max(1.0, bias_fraction * u.d)
            err = abs(u.mean_d_tilde - u.d)
            if err > tol:
                violations.append(
                    f"bias: user {u.user} d={u.d} mean_d_tilde={u.mean_d_tilde:.3f} "
                    f"error {err:.3f} > {tol:.3f}"
                )
    bound = report.variance_bound
    if bound is not None:
        limit = variance_factor * bound
        for u in report.users:
            if u.var_d_tilde > limit:
                violations.append(
                    f"variance: user {u.user} d={u.d} var={u.var_d_tilde:.3f} > {limit:.3f}"
                )
    return violations


def write_degree_csv(report: DegreeReport, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["user", "d", "mean_d_tilde", "var_d_tilde", "q", "d_star"])
        for u in report.users:
            w.writerow([
                u.user, u.d, repr(u.mean_d_tilde), repr(u.var_d_tilde),
                "" if u.q is None else repr(u.q),
                "" if u.d_star is None else repr(u.d_star),
            ])


# ---------------------------------------------------------------------------
# degree histograms


def log_bin_edges(max_degree: int) -> np.ndarray:
    """Edges 0, 1, 2, 4, 8, ... covering degrees up to max_degree."""
    edges = [0.0, 1.0]
    top = 2.0
    while top <= max_degree:
        edges.append(top)
        top *= 2.0
    edges.append(top)
    return np.asarray(edges)


def degree_histogram(collection: GraphCollection,
                     bin_edges: np.ndarray | None = None
                     ) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    """Normalized per-class histograms of node degrees pooled over graphs.

    Degree distributions are heavy-tailed, so bins default to logarithmic.
    """
    if collection.labels is None:
        raise ValueError("degree_histogram requires labels")
    by_class: dict[int, list[int]] = {}
    max_degree = 0
    for g, label in zip(collection.graphs, collection.labels):
        degs = by_class.setdefault(label, [])
        for i in range(g.n):
            d = g.degree(i)
            degs.append(d)
            max_degree = max(max_degree, d)
    if bin_edges is None:
        bin_edges = log_bin_edges(max_degree)
    hists = {}
    for label, degs in sorted(by_class.items()):
        counts, _ = np.histogram(degs, bins=bin_edges)
        total = counts.sum()
        hists[label] = counts / total if total else counts.astype(float)
    return bin_edges, hists


def total_variation(p: np.ndarray, q: np.ndarray) -> float:
    return 0.5 * float(np.abs(np.asarray(p) - np.asarray(q)).sum())


# ---------------------------------------------------------------------------
# closed-form edge-count oracles


def expected_edges(mechanism: str, g: Graph, *, epsilon: float | None = None,
                   split: BudgetSplit | None = None,
                   qs: Sequence[float] | None = None) -> float:
    """Analytic expectation of the total number of ones across output rows.

    rr: sum_i [d_i p + (n-1-d_i)(1-p)]. dprr: the same per-row expectation
    scaled by each user's sampling probability (defaults to q at d* = d).
    """
    n = g.n
    degrees = [g.degree(i) for i in range(n)]
    if mechanism == "rr":
        if epsilon is None:
            raise ValueError("rr requires epsilon")
        p = rr_keep_prob(epsilon)
        return float(sum(d * p + (n - 1 - d) * (1.0 - p) for d in degrees))
    if mechanism == "dprr":
        if split is None:
            raise ValueError("dprr requires a budget split")
        p = rr_keep_prob(split.epsilon_2)
        if qs is None:
            qs = [sampling_prob(float(d), p, n) for d in degrees]
        if len(qs) != n:
            raise ValueError(f"{len(qs)} sampling probabilities for {n} users")
        return float(sum(
            (d * p + (n - 1 - d) * (1.0 - p)) * q for d, q in zip(degrees, qs)
        ))
    raise ValueError(f"unknown mechanism {mechanism!r}")


# ---------------------------------------------------------------------------
# scaling benchmarks


@dataclass(frozen=True)
class ScalingRecord:
    mechanism: str
    n: int
    input_edges: int
    output_edges: float  # median directed ones over trials
    seconds: float  # median obfuscation wall time (randomizer + assembly)
    peak_bytes: int | None  # best-effort traced allocation peak


def bench_scaling(mode: str, sizes: Sequence, mechanisms: Sequence[str],
                  trials: int = 3, seed: int = 0, m: int = 3,
                  base: Graph | None = None, epsilon: float = 1.0,
                  alpha: float = 0.9,
                  measure_memory: bool = False) -> list[ScalingRecord]:
    """Median obfuscation time and output size per (mechanism, size).

    mode "ba": sizes are node counts for synthetic graphs with m edges per
    new node. mode "subsample": sizes are sampling rates gamma; each draws
    round(gamma * n) nodes of `base` uniformly and takes the induced
    subgraph. Timing covers obfuscation only, never graph generation.
    """
    if list(sizes) != sorted(sizes):
        raise ValueError("sizes must be sorted ascending")
    if trials < 1:
        raise ValueError(f"trials must be at least 1, got {trials}")
    if mode not in ("ba", "subsample"):
        raise ValueError(f"unknown mode {mode!r}")
    if mode == "subsample" and base is None:
        raise ValueError("subsample mode requires a base graph")

    records = []
    for idx, size in enumerate(sizes):
        if mode == "ba":
            g = generate_ba(int(size), m, RngStream(seed, (100 + idx,)))
        else:
            g = base if float(size) >= 1.0 else subsample_nodes(
                base, float(size), RngStream(seed, (100 + idx,)))
        for mech in mechanisms:
            cfg = PrivacyConfig(mechanism=mech, epsilon=epsilon, alpha=alpha)
            times = []
            edges = []
            peak: int | None = None
            for t in range(trials):
                stream = RngStream(seed, (idx, t))
                if measure_memory:
                    tracemalloc.start()
                t0 = time.perf_counter()
                noisy = run_protocol(g, cfg, stream)
                times.append(time.perf_counter() - t0)
                if measure_memory:
                    _, top = tracemalloc.get_traced_memory()
                    tracemalloc.stop()
                    peak = max(peak or 0, top)
                edges.append(noisy.total_ones())
            records.append(ScalingRecord(
                mechanism=mech,
                n=g.n,
                input_edges=g.num_edges(),
                output_edges=float(statistics.median(edges)),
                seconds=float(statistics.median(times)),
                peak_bytes=peak,
            ))
    return records


def write_scaling_csv(records: Sequence[ScalingRecord], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["mechanism", "n", "input_edges", "output_edges", "seconds", "peak_bytes"])
        for r in records:
            w.writerow([r.mechanism, r.n, r.input_edges, repr(r.output_edges),
                        repr(r.seconds), "" if r.peak_bytes is None else r.peak_bytes])
