import math

import numpy as np
import pytest

from dprr import (BudgetSplit, Graph, GraphCollection, PrivacyConfig,
                  RngStream, allocate_budget, generate_ba, rr_baseline,
                  rr_keep_prob, sampling_prob)
from dprr.analysis import (DegreeReport, bench_scaling, check_degree_gates,
                           degree_histogram, degree_report, expected_edges,
                           log_bin_edges, total_variation, write_degree_csv)
from dprr.mechanisms import dprr
from dprr.graphs import neighbor_list


class TestDegreeReport:
    def test_nonpriv_full_exact_zero_error(self, ba_small):
        cfg = PrivacyConfig(mechanism="nonpriv_full")
        rep = degree_report(ba_small, cfg, trials=3, rng=RngStream(0))
        for u in rep.users:
            assert u.mean_d_tilde == u.d
            assert u.var_d_tilde == 0.0
        assert rep.mean_bias == 0.0
        assert rep.mean_abs_error == 0.0
        assert check_degree_gates(rep) == []

    def test_rr_grossly_inflates_low_degrees(self):
        # a low-degree user's noisy degree lands near (n-1)(1-p), not near d
        g = generate_ba(400, 3, seed=2)
        cfg = PrivacyConfig(mechanism="rr", epsilon=1.0)
        rep = degree_report(g, cfg, trials=10, rng=RngStream(1))
        p = rr_keep_prob(1.0)
        low = [u for u in rep.users if u.d <= 10]
        assert len(low) > 200
        for u in low:
            expected = u.d * p + (g.n - 1 - u.d) * (1 - p)
            assert abs(u.mean_d_tilde - expected) <= 0.25 * expected
            assert u.mean_d_tilde > 5 * u.d  # nowhere near degree-preserving

    def test_variance_bound_recomputed(self, ba_small):
        cfg = PrivacyConfig(mechanism="dprr", epsilon=1.0)
        rep = degree_report(ba_small, cfg, trials=2, rng=RngStream(0))
        split = allocate_budget(1.0, ba_small.n, 0.9)
        assert rep.epsilon_1 == pytest.approx(split.epsilon_1)
        assert rep.variance_bound == pytest.approx(
            (ba_small.n - 1) / 4 + 2 / split.epsilon_1**2)

    def test_trials_validation(self, ba_small):
        cfg = PrivacyConfig(mechanism="nonpriv_full")
        with pytest.raises(ValueError):
            degree_report(ba_small, cfg, trials=0, rng=RngStream(0))

    def test_csv_columns(self, ba_small, tmp_path):
        cfg = PrivacyConfig(mechanism="dprr", epsilon=1.0)
        rep = degree_report(ba_small, cfg, trials=2, rng=RngStream(0))
        out = tmp_path / "r.csv"
        write_degree_csv(rep, out)
        header = out.read_text().splitlines()[0]
        assert header == "user,d,mean_d_tilde,var_d_tilde,q,d_star"

    def test_gates_pass_in_low_noise_regime(self):
        # at a large budget the Laplace scale is small and both gates hold
        g = generate_ba(100, 3, seed=3)
        cfg = PrivacyConfig(mechanism="dprr", epsilon=20.0)
        rep = degree_report(g, cfg, trials=60, rng=RngStream(2))
        assert check_degree_gates(rep) == []


class TestDegreeHistogram:
    def test_single_class_unit_mass(self):
        g1 = Graph(3, {(0, 1), (1, 2), (0, 2)})  # all degrees 2
        g2 = Graph(4, {(0, 1), (1, 2), (2, 3), (0, 3)})
        coll = GraphCollection(graphs=(g1, g2), labels=(0, 0))
        edges, hists = degree_histogram(coll)
        assert set(hists) == {0}
        idx = np.searchsorted(edges, 2, side="right") - 1
        assert hists[0][idx] == pytest.approx(1.0)

    def test_distinct_classes_have_positive_tv_distance(self):
        paths = tuple(Graph(6, {(i, i + 1) for i in range(5)}) for _ in range(3))
        stars = tuple(Graph(6, {(0, j) for j in range(1, 6)}) for _ in range(3))
        coll = GraphCollection(graphs=paths + stars, labels=(0,) * 3 + (1,) * 3)
        _, hists = degree_histogram(coll)
        assert total_variation(hists[0], hists[1]) > 0

    def test_zero_mass_class_is_all_zeros(self):
        coll = GraphCollection(graphs=(Graph(0, set()), Graph(3, set())),
                               labels=(0, 1))
        _, hists = degree_histogram(coll)
        assert hists[0].sum() == 0.0
        assert hists[1].sum() == pytest.approx(1.0)

    def test_missing_labels_rejected(self):
        coll = GraphCollection(graphs=(Graph(2, set()),))
        with pytest.raises(ValueError, match="labels"):
            degree_histogram(coll)

    def test_log_bins_cover_max_degree(self):
        edges = log_bin_edges(9)
        assert list(edges) == [0, 1, 2, 4, 8, 16]


class TestExpectedEdges:
    def test_rr_closed_form_empty_graph(self):
        g = Graph(1000, set())
        expected = expected_edges("rr", g, epsilon=1.0)
        assert expected == pytest.approx(1000 * 999 / (math.e + 1), rel=1e-12)

    def test_dprr_at_pinned_estimate_equals_degree_sum(self, ba_small):
        split = allocate_budget(1.0, ba_small.n, 0.9)
        expected = expected_edges("dprr", ba_small, split=split)
        degree_sum = sum(ba_small.degree(i) for i in range(ba_small.n))
        assert expected == pytest.approx(degree_sum, abs=1e-6)

    def test_dprr_zero_sampling_gives_zero(self, ba_small):
        split = allocate_budget(1.0, ba_small.n, 0.9)
        assert expected_edges("dprr", ba_small, split=split,
                              qs=[0.0] * ba_small.n) == 0.0

    def test_rr_monte_carlo_within_three_sigma(self):
        g = generate_ba(120, 3, seed=4)
        p = rr_keep_prob(1.0)
        expected = expected_edges("rr", g, epsilon=1.0)
        var = g.n * (g.n - 1) * p * (1 - p)
        noisy = rr_baseline(g, 1.0, RngStream(11))
        assert abs(noisy.total_ones() - expected) <= 3 * math.sqrt(var)

    def test_dprr_monte_carlo_within_three_sigma(self):
        # pin d* = d so per-bit probabilities match the closed form exactly
        g = generate_ba(200, 3, seed=5)
        split_pinned = BudgetSplit(1.0, 1e12, 0.9)
        p = rr_keep_prob(0.9)
        total = 0
        var = 0.0
        for i in range(g.n):
            row = neighbor_list(g, i)
            total += dprr(row, split_pinned, RngStream(6, (i,))).noisy_degree
            q = sampling_prob(float(row.degree), p, g.n)
            var += row.degree * p * q * (1 - p * q)
            var += (g.n - 1 - row.degree) * (1 - p) * q * (1 - (1 - p) * q)
        expected = expected_edges("dprr", g, split=split_pinned)
        assert abs(total - expected) <= 3 * math.sqrt(var)


class TestBenchScaling:
    def test_ba_mode_records_and_monotonic_edges(self):
        records = bench_scaling("ba", [60, 120], ["dprr"], trials=2, seed=0, m=3)
        assert [r.n for r in records] == [60, 120]
        assert records[0].output_edges <= records[1].output_edges
        assert all(r.seconds >= 0 for r in records)
        assert all(r.peak_bytes is None for r in records)

    def test_subsample_gamma_one_is_input(self, ba_small):
        records = bench_scaling("subsample", [0.5, 1.0], ["nonpriv_full"],
                                trials=1, seed=0, base=ba_small)
        assert records[-1].n == ba_small.n
        assert records[-1].input_edges == ba_small.num_edges()
        assert records[-1].output_edges == 2 * ba_small.num_edges()
        assert records[0].n == 50

    def test_unsorted_sizes_rejected(self):
        with pytest.raises(ValueError, match="ascending"):
            bench_scaling("ba", [100, 50], ["dprr"], trials=1, seed=0)

    def test_memory_tracking(self):
        records = bench_scaling("ba", [50], ["rr"], trials=1, seed=0,
                                measure_memory=True)
        assert records[0].peak_bytes > 0
