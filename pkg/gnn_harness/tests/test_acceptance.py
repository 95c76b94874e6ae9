"""Desk-scale accuracy ordering acceptance for the evaluation harness.

On the synthetic two-class collection (growth parameter 2 vs 6, 400 graphs)
over 5 split seeds: the degree-preserving mechanism must match or beat RR
and the local Laplace baseline (within one standard deviation), stay within
0.1 of the fully non-private run, and not lose accuracy as the non-private
fraction rho grows.
"""

import numpy as np
import pytest

from gnn_harness import GinConfig, compare_mechanisms, write_report

SPLIT_SEEDS = (0, 1, 2, 3, 4)


@pytest.fixture(scope="module")
def ordering(exports_full, tmp_path_factory):
    runs = {
        "nonpriv-full": exports_full / "nonpriv-full",
        "dprr": exports_full / "dprr-rho0",
        "rr": exports_full / "rr",
        "locallap": exports_full / "locallap",
        "dprr-rho0.2": exports_full / "dprr-rho0.2",
        "dprr-rho0.5": exports_full / "dprr-rho0.5",
    }
    cfg = GinConfig(num_layers=2, hidden=32, lr=1e-2)
    results = {r.name: r for r in compare_mechanisms(runs, cfg, SPLIT_SEEDS)}
    write_report(list(results.values()), tmp_path_factory.mktemp("report"))
    for r in results.values():
        print(f"\n{r.name:14s} acc {r.accuracy_mean:.4f} +- {r.accuracy_std:.4f} "
              f"auc {r.auc_mean:.4f}")
    return results


class TestAccuracyOrdering:
    def test_dprr_not_below_private_baselines(self, ordering):
        dprr = ordering["dprr"]
        for baseline in ("rr", "locallap"):
            other = ordering[baseline]
            ok = dprr.accuracy_mean >= other.accuracy_mean - max(
                other.accuracy_std, dprr.accuracy_std)
            print(f"\nACCEPTANCE ordering dprr vs {baseline}: "
                  f"{'PASS' if ok else 'FAIL'} "
                  f"({dprr.accuracy_mean:.4f} vs {other.accuracy_mean:.4f})")
            assert ok

    def test_dprr_close_to_non_private(self, ordering):
        gap = ordering["nonpriv-full"].accuracy_mean - ordering["dprr"].accuracy_mean
        ok = gap <= 0.1
        print(f"\nACCEPTANCE dprr vs nonpriv-full: {'PASS' if ok else 'FAIL'} "
              f"(gap {gap:+.4f})")
        assert ok

    def test_dprr_accuracy_non_decreasing_in_rho(self, ordering):
        seq = [ordering["dprr"], ordering["dprr-rho0.2"], ordering["dprr-rho0.5"]]
        ok = True
        for lo, hi in zip(seq, seq[1:]):
            if hi.accuracy_mean < lo.accuracy_mean - max(lo.accuracy_std, 1e-12):
                ok = False
        detail = " -> ".join(f"{r.accuracy_mean:.4f}" for r in seq)
        print(f"\nACCEPTANCE dprr rho trend: {'PASS' if ok else 'FAIL'} ({detail})")
        assert ok

    def test_mismatched_collections_rejected(self, exports_full, exports_small):
        cfg = GinConfig()
        with pytest.raises(ValueError, match="match"):
            compare_mechanisms(
                {"a": exports_full / "nonpriv-full",
                 "b": exports_small / "nonpriv-full"},
                cfg, split_seeds=(0,))
