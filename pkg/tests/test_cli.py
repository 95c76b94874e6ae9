import json
from pathlib import Path

import pytest

from dprr import parse_tudataset, write_tudataset
from dprr.cli import main
from dprr.io import load_edge_list_auto
from dprr.noisy import load_noisy_graph

from conftest import write_tudataset_files


def run_cli(*argv) -> int:
    return main([str(a) for a in argv])


def read_graph_files(path: Path) -> dict[str, bytes]:
    return {f.name: f.read_bytes() for f in sorted(path.glob("graph_*"))}


@pytest.fixture
def generated(tmp_path):
    out = tmp_path / "gen"
    assert run_cli("generate", "--model", "ba", "--n", "120", "--m", "3",
                   "--count", "2", "--seed", "5", "--out", out) == 0
    return out


class TestGenerate:
    def test_writes_graphs_and_manifest(self, generated):
        files = sorted(f.name for f in generated.glob("graph_*.edges"))
        assert files == ["graph_00000.edges", "graph_00001.edges"]
        manifest = json.loads((generated / "manifest.json").read_text())
        assert manifest["command"] == "generate"
        assert manifest["args"]["seed"] == 5
        g = load_edge_list_auto(generated / "graph_00000.edges")
        assert g.n == 120
        assert abs(2 * g.num_edges() / g.n - 6) <= 0.2  # average degree near 2m

    def test_identical_flags_identical_bytes(self, tmp_path):
        for sub in ("a", "b"):
            assert run_cli("generate", "--n", "50", "--m", "2", "--count", "1",
                           "--seed", "9", "--out", tmp_path / sub) == 0
        assert read_graph_files(tmp_path / "a") == read_graph_files(tmp_path / "b")

    def test_m_zero_is_usage_error(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run_cli("generate", "--n", "50", "--m", "0", "--out", tmp_path / "x")
        assert exc.value.code == 2

    def test_two_classes_write_labels(self, tmp_path):
        out = tmp_path / "two"
        assert run_cli("generate", "--n", "30", "--m", "2", "--m", "4",
                       "--count", "3", "--seed", "1", "--out", out) == 0
        labels = (out / "labels.txt").read_text().split()
        assert labels == ["0", "0", "0", "1", "1", "1"]


class TestObfuscate:
    def test_nonpriv_full_outputs_equal_inputs(self, generated, tmp_path):
        out = tmp_path / "run"
        assert run_cli("obfuscate", "--in", generated, "--mechanism", "nonpriv-full",
                       "--epsilon", "1", "--seed", "3", "--out", out) == 0
        for idx in range(2):
            g = load_edge_list_auto(generated / f"graph_{idx:05d}.edges")
            noisy = load_noisy_graph(out / f"graph_{idx:05d}.edges",
                                     out / f"graph_{idx:05d}.meta.json")
            for i in range(g.n):
                assert noisy.rows[i] == g.neighbors(i)

    def test_dprr_manifest_reports_paper_scale_budgets(self, generated, tmp_path, capsys):
        out = tmp_path / "run"
        assert run_cli("obfuscate", "--in", generated, "--mechanism", "dprr",
                       "--epsilon", "1", "--alpha", "0.9", "--n-max", "3648",
                       "--seed", "3", "--out", out) == 0
        captured = capsys.readouterr()
        assert "effective epsilon per private user: 1" in captured.out
        meta = json.loads((out / "graph_00000.meta.json").read_text())
        assert meta["provenance"]["epsilon_1"] == pytest.approx(0.1)
        assert meta["provenance"]["epsilon_2"] == pytest.approx(0.9)
        manifest = json.loads((out / "manifest.json").read_text())
        assert manifest["effective_epsilon"] == pytest.approx(1.0)

    def test_rr_dense_warning(self, tmp_path, capsys):
        gen_dir = tmp_path / "gen"
        assert run_cli("generate", "--n", "400", "--m", "3", "--count", "1",
                       "--seed", "2", "--out", gen_dir) == 0
        out = tmp_path / "run"
        assert run_cli("obfuscate", "--in", gen_dir, "--mechanism", "rr",
                       "--epsilon", "1", "--seed", "3", "--out", out) == 0
        assert "dense" in capsys.readouterr().err

    def test_nonpriv_part_requires_rho(self, generated, tmp_path):
        assert run_cli("obfuscate", "--in", generated, "--mechanism", "nonpriv-part",
                       "--rho", "0", "--out", tmp_path / "x") == 2

    def test_locallap_rejects_directed(self, tmp_path):
        f = tmp_path / "g.edges"
        f.write_text("# n=4\n# directed=1\n0 1\n2 3\n")
        assert run_cli("obfuscate", "--in", f, "--mechanism", "locallap",
                       "--epsilon", "1", "--out", tmp_path / "x") == 2

    def test_replay_is_byte_identical(self, generated, tmp_path):
        inputs_before = read_graph_files(generated)
        out = tmp_path / "run"
        assert run_cli("obfuscate", "--in", generated, "--mechanism", "dprr",
                       "--epsilon", "1", "--seed", "3", "--out", out) == 0
        assert read_graph_files(generated) == inputs_before  # inputs untouched
        replayed = tmp_path / "run2"
        assert run_cli("replay", "--manifest", out / "manifest.json",
                       "--out", replayed) == 0
        assert read_graph_files(out) == read_graph_files(replayed)


class TestStats:
    def test_nonpriv_full_check_passes(self, generated, tmp_path):
        out = tmp_path / "stats"
        assert run_cli("stats", "--in", generated, "--mechanism", "nonpriv-full",
                       "--trials", "2", "--check", "--seed", "1", "--out", out) == 0
        summary = json.loads((out / "summary.json").read_text())
        assert summary["mean_abs_error"] == 0.0
        assert summary["gate_violations"] == 0
        assert (out / "degree_report.csv").is_file()

    def test_check_passes_at_large_budget(self, generated, tmp_path):
        out = tmp_path / "stats"
        assert run_cli("stats", "--in", generated, "--mechanism", "dprr",
                       "--epsilon", "20", "--trials", "60", "--check",
                       "--seed", "1", "--out", out) == 0

    def test_check_fails_for_rr(self, generated, tmp_path):
        # plain RR wrecks low-degree users, so the bias gate trips
        out = tmp_path / "stats"
        assert run_cli("stats", "--in", generated, "--mechanism", "rr",
                       "--epsilon", "1", "--trials", "5", "--check",
                       "--seed", "1", "--out", out) == 4

    def test_zero_trials_usage_error(self, generated, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run_cli("stats", "--in", generated, "--mechanism", "dprr",
                    "--trials", "0", "--out", tmp_path / "x")
        assert exc.value.code == 2


class TestBench:
    def test_csv_written(self, tmp_path):
        out = tmp_path / "bench"
        assert run_cli("bench", "--sizes", "50,100", "--m", "3",
                       "--mechanisms", "dprr", "--trials", "1",
                       "--seed", "0", "--out", out) == 0
        lines = (out / "bench.csv").read_text().splitlines()
        assert lines[0] == "mechanism,n,input_edges,output_edges,seconds,peak_bytes"
        assert len(lines) == 3

    def test_unsorted_sizes_usage_error(self, tmp_path):
        assert run_cli("bench", "--sizes", "100,50", "--mechanisms", "dprr",
                       "--out", tmp_path / "x") == 2

    def test_sizes_and_gamma_mutually_exclusive(self, tmp_path):
        with pytest.raises(SystemExit) as exc:
            run_cli("bench", "--out", tmp_path / "x")
        assert exc.value.code == 2


class TestExport:
    @pytest.fixture
    def dataset(self, tmp_path):
        return write_tudataset_files(
            tmp_path / "data", "TINY",
            ["1, 2", "2, 1", "2, 3", "3, 2", "4, 5", "5, 4"],
            ["1", "1", "1", "2", "2"],
            ["0", "1"],
        )

    def test_nonpriv_full_round_trip_byte_equivalent(self, dataset, tmp_path):
        run_dir = tmp_path / "run"
        assert run_cli("obfuscate", "--in", dataset, "--format", "tudataset",
                       "--mechanism", "nonpriv-full", "--epsilon", "1",
                       "--seed", "0", "--out", run_dir) == 0
        exported = tmp_path / "exported"
        assert run_cli("export", "--in", run_dir, "--dataset-name", "TINY",
                       "--out", exported) == 0
        # canonical re-export of the parsed input must match byte for byte
        reference = tmp_path / "reference"
        write_tudataset(parse_tudataset(dataset, "TINY"), reference, "TINY")
        for fname in ["TINY_A.txt", "TINY_graph_indicator.txt", "TINY_graph_labels.txt"]:
            assert (exported / fname).read_bytes() == (reference / fname).read_bytes()

    def test_export_then_parse_identity(self, dataset, tmp_path):
        run_dir = tmp_path / "run"
        assert run_cli("obfuscate", "--in", dataset, "--mechanism", "dprr",
                       "--epsilon", "1", "--symmetrize", "union",
                       "--seed", "0", "--out", run_dir) == 0
        exported = tmp_path / "exported"
        assert run_cli("export", "--in", run_dir, "--dataset-name", "N",
                       "--out", exported) == 0
        back = parse_tudataset(exported, "N")
        for idx, g in enumerate(back.graphs):
            noisy = load_noisy_graph(run_dir / f"graph_{idx:05d}.edges",
                                     run_dir / f"graph_{idx:05d}.meta.json")
            assert g.edges == noisy.to_graph("union").edges

    def test_union_warning_for_unsymmetrized_runs(self, dataset, tmp_path, capsys):
        run_dir = tmp_path / "run"
        run_cli("obfuscate", "--in", dataset, "--mechanism", "dprr",
                "--epsilon", "1", "--seed", "0", "--out", run_dir)
        assert run_cli("export", "--in", run_dir, "--dataset-name", "N",
                       "--out", tmp_path / "exp") == 0
        assert "union view" in capsys.readouterr().err

    def test_missing_labels_is_data_error(self, generated, tmp_path):
        run_dir = tmp_path / "run"
        run_cli("obfuscate", "--in", generated, "--mechanism", "nonpriv-full",
                "--epsilon", "1", "--seed", "0", "--out", run_dir)
        assert run_cli("export", "--in", run_dir, "--dataset-name", "N",
                       "--out", tmp_path / "exp") == 3

    def test_all_non_private_equals_nonpriv_full_bytes(self, dataset, tmp_path):
        # with every user non-private, any mechanism exports identical bytes
        exports = {}
        for mechanism, rho in [("nonpriv-full", "0"), ("dprr", "1"),
                               ("rr", "1"), ("locallap", "1")]:
            run_dir = tmp_path / f"run-{mechanism}"
            assert run_cli("obfuscate", "--in", dataset, "--mechanism", mechanism,
                           "--epsilon", "1", "--rho", rho, "--symmetrize", "union",
                           "--seed", "0", "--out", run_dir) == 0
            exp = tmp_path / f"exp-{mechanism}"
            assert run_cli("export", "--in", run_dir, "--dataset-name", "E",
                           "--out", exp) == 0
            exports[mechanism] = (exp / "E_A.txt").read_bytes()
        reference = exports.pop("nonpriv-full")
        assert all(body == reference for body in exports.values())
