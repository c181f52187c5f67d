import csv
import io
import json
from pathlib import Path

import pytest

from one3probe import cli
from one3probe.formula import parse_pos3cnf, serialize
from one3probe.oracle import materialize
from one3probe.preprocess import expand
from conftest import ALL_TRIPLES4_TEXT, PSI1_TEXT


@pytest.fixture
def psi1_file(tmp_path):
    p = tmp_path / "psi1.p3cnf"
    p.write_text(PSI1_TEXT)
    return str(p)


@pytest.fixture
def unsat_file(tmp_path):
    p = tmp_path / "at4.p3cnf"
    p.write_text(ALL_TRIPLES4_TEXT)
    return str(p)


def run(capsys, *argv):
    code = cli.main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


class TestSolve:
    def test_found_exit_zero(self, capsys, psi1_file):
        code, out, _ = run(capsys, "solve", psi1_file, "--mode", "repaired", "--check")
        assert code == cli.EXIT_FOUND
        report = json.loads(out)
        assert report["found"] is True
        assert report["agrees_with_oracle"] is True
        assert report["schema_version"] == 1
        assert sorted(report["witness"]) == ["aux_true_vars", "mask", "original_true_vars"]

    def test_not_found_exit_one(self, capsys, unsat_file):
        code, out, _ = run(capsys, "solve", unsat_file, "--check")
        assert code == cli.EXIT_NOT_FOUND
        assert json.loads(out)["agrees_with_oracle"] is True

    def test_malformed_exit_two(self, capsys, tmp_path):
        bad = tmp_path / "bad.p3cnf"
        bad.write_text("p p3cnf 3 1\n1 1 2\n")
        code, out, err = run(capsys, "solve", str(bad))
        assert code == cli.EXIT_ERROR
        assert "error" in json.loads(out)

    def test_missing_file_exit_two(self, capsys):
        code, _, _ = run(capsys, "solve", "/nonexistent.p3cnf")
        assert code == cli.EXIT_ERROR

    def test_budget_exit_three(self, capsys, psi1_file):
        code, out, _ = run(capsys, "solve", psi1_file, "--call-budget", "2")
        assert code == cli.EXIT_BUDGET
        assert json.loads(out)["stats"]["budget_exhausted"] is True


class TestExpand:
    def test_emits_p3cnf(self, capsys, psi1_file, psi1):
        code, out, _ = run(capsys, "expand", psi1_file)
        assert code == 0
        assert parse_pos3cnf(out) == expand(psi1).phi

    def test_json_report(self, capsys, psi1_file):
        code, out, _ = run(capsys, "expand", psi1_file, "--json")
        report = json.loads(out)
        assert (report["k1"], report["k2"], report["m"]) == (4, 6, 8)
        assert report["target"] == 21845


class TestOracleCmd:
    def test_sat(self, capsys, psi1_file):
        code, out, _ = run(capsys, "oracle", psi1_file)
        assert code == cli.EXIT_FOUND
        assert json.loads(out)["witness"]["true_vars"] == [1]

    def test_unsat(self, capsys, unsat_file):
        code, out, _ = run(capsys, "oracle", unsat_file)
        assert code == cli.EXIT_NOT_FOUND
        assert json.loads(out)["satisfiable"] is False


class TestLemmas:
    def test_full_report(self, capsys, psi1_file):
        code, out, _ = run(capsys, "lemmas", psi1_file)
        assert code == 0
        report = json.loads(out)
        for key in ("sortedness_strict", "sortedness_non_strict", "equivalence", "dominance"):
            assert key in report
        assert report["equivalence"]["holds"] is True

    def test_oversized_skips_sortedness(self, capsys, tmp_path):
        # k1=5, m1=6 expands to 23 variables: over the materialize guard,
        # under the oracle guard.
        from one3probe.formula import generate_random

        psi = generate_random(5, 6, seed=1)
        p = tmp_path / "big.p3cnf"
        p.write_text(serialize(psi))
        code, out, _ = run(capsys, "lemmas", str(p))
        assert code == 0
        report = json.loads(out)
        assert report["sortedness_strict"] == "skipped"
        assert report["dominance"] != "skipped"


class TestMatrixDump:
    def test_round_trip(self, capsys, psi1_file, tmp_path, psi1):
        out_path = tmp_path / "matrix.csv"
        code, _, _ = run(capsys, "matrix-dump", psi1_file, "--out", str(out_path))
        assert code == 0
        with open(out_path, newline="") as fh:
            rows = list(csv.reader(fh))
        assert len(rows) == 17  # header + 16 matrix rows
        assert len(rows[0]) == 64
        mm = materialize(expand(psi1).ef)
        parsed = [[int(v) for v in row] for row in rows[1:]]
        assert parsed == mm.cells
        assert parsed[0][0] == 0
        assert parsed[15][63] == int("33333333", 4)
        assert parsed[15][0] == int("11231123", 4)


class TestDiff:
    def test_exhaustive_counts(self, capsys, tmp_path):
        code, out, err = run(
            capsys, "diff", "--exhaustive", "4", "--clause-cap", "2",
            "--corpus", str(tmp_path / "corpus"),
        )
        assert code == 0
        report = json.loads(out)
        assert report["instances"] == 6
        disagreeing = sum(report["disagreements_by_variant"].values())
        assert report["agreements"] <= report["instances"]
        # Every disagreement produced a persisted, replayable record.
        corpus = tmp_path / "corpus"
        if disagreeing:
            assert list(corpus.glob("*.json"))

    def test_random_deterministic(self, capsys, tmp_path):
        args = [
            "diff", "--random", "20", "--k1", "5", "--m1", "3", "--seed", "42",
            "--corpus", str(tmp_path / "c"),
        ]
        code1, out1, _ = run(capsys, *args)
        code2, out2, _ = run(capsys, *args)
        assert code1 == code2 == 0
        assert json.loads(out1) == json.loads(out2)

    def test_records_replay(self, capsys, tmp_path):
        corpus = tmp_path / "corpus"
        code, out, _ = run(capsys, "diff", "--exhaustive", "4", "--corpus", str(corpus))
        assert code == 0
        for record_path in corpus.glob("*.json"):
            record = json.loads(record_path.read_text())
            assert record["search_verdict"] != record["oracle_verdict"]
            replayed = cli.replay_counterexample(record)
            assert replayed["search_verdict"] == record["search_verdict"]
            assert replayed["oracle_verdict"] == record["oracle_verdict"]
            assert replayed["stats"] == record["stats"]
            sidecar = corpus / (record_path.stem + ".p3cnf")
            assert sidecar.read_text() == record["formula"]

    def test_env_corpus_fallback(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("ONE3PROBE_CORPUS", str(tmp_path / "envcorpus"))
        monkeypatch.chdir(tmp_path)
        code, out, _ = run(capsys, "diff", "--exhaustive", "4", "--clause-cap", "2")
        assert code == 0
        assert json.loads(out)["corpus_dir"] == str(tmp_path / "envcorpus")

    def test_config_file_precedence(self, capsys, tmp_path, monkeypatch):
        monkeypatch.setenv("ONE3PROBE_CORPUS", str(tmp_path / "envcorpus"))
        cfg = tmp_path / "cfg.json"
        cfg.write_text(json.dumps({"corpus": str(tmp_path / "cfgcorpus")}))
        code, out, _ = run(
            capsys, "diff", "--exhaustive", "4", "--clause-cap", "2",
            "--config", str(cfg),
        )
        assert json.loads(out)["corpus_dir"] == str(tmp_path / "cfgcorpus")
        # Explicit flag beats both.
        code, out, _ = run(
            capsys, "diff", "--exhaustive", "4", "--clause-cap", "2",
            "--config", str(cfg), "--corpus", str(tmp_path / "flagcorpus"),
        )
        assert json.loads(out)["corpus_dir"] == str(tmp_path / "flagcorpus")


class TestBench:
    def test_records_and_fits(self, capsys, tmp_path):
        records_path = tmp_path / "bench.csv"
        code, out, _ = run(
            capsys, "bench", "--k1-min", "4", "--k1-max", "6", "--trials", "2",
            "--seed", "9", "--records", str(records_path),
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["records"] == 6
        assert "r_squared" in summary["fit_log_calls_vs_k1"]
        assert "r_squared" in summary["fit_log_calls_vs_log_k1"]
        with open(records_path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        assert len(rows) == 6
        assert all(int(r["calls"]) >= 1 for r in rows)

    def test_zero_trials(self, capsys, tmp_path):
        code, out, _ = run(
            capsys, "bench", "--k1-min", "4", "--k1-max", "6", "--trials", "0",
            "--records", str(tmp_path / "b.csv"),
        )
        assert code == 0
        summary = json.loads(out)
        assert summary["records"] == 0
        assert summary["fit_log_calls_vs_k1"] is None

    def test_seed_reproducible_modulo_timing(self, capsys, tmp_path):
        outs = []
        for name in ("a.csv", "b.csv"):
            path = tmp_path / name
            run(capsys, "bench", "--k1-min", "4", "--k1-max", "5", "--trials", "2",
                "--seed", "3", "--records", str(path))
            with open(path, newline="") as fh:
                rows = list(csv.DictReader(fh))
            for r in rows:
                r.pop("wall_time_s")
            outs.append(rows)
        assert outs[0] == outs[1]


class TestTrace:
    def test_trace_csv(self, capsys, psi1_file):
        code, out, _ = run(capsys, "trace", psi1_file, "--mode", "faithful")
        rows = list(csv.reader(io.StringIO(out)))
        assert rows[0] == ["depth", "lo_row", "lo_col", "hi_row", "hi_col", "r", "s", "branch"]
        assert len(rows) > 1
        golden = Path(__file__).parent / "data" / "psi1_faithful_trace.csv"
        assert out == golden.read_text()


class TestRobustness:
    def test_no_command_crashes_on_garbage(self, capsys, tmp_path):
        garbage = tmp_path / "g.p3cnf"
        garbage.write_text("\x00\x01 not a formula\n")
        for cmd in ("solve", "expand", "oracle", "lemmas", "matrix-dump", "trace"):
            code = cli.main([cmd, str(garbage)])
            capsys.readouterr()
            assert code == cli.EXIT_ERROR
