import json

import pytest

from abelianfree.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCheck:
    def test_free_word(self, capsys):
        code, out, _ = run(capsys, "check", "--sigma", "5", "--alpha", "3/2",
                           "--word", "abcdebdae")
        assert code == 0
        assert out.strip() == "FREE"

    def test_forbidden_word_with_witness(self, capsys):
        code, out, _ = run(capsys, "check", "--sigma", "5", "--alpha", "3/2",
                           "--word", "abcdebdaec")
        assert code == 1
        assert out.startswith("FORBIDDEN")
        assert "left=1" in out and "i=6" in out

    def test_word_from_file(self, capsys, tmp_path):
        f = tmp_path / "w.txt"
        f.write_text("abcbaca\n")
        code, out, _ = run(capsys, "check", "--sigma", "3", "--alpha", "7/3",
                           "--file", str(f))
        assert code == 1

    def test_dual_check(self, capsys):
        code, out, _ = run(capsys, "check", "--sigma", "3", "--alpha", "7/3",
                           "--dual", "--word", "acabcba")
        assert code == 1
        fwd, out, _ = run(capsys, "check", "--sigma", "3", "--alpha", "7/3",
                          "--word", "acabcba")
        assert fwd == 0

    def test_oracle_detector(self, capsys):
        code, out, _ = run(capsys, "check", "--sigma", "2", "--alpha", "2",
                           "--detector", "oracle", "--word", "aba")
        assert code == 0

    def test_bad_exponent_is_usage_error(self, capsys):
        code, _, err = run(capsys, "check", "--sigma", "2", "--alpha", "x/y",
                           "--word", "ab")
        assert code == 2
        assert "error:" in err

    def test_non_normalized_exponent_warns(self, capsys):
        code, _, err = run(capsys, "check", "--sigma", "2", "--alpha", "6/4",
                           "--word", "ab")
        assert code == 0
        assert "warning" in err


class TestWalk:
    def test_summary_and_trace(self, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        report = tmp_path / "summary.json"
        code, out, _ = run(capsys, "walk", "--sigma", "3", "--alpha", "2",
                           "--nodes", "500", "--seed", "1",
                           "--trace", str(trace), "--report", str(report))
        assert code == 0
        payload = json.loads(report.read_text())
        assert payload["sigma"] == 3
        assert payload["N"] == 500
        assert payload["config"]["seed"] == 1
        lines = trace.read_text().splitlines()
        assert lines[0] == "node_index,level"
        assert lines[1] == "1,0"
        assert len(lines) == payload["total_nodes"] + 1

    def test_single_node_budget(self, capsys, tmp_path):
        trace = tmp_path / "trace.csv"
        code, out, _ = run(capsys, "walk", "--sigma", "2", "--alpha", "3/2",
                           "--nodes", "1", "--trace", str(trace))
        assert code == 0
        assert trace.read_text().splitlines()[1] == "1,0"

    def test_stdout_json(self, capsys):
        code, out, _ = run(capsys, "walk", "--sigma", "3", "--alpha", "2",
                           "--nodes", "100")
        payload = json.loads(out)
        assert payload["detector"] == "small"

    def test_no_backtrack_flag(self, capsys):
        code, out, _ = run(capsys, "walk", "--sigma", "3", "--alpha", "2",
                           "--nodes", "100", "--no-backtrack")
        assert code == 0
        assert json.loads(out)["config"]["backtrack"] is False


class TestBatch:
    def test_batch_summary(self, capsys):
        code, out, _ = run(capsys, "batch", "--sigma", "3", "--alpha", "2",
                           "--nodes", "300", "--runs", "4")
        payload = json.loads(out)
        assert payload["runs"] == 4
        assert payload["ml_max"] >= payload["ml_med"]


class TestExhaust:
    def test_exhausted_language(self, capsys, tmp_path):
        hist = tmp_path / "hist.csv"
        code, out, _ = run(capsys, "exhaust", "--sigma", "3", "--alpha", "2",
                           "--depth-cap", "64", "--histogram", str(hist))
        assert code == 0
        payload = json.loads(out)
        assert payload["verdict"] == "finite"
        lines = hist.read_text().splitlines()
        assert lines[0] == "length,count"
        assert lines[1] == "0,1"

    def test_capped_run_exits_one(self, capsys):
        code, out, _ = run(capsys, "exhaust", "--sigma", "2", "--alpha",
                           "7/2", "--lexmin", "--depth-cap", "10")
        assert code == 1
        assert json.loads(out)["verdict"] == "inconclusive"

    def test_resume_mismatch_refused(self, capsys, tmp_path):
        from abelianfree.core import ExtendedExponent
        from abelianfree.detect import DetectorKind, Patch
        from abelianfree.search import DfsEngine, save_checkpoint
        eng = DfsEngine(3, ExtendedExponent(2, 1),
                        DetectorKind.SMALL_GENERIC, Patch.NONE, depth_cap=64)
        eng.run(max_steps=10)
        path = tmp_path / "ck.txt"
        save_checkpoint(str(path), eng)
        code, _, err = run(capsys, "exhaust", "--sigma", "4", "--alpha", "2",
                           "--detector", "small", "--depth-cap", "64",
                           "--resume", str(path))
        assert code == 2
        assert "checkpoint" in err

    def test_resume_completes(self, capsys, tmp_path):
        path = tmp_path / "ck.txt"
        from abelianfree.core import ExtendedExponent
        from abelianfree.detect import DetectorKind, Patch
        from abelianfree.search import DfsEngine, save_checkpoint
        eng = DfsEngine(3, ExtendedExponent(2, 1),
                        DetectorKind.SMALL_GENERIC, Patch.NONE, depth_cap=64)
        eng.run(max_steps=40)
        save_checkpoint(str(path), eng)
        code, out, _ = run(capsys, "exhaust", "--sigma", "3", "--alpha", "2",
                           "--detector", "small", "--depth-cap", "64",
                           "--resume", str(path))
        assert code == 0
        full = run(capsys, "exhaust", "--sigma", "3", "--alpha", "2",
                   "--detector", "small", "--depth-cap", "64")
        assert json.loads(out)["total_nodes"] == \
            json.loads(full[1])["total_nodes"]


class TestLemma:
    def test_small_part(self, capsys):
        code, out, _ = run(capsys, "lemma", "--sigma", "6", "--part", "L1",
                           "--depth-cap", "512")
        assert code == 0
        payload = json.loads(out)
        assert payload["total_nodes"] == 1924
        assert payload["max_length"] == 34


class TestEstimators:
    def test_gap_csv(self, capsys, tmp_path):
        out_path = tmp_path / "gap.csv"
        code, _, _ = run(capsys, "gap", "--sigma", "2", "--l", "1,4",
                         "--samples", "2000", "--out", str(out_path))
        assert code == 0
        lines = out_path.read_text().splitlines()
        assert lines[0] == "l,mean_delta"
        l1 = float(lines[1].split(",")[1])
        assert l1 == pytest.approx(1.0, rel=0.1)

    def test_bench_csv(self, capsys):
        code, out, _ = run(capsys, "bench", "--n", "200,400",
                           "--samples", "30")
        assert code == 0
        lines = out.splitlines()
        assert lines[0] == "n,mean_iterations,mean_seconds"
        assert len(lines) == 3


def test_missing_subcommand_is_usage_error(capsys):
    assert main([]) == 2
