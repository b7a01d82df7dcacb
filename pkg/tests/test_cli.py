"""
Tests for the command-line interface and its exit codes
"""

import json

import pandas as pd
import pytest
from click.testing import CliRunner

from rts_backtrack.cli import ExitCode, main
from rts_backtrack.exceptions import FrameworkError
from rts_backtrack.lab.sweep import SWEEP_COLUMNS
from rts_backtrack.models.run import TRACE_COLUMNS


@pytest.fixture
def runner():
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(main, [str(a) for a in args], catch_exceptions=False)


class TestRun:
    def test_writes_a_csv_trace(self, runner, tmp_path):
        out = tmp_path / "trace.csv"
        result = invoke(runner, "run", "--fixture", "four-state", "--algo", "lrta", "--out", out)
        assert result.exit_code == ExitCode.OK
        frame = pd.read_csv(out)
        assert list(frame.columns) == TRACE_COLUMNS
        assert list(frame["next_state"]) == ["D", "C", "B", "A"]

    def test_table_format(self, runner, tmp_path):
        out = tmp_path / "trace.txt"
        result = invoke(
            runner, "run", "--fixture", "four-state", "--algo", "sla", "--trace-format", "table", "--out", out
        )
        assert result.exit_code == ExitCode.OK
        assert out.read_text().splitlines()[-1].split()[5] == "[C,B,A]"

    def test_generated_problem(self, runner, tmp_path):
        out = tmp_path / "trace.csv"
        result = invoke(
            runner, "run", "--gen", "random", "--size", 12, "--seed", 3, "--algo", "slat", "--quota", 2,
            "--acyclic", "--out", out,
        )
        assert result.exit_code == ExitCode.OK
        assert out.exists()

    def test_map_file(self, runner, tmp_path):
        grid = tmp_path / "small.map"
        grid.write_text("S..\n.#.\n..G\n")
        result = invoke(runner, "run", "--map", grid, "--algo", "dynlook", "--dmax", 3, "--out", tmp_path / "t.csv")
        assert result.exit_code == ExitCode.OK

    def test_timeout(self, runner, tmp_path):
        result = invoke(runner, "run", "--fixture", "four-state", "--budget", 1, "--out", tmp_path / "t.csv")
        assert result.exit_code == ExitCode.TIMEOUT

    def test_bad_map(self, runner, tmp_path):
        grid = tmp_path / "bad.map"
        grid.write_text("S.x\n..G\n")
        result = invoke(runner, "run", "--map", grid)
        assert result.exit_code == ExitCode.PARSE_ERROR

    def test_piecewise_needs_k(self, runner):
        result = invoke(runner, "run", "--fixture", "four-state", "--algo", "piecewise")
        assert result.exit_code == ExitCode.CONFIG_ERROR

    def test_one_problem_source(self, runner):
        assert invoke(runner, "run").exit_code == ExitCode.CONFIG_ERROR
        result = invoke(runner, "run", "--fixture", "four-state", "--gen", "chain")
        assert result.exit_code == ExitCode.CONFIG_ERROR

    def test_invalid_problem(self, runner, tmp_path):
        problem = tmp_path / "bad.yaml"
        problem.write_text("start: a\ngoals: [b]\nedges: [[a, b, 1]]\nh_init: {a: 5}\n")
        result = invoke(runner, "run", "--problem", problem)
        assert result.exit_code == ExitCode.INVALID_PROBLEM

    def test_policy_contract_breach(self, runner, mocker):
        mocker.patch("rts_backtrack.cli.run_search", side_effect=FrameworkError("bad move"))
        result = invoke(runner, "run", "--fixture", "four-state")
        assert result.exit_code == ExitCode.SEARCH_ERROR
        assert "search failed: bad move" in result.output

    def test_config_file_and_environment(self, runner, tmp_path, monkeypatch):
        config = tmp_path / "run.yaml"
        config.write_text("algo: sla\n")
        monkeypatch.setenv("RTS_TRACE_FORMAT", "table")
        out = tmp_path / "trace.txt"
        result = invoke(runner, "--config", config, "run", "--fixture", "four-state", "--out", out)
        assert result.exit_code == ExitCode.OK
        assert "[C,B,A]" in out.read_text()


class TestSweep:
    def test_fixture_sweep(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        result = invoke(
            runner, "sweep", "--fixture", "four-state", "--algo", "sla", "--quotas", "0,1", "--out", out
        )
        assert result.exit_code == ExitCode.OK
        frame = pd.read_csv(out)
        assert list(frame.columns) == SWEEP_COLUMNS
        assert len(frame) == 2
        assert frame["within_bound"].all()

    def test_random_corpus_with_fit(self, runner, tmp_path):
        out = tmp_path / "sweep.csv"
        result = invoke(
            runner, "sweep", "--gen", "random", "--count", 3, "--size", 8, "--algo", "slat",
            "--acyclic", "--quotas", "0,2", "--fit", "--out", out,
        )
        assert result.exit_code == ExitCode.OK
        assert len(pd.read_csv(out)) == 6

    @pytest.mark.parametrize(
        "source",
        [
            ("--fixture", "four-state"),
            ("--gen", "chain"),
            ("--gen", "random", "--fixture", "four-state"),
        ],
    )
    def test_count_needs_a_random_generator(self, runner, source):
        result = invoke(runner, "sweep", *source, "--count", 3, "--algo", "sla", "--quotas", "0")
        assert result.exit_code == ExitCode.CONFIG_ERROR
        assert "--count" in result.output

    def test_empty_quota_list(self, runner):
        result = invoke(runner, "sweep", "--fixture", "four-state", "--quotas", ",")
        assert result.exit_code == ExitCode.CONFIG_ERROR


class TestAudit:
    @pytest.fixture
    def trace_file(self, runner, tmp_path):
        path = tmp_path / "trace.csv"
        invoke(runner, "run", "--fixture", "four-state", "--algo", "lrta", "--out", path)
        return path

    def test_clean_trace(self, runner, trace_file, tmp_path):
        out = tmp_path / "audit.json"
        result = invoke(runner, "audit", "--fixture", "four-state", "--trace", trace_file, "--out", out)
        assert result.exit_code == ExitCode.OK
        report = json.loads(out.read_text())
        assert report == {"cycles": 4, "violations": []}

    def test_tampered_trace(self, runner, trace_file):
        trace_file.write_text(trace_file.read_text().replace("C=1->1.7", "C=1->9"))
        result = invoke(runner, "audit", "--fixture", "four-state", "--trace", trace_file)
        assert result.exit_code == ExitCode.AUDIT_VIOLATION

    def test_garbled_trace(self, runner, tmp_path):
        path = tmp_path / "trace.csv"
        path.write_text("t,top\n0,C\n")
        result = invoke(runner, "audit", "--fixture", "four-state", "--trace", path)
        assert result.exit_code == ExitCode.PARSE_ERROR


class TestValidate:
    def test_valid_fixture(self, runner):
        result = invoke(runner, "validate", "--fixture", "five-state-trap")
        assert result.exit_code == ExitCode.OK

    def test_inadmissible_heuristic(self, runner, tmp_path):
        problem = tmp_path / "p.yaml"
        problem.write_text("start: a\ngoals: [b]\nedges: [[a, b, 1]]\nh_init: {a: 2}\n")
        assert invoke(runner, "validate", "--problem", problem).exit_code == ExitCode.INVALID_PROBLEM
        assert invoke(runner, "validate", "--problem", problem, "--theta", 2).exit_code == ExitCode.OK
