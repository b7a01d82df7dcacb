"""
Tests for grid maps, problem files, trace output and the named fixtures
"""

import pytest

from rts_backtrack.exceptions import FormatError, MapParseError, ValidationError
from rts_backtrack.framework.agent import run_search
from rts_backtrack.framework.audit import audit_trace
from rts_backtrack.harness.fixtures import FIXTURES, TWO_GOAL_WORLD, load_fixture
from rts_backtrack.harness.gridmap import grid_to_problem, parse_grid_map
from rts_backtrack.harness.problem_file import dump_problem, load_problem, problem_from_dict, problem_to_dict
from rts_backtrack.harness.trace import emit_trace, read_trace, trace_table
from rts_backtrack.models.run import TRACE_COLUMNS
from rts_backtrack.policies import get_policy

FOUR_STATE_YAML = """\
name: four-state
epsilon: 0.1
theta: 1
start: C
goals: [A]
undirected: true
edges:
  - [A, B, 1]
  - [B, C, 1]
  - [C, D, 1]
h_init:
  B: 1
  C: 1
  D: 0.7
"""


class TestGridMap:
    def test_line_map(self):
        grid = parse_grid_map("S.G\n")
        problem = grid_to_problem(grid)
        assert [problem.h_init[c] for c in [(0, 0), (1, 0), (2, 0)]] == [2, 1, 0]
        assert problem.start == (0, 0)
        assert problem.goals == {(2, 0)}

    def test_two_goal_world(self, world):
        problem, region = world
        assert len(problem) == 30
        assert problem.goals == {(1, 1), (4, 4)}
        assert problem.start == (0, 4)
        assert len(region) == 9
        assert all(v == 0 for v in problem.h_init.values())

    def test_blocked_cells_are_not_states(self):
        grid = parse_grid_map("S#\n.G\n")
        problem = grid_to_problem(grid)
        assert (1, 0) not in problem.graph
        assert problem.oracle.goal_distance((0, 0)) == 2

    def test_exact_heuristic(self):
        problem = grid_to_problem(parse_grid_map("S#G\n...\n"), h0="exact")
        assert problem.h_init[(0, 0)] == 4

    def test_round_trip_text(self):
        grid = parse_grid_map(TWO_GOAL_WORLD)
        assert grid.to_text() == TWO_GOAL_WORLD

    @pytest.mark.parametrize(
        "text, line",
        [
            ("S.\n...G\n", 2),
            ("S.x\n..G\n", 1),
            ("...\n..G\n", None),
            ("S.S\n..G\n", 1),
            ("S..\n...\n", None),
            ("\n\n", 1),
        ],
    )
    def test_parse_errors(self, text, line):
        with pytest.raises(MapParseError) as excinfo:
            parse_grid_map(text)
        assert excinfo.value.line == line

    def test_unreachable_cell_with_exact_heuristic(self):
        with pytest.raises(ValidationError):
            grid_to_problem(parse_grid_map("S.#.\n.G#.\n"), h0="exact")

    def test_unknown_heuristic_kind(self):
        with pytest.raises(ValidationError):
            grid_to_problem(parse_grid_map("SG\n"), h0="octile")


class TestProblemFile:
    def test_load(self, tmp_path, four_state):
        path = tmp_path / "four.yaml"
        path.write_text(FOUR_STATE_YAML)
        problem = load_problem(path)
        assert problem.h_init == four_state.h_init
        assert sorted(problem.graph.edges(data="weight")) == sorted(four_state.graph.edges(data="weight"))
        assert problem.epsilon == four_state.epsilon
        assert problem.name == "four-state"

    def test_dump_then_load_grid_problem(self, tmp_path):
        problem = grid_to_problem(parse_grid_map("S.\n.G\n"))
        loaded = load_problem(dump_problem(problem, tmp_path / "grid.yaml"))
        assert loaded.states == problem.states
        assert loaded.h_init == problem.h_init
        assert loaded.start == (0, 0)

    def test_ratio_values(self):
        data = {"start": "a", "goals": "b", "edges": [["a", "b", "1/3"]], "epsilon": "1/3"}
        problem = problem_from_dict(data)
        assert problem.weight("a", "b") == 1
        assert problem_to_dict(problem)["edges"] == [["a", "b", "1/3"]]

    @pytest.mark.parametrize(
        "data",
        [
            [],
            {"start": "a", "goals": ["b"]},
            {"start": "a", "goals": ["b"], "edges": [["a", "b"]]},
        ],
    )
    def test_malformed(self, data):
        with pytest.raises(ValidationError):
            problem_from_dict(data)

    def test_unparsable_yaml(self, tmp_path):
        path = tmp_path / "bad.yaml"
        path.write_text("edges: [a, b\n")
        with pytest.raises(ValidationError):
            load_problem(path)


class TestTrace:
    def test_four_state_table(self, four_state):
        result = run_search(get_policy("lrta"), four_state)
        lines = emit_trace(result, four_state, "table").strip().splitlines()
        assert lines[0].split() == ["t", "h(A)", "h(B)", "h(C)", "h(D)", "stack", "lss", "u"]
        rows = [line.split() for line in lines[1:]]
        assert rows == [
            ["0", "0", "1", "*1", "0.7", "[C]", "{B,D}", "0"],
            ["1", "0", "1", "1.7", "*0.7", "[C,D]", "{C}", "0.7"],
            ["2", "0", "1", "*1.7", "2.7", "[C,D,C]", "{B,D}", "2.7"],
            ["3", "0", "*1", "2", "2.7", "[C,D,C,B]", "{A,C}", "3"],
            ["4", "*0", "1", "2", "2.7", "[C,D,C,B,A]", "{B}", "3"],
        ]

    def test_table_refuses_large_problems(self, world):
        problem, _ = world
        result = run_search(get_policy("lrta"), problem)
        with pytest.raises(FormatError):
            trace_table(result.trace, problem)

    def test_empty_trace_is_a_header(self, four_state):
        problem = four_state.with_start("A")
        text = emit_trace(run_search(get_policy("lrta"), problem), problem, "csv")
        assert text.strip() == ",".join(TRACE_COLUMNS)

    def test_unknown_format(self, four_state):
        result = run_search(get_policy("lrta"), four_state)
        with pytest.raises(FormatError):
            emit_trace(result, four_state, "xml")

    def test_csv_replays_cleanly(self, four_state):
        result = run_search(get_policy("sla"), four_state)
        records = read_trace(emit_trace(result, four_state), four_state)
        assert [r.stack for r in records] == [r.stack for r in result.trace]
        assert [r.changes for r in records] == [r.changes for r in result.trace]
        assert audit_trace(four_state, records) == []

    def test_csv_round_trip_on_a_grid(self, world):
        problem, _ = world
        result = run_search(get_policy("slat", acyclic=True), problem)
        records = read_trace(emit_trace(result, problem), problem)
        assert records[-1].stack == result.final_stack
        assert audit_trace(problem, records) == []

    def test_inconsistent_trace(self, four_state):
        text = emit_trace(run_search(get_policy("lrta"), four_state), four_state)
        lines = text.splitlines()
        lines[2] = lines[2].replace(",D,", ",B,", 1)
        with pytest.raises(FormatError):
            read_trace("\n".join(lines) + "\n", four_state)

    def test_missing_columns(self, four_state):
        with pytest.raises(FormatError):
            read_trace("t,top\n0,C\n", four_state)


class TestFixtures:
    @pytest.mark.parametrize("name", sorted(FIXTURES))
    def test_every_fixture_loads(self, name):
        assert len(load_fixture(name)) > 0

    def test_unknown_fixture(self):
        with pytest.raises(ValidationError):
            load_fixture("nope")
