# Harness package
from rts_backtrack.harness.fixtures import FIXTURES, load_fixture
from rts_backtrack.harness.generators import (
    admissible_heuristic,
    chain_problem,
    gen_problem,
    positive_h,
    problem_corpus,
    random_problem,
)
from rts_backtrack.harness.gridmap import GridMap, grid_to_problem, parse_grid_map
from rts_backtrack.harness.problem_file import dump_problem, load_problem, problem_from_dict, problem_to_dict
from rts_backtrack.harness.trace import emit_trace, read_trace, trace_table

__all__ = [
    "FIXTURES",
    "load_fixture",
    "admissible_heuristic",
    "chain_problem",
    "gen_problem",
    "positive_h",
    "problem_corpus",
    "random_problem",
    "GridMap",
    "grid_to_problem",
    "parse_grid_map",
    "dump_problem",
    "load_problem",
    "problem_from_dict",
    "problem_to_dict",
    "emit_trace",
    "read_trace",
    "trace_table",
]
