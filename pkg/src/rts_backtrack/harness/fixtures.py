"""
Named problem instances used by the test suites and the CLI (``--fixture``)
"""

from typing import Callable, Dict, FrozenSet, Tuple

from rts_backtrack.exceptions import ValidationError
from rts_backtrack.harness.generators import chain_problem
from rts_backtrack.harness.gridmap import grid_to_problem, parse_grid_map
from rts_backtrack.models.problem import ProblemSpec, State

FOUR_STATE_H = {"A": 0, "B": 1, "C": 1, "D": "0.7"}

TWO_GOAL_WORLD = """\
......
.G....
......
......
S...G.
"""


def four_state_chain() -> ProblemSpec:
    """A-B-C-D with unit edges, goal A, start C, ε = 0.1 and h(D) = 0.7."""
    return chain_problem(4, h_init=FOUR_STATE_H, epsilon="0.1", start="C", name="four-state")


def two_goal_world() -> Tuple[ProblemSpec, FrozenSet[State]]:
    """
    6×5 gridworld with goals at (1,1) and (4,4), plus a 3×3 region around (2,2).

    The region's border is its outer ring; (2,2) is its only inner state, and the goal
    (1,1) sits on the border.
    """
    grid = parse_grid_map(TWO_GOAL_WORLD, name="two-goal-world")
    region = frozenset((x, y) for x in range(1, 4) for y in range(1, 4))
    return grid_to_problem(grid, h0="zero"), region


def overshoot_chain() -> ProblemSpec:
    """
    s - m - g, unit edges, h(s) = h(m) = 1.

    With the visited union {s, m} the largest safe value at s is 2 = h*(s); anything
    higher breaks 1-admissibility.
    """
    return ProblemSpec.from_edges(
        [("s", "m", 1), ("m", "g", 1)],
        goals=["g"],
        start="s",
        h_init={"s": 1, "m": 1},
        undirected=True,
        name="overshoot-chain",
    )


def raised_star() -> ProblemSpec:
    """
    Star around x with leaves s, a and the goal g, unit edges.

    h(s) = 1, h(a) = 2, h(x) = 0. The plain max-of-mins value at s is 1, but the value
    a passes on to x lets s safely rise to 2.
    """
    return ProblemSpec.from_edges(
        [("s", "x", 1), ("x", "g", 1), ("a", "x", 1)],
        goals=["g"],
        start="s",
        h_init={"s": 1, "a": 2},
        undirected=True,
        name="raised-star",
    )


def five_state_trap() -> ProblemSpec:
    """
    A-B-C-D-E, unit edges, goal E, start B, h = (2, 2, 2, 0, 0).

    B is a depth-1 trap (both neighbours have f = 3 > h(B)); depth 2 reaches D with f = 2.
    """
    labels = "ABCDE"
    return ProblemSpec.from_edges(
        [(a, b, 1) for a, b in zip(labels, labels[1:])],
        goals=["E"],
        start="B",
        h_init={"A": 2, "B": 2, "C": 2},
        undirected=True,
        name="five-state-trap",
    )


def segment_overshoot() -> ProblemSpec:
    """
    States 0..3, undirected unit edges 0-3, 0-1, 1-2, goal 3, start 0, h ≡ 0.

    Piecewise search with k = 1 and T = 0 finishes on [0,1,2,1,0,3] (cost 5), above
    3θ·dist + 2T = 3.
    """
    return ProblemSpec.from_edges(
        [(0, 3, 1), (0, 1, 1), (1, 2, 1)],
        goals=[3],
        start=0,
        undirected=True,
        name="segment-overshoot",
    )


FIXTURES: Dict[str, Callable[[], ProblemSpec]] = {
    "four-state": four_state_chain,
    "two-goal-world": lambda: two_goal_world()[0],
    "overshoot-chain": overshoot_chain,
    "raised-star": raised_star,
    "five-state-trap": five_state_trap,
    "segment-overshoot": segment_overshoot,
}


def load_fixture(name: str) -> ProblemSpec:
    try:
        return FIXTURES[name]()
    except KeyError:
        raise ValidationError(f"Unknown fixture {name!r}; choose one of {', '.join(sorted(FIXTURES))}")
