"""
Gridworld maps: text format, parsing and conversion to search problems

Map format: one text row per grid row, all rows the same length.

    #  blocked cell
    .  free cell
    S  start cell (exactly one)
    G  goal cell (at least one)

Cell (x, y) is column x of row y, both counted from 0 at the top-left corner.
Moves go to the four orthogonal neighbours at cost 1.
"""

import logging
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterator, List, Tuple

import numpy as np

from rts_backtrack.exceptions import MapParseError, ValidationError
from rts_backtrack.models.costs import is_finite
from rts_backtrack.models.problem import ProblemSpec, Real, State

logger = logging.getLogger(__name__)

Cell = Tuple[int, int]

FREE, BLOCKED, START, GOAL = ".", "#", "S", "G"
GLYPHS = frozenset(FREE + BLOCKED + START + GOAL)
HEURISTIC_KINDS = ("zero", "manhattan", "exact")


@dataclass
class GridMap:
    """4-connected unit-cost gridworld."""
    width: int
    height: int
    blocked: np.ndarray
    start: Cell
    goals: FrozenSet[Cell]
    name: str = "grid"
    source: str = field(default="", repr=False)

    def __post_init__(self):
        if self.blocked.shape != (self.height, self.width):
            raise ValidationError(
                f"Blocked mask has shape {self.blocked.shape}, expected {(self.height, self.width)}"
            )
        if not self.goals:
            raise ValidationError("Grid map needs at least one goal cell")
        for cell in (self.start, *self.goals):
            if not self.is_free(cell):
                raise ValidationError(f"Cell {cell} must be free")

    def in_bounds(self, cell: Cell) -> bool:
        x, y = cell
        return 0 <= x < self.width and 0 <= y < self.height

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and not bool(self.blocked[cell[1], cell[0]])

    def free_cells(self) -> List[Cell]:
        ys, xs = np.nonzero(~self.blocked)
        return sorted(zip(xs.tolist(), ys.tolist()))

    def neighbours(self, cell: Cell) -> Iterator[Cell]:
        x, y = cell
        for nx_, ny_ in ((x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)):
            if self.is_free((nx_, ny_)):
                yield (nx_, ny_)

    def manhattan(self, cell: Cell) -> int:
        return min(abs(cell[0] - gx) + abs(cell[1] - gy) for gx, gy in self.goals)

    def to_text(self) -> str:
        rows = []
        for y in range(self.height):
            row = []
            for x in range(self.width):
                if (x, y) == self.start:
                    row.append(START)
                elif (x, y) in self.goals:
                    row.append(GOAL)
                else:
                    row.append(BLOCKED if self.blocked[y, x] else FREE)
            rows.append("".join(row))
        return "\n".join(rows) + "\n"


def parse_grid_map(text: str, name: str = "grid") -> GridMap:
    """
    Decode a map in the grid text format.

    Trailing blank lines are ignored; every other line is a grid row.

    Args:
        text: Map file contents
        name: Map identifier

    Returns:
        GridMap

    Raises:
        MapParseError: Ragged rows, unknown glyphs, no start, several starts or no goal
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise MapParseError("Map is empty", line=1)

    width = len(lines[0])
    if width == 0:
        raise MapParseError("First row is empty", line=1)
    blocked = np.zeros((len(lines), width), dtype=bool)
    start = None
    goals = []

    for y, row in enumerate(lines):
        if len(row) != width:
            raise MapParseError(
                f"Row has {len(row)} cells, expected {width}", line=y + 1, column=min(len(row), width) + 1
            )
        for x, glyph in enumerate(row):
            if glyph not in GLYPHS:
                raise MapParseError(f"Unknown glyph {glyph!r}", line=y + 1, column=x + 1)
            if glyph == BLOCKED:
                blocked[y, x] = True
            elif glyph == START:
                if start is not None:
                    raise MapParseError("Second start cell", line=y + 1, column=x + 1)
                start = (x, y)
            elif glyph == GOAL:
                goals.append((x, y))

    if start is None:
        raise MapParseError("Map has no start cell 'S'")
    if not goals:
        raise MapParseError("Map has no goal cell 'G'")

    grid = GridMap(
        width=width,
        height=len(lines),
        blocked=blocked,
        start=start,
        goals=frozenset(goals),
        name=name,
        source=text,
    )
    logger.debug(f"Parsed map {name!r}: {width}x{len(lines)}, {len(goals)} goal(s)")
    return grid


def grid_to_problem(grid: GridMap, theta: Real = 1, h0: str = "manhattan") -> ProblemSpec:
    """
    Search problem over the free cells of a grid.

    Args:
        grid: Parsed map
        theta: Admissibility weight
        h0: Initial heuristic, one of ``zero``, ``manhattan`` or ``exact`` (true distances)

    Returns:
        ProblemSpec with ε = 1 and states ``(x, y)``
    """
    if h0 not in HEURISTIC_KINDS:
        raise ValidationError(f"Unknown heuristic kind {h0!r}; choose one of {', '.join(HEURISTIC_KINDS)}")
    cells = grid.free_cells()
    edges = [(cell, other, 1) for cell in cells for other in grid.neighbours(cell)]
    h_init: Dict[State, int] = {}
    if h0 == "manhattan":
        h_init = {cell: grid.manhattan(cell) for cell in cells}

    problem = ProblemSpec.from_edges(
        edges,
        goals=sorted(grid.goals),
        start=grid.start,
        h_init=h_init,
        epsilon=1,
        theta=theta,
        states=cells,
        name=grid.name,
    )
    if h0 == "exact":
        exact = {cell: problem.oracle.goal_distance(cell) for cell in cells}
        unreachable = [c for c, d in exact.items() if not is_finite(d)]
        if unreachable:
            raise ValidationError(f"Cells {unreachable[:5]} cannot reach a goal")
        problem = problem.with_h_init(exact)
    return problem
