"""
YAML problem description files

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

Weights and heuristic values are real numbers (or ``"p/q"`` strings) that must be
whole multiples of ``epsilon``. Grid cells are written as two-element lists.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Union

import yaml

from rts_backtrack.exceptions import ValidationError
from rts_backtrack.models.costs import exact_text
from rts_backtrack.models.problem import ProblemSpec, State

logger = logging.getLogger(__name__)

REQUIRED_KEYS = ("start", "goals", "edges")


def _state(value: Any) -> State:
    if isinstance(value, list):
        return tuple(value)
    return value


def _plain(state: State) -> Any:
    if isinstance(state, tuple):
        return list(state)
    return state


def _number(text: str) -> Union[int, float, str]:
    """Keep exact decimals readable in YAML; ratios stay strings."""
    if "/" in text:
        return text
    return int(text) if "." not in text else float(text)


def problem_from_dict(data: Dict[str, Any], name: str = "problem") -> ProblemSpec:
    """
    Build a problem from a parsed description.

    Args:
        data: Mapping with the problem file keys
        name: Fallback problem name

    Returns:
        ProblemSpec

    Raises:
        ValidationError: Missing keys or malformed entries
    """
    if not isinstance(data, dict):
        raise ValidationError("Problem description must be a mapping")
    missing = [key for key in REQUIRED_KEYS if key not in data]
    if missing:
        raise ValidationError(f"Problem description is missing {', '.join(missing)}")

    edges = []
    for entry in data["edges"]:
        if not isinstance(entry, (list, tuple)) or len(entry) != 3:
            raise ValidationError(f"Edge entry {entry!r} must be [from, to, weight]")
        a, b, weight = entry
        edges.append((_state(a), _state(b), weight))

    goals = data["goals"]
    if not isinstance(goals, list):
        goals = [goals]
    raw_h = data.get("h_init") or {}
    pairs = raw_h.items() if isinstance(raw_h, dict) else raw_h
    h_init = {_state(k): v for k, v in pairs}
    states: List[State] = [_state(s) for s in data.get("states", [])]

    return ProblemSpec.from_edges(
        edges,
        goals=[_state(g) for g in goals],
        start=_state(data["start"]),
        h_init=h_init,
        epsilon=data.get("epsilon", 1),
        theta=data.get("theta", 1),
        states=states or None,
        undirected=bool(data.get("undirected", False)),
        name=str(data.get("name", name)),
    )


def _heuristic_entries(problem: ProblemSpec) -> Any:
    """Mapping of non-zero values, or [state, value] pairs when states are grid cells."""
    entries = [
        (s, _number(exact_text(problem.h_init[s], problem.epsilon)))
        for s in problem.states
        if problem.h_init[s]
    ]
    if any(isinstance(s, tuple) for s, _ in entries):
        return [[_plain(s), value] for s, value in entries]
    return dict(entries)


def problem_to_dict(problem: ProblemSpec) -> Dict[str, Any]:
    """Description of a problem with every directed edge listed."""
    eps = problem.epsilon
    edges = [
        [_plain(a), _plain(b), _number(exact_text(data["weight"], eps))]
        for a, b, data in sorted(
            problem.graph.edges(data=True), key=lambda e: (problem.rank[e[0]], problem.rank[e[1]])
        )
    ]
    return {
        "name": problem.name,
        "epsilon": _number(exact_text(1, eps)),
        "theta": _number(exact_text(1, problem.theta)),
        "start": _plain(problem.start),
        "goals": [_plain(g) for g in sorted(problem.goals, key=problem.rank.__getitem__)],
        "states": [_plain(s) for s in problem.states],
        "edges": edges,
        "h_init": _heuristic_entries(problem),
    }


def load_problem(path: Union[str, Path]) -> ProblemSpec:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except yaml.YAMLError as exc:
        raise ValidationError(f"Cannot parse problem file {path}: {exc}") from exc
    problem = problem_from_dict(data, name=path.stem)
    logger.info(f"Loaded problem {problem.name!r} from {path} ({len(problem)} states)")
    return problem


def dump_problem(problem: ProblemSpec, path: Union[str, Path]) -> Path:
    path = Path(path)
    path.write_text(yaml.safe_dump(problem_to_dict(problem), sort_keys=False))
    logger.info(f"Wrote problem {problem.name!r} to {path}")
    return path
