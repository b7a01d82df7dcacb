"""
Heuristic search problem model
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Dict, FrozenSet, Hashable, Iterable, List, Mapping, Optional, Tuple, Union

import networkx as nx

from rts_backtrack.exceptions import ValidationError
from rts_backtrack.models.costs import Cost, as_fraction, to_units

logger = logging.getLogger(__name__)

State = Hashable
Real = Union[int, float, str, Fraction]


def state_label(state: State) -> str:
    """Text form of a state id used in traces and files (grid cells print as ``x:y``)."""
    if isinstance(state, tuple):
        return ":".join(str(part) for part in state)
    return str(state)


def _ordered(states: Iterable[State]) -> Tuple[State, ...]:
    states = list(states)
    try:
        return tuple(sorted(states))
    except TypeError:
        return tuple(sorted(states, key=lambda s: (type(s).__name__, repr(s))))


@dataclass(eq=False)
class ProblemSpec:
    """
    A heuristic search problem: weighted digraph, goals, start state and initial heuristic.

    Edge weights and ``h_init`` are stored in ε units (integers); ``epsilon`` converts
    them back to real costs. The problem is read-only once built.
    """
    graph: nx.DiGraph
    goals: FrozenSet[State]
    start: State
    h_init: Dict[State, Cost] = field(default_factory=dict)
    epsilon: Fraction = Fraction(1)
    theta: Fraction = Fraction(1)
    name: str = "problem"

    def __post_init__(self):
        self.epsilon = as_fraction(self.epsilon)
        self.theta = as_fraction(self.theta)
        self.goals = frozenset(self.goals)

        if self.epsilon <= 0:
            raise ValidationError(f"epsilon must be positive, got {self.epsilon}")
        if self.theta <= 0:
            raise ValidationError(f"theta must be positive, got {self.theta}")
        if not self.goals:
            raise ValidationError("Problem needs at least one goal state")
        for goal in self.goals:
            self.require_state(goal)
        self.require_state(self.start)

        for a, b, data in self.graph.edges(data=True):
            weight = data.get("weight")
            if not isinstance(weight, int) or isinstance(weight, bool) or weight < 1:
                raise ValidationError(
                    f"Edge {state_label(a)}->{state_label(b)} has weight {weight!r}; "
                    "expected a positive whole number of epsilon units"
                )

        h_init = {}
        for state in self.graph.nodes:
            value = self.h_init.get(state, 0)
            if not isinstance(value, int) or isinstance(value, bool) or value < 0:
                raise ValidationError(
                    f"h_init({state_label(state)}) = {value!r} is not a non-negative "
                    "whole number of epsilon units"
                )
            h_init[state] = value
        unknown = set(self.h_init) - set(self.graph.nodes)
        if unknown:
            raise ValidationError(f"h_init mentions unknown states: {sorted(map(state_label, unknown))}")
        self.h_init = h_init

    @classmethod
    def from_edges(
        cls,
        edges: Iterable[Tuple[State, State, Real]],
        goals: Iterable[State],
        start: State,
        h_init: Optional[Mapping[State, Real]] = None,
        epsilon: Real = 1,
        theta: Real = 1,
        states: Optional[Iterable[State]] = None,
        undirected: bool = False,
        name: str = "problem",
    ) -> "ProblemSpec":
        """
        Build a problem from real-valued edge weights and heuristic values.

        Args:
            edges: ``(from, to, weight)`` triples in real cost units
            goals: Goal states
            start: Start state
            h_init: Initial heuristic in real cost units (missing states default to 0)
            epsilon: Cost quantum; every weight and heuristic value must be a multiple
            theta: Admissibility weight
            states: Extra isolated states to include
            undirected: Add the reverse of every edge with the same weight
            name: Problem identifier used in reports

        Returns:
            ProblemSpec with costs quantized to ε units
        """
        eps = as_fraction(epsilon)
        graph = nx.DiGraph()
        if states is not None:
            graph.add_nodes_from(states)
        for a, b, weight in edges:
            units = to_units(weight, eps)
            graph.add_edge(a, b, weight=units)
            if undirected:
                graph.add_edge(b, a, weight=units)
        goals = list(goals)
        unknown = [s for s in [start, *goals] if s not in graph]
        if unknown:
            raise ValidationError(
                f"Start or goal states missing from the edge list: {[state_label(s) for s in unknown]}"
            )

        h_units: Dict[State, Cost] = {}
        for state, value in (h_init or {}).items():
            h_units[state] = to_units(value, eps)

        return cls(
            graph=graph,
            goals=frozenset(goals),
            start=start,
            h_init=h_units,
            epsilon=eps,
            theta=as_fraction(theta),
            name=name,
        )

    @cached_property
    def states(self) -> Tuple[State, ...]:
        """All states in deterministic id order."""
        return _ordered(self.graph.nodes)

    @cached_property
    def rank(self) -> Dict[State, int]:
        return {state: index for index, state in enumerate(self.states)}

    @cached_property
    def labels(self) -> Dict[str, State]:
        return {state_label(state): state for state in self.states}

    @cached_property
    def oracle(self):
        from rts_backtrack.graph.oracle import DistanceOracle
        return DistanceOracle(self)

    def require_state(self, state: Any) -> State:
        if state not in self.graph:
            raise ValidationError(f"Unknown state: {state!r}")
        return state

    def state_for_label(self, label: str) -> State:
        try:
            return self.labels[label]
        except KeyError:
            raise ValidationError(f"Unknown state label: {label!r}")

    def is_goal(self, state: State) -> bool:
        return state in self.goals

    def successors(self, state: State) -> List[State]:
        """Successors of a state in id order."""
        self.require_state(state)
        return sorted(self.graph.successors(state), key=self.rank.__getitem__)

    def weight(self, a: State, b: State) -> int:
        return self.graph[a][b]["weight"]

    def with_h_init(self, h_init: Mapping[State, Cost], theta: Optional[Real] = None) -> "ProblemSpec":
        """Copy of this problem with another initial heuristic (ε units)."""
        return ProblemSpec(
            graph=self.graph,
            goals=self.goals,
            start=self.start,
            h_init=dict(h_init),
            epsilon=self.epsilon,
            theta=self.theta if theta is None else as_fraction(theta),
            name=self.name,
        )

    def with_start(self, start: State) -> "ProblemSpec":
        return ProblemSpec(
            graph=self.graph,
            goals=self.goals,
            start=start,
            h_init=dict(self.h_init),
            epsilon=self.epsilon,
            theta=self.theta,
            name=self.name,
        )

    def __len__(self) -> int:
        return self.graph.number_of_nodes()

    def __repr__(self) -> str:
        return (
            f"ProblemSpec(name={self.name!r}, states={len(self)}, "
            f"edges={self.graph.number_of_edges()}, start={state_label(self.start)})"
        )
