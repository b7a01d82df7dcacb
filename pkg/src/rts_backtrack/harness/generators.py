"""
Problem generators: chains and random goal-connected digraphs
"""

import logging
import string
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Tuple

import networkx as nx
import numpy as np

from rts_backtrack.exceptions import ConfigurationError, ValidationError
from rts_backtrack.models.costs import Cost, as_fraction, is_finite, scale
from rts_backtrack.models.problem import ProblemSpec, Real, State

logger = logging.getLogger(__name__)

GENERATOR_KINDS = ("chain", "random")


def chain_labels(size: int) -> List[State]:
    """Letters for chains of up to 26 states, integers beyond that."""
    if size <= len(string.ascii_uppercase):
        return list(string.ascii_uppercase[:size])
    return list(range(size))


def chain_problem(
    size: int,
    h_init: Optional[Mapping[State, Real]] = None,
    epsilon: Real = 1,
    weight: Real = 1,
    theta: Real = 1,
    start: Optional[State] = None,
    name: Optional[str] = None,
) -> ProblemSpec:
    """
    Undirected chain with the goal at the first state.

    Args:
        size: Number of states (at least 2)
        h_init: Initial heuristic in real units (missing states default to 0)
        epsilon: Cost quantum
        weight: Real weight of every edge
        theta: Admissibility weight
        start: Start state (defaults to the last state of the chain)
        name: Problem identifier

    Returns:
        ProblemSpec of the chain
    """
    if size < 2:
        raise ConfigurationError(f"A chain needs at least 2 states, got {size}")
    labels = chain_labels(size)
    edges = [(a, b, weight) for a, b in zip(labels, labels[1:])]
    return ProblemSpec.from_edges(
        edges,
        goals=[labels[0]],
        start=labels[-1] if start is None else start,
        h_init=h_init,
        epsilon=epsilon,
        theta=theta,
        undirected=True,
        name=name or f"chain-{size}",
    )


def admissible_heuristic(
    problem: ProblemSpec,
    theta: Optional[Fraction] = None,
    rng: Optional[np.random.Generator] = None,
    positive: bool = False,
) -> Dict[State, Cost]:
    """
    θ-admissible heuristic made by scaling the oracle's h* down to whole ε units.

    Without ``rng`` every state gets ⌊θ·h*⌋; with one, each state's value is further
    scaled by a uniform factor in [0, 1].

    Args:
        problem: Problem whose h* is used
        theta: Admissibility weight (defaults to the problem's)
        rng: Random generator for the per-state factors
        positive: Raise non-goal values to at least one ε unit where θ·h* allows it

    Returns:
        Heuristic in ε units, zero at goals
    """
    theta = problem.theta if theta is None else as_fraction(theta)
    h: Dict[State, Cost] = {}
    for state in problem.states:
        h_star = problem.oracle.goal_distance(state)
        if problem.is_goal(state) or not is_finite(h_star):
            h[state] = 0
            continue
        ceiling = int(scale(theta, h_star) // 1)
        factor = Fraction(1) if rng is None else as_fraction(float(rng.random()))
        value = int(factor * ceiling // 1)
        if positive:
            value = min(max(value, 1), ceiling)
        h[state] = value
    return h


def positive_h(problem: ProblemSpec, h: Mapping[State, Cost]) -> bool:
    """True when h is zero exactly at the goals."""
    return all((h.get(s, 0) == 0) == problem.is_goal(s) for s in problem.states)


def random_problem(
    size: int,
    seed: int,
    weight_range: Tuple[int, int] = (1, 1),
    epsilon: Real = 1,
    theta: Real = 1,
    extra_edges: Optional[int] = None,
    undirected: bool = False,
    goals: int = 1,
    positive: bool = False,
    name: Optional[str] = None,
) -> ProblemSpec:
    """
    Random digraph on states ``0 .. size-1`` in which every state reaches a goal.

    Goals are the first ``goals`` states. Every other state gets an edge to a random
    lower-numbered state, which makes each state reach a goal; ``extra_edges`` random
    edges are then added (self-loops excluded). Weights are whole multiples of ε drawn
    from ``weight_range``.

    Args:
        size: Number of states (at least 2)
        seed: Random seed
        weight_range: Inclusive range of edge weights in ε units
        epsilon: Cost quantum
        theta: Admissibility weight for the generated heuristic
        extra_edges: Number of extra random edges (defaults to ``size``)
        undirected: Add every edge in both directions
        goals: Number of goal states
        positive: Keep the heuristic positive away from goals
        name: Problem identifier

    Returns:
        Valid ProblemSpec with a θ-admissible initial heuristic
    """
    if size < 2:
        raise ConfigurationError(f"A random problem needs at least 2 states, got {size}")
    if not 1 <= goals < size:
        raise ConfigurationError(f"goals must be between 1 and {size - 1}, got {goals}")
    low, high = weight_range
    if low < 1 or high < low:
        raise ConfigurationError(f"Invalid weight range {weight_range}")

    rng = np.random.default_rng(seed)
    eps = as_fraction(epsilon)
    graph = nx.DiGraph()
    graph.add_nodes_from(range(size))

    def connect(a: int, b: int) -> None:
        w = int(rng.integers(low, high + 1))
        graph.add_edge(a, b, weight=w)
        if undirected:
            graph.add_edge(b, a, weight=w)

    for state in range(goals, size):
        connect(state, int(rng.integers(0, state)))
    for _ in range(size if extra_edges is None else extra_edges):
        a, b = (int(x) for x in rng.choice(size, size=2, replace=False))
        if not graph.has_edge(a, b):
            connect(a, b)
    # goals need successors too when the graph is directed
    for goal in range(goals):
        if graph.out_degree(goal) == 0:
            connect(goal, int(rng.integers(goals, size)))

    start = int(rng.integers(goals, size))
    problem = ProblemSpec(
        graph=graph,
        goals=frozenset(range(goals)),
        start=start,
        epsilon=eps,
        theta=as_fraction(theta),
        name=name or f"random-{size}-s{seed}",
    )
    h = admissible_heuristic(problem, rng=rng, positive=positive)
    logger.debug(f"Generated {problem.name} with {graph.number_of_edges()} edges, start {start}")
    return problem.with_h_init(h)


def gen_problem(kind: str, size: int, seed: int = 0, **options) -> ProblemSpec:
    """
    Generate a problem of the given kind.

    Args:
        kind: ``chain`` or ``random``
        size: Number of states
        seed: Random seed (ignored for chains)
        **options: Keyword arguments of ``chain_problem`` or ``random_problem``

    Returns:
        Generated ProblemSpec
    """
    if kind == "chain":
        return chain_problem(size, **options)
    if kind == "random":
        return random_problem(size, seed, **options)
    raise ValidationError(f"Unknown generator kind {kind!r}; choose one of {', '.join(GENERATOR_KINDS)}")


def problem_corpus(
    count: int,
    size: int,
    base_seed: int = 0,
    **options,
) -> List[ProblemSpec]:
    """``count`` random problems with consecutive seeds."""
    return [random_problem(size, base_seed + i, **options) for i in range(count)]
