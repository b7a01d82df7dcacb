"""
Exact distance oracle, separating-set and border predicates
"""

import logging
import threading
from collections import deque
from typing import Dict, FrozenSet, Iterable, List, Set, Tuple

import networkx as nx

from rts_backtrack.models.costs import INF, Cost
from rts_backtrack.models.problem import ProblemSpec, State

logger = logging.getLogger(__name__)

# (cost, edges) pairs, ordered lexicographically
Distance = Tuple[Cost, float]


class DistanceOracle:
    """
    Single-source shortest paths over a problem graph, cached per source.

    Dijkstra runs on a composite weight ``w * K + 1`` with ``K = |S|``: the total
    decodes to the minimum cost and, among minimum-cost paths, the fewest edges.
    Caches are filled under a lock so one oracle can serve concurrent readers.
    """

    def __init__(self, problem: ProblemSpec):
        self.problem = problem
        self._scale = max(2, len(problem))
        self._forward: Dict[State, Dict[State, int]] = {}
        self._backward: Dict[State, Dict[State, int]] = {}
        self._to_goals: Dict[State, int] = {}
        self._hops: Dict[State, Dict[State, int]] = {}
        self._goal_hops: Dict[State, int] = {}
        self._lock = threading.Lock()

    def __getstate__(self):
        state = self.__dict__.copy()
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.Lock()

    def _composite(self, u, v, data) -> int:
        return data["weight"] * self._scale + 1

    def _decode(self, composite: int) -> Distance:
        return divmod(composite, self._scale)

    def _forward_from(self, source: State) -> Dict[State, int]:
        table = self._forward.get(source)
        if table is None:
            with self._lock:
                table = self._forward.get(source)
                if table is None:
                    table = nx.single_source_dijkstra_path_length(
                        self.problem.graph, source, weight=self._composite
                    )
                    self._forward[source] = table
        return table

    def _backward_to(self, target: State) -> Dict[State, int]:
        table = self._backward.get(target)
        if table is None:
            with self._lock:
                table = self._backward.get(target)
                if table is None:
                    table = nx.single_source_dijkstra_path_length(
                        self.problem.graph.reverse(copy=False), target, weight=self._composite
                    )
                    self._backward[target] = table
        return table

    def distance(self, a: State, b: State) -> Distance:
        """(dist(a, b), ||a, b||), both infinite when b is unreachable."""
        self.problem.require_state(a)
        self.problem.require_state(b)
        composite = self._forward_from(a).get(b)
        if composite is None:
            return INF, INF
        return self._decode(composite)

    def dist(self, a: State, b: State) -> Cost:
        return self.distance(a, b)[0]

    def edge_distance(self, a: State, b: State):
        return self.distance(a, b)[1]

    def goal_distance(self, state: State) -> Cost:
        """h*(s): the distance from a state to its nearest goal."""
        self.problem.require_state(state)
        if not self._to_goals:
            with self._lock:
                if not self._to_goals:
                    table = nx.multi_source_dijkstra_path_length(
                        self.problem.graph.reverse(copy=False), set(self.problem.goals)
                    )
                    self._to_goals.update(table)
        return self._to_goals.get(state, INF)

    def goal_edge_distance(self, state: State):
        """||s, S_g||: minimum over goals of the edge-distance to that goal."""
        best = INF
        for goal in self.problem.goals:
            composite = self._backward_to(goal).get(state)
            if composite is not None:
                best = min(best, self._decode(composite)[1])
        return best

    def _hops_from(self, source: State) -> Dict[State, int]:
        table = self._hops.get(source)
        if table is None:
            with self._lock:
                table = self._hops.get(source)
                if table is None:
                    table = nx.single_source_shortest_path_length(self.problem.graph, source)
                    self._hops[source] = table
        return table

    def goal_hops(self, state: State):
        """Fewest edges on any path from ``state`` to a goal, ignoring weights."""
        self.problem.require_state(state)
        if not self._goal_hops:
            with self._lock:
                if not self._goal_hops:
                    table = nx.multi_source_dijkstra_path_length(
                        self.problem.graph.reverse(copy=False),
                        set(self.problem.goals),
                        weight=lambda u, v, data: 1,
                    )
                    self._goal_hops.update(table)
        return self._goal_hops.get(state, INF)

    def frontier(self, state: State, depth: int) -> FrozenSet[State]:
        """
        S(s, k): states first reached from ``state`` after exactly ``depth`` edges.

        Layer 1 is the successor set; layer k holds the successors of layer k-1 not
        seen in an earlier layer. Every path from ``state`` to a goal at least
        ``depth`` hops away crosses the layer.
        """
        table = self._hops_from(self.problem.require_state(state))
        return frozenset(s for s, hops in table.items() if hops == depth)

    def is_separating(self, state: State, candidate: Iterable[State]) -> bool:
        """
        Check whether every shortest path from ``state`` to every reachable goal
        passes through ``candidate``.

        The test walks the shortest-path DAG towards each goal while avoiding the
        candidate set; reaching the goal means some shortest path escapes.
        """
        self.problem.require_state(state)
        blocked: Set[State] = set(candidate)
        for member in blocked:
            self.problem.require_state(member)
        if state in blocked:
            return True

        graph = self.problem.graph
        forward = self._forward_from(state)
        for goal in self.problem.goals:
            if goal not in forward or goal in blocked:
                continue
            target = forward[goal] // self._scale
            backward = self._backward_to(goal)
            seen = {state}
            queue = deque([state])
            while queue:
                node = queue.popleft()
                if node == goal:
                    return False
                node_cost = forward[node] // self._scale
                for succ, data in graph[node].items():
                    if succ in seen or succ in blocked or succ not in backward:
                        continue
                    reach = node_cost + data["weight"]
                    if reach != forward[succ] // self._scale:
                        continue
                    if reach + backward[succ] // self._scale != target:
                        continue
                    seen.add(succ)
                    queue.append(succ)
        return True

    def border(self, gamma: Iterable[State]) -> FrozenSet[State]:
        """Members of ``gamma`` with at least one out-edge leaving ``gamma``."""
        region = set(gamma)
        for member in region:
            self.problem.require_state(member)
        return frozenset(
            s for s in region if any(succ not in region for succ in self.problem.graph.successors(s))
        )

    def shortest_path_states(self, state: State) -> FrozenSet[State]:
        """States lying on at least one shortest path from ``state`` to a reachable goal."""
        forward = self._forward_from(self.problem.require_state(state))
        members: Set[State] = set()
        for goal in self.problem.goals:
            if goal not in forward:
                continue
            target = forward[goal] // self._scale
            backward = self._backward_to(goal)
            members.update(
                s for s, composite in forward.items()
                if s in backward and composite // self._scale + backward[s] // self._scale == target
            )
        return frozenset(members)


def shortest_path_cost(problem: ProblemSpec, a: State, b: State) -> Cost:
    """
    Minimum cumulative weight of a path from ``a`` to ``b``.

    Args:
        problem: Search problem
        a: Source state
        b: Target state

    Returns:
        dist(a, b) in ε units, ``INF`` when ``b`` is unreachable
    """
    return problem.oracle.dist(a, b)


def goal_distance(problem: ProblemSpec, state: State) -> Cost:
    """Distance from ``state`` to the nearest goal (h*)."""
    return problem.oracle.goal_distance(state)


def edge_distance(problem: ProblemSpec, a: State, b: State):
    """Fewest edges among all minimum-cost paths from ``a`` to ``b`` (``INF`` if none)."""
    return problem.oracle.edge_distance(a, b)


def is_separating(problem: ProblemSpec, state: State, candidate: Iterable[State]) -> bool:
    return problem.oracle.is_separating(state, candidate)


def border(problem: ProblemSpec, gamma: Iterable[State]) -> FrozenSet[State]:
    return problem.oracle.border(gamma)


def frontier(problem: ProblemSpec, state: State, depth: int) -> FrozenSet[State]:
    return problem.oracle.frontier(state, depth)


def nested_frontiers(problem: ProblemSpec, state: State, depth: int, region: Iterable[State]) -> List[FrozenSet[State]]:
    """
    Separating members of {S(s, j) ∩ region : 1 <= j <= depth}.

    This is the frontier family the max-of-mins updates maximise over instead of
    the full power set of the region.
    """
    region = frozenset(region)
    family = []
    for j in range(1, depth + 1):
        layer = problem.oracle.frontier(state, j) & region
        if layer and problem.oracle.is_separating(state, layer):
            family.append(layer)
    return family
