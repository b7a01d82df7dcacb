"""
Tests for the distance oracle, separating sets, borders and frontiers
"""

import networkx as nx
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from rts_backtrack.exceptions import ValidationError
from rts_backtrack.graph.oracle import (
    border,
    edge_distance,
    frontier,
    goal_distance,
    is_separating,
    nested_frontiers,
    shortest_path_cost,
)
from rts_backtrack.harness.generators import random_problem
from rts_backtrack.models.costs import INF
from rts_backtrack.models.problem import ProblemSpec


@pytest.fixture
def shortcut():
    """A->B costs 2 directly and 2 through C; the goal is B."""
    return ProblemSpec.from_edges(
        [("A", "B", 2), ("A", "C", 1), ("C", "B", 1), ("B", "D", 1)],
        goals=["B"],
        start="A",
    )


class TestDistances:
    def test_chain(self, four_state):
        assert shortest_path_cost(four_state, "D", "A") == 30
        assert goal_distance(four_state, "C") == 20
        assert edge_distance(four_state, "D", "A") == 3

    def test_fewest_edges_among_cheapest_paths(self, shortcut):
        assert shortest_path_cost(shortcut, "A", "B") == 2
        assert edge_distance(shortcut, "A", "B") == 1
        assert shortcut.oracle.goal_edge_distance("A") == 1

    def test_unreachable(self, shortcut):
        assert shortest_path_cost(shortcut, "D", "A") == INF
        assert goal_distance(shortcut, "D") == INF
        assert edge_distance(shortcut, "B", "A") == INF

    def test_unknown_state(self, shortcut):
        with pytest.raises(ValidationError):
            shortest_path_cost(shortcut, "A", "nowhere")

    @settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(seed=st.integers(min_value=0, max_value=10_000), size=st.integers(min_value=2, max_value=12))
    def test_costs_match_dijkstra(self, seed, size):
        problem = random_problem(size, seed, weight_range=(1, 5))
        expected = dict(nx.all_pairs_dijkstra_path_length(problem.graph))
        for a in problem.states:
            for b in problem.states:
                assert shortest_path_cost(problem, a, b) == expected[a].get(b, INF)


class TestSeparatingSets:
    def test_parallel_shortest_paths(self, shortcut):
        assert not is_separating(shortcut, "A", {"C"})
        assert is_separating(shortcut, "A", {"B"})
        assert is_separating(shortcut, "A", {"A"})

    def test_chain_layers(self, four_state):
        assert is_separating(four_state, "D", {"B"})
        assert not is_separating(four_state, "C", {"D"})

    @settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_successors_always_separate(self, seed):
        problem = random_problem(9, seed, weight_range=(1, 3))
        for state in problem.states:
            if not problem.is_goal(state):
                assert is_separating(problem, state, problem.successors(state))

    @settings(max_examples=25, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
    @given(seed=st.integers(min_value=0, max_value=10_000))
    def test_goal_ward_layers_separate(self, seed):
        problem = random_problem(9, seed, weight_range=(1, 4))
        oracle = problem.oracle
        for state in problem.states:
            if problem.is_goal(state):
                continue
            for depth in range(1, int(oracle.goal_hops(state)) + 1):
                assert is_separating(problem, state, frontier(problem, state, depth))


class TestBorderAndFrontiers:
    def test_border_of_a_grid_block_is_its_ring(self, world):
        problem, region = world
        assert border(problem, region) == region - {(2, 2)}

    def test_frontier_layers(self, four_state):
        assert frontier(four_state, "C", 1) == {"B", "D"}
        assert frontier(four_state, "C", 2) == {"A"}
        assert frontier(four_state, "C", 3) == frozenset()

    def test_first_layer_is_the_successor_set(self):
        # A->B is dearer than A->C->B but B still sits one edge away
        problem = ProblemSpec.from_edges(
            [("A", "B", 3), ("A", "C", 1), ("C", "B", 1)], goals=["B"], start="A"
        )
        assert edge_distance(problem, "A", "B") == 2
        assert frontier(problem, "A", 1) == set(problem.successors("A")) == {"B", "C"}
        assert frontier(problem, "A", 2) == frozenset()
        assert problem.oracle.goal_hops("A") == 1

    def test_nested_frontiers_keep_separating_layers(self, four_state):
        region = {"A", "B", "C", "D"}
        assert nested_frontiers(four_state, "B", 2, region) == [frozenset({"A", "C"})]
        assert nested_frontiers(four_state, "C", 2, region) == [
            frozenset({"B", "D"}),
            frozenset({"A"}),
        ]

    def test_shortest_path_states(self, shortcut):
        assert shortcut.oracle.shortest_path_states("A") == {"A", "B", "C"}
