"""
Randomized end-to-end suites over generated corpora
"""

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from rts_backtrack.admissibility import check_theta_admissible, verify_update_rule
from rts_backtrack.framework.agent import run_search
from rts_backtrack.framework.audit import audit_trace
from rts_backtrack.harness.generators import chain_labels, chain_problem, problem_corpus, random_problem
from rts_backtrack.harness.trace import emit_trace, read_trace
from rts_backtrack.lab.bounds import piecewise_bound, slat_bound
from rts_backtrack.lab.sweep import sweep_quota
from rts_backtrack.models.agent import AlgoParams
from rts_backtrack.policies import get_policy

pytestmark = pytest.mark.integration

ALGORITHMS = [
    ("lrta", {}),
    ("sla", {}),
    ("slat", {"quota": 3}),
    ("dynlook", {"d_max": 3}),
    ("piecewise", {"k": 2, "quota": 1}),
]


@pytest.mark.parametrize("algo, settings_", ALGORITHMS)
@pytest.mark.parametrize("acyclic", [False, True])
def test_every_algorithm_reaches_a_goal_cleanly(algo, settings_, acyclic):
    params = AlgoParams(**settings_)
    for problem in problem_corpus(10, 12, base_seed=100, undirected=True):
        result = run_search(get_policy(algo, acyclic=acyclic), problem, params)
        assert result.reached_goal, problem.name
        assert result.audit_clean, (problem.name, [str(v) for v in result.audit[:3]])
        assert check_theta_admissible(problem, result.h_final, problem.theta)


@pytest.mark.parametrize("algo", ["lrta", "sla", "slat", "piecewise"])
def test_directed_weighted_corpus(algo):
    params = AlgoParams(quota=2, k=3)
    for problem in problem_corpus(10, 10, base_seed=7, weight_range=(1, 5)):
        result = run_search(get_policy(algo), problem, params)
        assert result.reached_goal
        assert result.audit_clean


def test_weighted_heuristics_stay_theta_admissible():
    theta = Fraction(3, 2)
    params = AlgoParams(theta=theta, gamma=theta, gamma_bar=theta)
    for problem in problem_corpus(8, 10, base_seed=40, theta=theta, undirected=True):
        for algo in ("lrta", "sla", "slat"):
            result = run_search(get_policy(algo), problem, params)
            assert result.audit_clean
            assert check_theta_admissible(problem, result.h_final, theta)


def test_axiom_accounting_with_enforced_quota():
    params = AlgoParams(quota=2, accounting="axiom", enforce_quota=True)
    for problem in problem_corpus(8, 10, base_seed=3, undirected=True):
        result = run_search(get_policy("lrta"), problem, params)
        assert result.audit_clean
        assert result.learning_amount <= 2


def test_tie_seeds_are_reproducible():
    problem = random_problem(15, 9, undirected=True)
    first = run_search(get_policy("lrta"), problem, AlgoParams(tie_seed=5))
    second = run_search(get_policy("lrta"), problem, AlgoParams(tie_seed=5))
    assert [r.stack for r in first.trace] == [r.stack for r in second.trace]


@settings(max_examples=30, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(seed=st.integers(min_value=0, max_value=100_000), size=st.integers(min_value=3, max_value=14))
def test_trace_replay_matches_the_run(seed, size):
    problem = random_problem(size, seed, weight_range=(1, 3), undirected=True)
    result = run_search(get_policy("slat", acyclic=True), problem, AlgoParams(quota=1))
    records = read_trace(emit_trace(result, problem), problem)
    assert [r.stack for r in records] == [r.stack for r in result.trace]
    assert audit_trace(problem, records, AlgoParams(quota=1)) == []


@settings(max_examples=20, deadline=None, suppress_health_check=[HealthCheck.function_scoped_fixture])
@given(seed=st.integers(min_value=0, max_value=100_000))
def test_lrta_updates_respect_the_bound(seed):
    problems = [random_problem(7, seed, positive=True, undirected=seed % 2 == 0)]
    report = verify_update_rule(lambda: get_policy("lrta"), problems, Fraction(1))
    assert not report.ever_exceeded
    assert not report.ever_broke


def test_acyclic_slat_bound_over_a_larger_corpus():
    problems = problem_corpus(25, 10, base_seed=500, weight_range=(1, 4), undirected=True)
    records = sweep_quota("slat", problems, [0, 1, 3, 6, 10], acyclic=True, progress=False)
    assert all(r.within_bound for r in records)


def test_piecewise_cost_stays_under_its_linear_bound():
    checked = 0
    for problem in problem_corpus(34, 50, base_seed=900):
        d0 = problem.oracle.goal_distance(problem.start)
        for k in (2, 5, 10):
            for quota in (0, 2, 6):
                result = run_search(
                    get_policy("piecewise", k=k), problem, AlgoParams(quota=quota), record_trace=False
                )
                assert result.reached_goal, (problem.name, k, quota)
                bound = piecewise_bound(problem.theta, d0, quota)
                assert result.solution_cost <= bound, (problem.name, k, quota, result.solution_cost, bound)
                checked += 1
    assert checked >= 300


def test_sla_returns_optimal_paths_with_exact_values():
    rng = np.random.default_rng(31)
    for seed in range(500):
        size = int(rng.integers(5, 201))
        problem = random_problem(size, seed, weight_range=(1, 5), undirected=seed % 2 == 0)
        result = run_search(get_policy("sla"), problem, audit=False, record_trace=False)
        assert result.reached_goal, problem.name
        assert result.solution_cost == problem.oracle.goal_distance(problem.start), problem.name
        for state in result.final_stack.states:
            assert result.h_final[state] == problem.oracle.goal_distance(state), (problem.name, state)


def test_acyclic_slat_cost_stays_under_its_bound_for_large_quotas():
    quotas = [0, 1, 2, 5, 10, 15, 20]
    for problem in problem_corpus(60, 30, base_seed=1200, weight_range=(1, 4), undirected=True):
        d0 = problem.oracle.goal_distance(problem.start)
        for quota in quotas:
            result = run_search(get_policy("slat", acyclic=True), problem, AlgoParams(quota=quota))
            assert result.reached_goal, (problem.name, quota)
            assert result.solution_cost <= slat_bound(d0, quota), (problem.name, quota)


def test_dynamic_lookahead_updates_respect_the_bound():
    rng = np.random.default_rng(8)
    labels = chain_labels(12)
    problems = []
    for index in range(20):
        # h(i) <= i = h*(i) leaves random depressions along the chain
        h = {label: int(rng.integers(0, i + 1)) for i, label in enumerate(labels)}
        problems.append(chain_problem(12, h_init=h, name=f"chain-12-h{index}"))
    report = verify_update_rule(lambda: get_policy("dynlook", d_max=2), problems, Fraction(1))
    assert not report.ever_exceeded
    assert not report.ever_broke
    assert all(not v.approximate for v in report.verdicts)
    assert sum(v.cycles_checked for v in report.verdicts) >= 100
