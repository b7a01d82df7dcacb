"""
Tests for the search agent, learning accounting and the transition auditor
"""

from fractions import Fraction

import pytest

from rts_backtrack.exceptions import FrameworkError, QuotaExceededError, ValidationError
from rts_backtrack.framework.agent import (
    SearchAgent,
    default_budget,
    run_search,
    solution_cost,
    update_learning_amount,
)
from rts_backtrack.framework.audit import audit_trace, audit_transition, decision_from_record
from rts_backtrack.models.agent import AccountingMode, AgentState, AlgoParams, HeuristicTable, StackPath
from rts_backtrack.models.problem import ProblemSpec
from rts_backtrack.models.run import Condition, Direction, StepDecision
from rts_backtrack.policies import get_policy
from rts_backtrack.policies.base import BasePolicy, choose_min, successor_f_values


class GreedyPolicy(BasePolicy):
    """Moves to the best successor and never learns."""

    name = "greedy"

    def decide(self, agent, problem, params):
        f = successor_f_values(agent, problem, params)
        return StepDecision.forward(choose_min(f, problem, params, agent.t), f.keys())


class ScriptedPolicy(BasePolicy):
    name = "scripted"

    def __init__(self, decision):
        super().__init__()
        self.decision = decision

    def decide(self, agent, problem, params):
        return self.decision


class TestLearningAmount:
    @pytest.fixture
    def backtrack(self):
        decision = StepDecision.backward(lss={"B", "D"}, h_updates={"C": 5, "B": 3})
        return {
            "u_prev": 1,
            "h_before": {"B": 1, "C": 0},
            "h_after": {"B": 3, "C": 5},
            "decision": decision,
            "stack_before": StackPath(("A", "B", "C")),
            "stack_after": StackPath(("A", "B")),
        }

    def test_total_mode_counts_every_increase(self, backtrack):
        assert update_learning_amount(**backtrack) == 8

    def test_axiom_mode_skips_start_and_popped_state(self, backtrack):
        assert update_learning_amount(**backtrack, mode=AccountingMode.AXIOM) == 3

    def test_axiom_mode_needs_stacks(self, backtrack):
        backtrack.pop("stack_after")
        with pytest.raises(FrameworkError):
            update_learning_amount(**backtrack, mode=AccountingMode.AXIOM)

    def test_quota(self, backtrack):
        with pytest.raises(QuotaExceededError) as excinfo:
            update_learning_amount(**backtrack, quota=6)
        assert excinfo.value.learning_amount == 8


class TestSearchAgent:
    def test_single_steps(self, four_state):
        agent = SearchAgent(four_state, get_policy("lrta"))
        assert agent.state.top == "C"
        record = agent.step()
        assert record.t == 0
        assert record.direction is Direction.FORWARD
        assert record.next_state == "D"
        assert record.changes == {"C": (10, 17)}
        assert record.u == 7
        assert record.travel == 10
        assert agent.state.t == 1
        assert not agent.done

    def test_step_after_goal(self, four_state):
        agent = SearchAgent(four_state.with_start("A"), get_policy("lrta"))
        assert agent.done
        with pytest.raises(FrameworkError):
            agent.step()

    def test_run_from_goal(self, four_state):
        result = run_search(get_policy("sla"), four_state.with_start("A"))
        assert result.cycles == 0
        assert result.solution_cost == 0
        assert result.final_stack.states == ("A",)

    def test_forward_outside_search_space(self, four_state):
        decision = StepDecision.forward("A", {"B", "D"})
        with pytest.raises(FrameworkError):
            SearchAgent(four_state, ScriptedPolicy(decision)).step()

    def test_backtrack_from_start(self, four_state):
        decision = StepDecision.backward({"B", "D"}, {"C": 17})
        with pytest.raises(FrameworkError):
            SearchAgent(four_state, ScriptedPolicy(decision)).step()

    def test_audit_catches_missing_learning(self, four_state):
        agent = SearchAgent(four_state, GreedyPolicy())
        agent.step()
        assert [v.condition for v in agent.violations] == [Condition.FORWARD_CONSISTENCY]

    def test_budget_runs_out(self, four_state):
        result = SearchAgent(four_state, get_policy("lrta"), budget=2).run()
        assert result.timed_out
        assert not result.reached_goal
        assert result.cycles == 2

    def test_default_budget(self, four_state):
        # |S| = 4, largest h* is 30 units
        assert default_budget(four_state) == 10 * 16 * 30

    def test_invalid_problem_is_rejected(self, four_state):
        with pytest.raises(ValidationError):
            run_search(get_policy("lrta"), four_state.with_h_init({"B": 25}))

    def test_zero_quota_is_fatal_without_axiom_accounting(self, four_state):
        params = AlgoParams(quota=0, enforce_quota=True)
        with pytest.raises(FrameworkError):
            run_search(get_policy("lrta"), four_state, params)

    def test_enforced_quota_in_axiom_mode(self, four_state):
        params = AlgoParams(quota=0, enforce_quota=True, accounting="axiom")
        result = run_search(get_policy("lrta"), four_state, params)
        directions = [r.direction for r in result.trace]
        # raising D while C sits on top of it would cost 20, so D is popped instead
        assert directions == [
            Direction.FORWARD,
            Direction.BACKWARD,
            Direction.FORWARD,
            Direction.FORWARD,
        ]
        assert result.trace[1].changes == {"D": (7, 27)}
        assert result.final_stack.states == ("C", "B", "A")
        # raises of the start state C are never charged
        assert result.trace[0].changes == {"C": (10, 17)}
        assert result.trace[2].changes == {"C": (17, 20)}
        assert [r.u for r in result.trace] == [0, 0, 0, 0]
        assert result.learning_amount == 0
        assert result.audit_clean

    def test_solution_cost(self, four_state):
        assert solution_cost(four_state, ["C", "D", "C", "B", "A"]) == 40

    def test_result_dict_keeps_costs_exact(self, four_state):
        data = run_search(get_policy("lrta"), four_state).to_dict()
        assert data["final_stack"] == ["C", "D", "C", "B", "A"]
        assert (data["solution_cost"], data["travel_cost"], data["learning_amount"]) == ("4", "4", "3")
        thirds = ProblemSpec.from_edges([("a", "b", "1/3")], goals=["b"], start="a", epsilon="1/3")
        assert run_search(get_policy("sla"), thirds).to_dict()["solution_cost"] == "1/3"


class TestAudit:
    def test_clean_transition(self, four_state, params):
        before = AgentState(StackPath.start("C"), HeuristicTable(four_state.h_init))
        decision = StepDecision.forward("D", {"B", "D"}, {"C": 17})
        after = AgentState(StackPath(("C", "D")), before.h.copy(), t=1, u=7)
        after.h.apply({"C": 17})
        assert audit_transition(four_state, before, after, decision, params) == []

    def test_every_broken_condition_is_reported(self, four_state, params):
        before = AgentState(StackPath.start("C"), HeuristicTable(four_state.h_init))
        decision = StepDecision.forward("D", {"D"}, {"C": 40, "A": 1}, gamma=Fraction(2))
        after = AgentState(StackPath(("C", "B")), before.h.copy(), t=1, u=0)
        after.h.apply({"C": 40, "A": 1})
        found = {v.condition for v in audit_transition(four_state, before, after, decision, params)}
        assert found == {
            Condition.SEPARATING_SET,
            Condition.WEIGHT_RANGE,
            Condition.STACK_DISCIPLINE,
            Condition.LOCAL_UPDATE,
            Condition.THETA_ADMISSIBLE,
            Condition.LEARNING_ACCOUNT,
        }

    def test_backtrack_must_learn(self, four_state, params):
        h = HeuristicTable(four_state.h_init)
        before = AgentState(StackPath(("C", "D")), h)
        decision = StepDecision.backward({"C"})
        after = AgentState(StackPath.start("C"), h.copy(), t=1)
        found = audit_transition(four_state, before, after, decision, params)
        assert [v.condition for v in found] == [Condition.BACKTRACK_LEARNING]

    def test_trace_replay(self, four_state):
        result = run_search(get_policy("lrta"), four_state)
        assert audit_trace(four_state, result.trace) == []

    def test_replay_detects_tampering(self, four_state):
        result = run_search(get_policy("lrta"), four_state)
        record = result.trace[1]
        record.changes = {"D": (7, 35)}
        conditions = {v.condition for v in audit_trace(four_state, result.trace)}
        assert Condition.THETA_ADMISSIBLE in conditions
        assert Condition.LEARNING_ACCOUNT in conditions

    def test_decision_from_record(self, four_state):
        record = run_search(get_policy("lrta"), four_state).trace[0]
        decision = decision_from_record(record)
        assert decision.next_state == "D"
        assert decision.h_updates == {"C": 17}
        assert decision.lss == {"B", "D"}
