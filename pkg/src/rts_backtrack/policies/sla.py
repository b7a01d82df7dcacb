"""
SLA* and SLA*T: LRTA* with backtracking on learning
"""

import logging

from rts_backtrack.models.agent import AgentState, AlgoParams
from rts_backtrack.models.problem import ProblemSpec
from rts_backtrack.models.run import StepDecision
from rts_backtrack.policies.base import BasePolicy, choose_min, successor_f_values
from rts_backtrack.policies.lrta import lrta_step

logger = logging.getLogger(__name__)


def sla_step(agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
    """
    One SLA* cycle.

    When the lowest successor f-value exceeds h(top) the agent raises h(top) to it and
    returns to the previous state (it stays put at the start state). Otherwise it
    moves to the best successor without learning.

    Args:
        agent: Agent state with a non-goal current state
        problem: Search problem
        params: Run parameters

    Returns:
        Backward, stay or forward decision over the immediate successors
    """
    top = agent.top
    f = successor_f_values(agent, problem, params)
    best = choose_min(f, problem, params, agent.t)
    if f[best] > agent.h[top]:
        updates = {top: f[best]}
        if len(agent.stack) > 1:
            return StepDecision.backward(f.keys(), updates, params.gamma)
        return StepDecision.stay(f.keys(), updates, params.gamma)
    return StepDecision.forward(best, f.keys(), {}, params.gamma)


def slat_step(agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
    """
    One SLA*T cycle: LRTA* while the learning amount stays within the quota, SLA* after.

    The quota test charges the LRTA* decision with the run's accounting mode.
    """
    from rts_backtrack.framework.agent import update_learning_amount

    decision = lrta_step(agent, problem, params)
    prospective = update_learning_amount(
        agent.u,
        agent.h,
        agent.h.overlay(decision.h_updates),
        decision,
        params.accounting,
        agent.stack,
        agent.stack.push(decision.next_state),
    )
    if prospective <= params.quota:
        return decision
    return sla_step(agent, problem, params)


class SLAPolicy(BasePolicy):
    """Search and Learning A*: backtracks every time it learns."""

    name = "sla"

    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        return sla_step(agent, problem, params)


class SLATPolicy(BasePolicy):
    """SLA* with a learning quota T."""

    name = "slat"

    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        return slat_step(agent, problem, params)
