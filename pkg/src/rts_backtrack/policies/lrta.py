"""
LRTA* with a lookahead of one
"""

import logging

from rts_backtrack.models.agent import AgentState, AlgoParams
from rts_backtrack.models.problem import ProblemSpec
from rts_backtrack.models.run import StepDecision
from rts_backtrack.policies.base import BasePolicy, choose_min, successor_f_values

logger = logging.getLogger(__name__)


def lrta_step(agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
    """
    One LRTA* cycle: raise h(top) to the lowest successor f-value and move there.

    Args:
        agent: Agent state with a non-goal current state
        problem: Search problem
        params: Run parameters (γ and tie-break seed)

    Returns:
        Forward decision over the immediate successors
    """
    top = agent.top
    f = successor_f_values(agent, problem, params)
    best = choose_min(f, problem, params, agent.t)
    updates = {top: f[best]} if f[best] > agent.h[top] else {}
    return StepDecision.forward(best, f.keys(), updates, params.gamma)


class LRTAPolicy(BasePolicy):
    """Korf's LRTA*: always moves forward, learns only at the current state."""

    name = "lrta"

    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        return lrta_step(agent, problem, params)
