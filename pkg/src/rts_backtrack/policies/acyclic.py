"""
Acyclic wrapper: keep every state on the stack at most once
"""

import logging
from dataclasses import replace

from rts_backtrack.models.agent import AgentState, AlgoParams
from rts_backtrack.models.problem import ProblemSpec, state_label
from rts_backtrack.models.run import Direction, StepDecision
from rts_backtrack.policies.base import BasePolicy

logger = logging.getLogger(__name__)


class AcyclicPolicy(BasePolicy):
    """
    Wraps a policy so that a forward move onto a state already on the stack cuts the
    stack back to that state's earlier occurrence instead of pushing a duplicate.
    """

    def __init__(self, inner: BasePolicy):
        super().__init__(inner=inner.name)
        self.inner = inner
        self.name = f"{inner.name}+acyclic"

    def begin(self, problem: ProblemSpec, params: AlgoParams, agent: AgentState) -> None:
        self.inner.begin(problem, params, agent)

    def _excise(self, agent: AgentState, decision: StepDecision) -> StepDecision:
        if decision.direction is Direction.FORWARD and decision.next_state in agent.stack:
            logger.debug(
                f"t={agent.t}: cutting cycle back to {state_label(decision.next_state)} "
                f"on stack {agent.stack}"
            )
            return replace(decision, excised=True)
        return decision

    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        return self._excise(agent, self.inner.decide(agent, problem, params))

    def backtrack_variant(self, agent, problem, params, decision):
        return self._excise(agent, self.inner.backtrack_variant(agent, problem, params, decision))

    def on_transition(self, before, after, decision, problem, params) -> None:
        self.inner.on_transition(before, after, decision, problem, params)


def make_acyclic(policy: BasePolicy) -> BasePolicy:
    """
    Wrap ``policy`` so its stack never holds two copies of one state.

    Args:
        policy: Any step policy

    Returns:
        The wrapped policy (a policy that is already wrapped is returned as is)
    """
    if isinstance(policy, AcyclicPolicy):
        return policy
    return AcyclicPolicy(policy)
