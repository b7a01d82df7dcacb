"""
Base step policy for all real-time search algorithms
"""

import logging
from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Dict, Mapping

import numpy as np

from rts_backtrack.exceptions import FrameworkError
from rts_backtrack.models.agent import AgentState, AlgoParams
from rts_backtrack.models.costs import Cost, normalize, scale
from rts_backtrack.models.problem import ProblemSpec, State, state_label
from rts_backtrack.models.run import StepDecision

logger = logging.getLogger(__name__)


class BasePolicy(ABC):
    """
    Abstract base class for step policies.

    A policy looks at the agent's stack and heuristic, examines a local search space
    and returns one ``StepDecision`` per planning cycle. The search agent applies
    the decision; policies never mutate the agent themselves.
    """

    name = "policy"

    def __init__(self, **settings):
        """
        Initialize the policy.

        Args:
            **settings: Policy-specific settings, kept for reporting
        """
        self.settings = settings
        logger.debug(f"Initialized {self.__class__.__name__} {settings or ''}")

    def begin(self, problem: ProblemSpec, params: AlgoParams, agent: AgentState) -> None:
        """Reset per-run state before the first cycle."""

    @abstractmethod
    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        """
        Plan one cycle.

        Args:
            agent: Current agent state (top of the stack is not a goal)
            problem: Search problem
            params: Run parameters

        Returns:
            Decision for this cycle
        """
        pass

    def backtrack_variant(
        self,
        agent: AgentState,
        problem: ProblemSpec,
        params: AlgoParams,
        decision: StepDecision,
    ) -> StepDecision:
        """
        Same learning as ``decision`` but without moving forward.

        Used when a forward decision would push the learning amount over the quota.
        The agent pops when its current state learned and it is not at the start,
        otherwise it stays.
        """
        top = agent.top
        learned_at_top = decision.h_updates.get(top, agent.h[top]) > agent.h[top]
        if learned_at_top and len(agent.stack) > 1:
            return StepDecision.backward(decision.lss, decision.h_updates, decision.gamma)
        return StepDecision.stay(decision.lss, decision.h_updates, decision.gamma)

    def on_transition(
        self,
        before: AgentState,
        after: AgentState,
        decision: StepDecision,
        problem: ProblemSpec,
        params: AlgoParams,
    ) -> None:
        """Hook called after the agent applied ``decision``."""

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.settings or ''})"


def f_value(problem: ProblemSpec, h: Mapping[State, Cost], gamma: Fraction, origin: State, state: State) -> Cost:
    """f(s) = γ·dist(origin, s) + h(s)."""
    return normalize(scale(gamma, problem.oracle.dist(origin, state)) + h.get(state, 0))


def successor_f_values(agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> Dict[State, Cost]:
    """f-values of the immediate successors of the current state."""
    top = agent.top
    successors = problem.successors(top)
    if not successors:
        raise FrameworkError(f"State {state_label(top)} has no successors")
    return {s: f_value(problem, agent.h, params.gamma, top, s) for s in successors}


def choose_min(values: Mapping[State, Cost], problem: ProblemSpec, params: AlgoParams, t: int) -> State:
    """
    State with the lowest value.

    Ties go to the lowest state id, or to a seeded random pick when the run has
    a tie-break seed (the pick depends only on the seed and the cycle number).
    """
    best = min(values.values())
    ties = sorted((s for s, v in values.items() if v == best), key=problem.rank.__getitem__)
    if len(ties) == 1 or params.tie_seed is None:
        return ties[0]
    rng = np.random.default_rng([params.tie_seed, t])
    return ties[int(rng.integers(len(ties)))]
