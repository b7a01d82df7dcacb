"""
Dynamic lookahead: grow the search space until the current state is no longer a trap
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, List, Mapping, Optional

from rts_backtrack.exceptions import ConfigurationError, FrameworkError
from rts_backtrack.graph.oracle import nested_frontiers
from rts_backtrack.models.agent import AgentState, AlgoParams
from rts_backtrack.models.costs import Cost
from rts_backtrack.models.problem import ProblemSpec, State, state_label
from rts_backtrack.models.run import StepDecision
from rts_backtrack.policies.base import BasePolicy, choose_min, f_value

logger = logging.getLogger(__name__)


@dataclass
class LookaheadSpec:
    """Depth cap and frontier generator S(s, k) for the dynamic lookahead."""
    d_max: int = 1

    def __post_init__(self):
        if self.d_max < 1:
            raise ConfigurationError(f"d_max must be at least 1, got {self.d_max}")

    def frontier(self, problem: ProblemSpec, state: State, k: int) -> FrozenSet[State]:
        """States first reached from ``state`` after exactly ``k`` edges; ``k = 1`` gives the successors."""
        return problem.oracle.frontier(state, k)

    def depth(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> int:
        """
        Lookahead depth for the current state.

        The smallest of ``d_max``, the hop count to the nearest goal and the first
        depth whose frontier holds an f-value no larger than h(s_c).
        """
        s_c = agent.top
        cap = min(self.d_max, problem.oracle.goal_hops(s_c))
        k = 1
        while k <= cap:
            layer = self.frontier(problem, s_c, k)
            if not layer:
                raise FrameworkError(
                    f"Frontier at depth {k} from {state_label(s_c)} is empty before depth {cap}"
                )
            best = min(f_value(problem, agent.h, params.gamma, s_c, s) for s in layer)
            if agent.h[s_c] >= best:
                return k
            k += 1
        return int(cap)


def max_of_mins(
    problem: ProblemSpec,
    h: Mapping[State, Cost],
    gamma: Fraction,
    state: State,
    depth: int,
    region,
) -> Optional[Cost]:
    """
    Largest frontier-wise minimum of f over the separating frontier layers of ``state``
    inside ``region``, or None when no layer separates.
    """
    best: Optional[Cost] = None
    for layer in nested_frontiers(problem, state, depth, region):
        low = min(f_value(problem, h, gamma, state, s) for s in layer)
        if best is None or low > best:
            best = low
    return best


def dynamic_lookahead_step(
    agent: AgentState,
    problem: ProblemSpec,
    params: AlgoParams,
    spec: Optional[LookaheadSpec] = None,
) -> StepDecision:
    """
    One dynamic-lookahead cycle.

    The local search space is the full-width neighbourhood up to depth d. The
    current state and every non-goal state strictly inside the frontier are raised
    synchronously to their max-of-mins value; frontier states keep theirs. The agent
    then travels to the frontier state with the lowest f-value.

    Args:
        agent: Agent state with a non-goal current state
        problem: Search problem
        params: Run parameters
        spec: Lookahead settings (defaults to ``params.d_max``)

    Returns:
        Forward decision to a frontier state
    """
    if params.gamma != 1 and not params.allow_weighted_lookahead:
        raise ConfigurationError(
            "Dynamic lookahead is defined for gamma = 1; set allow_weighted_lookahead to experiment"
        )
    spec = spec or LookaheadSpec(params.d_max)
    s_c = agent.top
    oracle = problem.oracle

    depth = spec.depth(agent, problem, params)
    layers: List[FrozenSet[State]] = [spec.frontier(problem, s_c, k) for k in range(1, depth + 1)]
    gamma_set = frozenset().union(*layers)
    region = gamma_set | {s_c}

    inner = [s_c] + [
        s for layer in layers[:-1] for s in sorted(layer, key=problem.rank.__getitem__)
    ]
    updates: Dict[State, Cost] = {}
    for s in inner:
        if problem.is_goal(s):
            continue
        value = max_of_mins(problem, agent.h, params.gamma, s, depth, region)
        if value is not None and value > agent.h[s]:
            updates[s] = value

    after = agent.h.overlay(updates)
    frontier = layers[-1]
    f = {s: f_value(problem, after, params.gamma, s_c, s) for s in frontier}
    target = choose_min(f, problem, params, agent.t)
    logger.debug(
        f"Lookahead at {state_label(s_c)}: depth {depth}, {len(gamma_set)} states, "
        f"{len(updates)} update(s), target {state_label(target)} at {oracle.dist(s_c, target)}"
    )
    return StepDecision.forward(target, gamma_set, updates, params.gamma)


class DynamicLookaheadPolicy(BasePolicy):
    """Full-width lookahead whose depth grows while the current state is a trap."""

    name = "dynlook"

    def __init__(self, d_max: Optional[int] = None, **settings):
        super().__init__(d_max=d_max, **settings)
        self.d_max = d_max

    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        spec = LookaheadSpec(self.d_max or params.d_max)
        return dynamic_lookahead_step(agent, problem, params, spec)
