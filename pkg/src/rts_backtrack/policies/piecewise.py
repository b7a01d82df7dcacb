"""
Piecewise backtracking search: backtracking confined to fixed-length stack segments
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

from rts_backtrack.exceptions import ConfigurationError
from rts_backtrack.models.agent import AgentState, AlgoParams, StackPath
from rts_backtrack.models.costs import Cost, normalize
from rts_backtrack.models.problem import ProblemSpec
from rts_backtrack.models.run import Direction, StepDecision
from rts_backtrack.policies.base import BasePolicy, choose_min, successor_f_values

logger = logging.getLogger(__name__)


@dataclass
class SegmentState:
    """
    Segment bookkeeping for one piecewise run.

    ``starts`` holds the stack index of each segment's first state; every segment
    but the last spans exactly ``k`` states. Once ``final`` is set no new segment
    is opened and the last one grows without limit.
    """
    k: int
    starts: List[int] = field(default_factory=lambda: [0])
    final: bool = False
    discrepancy: Cost = 0

    def __post_init__(self):
        if self.k < 1:
            raise ConfigurationError(f"Segment length k must be at least 1, got {self.k}")

    @property
    def current_start(self) -> int:
        return self.starts[-1]

    def boundaries(self, stack_len: int) -> List[Tuple[int, int]]:
        """(first, last) stack indices of every segment of a stack of ``stack_len`` states."""
        ends = [b - 1 for b in self.starts[1:]] + [stack_len - 1]
        return list(zip(self.starts, ends))

    def at_segment_start(self, stack: StackPath) -> bool:
        return len(stack) - 1 == self.current_start

    def discrepancy_sum(self, problem: ProblemSpec, stack: StackPath, h) -> Cost:
        """Sum over segment joints of h(first of next) - h(last of previous) + dist(last, first)."""
        total: Cost = 0
        for b_next in self.starts[1:]:
            last, first = stack[b_next - 1], stack[b_next]
            total += h[first] - h[last] + problem.oracle.dist(last, first)
        return normalize(total)

    def observe_cut(self, stack: StackPath) -> None:
        """
        Forget segments that started above the top of a stack that was cut back.

        Dropping the last segment also drops its final mark; the next push decides anew.
        """
        kept = [b for b in self.starts if b < len(stack)]
        if len(kept) != len(self.starts):
            logger.debug(f"Stack cut back to {len(stack)} state(s); {len(kept)} segment(s) remain")
            self.starts = kept
            self.final = False

    def observe_push(self, problem: ProblemSpec, stack: StackPath, h, quota: Cost) -> None:
        """Open a new segment when the current one grew past ``k`` states."""
        if self.final or len(stack) - self.current_start <= self.k:
            return
        self.starts.append(len(stack) - 1)
        self.discrepancy = self.discrepancy_sum(problem, stack, h)
        if self.discrepancy > quota:
            self.final = True
            logger.debug(
                f"Segment {len(self.starts)} at stack index {self.current_start} is final "
                f"(discrepancy {self.discrepancy} > {quota})"
            )


def piecewise_step(
    agent: AgentState,
    problem: ProblemSpec,
    params: AlgoParams,
    seg: SegmentState,
) -> StepDecision:
    """
    One piecewise-backtracking cycle.

    Learning at the current state backtracks within the current segment; at the
    segment's first state the agent stays put instead. Without learning the agent
    moves to the best successor.

    Args:
        agent: Agent state with a non-goal current state
        problem: Search problem
        params: Run parameters
        seg: Segment bookkeeping of this run

    Returns:
        Forward, backward or stay decision
    """
    top = agent.top
    f = successor_f_values(agent, problem, params)
    best = choose_min(f, problem, params, agent.t)
    if f[best] > agent.h[top]:
        updates = {top: f[best]}
        if seg.at_segment_start(agent.stack):
            return StepDecision.stay(f.keys(), updates, params.gamma)
        return StepDecision.backward(f.keys(), updates, params.gamma)
    return StepDecision.forward(best, f.keys(), {}, params.gamma)


class PiecewisePolicy(BasePolicy):
    """SLA*-style backtracking that never crosses into an earlier stack segment."""

    name = "piecewise"

    def __init__(self, k: Optional[int] = None, **settings):
        super().__init__(k=k, **settings)
        self.k = k
        self.segments: Optional[SegmentState] = None

    def begin(self, problem: ProblemSpec, params: AlgoParams, agent: AgentState) -> None:
        k = self.k or params.k
        if k is None:
            raise ConfigurationError("Piecewise search needs a segment length k")
        self.segments = SegmentState(k=k)

    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        return piecewise_step(agent, problem, params, self.segments)

    def backtrack_variant(self, agent, problem, params, decision) -> StepDecision:
        if self.segments.at_segment_start(agent.stack):
            return StepDecision.stay(decision.lss, decision.h_updates, decision.gamma)
        return super().backtrack_variant(agent, problem, params, decision)

    def on_transition(self, before, after, decision, problem, params) -> None:
        if decision.excised:
            self.segments.observe_cut(after.stack)
        elif decision.direction is Direction.FORWARD:
            self.segments.observe_push(problem, after.stack, after.h, params.quota)
