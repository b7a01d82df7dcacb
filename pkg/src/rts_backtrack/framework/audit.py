"""
Runtime audit of search transitions against the framework conditions
"""

import logging
from typing import Iterable, List, Optional

from rts_backtrack.exceptions import FrameworkError
from rts_backtrack.models.agent import AgentState, AlgoParams, HeuristicTable, StackPath
from rts_backtrack.models.costs import format_cost, normalize, scale
from rts_backtrack.models.problem import ProblemSpec, state_label
from rts_backtrack.models.run import AuditViolation, Condition, Direction, StepDecision, StepRecord

logger = logging.getLogger(__name__)


def _expected_stack(before: StackPath, decision: StepDecision) -> Optional[StackPath]:
    try:
        if decision.direction is Direction.FORWARD:
            if decision.excised:
                return before.truncate_to(decision.next_state)
            return before.push(decision.next_state)
        if decision.direction is Direction.BACKWARD:
            return before.pop()
    except (FrameworkError, ValueError):
        return None
    return before


def audit_transition(
    problem: ProblemSpec,
    before: AgentState,
    after: AgentState,
    decision: StepDecision,
    params: AlgoParams,
) -> List[AuditViolation]:
    """
    Check one transition of the search loop.

    Covered: the local search space holds a separating set for a non-goal current
    state; the heuristic weight stays in (0, γ̄]; forward moves push one state of the
    search space and keep h(top) >= γ·dist(top, s) + h(s); backtracking strictly
    raises h(top); every changed value stays θ-admissible; values change only in the
    search space (plus the current state) and never decrease; the learning amount
    matches the configured accounting and respects the quota when enforced.

    Args:
        problem: Search problem
        before: Agent state at the start of the cycle
        after: Agent state after the move
        decision: Decision that produced the transition
        params: Run parameters

    Returns:
        Violations found; empty when the transition is clean
    """
    from rts_backtrack.framework.agent import update_learning_amount

    t = before.t
    top = before.top
    eps = problem.epsilon
    oracle = problem.oracle
    violations: List[AuditViolation] = []

    def report(condition: Condition, message: str, state=None):
        violations.append(AuditViolation(t=t, condition=condition, message=message, state=state))

    if not problem.is_goal(top) and not oracle.is_separating(top, decision.lss):
        report(
            Condition.SEPARATING_SET,
            f"Local search space at {state_label(top)} holds no separating set",
            top,
        )

    if not 0 < decision.gamma <= params.gamma_bar:
        report(Condition.WEIGHT_RANGE, f"gamma {decision.gamma} is outside (0, {params.gamma_bar}]")

    expected = _expected_stack(before.stack, decision)
    if expected is None or after.stack != expected:
        report(
            Condition.STACK_DISCIPLINE,
            f"{decision.direction.value} move turned {before.stack} into {after.stack}",
        )

    if decision.direction is Direction.FORWARD:
        target = decision.next_state
        if target not in decision.lss:
            report(
                Condition.FORWARD_CONSISTENCY,
                f"Pushed {state_label(target)} from outside the local search space",
                target,
            )
        else:
            bound = normalize(scale(decision.gamma, oracle.dist(top, target)) + after.h[target])
            if after.h[top] < bound:
                report(
                    Condition.FORWARD_CONSISTENCY,
                    f"h({state_label(top)}) = {format_cost(after.h[top], eps)} is below "
                    f"γ·dist + h({state_label(target)}) = {format_cost(bound, eps)}",
                    top,
                )
    elif decision.direction is Direction.BACKWARD:
        if not after.h[top] > before.h[top]:
            report(
                Condition.BACKTRACK_LEARNING,
                f"Backtracked from {state_label(top)} without raising its heuristic",
                top,
            )

    allowed = set(decision.lss) | {top}
    for state in problem.states:
        old, new = before.h[state], after.h[state]
        if new == old:
            continue
        if new < old:
            report(
                Condition.LOCAL_UPDATE,
                f"h({state_label(state)}) decreased from {format_cost(old, eps)} to {format_cost(new, eps)}",
                state,
            )
        if state not in allowed:
            report(
                Condition.LOCAL_UPDATE,
                f"h({state_label(state)}) changed outside the local search space",
                state,
            )
        limit = scale(params.theta, oracle.goal_distance(state))
        if new > limit:
            report(
                Condition.THETA_ADMISSIBLE,
                f"h({state_label(state)}) = {format_cost(new, eps)} exceeds θ·h* = {format_cost(limit, eps)}",
                state,
            )

    expected_u = update_learning_amount(
        before.u, before.h, after.h, decision, params.accounting, before.stack, after.stack
    )
    if after.u != expected_u:
        report(
            Condition.LEARNING_ACCOUNT,
            f"Learning amount {format_cost(after.u, eps)} should be {format_cost(expected_u, eps)} "
            f"in {params.accounting.value} mode",
        )
    if params.enforce_quota and after.u > params.quota:
        report(
            Condition.QUOTA,
            f"Learning amount {format_cost(after.u, eps)} exceeds quota {format_cost(params.quota, eps)}",
        )
    return violations


def decision_from_record(record: StepRecord) -> StepDecision:
    """Rebuild the decision a trace record was produced by."""
    return StepDecision(
        direction=record.direction,
        lss=frozenset(record.lss),
        h_updates={s: new for s, (_, new) in record.changes.items()},
        next_state=record.next_state if record.direction is Direction.FORWARD else None,
        gamma=record.gamma,
        excised=record.excised,
    )


def audit_trace(
    problem: ProblemSpec,
    records: Iterable[StepRecord],
    params: Optional[AlgoParams] = None,
) -> List[AuditViolation]:
    """
    Replay a recorded trace from the problem's start state through the auditor.

    Args:
        problem: Problem the trace was produced on
        records: Step records in cycle order
        params: Run parameters the trace was produced with

    Returns:
        All violations found along the trace
    """
    params = params or AlgoParams(theta=problem.theta)
    state = AgentState(stack=StackPath.start(problem.start), h=HeuristicTable(problem.h_init))
    violations: List[AuditViolation] = []

    for record in records:
        decision = decision_from_record(record)
        after_h = state.h.copy()
        for s, (old, new) in record.changes.items():
            if state.h[s] != old:
                violations.append(
                    AuditViolation(
                        t=state.t,
                        condition=Condition.LOCAL_UPDATE,
                        message=f"Trace says h({state_label(s)}) was {old} but replay has {state.h[s]}",
                        state=s,
                    )
                )
            after_h.overwrite(s, new)
        after = AgentState(stack=record.stack, h=after_h, t=state.t + 1, u=record.u)
        violations.extend(audit_transition(problem, state, after, decision, params))
        state = after

    logger.info(f"Replayed trace on {problem.name!r}: {len(violations)} violation(s)")
    return violations
