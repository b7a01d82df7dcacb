"""
Problem validation: goal reachability, finite branching and θ-admissibility of h_init
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional

from rts_backtrack.models.costs import Cost, format_cost, is_finite, scale
from rts_backtrack.models.problem import ProblemSpec, State, state_label

logger = logging.getLogger(__name__)


class ProblemCondition(Enum):
    """Well-formedness conditions a search problem must satisfy"""
    GOAL_REACHABLE = "goal_reachable"
    DEAD_END = "dead_end"
    THETA_ADMISSIBLE = "theta_admissible"


@dataclass
class ProblemViolation:
    condition: ProblemCondition
    state: State
    message: str

    def to_dict(self) -> Dict[str, Any]:
        return {
            "condition": self.condition.value,
            "state": state_label(self.state),
            "message": self.message,
        }


@dataclass
class ValidationReport:
    """
    Outcome of validating a problem. An empty report means the problem is valid.
    """
    problem: str
    violations: List[ProblemViolation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def by_condition(self, condition: ProblemCondition) -> List[ProblemViolation]:
        return [v for v in self.violations if v.condition is condition]

    def to_dict(self) -> Dict[str, Any]:
        return {
            "problem": self.problem,
            "ok": self.ok,
            "violations": [v.to_dict() for v in self.violations],
        }

    def __bool__(self) -> bool:
        return self.ok


def validate_problem(
    problem: ProblemSpec,
    h: Optional[Mapping[State, Cost]] = None,
    theta: Optional[Fraction] = None,
) -> ValidationReport:
    """
    Check a problem against the standing assumptions of the search framework.

    Every state must reach a goal, no non-goal state may be a dead end, and the
    heuristic must satisfy h(s) <= θ·h*(s) everywhere.

    Args:
        problem: Problem to check
        h: Heuristic to check instead of ``problem.h_init``
        theta: Admissibility weight instead of ``problem.theta``

    Returns:
        ValidationReport listing every violation found
    """
    h = problem.h_init if h is None else h
    theta = problem.theta if theta is None else theta
    oracle = problem.oracle
    report = ValidationReport(problem=problem.name)

    for state in problem.states:
        h_star = oracle.goal_distance(state)
        if not is_finite(h_star):
            report.violations.append(
                ProblemViolation(
                    ProblemCondition.GOAL_REACHABLE,
                    state,
                    f"No goal is reachable from {state_label(state)}",
                )
            )
        if not problem.is_goal(state) and problem.graph.out_degree(state) == 0:
            report.violations.append(
                ProblemViolation(
                    ProblemCondition.DEAD_END,
                    state,
                    f"Non-goal state {state_label(state)} has no successors",
                )
            )
        limit = scale(theta, h_star)
        if h.get(state, 0) > limit:
            report.violations.append(
                ProblemViolation(
                    ProblemCondition.THETA_ADMISSIBLE,
                    state,
                    f"h({state_label(state)}) = {format_cost(h[state], problem.epsilon)} exceeds "
                    f"{theta}·h* = {format_cost(limit, problem.epsilon)}",
                )
            )

    if report.violations:
        logger.warning(f"Problem {problem.name!r} has {len(report.violations)} violation(s)")
    else:
        logger.debug(f"Problem {problem.name!r} is valid")
    return report
