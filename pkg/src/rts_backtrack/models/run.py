"""
Step decisions, per-cycle trace records, audit violations and run results
"""

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Any, Dict, FrozenSet, Iterable, List, Mapping, Optional, Tuple

from rts_backtrack.models.agent import StackPath
from rts_backtrack.models.costs import Cost, exact_text
from rts_backtrack.models.problem import State, state_label


class Direction(Enum):
    """Kind of move taken at the end of a planning cycle"""
    FORWARD = "forward"
    BACKWARD = "backward"
    STAY = "stay"


@dataclass
class StepDecision:
    """
    What a policy decided in one planning cycle.

    ``lss`` is the local search space examined; ``h_updates`` holds the new heuristic
    values (ε units) for the states the policy learned about. ``excised`` marks a
    forward move to a state already on the stack that cuts the stack back to it.
    """
    direction: Direction
    lss: FrozenSet[State]
    h_updates: Dict[State, Cost] = field(default_factory=dict)
    next_state: Optional[State] = None
    gamma: Fraction = Fraction(1)
    excised: bool = False

    @classmethod
    def forward(
        cls,
        next_state: State,
        lss: Iterable[State],
        h_updates: Optional[Mapping[State, Cost]] = None,
        gamma: Fraction = Fraction(1),
    ) -> "StepDecision":
        return cls(Direction.FORWARD, frozenset(lss), dict(h_updates or {}), next_state, gamma)

    @classmethod
    def backward(
        cls,
        lss: Iterable[State],
        h_updates: Optional[Mapping[State, Cost]] = None,
        gamma: Fraction = Fraction(1),
    ) -> "StepDecision":
        return cls(Direction.BACKWARD, frozenset(lss), dict(h_updates or {}), None, gamma)

    @classmethod
    def stay(
        cls,
        lss: Iterable[State],
        h_updates: Optional[Mapping[State, Cost]] = None,
        gamma: Fraction = Fraction(1),
    ) -> "StepDecision":
        return cls(Direction.STAY, frozenset(lss), dict(h_updates or {}), None, gamma)

    @property
    def learns(self) -> bool:
        return bool(self.h_updates)


class Condition(Enum):
    """Framework conditions checked by the transition auditor"""
    SEPARATING_SET = "separating_set"
    WEIGHT_RANGE = "weight_range"
    FORWARD_CONSISTENCY = "forward_consistency"
    BACKTRACK_LEARNING = "backtrack_learning"
    THETA_ADMISSIBLE = "theta_admissible"
    LOCAL_UPDATE = "local_update"
    LEARNING_ACCOUNT = "learning_account"
    QUOTA = "quota"
    STACK_DISCIPLINE = "stack_discipline"


@dataclass
class AuditViolation:
    t: int
    condition: Condition
    message: str
    state: Optional[State] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "t": self.t,
            "condition": self.condition.value,
            "state": None if self.state is None else state_label(self.state),
            "message": self.message,
        }

    def __str__(self) -> str:
        return f"t={self.t} [{self.condition.value}] {self.message}"


@dataclass
class StepRecord:
    """
    One planning cycle as seen from outside.

    ``top`` is the current state when the cycle starts, ``stack`` and ``u`` are the
    values after the move, ``next_state`` is the new current state.
    """
    t: int
    top: State
    stack: StackPath
    direction: Direction
    next_state: State
    gamma: Fraction
    u: Cost
    lss: FrozenSet[State]
    changes: Dict[State, Tuple[Cost, Cost]]
    travel: Cost
    excised: bool = False

    def to_row(self, epsilon: Fraction, rank: Optional[Mapping[State, int]] = None) -> Dict[str, Any]:
        """
        Flatten the record into a trace row with costs in real units.

        Args:
            epsilon: Cost quantum of the problem
            rank: State ordering used for the set-valued columns

        Returns:
            Dictionary keyed by trace column name
        """
        order = (lambda s: rank[s]) if rank else state_label
        changes = ";".join(
            f"{state_label(s)}={exact_text(old, epsilon)}->{exact_text(new, epsilon)}"
            for s, (old, new) in sorted(self.changes.items(), key=lambda item: order(item[0]))
        )
        return {
            "t": self.t,
            "top": state_label(self.top),
            "stack_len": len(self.stack),
            "direction": self.direction.value,
            "next_state": state_label(self.next_state),
            "excised": self.excised,
            "gamma": str(self.gamma),
            "u": exact_text(self.u, epsilon),
            "lss": ";".join(state_label(s) for s in sorted(self.lss, key=order)),
            "changes": changes,
            "travel": exact_text(self.travel, epsilon),
        }


TRACE_COLUMNS = [
    "t", "top", "stack_len", "direction", "next_state", "excised",
    "gamma", "u", "lss", "changes", "travel",
]


@dataclass
class RunResult:
    """Outcome of one search run."""
    problem: str
    algorithm: str
    final_stack: StackPath
    solution_cost: Cost
    travel_cost: Cost
    cycles: int
    learning_amount: Cost
    h_final: Dict[State, Cost]
    epsilon: Fraction = Fraction(1)
    timed_out: bool = False
    audit: List[AuditViolation] = field(default_factory=list)
    trace: List[StepRecord] = field(default_factory=list)

    @property
    def reached_goal(self) -> bool:
        return not self.timed_out

    @property
    def audit_clean(self) -> bool:
        return not self.audit

    def to_dict(self) -> Dict[str, Any]:
        return {
            "problem": self.problem,
            "algorithm": self.algorithm,
            "final_stack": self.final_stack.labels(),
            "solution_cost": exact_text(self.solution_cost, self.epsilon),
            "travel_cost": exact_text(self.travel_cost, self.epsilon),
            "cycles": self.cycles,
            "learning_amount": exact_text(self.learning_amount, self.epsilon),
            "timed_out": self.timed_out,
            "audit_violations": [v.to_dict() for v in self.audit],
        }
