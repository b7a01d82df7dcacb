# Models package
from rts_backtrack.models.agent import AccountingMode, AgentState, AlgoParams, HeuristicTable, StackPath
from rts_backtrack.models.costs import INF, Cost
from rts_backtrack.models.problem import ProblemSpec, State, state_label
from rts_backtrack.models.run import (
    AuditViolation,
    Condition,
    Direction,
    RunResult,
    StepDecision,
    StepRecord,
)

__all__ = [
    "AccountingMode",
    "AgentState",
    "AlgoParams",
    "HeuristicTable",
    "StackPath",
    "INF",
    "Cost",
    "ProblemSpec",
    "State",
    "state_label",
    "AuditViolation",
    "Condition",
    "Direction",
    "RunResult",
    "StepDecision",
    "StepRecord",
]
