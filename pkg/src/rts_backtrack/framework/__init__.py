# Framework package
from rts_backtrack.framework.agent import (
    SearchAgent,
    default_budget,
    run_search,
    solution_cost,
    update_learning_amount,
)
from rts_backtrack.framework.audit import audit_trace, audit_transition

__all__ = [
    "SearchAgent",
    "default_budget",
    "run_search",
    "solution_cost",
    "update_learning_amount",
    "audit_trace",
    "audit_transition",
]
