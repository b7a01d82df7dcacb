"""
rts-backtrack - Main Package
Real-time heuristic search with backtracking: a stack-based search framework,
its algorithms, admissibility checks and a solution-cost bounds lab
"""

__version__ = "1.0.0"

from rts_backtrack.admissibility import (
    BoundBreakingPolicy,
    VisitedUnion,
    check_theta_admissible,
    max_update_bound,
    raised_heuristic,
    verify_update_rule,
)
from rts_backtrack.config import RunConfig
from rts_backtrack.exceptions import (
    BruteForceLimitError,
    ConfigurationError,
    FormatError,
    FrameworkError,
    MapParseError,
    QuotaExceededError,
    SearchLabError,
    ValidationError,
)
from rts_backtrack.framework.agent import SearchAgent, run_search
from rts_backtrack.framework.audit import audit_trace, audit_transition
from rts_backtrack.graph.oracle import DistanceOracle
from rts_backtrack.graph.validation import validate_problem
from rts_backtrack.models.agent import AccountingMode, AgentState, AlgoParams, HeuristicTable, StackPath
from rts_backtrack.models.problem import ProblemSpec
from rts_backtrack.models.run import RunResult, StepDecision, StepRecord
from rts_backtrack.policies import get_policy

__all__ = [
    # Problems and search
    "ProblemSpec",
    "DistanceOracle",
    "validate_problem",
    "SearchAgent",
    "run_search",
    "get_policy",

    # Models
    "AccountingMode",
    "AgentState",
    "AlgoParams",
    "HeuristicTable",
    "StackPath",
    "RunResult",
    "StepDecision",
    "StepRecord",

    # Auditing and admissibility
    "audit_trace",
    "audit_transition",
    "BoundBreakingPolicy",
    "VisitedUnion",
    "check_theta_admissible",
    "max_update_bound",
    "raised_heuristic",
    "verify_update_rule",

    # Configuration
    "RunConfig",

    # Exceptions
    "SearchLabError",
    "ValidationError",
    "MapParseError",
    "ConfigurationError",
    "FrameworkError",
    "QuotaExceededError",
    "BruteForceLimitError",
    "FormatError",
]
