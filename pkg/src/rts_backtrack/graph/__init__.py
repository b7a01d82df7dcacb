# Graph package
from rts_backtrack.graph.oracle import (
    DistanceOracle,
    border,
    edge_distance,
    frontier,
    goal_distance,
    is_separating,
    nested_frontiers,
    shortest_path_cost,
)
from rts_backtrack.graph.validation import (
    ProblemCondition,
    ProblemViolation,
    ValidationReport,
    validate_problem,
)

__all__ = [
    "DistanceOracle",
    "border",
    "edge_distance",
    "frontier",
    "goal_distance",
    "is_separating",
    "nested_frontiers",
    "shortest_path_cost",
    "ProblemCondition",
    "ProblemViolation",
    "ValidationReport",
    "validate_problem",
]
