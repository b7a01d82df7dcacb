# Lab package
from rts_backtrack.lab.bounds import exponential_bound, piecewise_bound, slat_bound
from rts_backtrack.lab.explore import ExplorationReport, explore_cyclic_slat, explore_quota_growth
from rts_backtrack.lab.sweep import (
    SWEEP_COLUMNS,
    LinearFit,
    SweepRecord,
    applicable_bound,
    fit_linear_class,
    records_to_csv,
    sweep_quota,
)

__all__ = [
    "exponential_bound",
    "piecewise_bound",
    "slat_bound",
    "ExplorationReport",
    "explore_cyclic_slat",
    "explore_quota_growth",
    "SWEEP_COLUMNS",
    "LinearFit",
    "SweepRecord",
    "applicable_bound",
    "fit_linear_class",
    "records_to_csv",
    "sweep_quota",
]
