"""
Exploratory searches over small adversarial instances.

Nothing here asserts a bound. The searches look for runs whose solution cost grows
faster than linearly in the learning quota, and report what they find (possibly
nothing).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from rts_backtrack.harness.generators import random_problem
from rts_backtrack.lab.sweep import SweepRecord, sweep_quota
from rts_backtrack.models.agent import AlgoParams

logger = logging.getLogger(__name__)


@dataclass
class ExplorationReport:
    name: str
    examined: int = 0
    records: List[SweepRecord] = field(default_factory=list)
    findings: List[Dict[str, Any]] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return bool(self.findings)

    def to_dict(self) -> Dict[str, Any]:
        return {"name": self.name, "examined": self.examined, "findings": self.findings}


def adversarial_corpus(
    seeds: Iterable[int],
    size: int = 8,
    weight_range: Tuple[int, int] = (1, 4),
    undirected: bool = True,
) -> list:
    """Small graphs with spread-out weights and randomly weakened heuristics."""
    return [
        random_problem(size, seed, weight_range=weight_range, undirected=undirected, extra_edges=size)
        for seed in seeds
    ]


def explore_cyclic_slat(
    seeds: Iterable[int],
    quotas: Sequence[Any] = tuple(range(0, 11)),
    size: int = 8,
    budget: Optional[int] = None,
) -> ExplorationReport:
    """
    Look for SLA*T runs that keep cycles on the stack and end above dist + T.

    Args:
        seeds: Generator seeds to try
        quotas: Learning quotas in real units
        size: States per instance
        budget: Cycle budget per run

    Returns:
        ExplorationReport; each finding names the problem, T, cost and bound
    """
    problems = adversarial_corpus(seeds, size)
    report = ExplorationReport(name="cyclic-slat", examined=len(problems) * len(quotas))
    report.records = sweep_quota("slat", problems, quotas, budget=budget, progress=False)
    for record in report.records:
        if record.within_bound is False:
            report.findings.append(
                {
                    "problem": record.problem,
                    "T": record.quota,
                    "solution_cost": record.solution_cost,
                    "bound": record.bound,
                    "audit_violations": record.audit_violations,
                }
            )
    if report.found:
        logger.info(f"Cyclic SLA*T exceeded dist + T in {len(report.findings)} of {report.examined} run(s)")
    else:
        logger.info(f"No cyclic SLA*T run exceeded dist + T in {report.examined} run(s)")
    return report


def explore_quota_growth(
    seeds: Iterable[int],
    quotas: Sequence[int] = (0, 2, 4, 8, 16),
    algorithm: str = "slat",
    size: int = 8,
    params: Optional[AlgoParams] = None,
    budget: Optional[int] = None,
) -> ExplorationReport:
    """
    Look for instances whose solution cost grows faster than linearly in T.

    For each instance the costs at successive quotas are compared with the chord
    through the first two points; an instance is reported when a later cost lies
    above the extended chord.

    Returns:
        ExplorationReport; findings sorted by the largest excess first
    """
    problems = adversarial_corpus(seeds, size)
    report = ExplorationReport(name=f"{algorithm}-growth", examined=len(problems))
    report.records = sweep_quota(algorithm, problems, quotas, params=params, budget=budget, progress=False)

    by_problem: Dict[str, List[SweepRecord]] = {}
    for record in report.records:
        if not record.timed_out:
            by_problem.setdefault(record.problem, []).append(record)

    for name, runs in by_problem.items():
        runs.sort(key=lambda r: r.quota)
        if len(runs) < 3 or runs[1].quota == runs[0].quota:
            continue
        slope = (runs[1].solution_cost - runs[0].solution_cost) / (runs[1].quota - runs[0].quota)
        excess = max(
            r.solution_cost - (runs[0].solution_cost + slope * (r.quota - runs[0].quota)) for r in runs[2:]
        )
        if excess > 0:
            report.findings.append(
                {"problem": name, "excess": excess, "costs": [r.solution_cost for r in runs]}
            )
    report.findings.sort(key=lambda f: f["excess"], reverse=True)
    logger.info(f"{len(report.findings)} of {report.examined} instance(s) grew faster than linearly in T")
    return report
