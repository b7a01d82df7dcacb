"""
Quota sweeps: run an algorithm over problems and learning quotas and compare the
measured solution cost with the matching closed-form bound
"""

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd
from scipy.optimize import linprog
from tqdm import tqdm

from rts_backtrack.framework.agent import run_search
from rts_backtrack.lab.bounds import piecewise_bound, slat_bound
from rts_backtrack.models.agent import AlgoParams
from rts_backtrack.models.costs import INF, Cost, as_fraction, exact_text, is_finite, to_units
from rts_backtrack.models.problem import ProblemSpec
from rts_backtrack.policies import get_policy

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    "algorithm", "problem", "T", "theta", "solution_cost", "travel_cost", "bound", "bound_id",
    "within_bound", "timed_out", "audit_violations", "cycles", "d0",
]


@dataclass
class SweepRecord:
    """
    One (algorithm, problem, T) run of a sweep. Costs are in real units.

    ``within_bound`` is None when the run timed out or no finite bound applies.
    """
    algorithm: str
    problem: str
    quota: Union[Fraction, float]
    theta: Fraction
    solution_cost: Cost
    travel_cost: Cost
    bound: Optional[Cost]
    bound_id: str
    within_bound: Optional[bool]
    timed_out: bool
    audit_violations: int
    cycles: int
    d0: Cost

    def to_row(self) -> Dict[str, Any]:
        def text(value):
            return "" if value is None else exact_text(value, Fraction(1))

        return {
            "algorithm": self.algorithm,
            "problem": self.problem,
            "T": text(self.quota),
            "theta": text(self.theta),
            "solution_cost": text(self.solution_cost),
            "travel_cost": text(self.travel_cost),
            "bound": text(self.bound),
            "bound_id": self.bound_id,
            "within_bound": "" if self.within_bound is None else self.within_bound,
            "timed_out": self.timed_out,
            "audit_violations": self.audit_violations,
            "cycles": self.cycles,
            "d0": text(self.d0),
        }


def applicable_bound(algorithm: str, acyclic: bool, theta: Fraction, d0: Cost, quota: Cost) -> Tuple[Optional[Cost], str]:
    """
    Bound matching an algorithm family, in the units of ``d0`` and ``quota``.

    Piecewise search gets 3θ·d0 + 2T. SLA*T gets d0 + T when θ = 1 (plain SLA* is
    SLA*T with T = 0); the bound is only guaranteed for the acyclic variant but is
    reported for the plain one too.
    """
    if algorithm == "piecewise":
        return piecewise_bound(theta, d0, quota), "piecewise"
    if algorithm in ("slat", "sla") and theta == 1:
        bound_id = "slat" if acyclic else "slat-cyclic"
        return slat_bound(d0, 0 if algorithm == "sla" else quota), bound_id
    return None, "none"


def _real(value: Cost, epsilon: Fraction) -> Cost:
    if not is_finite(value):
        return INF
    return Fraction(value) * epsilon


@dataclass
class SweepJob:
    algorithm: str
    acyclic: bool
    problem: ProblemSpec
    quota: Union[Fraction, float]
    params: Optional[AlgoParams]
    budget: Optional[int]
    audit: bool


def run_job(job: SweepJob) -> SweepRecord:
    """Run one sweep point; module-level so worker processes can import it."""
    problem = job.problem
    eps = problem.epsilon
    params = job.params or AlgoParams(theta=problem.theta)
    params = params.evolve(quota=to_units(job.quota, eps, integral=False))
    policy = get_policy(job.algorithm, acyclic=job.acyclic)
    result = run_search(policy, problem, params, budget=job.budget, audit=job.audit, record_trace=False)

    d0 = _real(problem.oracle.goal_distance(problem.start), eps)
    cost = _real(result.solution_cost, eps)
    bound, bound_id = applicable_bound(job.algorithm, job.acyclic, params.theta, d0, job.quota)
    within = None
    if bound is not None and is_finite(bound) and not result.timed_out:
        within = cost <= bound
    return SweepRecord(
        algorithm=policy.name,
        problem=problem.name,
        quota=job.quota,
        theta=params.theta,
        solution_cost=cost,
        travel_cost=_real(result.travel_cost, eps),
        bound=bound,
        bound_id=bound_id,
        within_bound=within,
        timed_out=result.timed_out,
        audit_violations=len(result.audit),
        cycles=result.cycles,
        d0=d0,
    )


def sweep_quota(
    algorithm: str,
    problems: Iterable[ProblemSpec],
    quotas: Sequence[Any],
    params: Optional[AlgoParams] = None,
    acyclic: bool = False,
    budget: Optional[int] = None,
    audit: bool = True,
    workers: int = 1,
    progress: bool = True,
) -> List[SweepRecord]:
    """
    Run ``algorithm`` on every problem for every learning quota.

    Args:
        algorithm: Policy id (``lrta``, ``sla``, ``slat``, ``dynlook``, ``piecewise``)
        problems: Problems to run
        quotas: Learning quotas T in real units (``inf`` allowed)
        params: Base parameters (the quota is replaced per run)
        acyclic: Wrap the policy in the acyclic wrapper
        budget: Per-run cycle budget (defaults to the completeness budget)
        audit: Audit every transition
        workers: Worker processes; 1 runs in-process
        progress: Show a progress bar

    Returns:
        Records sorted by (algorithm, problem, T)
    """
    problems = list(problems)
    jobs = [
        SweepJob(algorithm, acyclic, problem, as_fraction(q) if not _is_inf(q) else INF, params, budget, audit)
        for problem in problems
        for q in quotas
    ]
    logger.info(f"Sweeping {algorithm} over {len(problems)} problem(s) x {len(quotas)} quota(s)")

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(
                tqdm(pool.map(run_job, jobs), total=len(jobs), desc=algorithm, disable=not progress)
            )
    else:
        records = [run_job(job) for job in tqdm(jobs, desc=algorithm, disable=not progress)]

    timed_out = sum(r.timed_out for r in records)
    if timed_out:
        logger.warning(f"{timed_out} of {len(records)} sweep run(s) timed out; excluded from bound checks")
    exceeded = [r for r in records if r.within_bound is False]
    if exceeded:
        logger.warning(f"{len(exceeded)} sweep run(s) exceed their {exceeded[0].bound_id} bound")
    order = {p.name: i for i, p in enumerate(problems)}
    records.sort(key=lambda r: (r.algorithm, order.get(r.problem, 0), r.problem, r.quota))
    return records


def _is_inf(value: Any) -> bool:
    return str(value).strip().lower() in ("inf", "infinity", "+inf")


def records_frame(records: Sequence[SweepRecord]) -> pd.DataFrame:
    return pd.DataFrame([r.to_row() for r in records], columns=SWEEP_COLUMNS)


def records_to_csv(records: Sequence[SweepRecord], path: Optional[Union[str, Path]] = None) -> str:
    """Sweep records as CSV text; also written to ``path`` when given."""
    text = records_frame(records).to_csv(index=False)
    if path is not None:
        Path(path).write_text(text)
        logger.info(f"Wrote {len(records)} sweep record(s) to {path}")
    return text


@dataclass
class LinearFit:
    """Smallest envelope a·d0 + b·T + c over a family's measured costs."""
    algorithm: str
    a: float
    b: float
    c: float
    total_slack: float
    records: int

    def predict(self, d0: float, quota: float) -> float:
        return self.a * d0 + self.b * quota + self.c

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def fit_linear_class(records: Sequence[SweepRecord]) -> Dict[str, LinearFit]:
    """
    Fit a non-negative linear envelope per algorithm.

    Solves min Σ(a·d0 + b·T + c − cost) subject to a·d0 + b·T + c ≥ cost for every
    finished run with finite T, a, b, c ≥ 0.

    Returns:
        LinearFit per algorithm name (algorithms without usable records are skipped)
    """
    fits: Dict[str, LinearFit] = {}
    for algorithm in sorted({r.algorithm for r in records}):
        usable = [
            r for r in records
            if r.algorithm == algorithm and not r.timed_out and is_finite(r.quota) and is_finite(r.solution_cost)
        ]
        if not usable:
            continue
        d0 = np.array([float(r.d0) for r in usable])
        quota = np.array([float(r.quota) for r in usable])
        cost = np.array([float(r.solution_cost) for r in usable])
        design = np.column_stack([d0, quota, np.ones_like(d0)])

        solution = linprog(
            c=design.sum(axis=0),
            A_ub=-design,
            b_ub=-cost,
            bounds=[(0, None)] * 3,
            method="highs",
        )
        if not solution.success:
            logger.warning(f"Linear fit for {algorithm} failed: {solution.message}")
            continue
        a, b, c = (float(x) for x in solution.x)
        slack = float((design @ solution.x - cost).sum())
        fits[algorithm] = LinearFit(algorithm, a, b, c, slack, len(usable))
        logger.info(f"{algorithm}: cost <= {a:.3f}*d0 + {b:.3f}*T + {c:.3f} over {len(usable)} run(s)")
    return fits
