"""
Heuristic update bounds that keep a heuristic θ-admissible
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Mapping, Optional, Set

from tqdm import tqdm

from rts_backtrack.exceptions import BruteForceLimitError, ConfigurationError
from rts_backtrack.models.agent import AgentState, AlgoParams
from rts_backtrack.models.costs import Cost, is_finite, normalize, scale
from rts_backtrack.models.problem import ProblemSpec, State, state_label
from rts_backtrack.models.run import StepDecision
from rts_backtrack.policies.base import BasePolicy, choose_min, successor_f_values

logger = logging.getLogger(__name__)

BRUTE_FORCE_CAP = 12


class BoundMode(Enum):
    """How the separating-subset maximum is taken"""
    EXACT = "exact"
    FRONTIER = "frontier"
    AUTO = "auto"


class VisitedUnion:
    """Cumulative union of every local search space (and current state) seen so far."""

    def __init__(self, states: Iterable[State] = ()):
        self._states: Set[State] = set(states)

    def add(self, states: Iterable[State]) -> "VisitedUnion":
        self._states.update(states)
        return self

    @property
    def states(self) -> FrozenSet[State]:
        return frozenset(self._states)

    def touches(self, states: Iterable[State]) -> bool:
        return not self._states.isdisjoint(states)

    def __contains__(self, state: object) -> bool:
        return state in self._states

    def __len__(self) -> int:
        return len(self._states)

    def __iter__(self):
        return iter(self._states)


def raised_heuristic(
    problem: ProblemSpec,
    h: Mapping[State, Cost],
    gamma_set: Iterable[State],
    s: State,
    theta: Fraction,
) -> Cost:
    """
    How far h(s) can be raised from what the other states of ``gamma_set`` know.

    h^Γ(s) = max over s' in Γ of max{h(s), h(s') - θ·dist(s', s)}. Distances run from
    the neighbour to ``s`` so the raised value stays θ-admissible on directed graphs.

    Args:
        problem: Search problem
        h: Heuristic (ε units)
        gamma_set: States whose values may raise ``s``
        s: State to raise
        theta: Admissibility weight

    Returns:
        The raised value; unreachable neighbours contribute nothing
    """
    best = h.get(s, 0)
    for other in gamma_set:
        gap = problem.oracle.dist(other, s)
        if not is_finite(gap):
            continue
        candidate = normalize(h.get(other, 0) - scale(theta, gap))
        if candidate > best:
            best = candidate
    return best


def _separating_family(
    problem: ProblemSpec, s: State, region: FrozenSet[State], mode: BoundMode
) -> Iterable[FrozenSet[State]]:
    others = sorted(region - {s}, key=problem.rank.__getitem__)
    if mode is BoundMode.EXACT:
        for size in range(1, len(others) + 1):
            for subset in combinations(others, size):
                candidate = frozenset(subset)
                if problem.oracle.is_separating(s, candidate):
                    yield candidate
    else:
        depth = 1
        while True:
            layer = problem.oracle.frontier(s, depth)
            if not layer:
                break
            inside = layer & region
            if inside and problem.oracle.is_separating(s, inside):
                yield inside
            depth += 1


def _resolve_mode(region_size: int, mode: BoundMode, cap: int) -> BoundMode:
    if mode is BoundMode.EXACT and region_size > cap:
        raise BruteForceLimitError(
            f"Exact subset enumeration over {region_size} states exceeds the cap of {cap}"
        )
    if mode is BoundMode.AUTO:
        return BoundMode.EXACT if region_size <= cap else BoundMode.FRONTIER
    return mode


@dataclass
class UpdateBound:
    """Largest admissibility-safe value for one state, with how it was computed."""
    state: State
    value: Cost
    mode: BoundMode

    @property
    def exact(self) -> bool:
        return self.mode is BoundMode.EXACT


def max_update_bound(
    problem: ProblemSpec,
    h: Mapping[State, Cost],
    visited: VisitedUnion,
    s: State,
    theta: Fraction,
    mode: BoundMode = BoundMode.AUTO,
    cap: int = BRUTE_FORCE_CAP,
) -> UpdateBound:
    """
    Strengthened max-of-min bound on a heuristic update at ``s``.

    Maximum over the separating subsets J of the visited union (and {s}) of
    min over s' in J of θ·dist(s, s') + h^Γ*(s'), where h^Γ* is the raised heuristic.

    Args:
        problem: Search problem
        h: Heuristic before the update (ε units)
        visited: Union of all local search spaces so far; must contain ``s``
        s: State being updated
        theta: Admissibility weight
        mode: EXACT enumerates all subsets, FRONTIER uses the nested frontier family
            (a lower bound), AUTO picks EXACT up to ``cap`` states
        cap: Largest visited union enumerated exactly

    Returns:
        UpdateBound with the value and the mode used

    Raises:
        BruteForceLimitError: EXACT mode on a visited union larger than ``cap``
        ConfigurationError: ``s`` is not in the visited union
    """
    region = visited.states
    if s not in region:
        raise ConfigurationError(f"State {state_label(s)} is outside the visited union")
    used = _resolve_mode(len(region), mode, cap)
    if used is BoundMode.FRONTIER:
        logger.warning(
            f"Visited union of {len(region)} states exceeds {cap}; bound at {state_label(s)} "
            "is a frontier-family lower bound"
        )

    raised: Dict[State, Cost] = {}

    def lifted(state: State) -> Cost:
        if state not in raised:
            raised[state] = raised_heuristic(problem, h, region, state, theta)
        return raised[state]

    best = lifted(s)
    for subset in _separating_family(problem, s, region, used):
        low = min(
            normalize(scale(theta, problem.oracle.dist(s, other)) + lifted(other)) for other in subset
        )
        if low > best:
            best = low
    return UpdateBound(state=s, value=best, mode=used)


def max_of_mins_exhaustive(
    problem: ProblemSpec,
    h: Mapping[State, Cost],
    gamma_set: Iterable[State],
    s: State,
    weight: Fraction = Fraction(1),
    cap: int = BRUTE_FORCE_CAP,
) -> Cost:
    """
    Plain max-of-mins value at ``s`` over every separating subset of ``gamma_set``.

    max{h(s), max over separating J of min over s' in J of weight·dist(s, s') + h(s')}.
    """
    region = frozenset(gamma_set) | {s}
    _resolve_mode(len(region), BoundMode.EXACT, cap)
    best = h.get(s, 0)
    for subset in _separating_family(problem, s, region, BoundMode.EXACT):
        low = min(normalize(scale(weight, problem.oracle.dist(s, o)) + h.get(o, 0)) for o in subset)
        if low > best:
            best = low
    return best


@dataclass
class AdmissibilityCheck:
    admissible: bool
    witness: Optional[State] = None
    value: Optional[Cost] = None
    limit: Optional[Cost] = None

    def __bool__(self) -> bool:
        return self.admissible


def check_theta_admissible(problem: ProblemSpec, h: Mapping[State, Cost], theta: Fraction) -> AdmissibilityCheck:
    """
    Check h(s) <= θ·h*(s) for every state.

    Returns:
        AdmissibilityCheck; on failure ``witness`` is the first offending state in id order
    """
    for state in problem.states:
        limit = scale(theta, problem.oracle.goal_distance(state))
        value = h.get(state, 0)
        if value > limit:
            return AdmissibilityCheck(False, state, value, limit)
    return AdmissibilityCheck(True)


class BoundBreakingPolicy(BasePolicy):
    """
    Deliberately over-aggressive update rule: raises h(top) to the strengthened bound
    plus ``margin`` ε units, then moves to the best successor.
    """

    name = "bound-breaking"

    def __init__(self, margin: Cost = 1, mode: BoundMode = BoundMode.AUTO):
        super().__init__(margin=margin)
        self.margin = margin
        self.mode = mode
        self.visited = VisitedUnion()

    def begin(self, problem: ProblemSpec, params: AlgoParams, agent: AgentState) -> None:
        self.visited = VisitedUnion()

    def decide(self, agent: AgentState, problem: ProblemSpec, params: AlgoParams) -> StepDecision:
        top = agent.top
        f = successor_f_values(agent, problem, params)
        self.visited.add(f.keys()).add([top])
        bound = max_update_bound(problem, agent.h, self.visited, top, params.theta, self.mode)
        updates = {top: normalize(bound.value + self.margin)}
        best = choose_min(f, problem, params, agent.t)
        return StepDecision.forward(best, f.keys(), updates, params.gamma)


@dataclass
class ProblemVerdict:
    """Findings for one problem of an update-rule verification."""
    problem: str
    cycles_checked: int = 0
    exceeded: bool = False
    broke: bool = False
    first_exceeded_at: Optional[int] = None
    first_broken_at: Optional[int] = None
    approximate: bool = False
    stopped_at_goal_region: bool = False

    @property
    def consistent(self) -> bool:
        """A rule that never exceeded the bound must not have broken admissibility."""
        return self.exceeded or not self.broke

    def to_dict(self) -> Dict[str, Any]:
        return {
            "problem": self.problem,
            "cycles_checked": self.cycles_checked,
            "exceeded": self.exceeded,
            "broke": self.broke,
            "first_exceeded_at": self.first_exceeded_at,
            "first_broken_at": self.first_broken_at,
            "approximate": self.approximate,
            "stopped_at_goal_region": self.stopped_at_goal_region,
        }


@dataclass
class VerdictReport:
    rule: str
    theta: Fraction
    verdicts: List[ProblemVerdict] = field(default_factory=list)

    @property
    def ever_exceeded(self) -> bool:
        return any(v.exceeded for v in self.verdicts)

    @property
    def ever_broke(self) -> bool:
        return any(v.broke for v in self.verdicts)

    @property
    def consistent(self) -> bool:
        return all(v.consistent for v in self.verdicts)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rule": self.rule,
            "theta": str(self.theta),
            "ever_exceeded": self.ever_exceeded,
            "ever_broke": self.ever_broke,
            "consistent": self.consistent,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }


def verify_update_rule(
    rule: Callable[[], BasePolicy],
    problems: Iterable[ProblemSpec],
    theta: Fraction,
    params: Optional[AlgoParams] = None,
    budget: Optional[int] = None,
    mode: BoundMode = BoundMode.AUTO,
    progress: bool = False,
) -> VerdictReport:
    """
    Simulate an update rule and compare every update against the strengthened bound.

    Each problem is run from its start state. For every cycle the visited union grows
    by the local search space and the current state; each changed value is compared
    with ``max_update_bound`` (taken on the heuristic before the update) and the whole
    heuristic is checked for θ-admissibility. Checking stops once the visited union
    touches a goal, since the bound only speaks about goal-free regions.

    Args:
        rule: Factory returning a fresh policy per problem
        problems: Problems to simulate
        theta: Admissibility weight
        params: Run parameters (θ is overridden by ``theta``)
        budget: Cycle cap per problem
        mode: Bound mode passed to ``max_update_bound``
        progress: Show a progress bar

    Returns:
        VerdictReport with one ProblemVerdict per problem
    """
    from rts_backtrack.framework.agent import SearchAgent

    theta = Fraction(theta)
    params = (params or AlgoParams(theta=theta)).evolve(theta=theta)
    if params.gamma_bar > theta:
        params = params.evolve(gamma=min(params.gamma, theta), gamma_bar=theta)
    problems = list(problems)
    report = VerdictReport(rule="", theta=theta)

    for problem in tqdm(problems, desc="verify", disable=not progress):
        policy = rule()
        report.rule = policy.name
        agent = SearchAgent(problem, policy, params, audit=False, budget=budget, record_trace=False)
        verdict = ProblemVerdict(problem=problem.name)
        visited = VisitedUnion()

        while not agent.done and agent.state.t < agent.budget:
            h_before = agent.state.h.copy()
            record = agent.step()
            visited.add(record.lss).add([record.top])
            if visited.touches(problem.goals):
                verdict.stopped_at_goal_region = True
                break
            verdict.cycles_checked += 1

            for state, (_, new) in record.changes.items():
                bound = max_update_bound(problem, h_before, visited, state, theta, mode)
                verdict.approximate = verdict.approximate or not bound.exact
                if new > bound.value and not verdict.exceeded:
                    verdict.exceeded = True
                    verdict.first_exceeded_at = record.t
                    logger.info(
                        f"{policy.name} on {problem.name!r}: h({state_label(state)}) = {new} "
                        f"exceeds bound {bound.value} at t={record.t}"
                    )
            if not verdict.broke and not check_theta_admissible(problem, agent.state.h, theta):
                verdict.broke = True
                verdict.first_broken_at = record.t
        report.verdicts.append(verdict)

    logger.info(
        f"Verified {report.rule} on {len(report.verdicts)} problem(s): "
        f"exceeded={report.ever_exceeded}, broke={report.ever_broke}"
    )
    return report
