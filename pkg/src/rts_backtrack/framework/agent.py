"""
The real-time search agent: stack-based plan-learn-move loop
"""

import logging
import math
from typing import Iterable, List, Mapping, Optional, Union

from rts_backtrack.exceptions import FrameworkError, QuotaExceededError, ValidationError
from rts_backtrack.models.agent import AccountingMode, AgentState, AlgoParams, HeuristicTable, StackPath
from rts_backtrack.models.costs import INF, Cost, is_finite, normalize, scale
from rts_backtrack.models.problem import ProblemSpec, State, state_label
from rts_backtrack.models.run import AuditViolation, Direction, RunResult, StepDecision, StepRecord

logger = logging.getLogger(__name__)


def solution_cost(problem: ProblemSpec, stack: Union[StackPath, Iterable[State]]) -> Cost:
    """
    Sum of distances between consecutive states on a stack.

    Args:
        problem: Search problem
        stack: Path stack ``[s_0, ..., s_m]``

    Returns:
        Solution cost in ε units, ``INF`` if a consecutive pair is disconnected
    """
    states = list(stack)
    total: Cost = 0
    for a, b in zip(states, states[1:]):
        step = problem.oracle.dist(a, b)
        if not is_finite(step):
            logger.warning(f"Stack pair {state_label(a)}->{state_label(b)} is disconnected")
            return INF
        total += step
    return total


def update_learning_amount(
    u_prev: Cost,
    h_before: Mapping[State, Cost],
    h_after: Mapping[State, Cost],
    decision: StepDecision,
    mode: AccountingMode = AccountingMode.TOTAL,
    stack_before: Optional[StackPath] = None,
    stack_after: Optional[StackPath] = None,
    quota: Optional[Cost] = None,
) -> Cost:
    """
    Learning amount after one cycle.

    In total mode every heuristic increase counts. In axiom mode only increases at
    states on the new stack count, excluding the start state and, when the stack
    shrank, the state the agent just left.

    Args:
        u_prev: Learning amount before the cycle
        h_before: Heuristic before the cycle
        h_after: Heuristic after the cycle
        decision: The cycle's decision
        mode: Accounting mode
        stack_before: Stack before the move (axiom mode)
        stack_after: Stack after the move (axiom mode)
        quota: Learning quota to enforce, if any

    Returns:
        New learning amount in ε units

    Raises:
        QuotaExceededError: If ``quota`` is given and the new amount exceeds it
    """
    if mode is AccountingMode.TOTAL:
        charged = set(decision.h_updates) | set(decision.lss)
        if stack_before is not None:
            charged.add(stack_before.top)
    else:
        if stack_before is None or stack_after is None:
            raise FrameworkError("Axiom accounting needs the stacks before and after the move")
        excluded = {stack_before.bottom}
        if len(stack_after) < len(stack_before):
            excluded.add(stack_before.top)
        charged = set(stack_after) - excluded

    increment = sum(h_after.get(s, 0) - h_before.get(s, 0) for s in charged)
    u_next = normalize(u_prev + increment)
    if quota is not None and u_next > quota:
        raise QuotaExceededError(u_next, quota)
    return u_next


def default_budget(problem: ProblemSpec, theta=None) -> int:
    """
    Step budget large enough for any complete search on a finite problem.

    10·|S|²·max(1, ⌈θ·max h*⌉), with h* in ε units over states that reach a goal.
    """
    theta = problem.theta if theta is None else theta
    finite = [problem.oracle.goal_distance(s) for s in problem.states]
    finite = [d for d in finite if is_finite(d)]
    headroom = math.ceil(scale(theta, max(finite, default=0)))
    return 10 * len(problem) ** 2 * max(1, headroom)


class SearchAgent:
    """
    Runs a step policy on a problem, one planning cycle at a time.

    Each cycle the policy plans and learns, the agent applies the heuristic updates,
    charges the learning amount, then pushes, pops or stays. With auditing on every
    transition is checked against the framework conditions.
    """

    def __init__(
        self,
        problem: ProblemSpec,
        policy,
        params: Optional[AlgoParams] = None,
        audit: bool = True,
        budget: Optional[int] = None,
        record_trace: bool = True,
    ):
        """
        Initialize the agent.

        Args:
            problem: Search problem
            policy: Step policy (a ``BasePolicy``)
            params: Run parameters (defaults use the problem's θ)
            audit: Check every transition
            budget: Maximum number of cycles (defaults to ``default_budget``)
            record_trace: Keep per-cycle step records
        """
        self.problem = problem
        self.policy = policy
        self.params = (params or AlgoParams(theta=problem.theta)).validate()
        self.audit = audit
        self.budget = default_budget(problem, self.params.theta) if budget is None else budget
        self.record_trace = record_trace
        self.trace: List[StepRecord] = []
        self.violations: List[AuditViolation] = []
        self.travel_cost: Cost = 0
        self.state = self.reset()

    def reset(self) -> AgentState:
        self.state = AgentState(
            stack=StackPath.start(self.problem.start),
            h=HeuristicTable(self.problem.h_init),
        )
        self.trace = []
        self.violations = []
        self.travel_cost = 0
        self.policy.begin(self.problem, self.params, self.state)
        return self.state

    @property
    def done(self) -> bool:
        return self.problem.is_goal(self.state.top)

    def _check_decision(self, decision: StepDecision) -> None:
        state = self.state
        if decision.direction is Direction.FORWARD:
            if decision.next_state is None:
                raise FrameworkError("Forward decision without a next state")
            if decision.next_state not in decision.lss:
                raise FrameworkError(
                    f"Forward move to {state_label(decision.next_state)} outside the local "
                    f"search space at t={state.t}"
                )
            if decision.excised and decision.next_state not in state.stack:
                raise FrameworkError(
                    f"Excising move to {state_label(decision.next_state)} which is not on the stack"
                )
        elif decision.direction is Direction.BACKWARD and len(state.stack) == 1:
            raise FrameworkError("Backtracking from the start state; the policy must stay instead")

    def _move(self, decision: StepDecision) -> StackPath:
        stack = self.state.stack
        if decision.direction is Direction.FORWARD:
            if decision.excised:
                return stack.truncate_to(decision.next_state)
            return stack.push(decision.next_state)
        if decision.direction is Direction.BACKWARD:
            return stack.pop()
        return stack

    def _charge(self, decision: StepDecision, enforce: bool = False) -> Cost:
        state = self.state
        return update_learning_amount(
            state.u,
            state.h,
            state.h.overlay(decision.h_updates),
            decision,
            self.params.accounting,
            state.stack,
            self._move(decision),
            quota=self.params.quota if enforce else None,
        )

    def _within_quota(self, decision: StepDecision) -> StepDecision:
        try:
            self._charge(decision, enforce=True)
        except QuotaExceededError as exc:
            logger.debug(f"t={self.state.t}: {exc}; recomputing as a backtracking move")
            decision = self.policy.backtrack_variant(self.state, self.problem, self.params, decision)
            self._check_decision(decision)
            try:
                self._charge(decision, enforce=True)
            except QuotaExceededError as again:
                raise FrameworkError(
                    f"Policy {self.policy.name} exceeds the learning quota even without moving forward"
                ) from again
        return decision

    def step(self) -> StepRecord:
        """
        Execute one planning cycle.

        Returns:
            Record of the cycle
        """
        from rts_backtrack.framework.audit import audit_transition

        if self.done:
            raise FrameworkError("The agent already reached a goal")
        state = self.state
        # without auditing the snapshot shares the live heuristic table
        if self.audit:
            before = state.snapshot()
        else:
            before = AgentState(stack=state.stack, h=state.h, t=state.t, u=state.u)

        decision = self.policy.decide(state, self.problem, self.params)
        self._check_decision(decision)
        if self.params.enforce_quota:
            decision = self._within_quota(decision)

        u_next = self._charge(decision)
        new_stack = self._move(decision)
        top = state.top
        changes = state.h.apply(decision.h_updates)

        if decision.direction is Direction.STAY:
            travel: Cost = 0
        else:
            travel = self.problem.oracle.dist(top, new_stack.top)
        self.travel_cost = normalize(self.travel_cost + travel)

        state.stack = new_stack
        state.u = u_next
        state.t += 1

        record = StepRecord(
            t=state.t - 1,
            top=top,
            stack=new_stack,
            direction=decision.direction,
            next_state=new_stack.top,
            gamma=decision.gamma,
            u=u_next,
            lss=decision.lss,
            changes=changes,
            travel=travel,
            excised=decision.excised,
        )
        if self.record_trace:
            self.trace.append(record)
        logger.debug(
            f"t={record.t} {state_label(top)} {decision.direction.value} -> "
            f"{state_label(new_stack.top)} u={u_next}"
        )

        if self.audit:
            found = audit_transition(self.problem, before, state, decision, self.params)
            for violation in found:
                logger.warning(f"Audit violation: {violation}")
            self.violations.extend(found)
        self.policy.on_transition(before, state, decision, self.problem, self.params)
        return record

    def run(self) -> RunResult:
        """
        Run until a goal is on top of the stack or the budget is spent.

        Returns:
            RunResult; ``timed_out`` is set when the budget ran out first
        """
        logger.info(
            f"Running {self.policy.name} on {self.problem.name!r} "
            f"(|S|={len(self.problem)}, budget={self.budget})"
        )
        while not self.done and self.state.t < self.budget:
            self.step()

        timed_out = not self.done
        if timed_out:
            logger.warning(f"{self.policy.name} on {self.problem.name!r} ran out of budget")

        result = RunResult(
            problem=self.problem.name,
            algorithm=self.policy.name,
            final_stack=self.state.stack,
            solution_cost=solution_cost(self.problem, self.state.stack),
            travel_cost=self.travel_cost,
            cycles=self.state.t,
            learning_amount=self.state.u,
            h_final=self.state.h.as_dict(),
            epsilon=self.problem.epsilon,
            timed_out=timed_out,
            audit=list(self.violations),
            trace=list(self.trace),
        )
        logger.info(
            f"{self.policy.name} finished in {result.cycles} cycles, "
            f"solution cost {result.solution_cost}, travel {result.travel_cost}"
        )
        return result


def run_search(
    policy,
    problem: ProblemSpec,
    params: Optional[AlgoParams] = None,
    budget: Optional[int] = None,
    audit: bool = True,
    validate: bool = True,
    record_trace: bool = True,
) -> RunResult:
    """
    Run a step policy on a problem from its start state to the first goal.

    Args:
        policy: Step policy instance
        problem: Search problem
        params: Run parameters
        budget: Maximum number of cycles
        audit: Check every transition against the framework conditions
        validate: Reject problems that fail ``validate_problem`` before running
        record_trace: Keep per-cycle step records

    Returns:
        RunResult with final stack, costs, cycle count, audit findings and trace
    """
    from rts_backtrack.graph.validation import validate_problem

    params = params or AlgoParams(theta=problem.theta)
    if validate:
        report = validate_problem(problem, theta=params.theta)
        if not report.ok:
            raise ValidationError(
                f"Problem {problem.name!r} is invalid: "
                + "; ".join(v.message for v in report.violations[:5])
            )
    agent = SearchAgent(problem, policy, params, audit=audit, budget=budget, record_trace=record_trace)
    return agent.run()
