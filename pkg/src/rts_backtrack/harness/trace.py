"""
Trace emission (CSV and aligned tables) and CSV trace replay
"""

import io
import logging
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

import pandas as pd

from rts_backtrack.exceptions import FormatError, FrameworkError, ValidationError
from rts_backtrack.models.agent import StackPath
from rts_backtrack.models.costs import Cost, exact_text, to_units
from rts_backtrack.models.problem import ProblemSpec, State, state_label
from rts_backtrack.models.run import TRACE_COLUMNS, Direction, RunResult, StepRecord

logger = logging.getLogger(__name__)

TABLE_STATE_LIMIT = 10
TRACE_FORMATS = ("csv", "table")


def trace_frame(records: Sequence[StepRecord], problem: ProblemSpec) -> pd.DataFrame:
    rows = [record.to_row(problem.epsilon, problem.rank) for record in records]
    return pd.DataFrame(rows, columns=TRACE_COLUMNS)


def trace_table(records: Sequence[StepRecord], problem: ProblemSpec, h_final: Optional[Dict[State, Cost]] = None) -> str:
    """
    Aligned per-cycle table: t, h_t of every state, σ_t, Γ(σ_t) and u_t.

    Row t shows the values at the start of cycle t with the current state's h value
    starred. The last row is the state after the final cycle; its Γ column lists the
    successors of the final state.

    Raises:
        FormatError: The problem has more than ``TABLE_STATE_LIMIT`` states
    """
    if len(problem) > TABLE_STATE_LIMIT:
        raise FormatError(
            f"Table traces are limited to {TABLE_STATE_LIMIT} states, problem has {len(problem)}; use csv"
        )
    eps = problem.epsilon
    order = problem.rank.__getitem__
    h = dict(problem.h_init)
    stack = StackPath.start(problem.start)
    u: Cost = 0
    rows = []

    def row(t: int, gamma_set) -> Dict[str, str]:
        entry = {"t": str(t)}
        for state in problem.states:
            text = exact_text(h[state], eps)
            entry[f"h({state_label(state)})"] = f"*{text}" if state == stack.top else text
        entry["stack"] = str(stack)
        entry["lss"] = "{" + ",".join(state_label(s) for s in sorted(gamma_set, key=order)) + "}"
        entry["u"] = exact_text(u, eps)
        return entry

    for record in records:
        rows.append(row(record.t, record.lss))
        for state, (_, new) in record.changes.items():
            h[state] = new
        stack, u = record.stack, record.u
    if h_final is not None:
        h.update(h_final)
    rows.append(row(len(records), problem.successors(stack.top)))
    return pd.DataFrame(rows).to_string(index=False) + "\n"


def emit_trace(result: RunResult, problem: ProblemSpec, fmt: str = "csv") -> str:
    """
    Render a run's trace.

    Args:
        result: Completed or partial run (must carry its trace)
        problem: Problem the run was made on
        fmt: ``csv`` (one row per cycle) or ``table``

    Returns:
        Trace text

    Raises:
        FormatError: Unknown format, or a table for a problem over the state limit
    """
    if fmt == "csv":
        return trace_frame(result.trace, problem).to_csv(index=False)
    if fmt == "table":
        return trace_table(result.trace, problem, result.h_final)
    raise FormatError(f"Unknown trace format {fmt!r}; choose one of {', '.join(TRACE_FORMATS)}")


def _units(text: str, problem: ProblemSpec) -> Cost:
    return to_units(text, problem.epsilon, integral=False)


def _states(text: str, problem: ProblemSpec) -> List[State]:
    return [problem.state_for_label(label) for label in text.split(";") if label]


def _changes(text: str, problem: ProblemSpec):
    changes = {}
    for item in filter(None, text.split(";")):
        try:
            label, values = item.split("=", 1)
            old, new = values.split("->", 1)
        except ValueError:
            raise FormatError(f"Malformed change entry {item!r}")
        changes[problem.state_for_label(label)] = (_units(old, problem), _units(new, problem))
    return changes


def read_trace(text: str, problem: ProblemSpec) -> List[StepRecord]:
    """
    Read a CSV trace back into step records, rebuilding the stack after every cycle.

    Args:
        text: CSV produced by ``emit_trace``
        problem: Problem the trace was recorded on

    Returns:
        Step records in cycle order

    Raises:
        FormatError: Missing columns, malformed cells or a trace that disagrees with itself
    """
    try:
        frame = pd.read_csv(io.StringIO(text), dtype=str, keep_default_na=False)
    except (pd.errors.EmptyDataError, pd.errors.ParserError) as exc:
        raise FormatError(f"Unreadable trace: {exc}") from exc
    missing = [c for c in TRACE_COLUMNS if c not in frame.columns]
    if missing:
        raise FormatError(f"Trace is missing columns: {', '.join(missing)}")

    records: List[StepRecord] = []
    stack = StackPath.start(problem.start)
    for line, row in enumerate(frame.to_dict("records"), start=2):
        try:
            top = problem.state_for_label(row["top"])
            next_state = problem.state_for_label(row["next_state"])
            direction = Direction(row["direction"])
            excised = row["excised"].strip().lower() == "true"
            if top != stack.top:
                raise FormatError(f"Line {line}: trace says top {row['top']}, replay is at {state_label(stack.top)}")
            if direction is Direction.FORWARD:
                stack = stack.truncate_to(next_state) if excised else stack.push(next_state)
            elif direction is Direction.BACKWARD:
                stack = stack.pop()
            if int(row["stack_len"]) != len(stack) or stack.top != next_state:
                raise FormatError(f"Line {line}: stack after the move does not match the trace")
            records.append(
                StepRecord(
                    t=int(row["t"]),
                    top=top,
                    stack=stack,
                    direction=direction,
                    next_state=next_state,
                    gamma=Fraction(row["gamma"]),
                    u=_units(row["u"], problem),
                    lss=frozenset(_states(row["lss"], problem)),
                    changes=_changes(row["changes"], problem),
                    travel=_units(row["travel"], problem),
                    excised=excised,
                )
            )
        except (ValueError, ValidationError, FrameworkError) as exc:
            raise FormatError(f"Line {line}: {exc}") from exc
    logger.debug(f"Read {len(records)} trace record(s) for {problem.name!r}")
    return records
