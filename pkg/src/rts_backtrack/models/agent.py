"""
Agent-side models: path stack, heuristic table, agent state and algorithm parameters
"""

from collections import ChainMap
from dataclasses import dataclass, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, Iterator, List, Mapping, Optional, Tuple, Union

from rts_backtrack.exceptions import ConfigurationError, FrameworkError
from rts_backtrack.models.costs import INF, Cost, as_fraction, is_finite, to_units
from rts_backtrack.models.problem import State, state_label


class AccountingMode(Enum):
    """How heuristic increases are charged against the learning quota"""
    TOTAL = "total"
    AXIOM = "axiom"


@dataclass(frozen=True)
class StackPath:
    """
    First-in-last-out path from the start state to the current state.

    Immutable: ``push`` and ``pop`` return new stacks, so snapshots taken before a
    transition stay valid after it.
    """
    states: Tuple[State, ...]

    def __post_init__(self):
        if not self.states:
            raise FrameworkError("A path stack always holds at least the start state")

    @classmethod
    def start(cls, state: State) -> "StackPath":
        return cls((state,))

    @property
    def top(self) -> State:
        return self.states[-1]

    @property
    def bottom(self) -> State:
        return self.states[0]

    @property
    def previous(self) -> Optional[State]:
        return self.states[-2] if len(self.states) > 1 else None

    def push(self, state: State) -> "StackPath":
        return StackPath(self.states + (state,))

    def pop(self) -> "StackPath":
        if len(self.states) == 1:
            raise FrameworkError("Cannot pop the start state off the path stack")
        return StackPath(self.states[:-1])

    def truncate_to(self, state: State) -> "StackPath":
        """Cut the stack back to the earliest occurrence of ``state``."""
        return StackPath(self.states[: self.states.index(state) + 1])

    def prefix(self, length: int) -> "StackPath":
        return StackPath(self.states[:length])

    def has_duplicates(self) -> bool:
        return len(set(self.states)) != len(self.states)

    def labels(self) -> List[str]:
        return [state_label(s) for s in self.states]

    def __len__(self) -> int:
        return len(self.states)

    def __iter__(self) -> Iterator[State]:
        return iter(self.states)

    def __contains__(self, state: object) -> bool:
        return state in self.states

    def __getitem__(self, index):
        return self.states[index]

    def __str__(self) -> str:
        return "[" + ",".join(self.labels()) + "]"


class HeuristicTable:
    """
    Mutable map from state to heuristic estimate, in ε units.

    Missing states read as 0. ``assign`` refuses to lower a value; the framework
    only ever raises estimates.
    """

    def __init__(self, initial: Mapping[State, Cost]):
        self._values: Dict[State, Cost] = dict(initial)

    def __getitem__(self, state: State) -> Cost:
        return self._values.get(state, 0)

    def get(self, state: State, default: Cost = 0) -> Cost:
        return self._values.get(state, default)

    def assign(self, state: State, value: Cost) -> Cost:
        """Set a new value and return the old one."""
        old = self[state]
        if value < old:
            raise FrameworkError(
                f"Heuristic at {state_label(state)} would decrease from {old} to {value}"
            )
        self._values[state] = value
        return old

    def overwrite(self, state: State, value: Cost) -> None:
        """Set a value without the monotonicity check (trace replay lets the auditor see decreases)."""
        self._values[state] = value

    def apply(self, updates: Mapping[State, Cost]) -> Dict[State, Tuple[Cost, Cost]]:
        """Apply updates and return ``{state: (old, new)}`` for values that changed."""
        changed = {}
        for state, value in updates.items():
            old = self.assign(state, value)
            if value != old:
                changed[state] = (old, value)
        return changed

    def copy(self) -> "HeuristicTable":
        return HeuristicTable(self._values)

    def as_dict(self) -> Dict[State, Cost]:
        return dict(self._values)

    def overlay(self, updates: Mapping[State, Cost]) -> ChainMap:
        """Read-only view of this table with ``updates`` applied on top."""
        return ChainMap(dict(updates), self._values)

    def __iter__(self) -> Iterator[State]:
        return iter(self._values)

    def __len__(self) -> int:
        return len(self._values)

    def __repr__(self) -> str:
        return f"HeuristicTable({len(self._values)} states)"


@dataclass
class AgentState:
    """Cycle counter, learning amount, stack and heuristic of one running agent."""
    stack: StackPath
    h: HeuristicTable
    t: int = 0
    u: Cost = 0

    @property
    def top(self) -> State:
        return self.stack.top

    def snapshot(self) -> "AgentState":
        return AgentState(stack=self.stack, h=self.h.copy(), t=self.t, u=self.u)


@dataclass
class AlgoParams:
    """
    Control parameters of a search run, costs in ε units.

    ``gamma`` is the heuristic weight used in f-values; it stays constant for a run
    and must satisfy ``0 < gamma <= gamma_bar <= theta``.
    """
    theta: Fraction = Fraction(1)
    quota: Cost = INF
    gamma: Fraction = Fraction(1)
    gamma_bar: Optional[Fraction] = None
    d_max: int = 1
    k: Optional[int] = None
    tie_seed: Optional[int] = None
    accounting: AccountingMode = AccountingMode.TOTAL
    enforce_quota: bool = False
    allow_weighted_lookahead: bool = False

    def __post_init__(self):
        self.theta = as_fraction(self.theta)
        self.gamma = as_fraction(self.gamma)
        self.gamma_bar = self.gamma if self.gamma_bar is None else as_fraction(self.gamma_bar)
        if isinstance(self.accounting, str):
            self.accounting = AccountingMode(self.accounting)

    @classmethod
    def from_real(
        cls,
        epsilon: Fraction,
        quota: Union[int, float, str, Fraction] = INF,
        **kwargs,
    ) -> "AlgoParams":
        """
        Build parameters from a real-valued quota.

        Args:
            epsilon: Cost quantum of the problem the parameters are for
            quota: Learning quota T in real cost units (``inf`` for unlimited)
            **kwargs: Remaining AlgoParams fields

        Returns:
            AlgoParams with the quota in ε units
        """
        return cls(quota=to_units(quota, as_fraction(epsilon), integral=False), **kwargs)

    def validate(self) -> "AlgoParams":
        if self.theta <= 0:
            raise ConfigurationError(f"theta must be positive, got {self.theta}")
        if self.gamma <= 0:
            raise ConfigurationError(f"gamma must be positive, got {self.gamma}")
        if self.gamma > self.gamma_bar:
            raise ConfigurationError(f"gamma {self.gamma} exceeds gamma_bar {self.gamma_bar}")
        if self.gamma_bar > self.theta:
            raise ConfigurationError(
                f"gamma_bar {self.gamma_bar} exceeds theta {self.theta}; the search would not "
                "stay theta-admissible"
            )
        if self.quota < 0:
            raise ConfigurationError(f"Learning quota must be non-negative, got {self.quota}")
        if self.d_max < 1:
            raise ConfigurationError(f"d_max must be at least 1, got {self.d_max}")
        if self.k is not None and self.k < 1:
            raise ConfigurationError(f"Segment length k must be at least 1, got {self.k}")
        if self.tie_seed is not None and self.tie_seed < 0:
            raise ConfigurationError(f"Tie-break seed must be non-negative, got {self.tie_seed}")
        return self

    @property
    def quota_is_finite(self) -> bool:
        return is_finite(self.quota)

    def evolve(self, **changes) -> "AlgoParams":
        return replace(self, **changes)
