"""
ebss/core.py

Black-box state-space interface and the integer cost arithmetic shared by
every search algorithm in the package.

Search code only touches a problem through `StateSpace`:
- init()          initial state
- is_goal(s)      goal test
- succ(s)         ordered (action, state) pairs
- cost(a)         non-negative integer action cost
- h(s)            non-negative integer heuristic value

Costs are plain Python ints restricted to the 63-bit range. `INFINITY` is a
sentinel strictly above every finite cost; arithmetic that would leave the
63-bit range raises `CostOverflowError` instead of wrapping.
"""

from __future__ import annotations

import time
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Real
from typing import Any, Final, Hashable, Optional, Sequence

Cost = int
State = Hashable
Action = Hashable

MAX_COST: Final[int] = (1 << 63) - 1
INFINITY: Final[int] = 1 << 63


class SearchError(RuntimeError):
    """Base class for failures raised by the search stack."""


class CostOverflowError(SearchError, OverflowError):
    """A cost computation left the 63-bit range."""


class SearchTimeout(SearchError):
    """The cooperative wall-clock limit of a search ran out."""


class StateLimitExceeded(SearchError):
    """An exhaustive routine met more states or paths than its guard allows."""


class InfinitePathCountError(SearchError):
    """A zero-cost cycle makes the set of bounded paths infinite."""


class IntegrityError(SearchError):
    """A result failed an independent cross-check."""


class CalibrationError(SearchError):
    """A generated benchmark family missed its calibrated expansion counts."""


class InstanceFormatError(ValueError):
    """A problem instance file has a malformed line."""

    def __init__(self, line_no: int, message: str) -> None:
        super().__init__(f"line {line_no}: {message}")
        self.line_no = line_no


class UnsolvableInstanceError(ValueError):
    """The instance provably has no path to a goal."""


def add_costs(a: Cost, b: Cost) -> Cost:
    """Add two costs; INFINITY absorbs, overflow raises."""
    if a >= INFINITY or b >= INFINITY:
        return INFINITY
    total = a + b
    if total > MAX_COST:
        raise CostOverflowError(f"cost overflow: {a} + {b} exceeds 63 bits")
    return total


def check_cost(value: int) -> Cost:
    """Validate a finite cost value."""
    if value < 0:
        raise ValueError(f"negative cost: {value}")
    if value > MAX_COST:
        raise CostOverflowError(f"cost {value} exceeds 63 bits")
    return int(value)


def discretize(raw: Real, resolution: int) -> Cost:
    """
    Scale a non-negative real cost by `resolution` and round to the nearest
    integer, ties away from zero.

    Floats are converted exactly (their binary value), so callers that want
    decimal-exact results should pass `Fraction`s.
    """
    if resolution < 1:
        raise ValueError(f"resolution must be a positive integer, got {resolution}")
    q = Fraction(raw) * int(resolution)
    if q < 0:
        raise ValueError(f"raw cost must be non-negative, got {raw}")
    rounded = int(q + Fraction(1, 2))
    if rounded > MAX_COST:
        raise CostOverflowError(f"discretize({raw}, {resolution}) exceeds 63 bits")
    return rounded


class StateSpace(ABC):
    """
    Black-box problem interface.

    `succ` must return the same ordered sequence for the same state on every
    call; expansion counts depend on it. h must be 0 on goal states.
    """

    # Integer cost units per raw cost unit.
    resolution: int = 1

    @abstractmethod
    def init(self) -> State:
        ...

    @abstractmethod
    def is_goal(self, state: State) -> bool:
        ...

    @abstractmethod
    def succ(self, state: State) -> Sequence[tuple[Action, State]]:
        ...

    @abstractmethod
    def cost(self, action: Action) -> Cost:
        ...

    @abstractmethod
    def h(self, state: State) -> Cost:
        ...

    def inverse(self, action: Action) -> Optional[Action]:
        """Action that undoes `action`, when the domain declares one."""
        return None

    def raw_cost(self, action: Action) -> Fraction:
        return Fraction(self.cost(action), self.resolution)

    def raw_h(self, state: State) -> Fraction:
        return Fraction(self.h(state), self.resolution)


class ExplicitSpace(StateSpace):
    """
    A StateSpace over an explicit adjacency table.

    Actions are edge indices; `edges[i] = (src, dst, cost)`. Successor order is
    edge insertion order.
    """

    def __init__(
        self,
        init_state: State,
        goals: Sequence[State],
        edges: Sequence[tuple[State, State, Cost]],
        heuristic: Optional[dict[State, Cost]] = None,
        names: Optional[dict[State, str]] = None,
    ) -> None:
        self._init = init_state
        self._goals = frozenset(goals)
        self._costs: list[Cost] = []
        self._edges: list[tuple[State, State, Cost]] = []
        adj: dict[State, list[tuple[int, State]]] = {init_state: []}
        for src, dst, c in edges:
            check_cost(c)
            idx = len(self._edges)
            self._edges.append((src, dst, c))
            self._costs.append(c)
            adj.setdefault(src, []).append((idx, dst))
            adj.setdefault(dst, [])
        for g in self._goals:
            adj.setdefault(g, [])
        self._adj = {s: tuple(v) for s, v in adj.items()}
        self._h = dict(heuristic or {})
        for g in self._goals:
            if self._h.get(g, 0) != 0:
                raise ValueError(f"goal state {g!r} must have h = 0")
        self.names = dict(names or {})

    @property
    def states(self) -> list[State]:
        return list(self._adj)

    @property
    def edges(self) -> list[tuple[State, State, Cost]]:
        return list(self._edges)

    @property
    def heuristic(self) -> dict[State, Cost]:
        return {s: self._h.get(s, 0) for s in self._adj}

    def init(self) -> State:
        return self._init

    def is_goal(self, state: State) -> bool:
        return state in self._goals

    def succ(self, state: State) -> Sequence[tuple[Action, State]]:
        return self._adj.get(state, ())

    def cost(self, action: Action) -> Cost:
        return self._costs[action]

    def h(self, state: State) -> Cost:
        return self._h.get(state, 0)

    def name(self, state: State) -> str:
        return self.names.get(state, str(state))


@dataclass(frozen=True)
class Path:
    """
    A search path from the initial state.

    transitions[i] = (state, action, next_state); step_costs[i] = cost(action).
    """

    start: State
    transitions: tuple[tuple[State, Action, State], ...] = ()
    step_costs: tuple[Cost, ...] = ()
    g: Cost = 0

    @property
    def end_state(self) -> State:
        if self.transitions:
            return self.transitions[-1][2]
        return self.start

    @property
    def actions(self) -> list[Action]:
        return [a for _, a, _ in self.transitions]

    def __len__(self) -> int:
        return len(self.transitions)

    def extend(self, action: Action, next_state: State, step_cost: Cost) -> "Path":
        return Path(
            start=self.start,
            transitions=self.transitions + ((self.end_state, action, next_state),),
            step_costs=self.step_costs + (step_cost,),
            g=add_costs(self.g, step_cost),
        )

    @classmethod
    def from_steps(
        cls,
        start: State,
        steps: Sequence[tuple[State, Action, State, Cost]],
    ) -> "Path":
        g = 0
        for *_, c in steps:
            g = add_costs(g, c)
        return cls(
            start=start,
            transitions=tuple((s, a, t) for s, a, t, _ in steps),
            step_costs=tuple(c for *_, c in steps),
            g=g,
        )


@dataclass(frozen=True)
class Solution:
    path: Path
    cost: Cost


def path_cost(path: Path) -> Cost:
    """Sum of the path's action costs."""
    total = 0
    for c in path.step_costs:
        total = add_costs(total, c)
    return total


def f_value(path: Path, space: StateSpace) -> Cost:
    """g(path) + h(end state)."""
    return add_costs(path.g, space.h(path.end_state))


def validate_solution(space: StateSpace, solution: Solution) -> Cost:
    """
    Replay a solution path against the domain and return its re-summed cost.

    Raises IntegrityError on an illegal transition, a wrong start or end, or a
    cost mismatch.
    """
    path = solution.path
    state = space.init()
    if path.start != state:
        raise IntegrityError("solution path does not start at the initial state")
    total = 0
    for i, (src, action, dst) in enumerate(path.transitions):
        if src != state:
            raise IntegrityError(f"transition {i} starts at {src!r}, expected {state!r}")
        if (action, dst) not in list(space.succ(src)):
            raise IntegrityError(f"transition {i} ({action!r} -> {dst!r}) is not a successor")
        total = add_costs(total, space.cost(action))
        state = dst
    if not space.is_goal(state):
        raise IntegrityError("solution path does not end in a goal state")
    if total != solution.cost or total != path.g:
        raise IntegrityError(
            f"replayed cost {total} differs from reported {solution.cost} (g={path.g})"
        )
    return total


def solution_raw_cost(space: StateSpace, solution: Solution) -> Fraction:
    """Exact raw (undiscretized) cost of a solution path."""
    return sum((space.raw_cost(a) for a in solution.path.actions), Fraction(0))


@dataclass
class SearchStats:
    """
    Instrumentation owned by one search invocation.

    expansions counts succ calls; generations counts returned transitions plus
    one per init call; heuristic_evals counts h calls.
    """

    expansions: int = 0
    generations: int = 0
    heuristic_evals: int = 0
    iteration_log: list[Any] = field(default_factory=list)
    wall_time: float = 0.0

    def add(self, expanded: int, generated: int, heuristic_evals: int) -> None:
        self.expansions += expanded
        self.generations += generated
        self.heuristic_evals += heuristic_evals

    def merge(self, other: "SearchStats") -> None:
        self.add(other.expansions, other.generations, other.heuristic_evals)
        self.iteration_log.extend(other.iteration_log)
        self.wall_time += other.wall_time


@dataclass
class SearchOutcome:
    """Result of a complete search: an optimal solution, or None if unsolvable."""

    solution: Optional[Solution]
    stats: SearchStats

    @property
    def solved(self) -> bool:
        return self.solution is not None

    @property
    def cost(self) -> Optional[Cost]:
        return self.solution.cost if self.solution is not None else None


class Deadline:
    """Cooperative wall-clock limit, polled by the search loops."""

    def __init__(self, seconds: Optional[float]) -> None:
        self.seconds = seconds
        self._expires = None if seconds is None else time.monotonic() + float(seconds)

    def expired(self) -> bool:
        return self._expires is not None and time.monotonic() >= self._expires

    def check(self) -> None:
        if self.expired():
            raise SearchTimeout(f"time limit of {self.seconds}s exceeded")


# Polling interval (expansions) for Deadline checks in hot loops.
DEADLINE_POLL: Final[int] = 4096
