"""
ebss/driver.py

Exponential-binary search over f-bounds (EBTS / EBGS).

Each main-loop iteration runs the bounded engine at the current f-bound
without a node limit. If it fails, the next f-bound is chosen so that the
following iteration expands between ceil(c1 * n) and ceil(c2 * n) nodes,
where n is what the failed iteration expanded. Candidate bounds are tried
with a node-limited bounded search: an exponential phase grows the bound by
doubling increments until a trial is too expensive, then a binary phase
narrows [f_low, f_high] to one integer.

With the DFBnB engine this is EBTS; with the Dijkstra engine it is EBGS.
"""

from __future__ import annotations

import logging
import time
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Optional, Union

from ebss.bounded import BoundedSearchEngine, BoundedSearchResult, CachedEngine
from ebss.core import (
    Cost,
    Deadline,
    SearchOutcome,
    SearchStats,
    Solution,
    StateSpace,
    add_costs,
)

logger = logging.getLogger(__name__)

Number = Union[int, str, Fraction]


def ceil_mul(c: Fraction, n: int) -> int:
    """ceil(c * n) in exact arithmetic."""
    return -((-c.numerator * n) // c.denominator)


@dataclass(frozen=True)
class EBParams:
    """
    Growth window and initial increment.

    c1 and c2 are exact rationals with 1 < c1 <= c2; delta0 is a positive
    integer in the same units as the discretized costs.
    """

    c1: Fraction
    c2: Fraction
    delta0: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "c1", Fraction(self.c1))
        object.__setattr__(self, "c2", Fraction(self.c2))
        object.__setattr__(self, "delta0", int(self.delta0))
        if not (1 < self.c1 <= self.c2):
            raise ValueError(f"need 1 < c1 <= c2, got c1={self.c1} c2={self.c2}")
        if self.delta0 < 1:
            raise ValueError(f"delta0 must be a positive integer, got {self.delta0}")

    @classmethod
    def parse(cls, c1: Number, c2: Number, delta0: Number) -> "EBParams":
        return cls(Fraction(str(c1)), Fraction(str(c2)), int(Fraction(str(delta0))))

    def window(self, n: int) -> tuple[int, int]:
        return ceil_mul(self.c1, n), ceil_mul(self.c2, n)


class Phase(str, Enum):
    MAIN = "main"
    EXPONENTIAL = "exponential"
    BINARY = "binary"


class BoundTag(str, Enum):
    TOO_LOW = "too_low"
    TOO_HIGH = "too_high"
    GOOD = "good"
    SOLVED = "solved"
    # Completed with nothing pruned and no solution: no goal is reachable.
    EXHAUSTED = "exhausted"


@dataclass(frozen=True)
class BoundStatus:
    tag: BoundTag
    solution: Optional[Solution] = None

    def __post_init__(self) -> None:
        if (self.tag is BoundTag.SOLVED) != (self.solution is not None):
            raise ValueError("a solution is carried exactly by SOLVED statuses")


@dataclass(frozen=True)
class NextBound:
    """Next main-loop f-bound, or the solution a trial ran into."""

    f_new: Cost
    solution: Optional[Solution] = None


MAIN_SOLVED = BoundTag.SOLVED.value
MAIN_FAILED = "failed"


@dataclass(frozen=True)
class IterationLog:
    """
    One bounded-search invocation made by the driver.

    round numbers main-loop iterations from 0; the trials that choose the
    bound for round r + 1 carry round r.

    status is a BoundTag value for trials. Main-loop searches run without a
    node limit and log MAIN_SOLVED or MAIN_FAILED instead.
    """

    round: int
    phase: Phase
    f_max: Cost
    n_min: Optional[int]
    n_max: Optional[int]
    expanded_nodes: int
    status: str
    cache_hit: bool


def classify(result: BoundedSearchResult, n_min: int) -> BoundStatus:
    if result.solution_found:
        return BoundStatus(BoundTag.SOLVED, result.solution)
    if result.exhausted:
        return BoundStatus(BoundTag.EXHAUSTED)
    if result.completed and result.expanded_nodes < n_min:
        return BoundStatus(BoundTag.TOO_LOW)
    if result.is_incomplete:
        return BoundStatus(BoundTag.TOO_HIGH)
    return BoundStatus(BoundTag.GOOD)


class EBSSS:
    """
    Exponential-binary state-space search driver bound to one problem.

    The engine is wrapped in a CachedEngine unless it already is one.
    """

    def __init__(
        self,
        space: StateSpace,
        engine: BoundedSearchEngine,
        params: EBParams,
        deadline: Optional[Deadline] = None,
    ) -> None:
        self.space = space
        self.engine = engine if isinstance(engine, CachedEngine) else CachedEngine(engine)
        if deadline is not None:
            self.engine.engine.deadline = deadline
        self.params = params
        self.stats = SearchStats()
        self._round = 0

    def _bounded(
        self,
        f_max: Cost,
        n_min: Optional[int],
        n_max: Optional[int],
        phase: Phase,
    ) -> BoundedSearchResult:
        result = self.engine.run(self.space, f_max, n_max)
        hit = self.engine.last_hit
        if not hit:
            self.stats.add(result.expanded_nodes, result.generated_nodes, result.heuristic_evals)
        if phase is Phase.MAIN:
            status = MAIN_SOLVED if result.solution_found else MAIN_FAILED
        else:
            status = classify(result, n_min or 0).tag.value
        self.stats.iteration_log.append(
            IterationLog(
                round=self._round,
                phase=phase,
                f_max=f_max,
                n_min=n_min,
                n_max=n_max,
                expanded_nodes=result.expanded_nodes,
                status=status,
                cache_hit=hit,
            )
        )
        logger.debug(
            "%s f=%s n=[%s, %s] expanded=%s %s%s",
            phase.value, f_max, n_min, n_max, result.expanded_nodes, status,
            " (cached)" if hit else "",
        )
        return result

    def test_f_bound(
        self,
        f_max: Cost,
        n_min: int,
        n_max: int,
        phase: Phase = Phase.EXPONENTIAL,
    ) -> BoundStatus:
        """Classify f_max by running the bounded engine with node limit n_max."""
        result = self._bounded(f_max, n_min, n_max, phase)
        return classify(result, n_min)

    def next_f_bound(self, f_old: Cost, delta: int, n_min: int, n_max: int) -> NextBound:
        """
        Choose the next f-bound above f_old.

        Returns f_new with f_old < f_new, or the solution one of the trials
        found along the way.
        """
        f_low = add_costs(f_old, 1)
        f_high = add_costs(f_old, delta)
        while True:
            status = self.test_f_bound(f_high, n_min, n_max, Phase.EXPONENTIAL)
            if status.tag is BoundTag.SOLVED:
                return NextBound(f_high, status.solution)
            if status.tag in (BoundTag.GOOD, BoundTag.EXHAUSTED):
                return NextBound(f_high)
            if status.tag is BoundTag.TOO_HIGH:
                break
            delta *= 2
            f_low = add_costs(f_high, 1)
            f_high = add_costs(f_old, delta)

        while f_low != f_high:
            f_mid = (f_low + f_high) // 2
            status = self.test_f_bound(f_mid, n_min, n_max, Phase.BINARY)
            if status.tag is BoundTag.TOO_LOW:
                f_low = f_mid + 1
            elif status.tag is BoundTag.TOO_HIGH:
                f_high = f_mid
            elif status.tag is BoundTag.SOLVED:
                return NextBound(f_mid, status.solution)
            else:
                return NextBound(f_mid)
        return NextBound(f_low)

    def search(self) -> SearchOutcome:
        """
        Run to completion. Returns an optimal solution, or no solution when
        the space is proven to have no reachable goal.
        """
        started = time.perf_counter()
        self.stats = SearchStats()
        self._round = 0
        self.engine.clear()
        try:
            solution = self._main_loop()
        finally:
            self.stats.wall_time = time.perf_counter() - started
        return SearchOutcome(solution=solution, stats=self.stats)

    def _main_loop(self) -> Optional[Solution]:
        space = self.space
        root = space.init()
        f_max = space.h(root)
        self.stats.add(0, 1, 1)
        while True:
            result = self._bounded(f_max, None, None, Phase.MAIN)
            if result.solution_found:
                logger.info(
                    "solved at f=%s after %s rounds, %s expansions",
                    f_max, self._round + 1, self.stats.expansions,
                )
                return result.solution
            if result.exhausted:
                logger.info("no reachable goal (f=%s)", f_max)
                return None
            n = max(result.expanded_nodes, 1)
            n_min, n_max = self.params.window(n)
            nxt = self.next_f_bound(f_max, self.params.delta0, n_min, n_max)
            if nxt.solution is not None:
                logger.info("solved by a bound trial at f=%s", nxt.f_new)
                return nxt.solution
            f_max = nxt.f_new
            self._round += 1


def ebsss_search(
    space: StateSpace,
    engine: BoundedSearchEngine,
    params: EBParams,
    deadline: Optional[Deadline] = None,
) -> SearchOutcome:
    return EBSSS(space, engine, params, deadline=deadline).search()
