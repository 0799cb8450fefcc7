from __future__ import annotations

import os
from typing import Optional

import pytest

from ebss.bounded import BoundedSearchEngine, BoundedSearchResult
from ebss.core import ExplicitSpace, StateSpace


def make_g1() -> ExplicitSpace:
    """
    A -> B (1), A -> C (3), B -> G (3), C -> G (1); h = A:2 B:3 C:1 G:0.
    C* = 4 via either branch; B is listed before C.
    """
    return ExplicitSpace(
        "A",
        ["G"],
        [("A", "B", 1), ("A", "C", 3), ("B", "G", 3), ("C", "G", 1)],
        {"A": 2, "B": 3, "C": 1, "G": 0},
    )


def make_g2() -> ExplicitSpace:
    """Diamond A -> {B, C} -> D -> G, unit costs, h = 0. Two paths reach D."""
    return ExplicitSpace(
        "A",
        ["G"],
        [("A", "B", 1), ("A", "C", 1), ("B", "D", 1), ("C", "D", 1), ("D", "G", 1)],
    )


def make_chain(n: int) -> ExplicitSpace:
    """0 -> 1 -> ... -> n, unit costs, h = 0, goal n."""
    return ExplicitSpace(0, [n], [(i, i + 1, 1) for i in range(n)])


@pytest.fixture
def g1() -> ExplicitSpace:
    return make_g1()


@pytest.fixture
def g2() -> ExplicitSpace:
    return make_g2()


@pytest.fixture
def chain4() -> ExplicitSpace:
    return make_chain(4)


class ScriptedEngine(BoundedSearchEngine):
    """
    Bounded engine whose answer per f_max is a fixture.

    script[f] = ("done", expanded) | ("incomplete",) | ("solved", cost)
    Unlisted f-values behave like the largest listed f below them.
    """

    name = "scripted"

    def __init__(self, script: dict[int, tuple]) -> None:
        super().__init__()
        self.script = dict(script)
        self.calls: list[tuple[int, Optional[int]]] = []

    def _entry(self, f_max: int) -> tuple:
        if f_max in self.script:
            return self.script[f_max]
        below = [f for f in self.script if f <= f_max]
        return self.script[max(below)]

    def run(self, space: StateSpace, f_max: int, n_max: Optional[int] = None) -> BoundedSearchResult:
        from ebss.core import Path, Solution

        self.calls.append((f_max, n_max))
        kind, *rest = self._entry(f_max)
        if kind == "done":
            expanded = rest[0]
            if n_max is not None and expanded > n_max:
                return BoundedSearchResult(False, True, n_max)
            return BoundedSearchResult(False, False, expanded, min_f_pruned=f_max + 1)
        if kind == "incomplete":
            if n_max is None:
                raise AssertionError(f"scripted f={f_max} cannot complete without a node limit")
            return BoundedSearchResult(False, True, n_max)
        cost = rest[0]
        return BoundedSearchResult(True, False, 1, solution=Solution(Path(start="s"), cost))


@pytest.fixture
def scripted():
    return ScriptedEngine


def pytest_collection_modifyitems(config, items):
    if os.getenv("EBSS_RUN_SLOW", "").strip().lower() in {"1", "true", "yes", "y"}:
        return
    skip = pytest.mark.skip(reason="slow acceptance check; set EBSS_RUN_SLOW=1")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
