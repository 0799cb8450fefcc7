"""
ebss/bounded.py

Bounded searches: find a solution of cost <= f_max using at most n_max
expansions, or report that the budget ran out.

Engines:
- DFBnBEngine     depth-first branch and bound (tree search, no duplicate detection)
- DijkstraEngine  uniform-cost graph search with a closed set
- CachedEngine    wraps either engine and serves repeated queries from the last result

Contract shared by both engines, for any admissible h:
1. expanded_nodes <= n_max
2. is_incomplete  => expanded_nodes == n_max and no solution is reported
3. completed and f_max >= C*  => an optimal solution is returned
4. completed and f_max <  C*  => no solution is returned

n_max=None means unbounded.
"""

from __future__ import annotations

import heapq
import logging
from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from typing import Any, Optional

from ebss.core import (
    DEADLINE_POLL,
    INFINITY,
    MAX_COST,
    CostOverflowError,
    Deadline,
    InfinitePathCountError,
    Path,
    Solution,
    StateSpace,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class BoundedSearchResult:
    """
    Outcome of one bounded search.

    max_f_expanded and min_f_pruned bracket the cost window this result is
    valid for: a completed unsolved search at f_max behaves identically for
    every f in [f_max, min_f_pruned). INFINITY in min_f_pruned means nothing
    was pruned by the f-bound.
    """

    solution_found: bool
    is_incomplete: bool
    expanded_nodes: int
    solution: Optional[Solution] = None
    max_f_expanded: int = 0
    min_f_pruned: int = INFINITY
    generated_nodes: int = field(default=0, compare=False)
    heuristic_evals: int = field(default=0, compare=False)

    @property
    def completed(self) -> bool:
        return not self.is_incomplete

    @property
    def exhausted(self) -> bool:
        """Completed, unsolved, and nothing pruned: no goal is reachable."""
        return not self.is_incomplete and not self.solution_found and self.min_f_pruned >= INFINITY


def _budget_left(expanded: int, n_max: Optional[int]) -> bool:
    return n_max is None or expanded < n_max


def _check_limit(n_max: Optional[int]) -> None:
    if n_max is not None and n_max < 0:
        raise ValueError(f"n_max must be >= 0 or None, got {n_max}")


class BoundedSearchEngine(ABC):
    """A cost- and expansion-bounded search routine."""

    name = "bounded"

    def __init__(self, deadline: Optional[Deadline] = None) -> None:
        self.deadline = deadline

    @abstractmethod
    def run(self, space: StateSpace, f_max: int, n_max: Optional[int] = None) -> BoundedSearchResult:
        ...


class DFBnBEngine(BoundedSearchEngine):
    """
    Depth-first branch and bound.

    Paths with f > f_max are pruned (and recorded in min_f_pruned); paths with
    f >= incumbent cost are pruned once a goal has been reached. Goals are
    detected when generated and never expanded. When the domain declares an
    inverse, a move that undoes the previous one is skipped.

    first_solution=True returns at the first goal found within the bound,
    which turns a run into one IDA* iteration.

    check_zero_cycles raises InfinitePathCountError when the current path
    revisits a state at the same g.
    """

    name = "dfbnb"

    def __init__(
        self,
        deadline: Optional[Deadline] = None,
        first_solution: bool = False,
        check_zero_cycles: bool = False,
    ) -> None:
        super().__init__(deadline)
        self.first_solution = first_solution
        self.check_zero_cycles = check_zero_cycles

    def run(self, space: StateSpace, f_max: int, n_max: Optional[int] = None) -> BoundedSearchResult:
        _check_limit(n_max)
        deadline = self.deadline
        cost = space.cost
        h = space.h
        is_goal = space.is_goal
        succ = space.succ
        inverse = space.inverse

        root = space.init()
        generated = 1
        evals = 1
        f_root = h(root)
        if is_goal(root):
            return BoundedSearchResult(
                solution_found=True,
                is_incomplete=False,
                expanded_nodes=0,
                solution=Solution(Path(start=root), 0),
                generated_nodes=generated,
                heuristic_evals=evals,
            )
        if f_root > f_max:
            return BoundedSearchResult(
                solution_found=False,
                is_incomplete=False,
                expanded_nodes=0,
                min_f_pruned=f_root,
                generated_nodes=generated,
                heuristic_evals=evals,
            )
        if not _budget_left(0, n_max):
            return BoundedSearchResult(
                solution_found=False,
                is_incomplete=True,
                expanded_nodes=0,
                generated_nodes=generated,
                heuristic_evals=evals,
            )

        expanded = 1
        max_f_exp = f_root
        min_pruned = INFINITY
        incumbent = INFINITY
        best_steps: Optional[list[tuple[Any, Any, Any, int]]] = None
        children = succ(root)
        generated += len(children)
        on_path: dict[Any, int] = {root: 0} if self.check_zero_cycles else {}

        # frame: [state, g, in_action, step_cost, children, next_index, forbidden_action]
        stack: list[list[Any]] = [[root, 0, None, 0, children, 0, None]]

        while stack:
            frame = stack[-1]
            children = frame[4]
            idx = frame[5]
            if idx >= len(children):
                stack.pop()
                if on_path and on_path.get(frame[0]) == frame[1]:
                    del on_path[frame[0]]
                continue
            frame[5] = idx + 1
            action, child = children[idx]
            forbidden = frame[6]
            if forbidden is not None and action == forbidden:
                continue

            step = cost(action)
            g = frame[1] + step
            h_child = h(child)
            evals += 1
            f = g + h_child
            if f > MAX_COST:
                raise CostOverflowError(f"f-value {f} exceeds 63 bits")
            if f > f_max:
                if f < min_pruned:
                    min_pruned = f
                continue
            if f >= incumbent:
                continue
            if is_goal(child):
                incumbent = g
                best_steps = self._steps(stack) + [(frame[0], action, child, step)]
                if self.first_solution:
                    break
                continue

            if self.check_zero_cycles and on_path.get(child) == g:
                raise InfinitePathCountError(f"zero-cost cycle through {child!r}")

            if not _budget_left(expanded, n_max):
                return BoundedSearchResult(
                    solution_found=False,
                    is_incomplete=True,
                    expanded_nodes=expanded,
                    max_f_expanded=max_f_exp,
                    min_f_pruned=min_pruned,
                    generated_nodes=generated,
                    heuristic_evals=evals,
                )
            expanded += 1
            if deadline is not None and expanded % DEADLINE_POLL == 0:
                deadline.check()
            if f > max_f_exp:
                max_f_exp = f
            grandchildren = succ(child)
            generated += len(grandchildren)
            if self.check_zero_cycles and child not in on_path:
                on_path[child] = g
            stack.append([child, g, action, step, grandchildren, 0, inverse(action)])

        solution = None
        if best_steps is not None:
            solution = Solution(Path.from_steps(root, best_steps), incumbent)
        return BoundedSearchResult(
            solution_found=solution is not None,
            is_incomplete=False,
            expanded_nodes=expanded,
            solution=solution,
            max_f_expanded=max_f_exp,
            min_f_pruned=min_pruned,
            generated_nodes=generated,
            heuristic_evals=evals,
        )

    @staticmethod
    def _steps(stack: list[list[Any]]) -> list[tuple[Any, Any, Any, int]]:
        return [
            (stack[i - 1][0], stack[i][2], stack[i][0], stack[i][3])
            for i in range(1, len(stack))
        ]


class DijkstraEngine(BoundedSearchEngine):
    """
    Uniform-cost graph search ordered by g, ties broken last-in first-out.

    A generated path to s with g + h(s) > f_max is pruned. Goals are tested
    when popped, so the first goal popped is optimal among unpruned paths.
    """

    name = "dijkstra"

    def run(self, space: StateSpace, f_max: int, n_max: Optional[int] = None) -> BoundedSearchResult:
        _check_limit(n_max)
        deadline = self.deadline
        cost = space.cost
        h = space.h
        is_goal = space.is_goal
        succ = space.succ

        root = space.init()
        generated = 1
        evals = 1
        h_root = h(root)
        if h_root > f_max and not is_goal(root):
            return BoundedSearchResult(
                solution_found=False,
                is_incomplete=False,
                expanded_nodes=0,
                min_f_pruned=h_root,
                generated_nodes=generated,
                heuristic_evals=evals,
            )

        best_g: dict[Any, int] = {root: 0}
        h_of: dict[Any, int] = {root: h_root}
        parent: dict[Any, Optional[tuple[Any, Any, int]]] = {root: None}
        closed: set[Any] = set()
        seq = 0
        heap: list[tuple[int, int, Any]] = [(0, 0, root)]
        expanded = 0
        max_f_exp = 0
        min_pruned = INFINITY

        while heap:
            g, _, state = heapq.heappop(heap)
            if state in closed or g > best_g[state]:
                continue
            if is_goal(state):
                path = self._reconstruct(root, state, parent)
                return BoundedSearchResult(
                    solution_found=True,
                    is_incomplete=False,
                    expanded_nodes=expanded,
                    solution=Solution(path, g),
                    max_f_expanded=max_f_exp,
                    min_f_pruned=min_pruned,
                    generated_nodes=generated,
                    heuristic_evals=evals,
                )
            if not _budget_left(expanded, n_max):
                return BoundedSearchResult(
                    solution_found=False,
                    is_incomplete=True,
                    expanded_nodes=expanded,
                    max_f_expanded=max_f_exp,
                    min_f_pruned=min_pruned,
                    generated_nodes=generated,
                    heuristic_evals=evals,
                )
            closed.add(state)
            expanded += 1
            if deadline is not None and expanded % DEADLINE_POLL == 0:
                deadline.check()
            f = g + h_of[state]
            if f > max_f_exp:
                max_f_exp = f
            children = succ(state)
            generated += len(children)
            for action, child in children:
                if child in closed:
                    continue
                step = cost(action)
                g2 = g + step
                if g2 >= best_g.get(child, INFINITY):
                    continue
                h_child = h_of.get(child)
                if h_child is None:
                    h_child = h(child)
                    evals += 1
                    h_of[child] = h_child
                f2 = g2 + h_child
                if f2 > MAX_COST:
                    raise CostOverflowError(f"f-value {f2} exceeds 63 bits")
                if f2 > f_max:
                    if f2 < min_pruned:
                        min_pruned = f2
                    continue
                best_g[child] = g2
                parent[child] = (state, action, step)
                seq += 1
                heapq.heappush(heap, (g2, -seq, child))

        return BoundedSearchResult(
            solution_found=False,
            is_incomplete=False,
            expanded_nodes=expanded,
            max_f_expanded=max_f_exp,
            min_f_pruned=min_pruned,
            generated_nodes=generated,
            heuristic_evals=evals,
        )

    @staticmethod
    def _reconstruct(root: Any, goal: Any, parent: dict[Any, Optional[tuple[Any, Any, int]]]) -> Path:
        steps = []
        state = goal
        while state != root:
            prev, action, step = parent[state]
            steps.append((prev, action, state, step))
            state = prev
        steps.reverse()
        return Path.from_steps(root, steps)


@dataclass
class CacheCounters:
    hits: int = 0
    misses: int = 0


class CachedEngine(BoundedSearchEngine):
    """
    Single-entry result cache in front of a bounded engine.

    A query (f, n) is served from the last result (f0, n0, r) when
      - f == f0, r completed, and n is None or n >= r.expanded_nodes;
      - f == f0, r incomplete, and n == n0;
      - r completed without a solution, f0 <= f < r.min_f_pruned, and n is
        None or n >= r.expanded_nodes.
    Anything else runs the wrapped engine and replaces the entry.

    `last_hit` tells the caller whether the most recent run was served from
    the cache, so hits can be left out of expansion totals.
    """

    def __init__(self, engine: BoundedSearchEngine) -> None:
        super().__init__(engine.deadline)
        self.engine = engine
        self.name = engine.name
        self.counters = CacheCounters()
        self.last_hit = False
        self._space: Optional[StateSpace] = None
        self._entry: Optional[tuple[int, Optional[int], BoundedSearchResult]] = None

    def clear(self) -> None:
        self._space = None
        self._entry = None

    def lookup(self, space: StateSpace, f_max: int, n_max: Optional[int]) -> Optional[BoundedSearchResult]:
        if self._entry is None or self._space is not space:
            return None
        f0, n0, cached = self._entry
        fits_budget = n_max is None or n_max >= cached.expanded_nodes
        if cached.completed:
            if f_max == f0 and fits_budget:
                return cached
            if not cached.solution_found and f0 <= f_max < cached.min_f_pruned and fits_budget:
                return cached
            return None
        if f_max == f0 and n_max == n0:
            return cached
        return None

    def run(self, space: StateSpace, f_max: int, n_max: Optional[int] = None) -> BoundedSearchResult:
        hit = self.lookup(space, f_max, n_max)
        if hit is not None:
            self.counters.hits += 1
            self.last_hit = True
            logger.debug("cache hit f_max=%s n_max=%s", f_max, n_max)
            return hit
        self.counters.misses += 1
        self.last_hit = False
        result = self.engine.run(space, f_max, n_max)
        self._space = space
        self._entry = (f_max, n_max, result)
        return result


def make_engine(name: str, deadline: Optional[Deadline] = None, debug: bool = False) -> BoundedSearchEngine:
    """Engine factory keyed by the names used on the command line."""
    key = name.lower()
    if key in ("dfbnb", "tree", "ebts"):
        return DFBnBEngine(deadline=deadline, check_zero_cycles=debug)
    if key in ("dijkstra", "graph", "ebgs"):
        return DijkstraEngine(deadline=deadline)
    raise ValueError(f"unknown bounded engine: {name!r}")
