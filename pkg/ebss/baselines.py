"""
ebss/baselines.py

Reference algorithms and exact ground truth for small spaces:
- astar             best-first search with reopening (integer or float-tolerance mode)
- idastar           iterative deepening on f
- oracle            a single bounded search at the known optimal cost
- brute_force_cstar exhaustive uniform-cost search, no heuristic
- goal_distances    exact h* for every state of an explicit space
- enumerate_promising  counts of promising paths / states at C*
"""

from __future__ import annotations

import heapq
import logging
import time
from dataclasses import dataclass
from typing import Any, Callable, Optional

from ebss.bounded import BoundedSearchEngine, DFBnBEngine
from ebss.core import (
    DEADLINE_POLL,
    INFINITY,
    MAX_COST,
    Cost,
    CostOverflowError,
    Deadline,
    InfinitePathCountError,
    IntegrityError,
    Path,
    SearchOutcome,
    SearchStats,
    Solution,
    StateLimitExceeded,
    StateSpace,
)
from ebss.driver import MAIN_FAILED, MAIN_SOLVED, IterationLog, Phase

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FloatTolerance:
    """Float comparison mode for A*: g-values within epsilon count as equal."""

    epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")


def _reconstruct(root: Any, goal: Any, parent: dict[Any, Optional[tuple[Any, Any, int]]]) -> Path:
    steps = []
    state = goal
    while parent[state] is not None:
        prev, action, step = parent[state]
        steps.append((prev, action, state, step))
        state = prev
    steps.reverse()
    return Path.from_steps(root, steps)


def astar(
    space: StateSpace,
    tolerance: Optional[FloatTolerance] = None,
    deadline: Optional[Deadline] = None,
) -> SearchOutcome:
    """
    A* with reopening.

    Open is ordered by f, ties by higher g, then last-in first-out. A state is
    reopened when a strictly cheaper path to it is found. Goals are tested on
    pop; expansions count states popped and expanded.

    With a FloatTolerance, g and h are taken from raw_cost / raw_h as floats
    and an improvement must exceed epsilon. The returned solution still
    carries the integer path cost.
    """
    started = time.perf_counter()
    stats = SearchStats()
    succ = space.succ
    is_goal = space.is_goal
    if tolerance is None:
        step_cost: Callable[[Any], Any] = space.cost
        heuristic: Callable[[Any], Any] = space.h
        eps = 0
    else:
        step_cost = lambda a: float(space.raw_cost(a))  # noqa: E731
        heuristic = lambda s: float(space.raw_h(s))  # noqa: E731
        eps = tolerance.epsilon

    root = space.init()
    generated = 1
    evals = 1
    h_of: dict[Any, Any] = {root: heuristic(root)}
    best_g: dict[Any, Any] = {root: 0}
    parent: dict[Any, Optional[tuple[Any, Any, int]]] = {root: None}
    seq = 0
    heap: list[tuple[Any, Any, int, Any]] = [(h_of[root], 0, 0, root)]
    expanded = 0
    solution = None

    try:
        while heap:
            f, neg_g, _, state = heapq.heappop(heap)
            g = -neg_g
            if g > best_g[state]:
                continue
            if is_goal(state):
                path = _reconstruct(root, state, parent)
                solution = Solution(path, path.g)
                break
            expanded += 1
            if deadline is not None and expanded % DEADLINE_POLL == 0:
                deadline.check()
            children = succ(state)
            generated += len(children)
            for action, child in children:
                g2 = g + step_cost(action)
                old = best_g.get(child)
                if old is not None and not g2 < old - eps:
                    continue
                h_child = h_of.get(child)
                if h_child is None:
                    h_child = heuristic(child)
                    evals += 1
                    h_of[child] = h_child
                f2 = g2 + h_child
                if tolerance is None and f2 > MAX_COST:
                    raise CostOverflowError(f"f-value {f2} exceeds 63 bits")
                best_g[child] = g2
                parent[child] = (state, action, space.cost(action))
                seq += 1
                heapq.heappush(heap, (f2, -g2, -seq, child))
    finally:
        stats.add(expanded, generated, evals)
        stats.wall_time = time.perf_counter() - started

    logger.debug("astar expanded=%s solved=%s", expanded, solution is not None)
    return SearchOutcome(solution=solution, stats=stats)


def idastar(space: StateSpace, deadline: Optional[Deadline] = None) -> SearchOutcome:
    """
    IDA*: depth-first rounds with bound h(init), then each round's minimum
    pruned f. A round stops at the first goal reached within its bound.
    Reports no solution when a round completes with nothing pruned.
    """
    started = time.perf_counter()
    stats = SearchStats()
    engine = DFBnBEngine(deadline=deadline, first_solution=True)
    bound = space.h(space.init())
    stats.add(0, 1, 1)
    solution = None
    round_no = 0
    try:
        while True:
            result = engine.run(space, bound)
            stats.add(result.expanded_nodes, result.generated_nodes, result.heuristic_evals)
            stats.iteration_log.append(
                IterationLog(
                    round=round_no,
                    phase=Phase.MAIN,
                    f_max=bound,
                    n_min=None,
                    n_max=None,
                    expanded_nodes=result.expanded_nodes,
                    status=MAIN_SOLVED if result.solution_found else MAIN_FAILED,
                    cache_hit=False,
                )
            )
            if result.solution_found:
                solution = result.solution
                break
            if result.min_f_pruned >= INFINITY:
                break
            bound = result.min_f_pruned
            round_no += 1
    finally:
        stats.wall_time = time.perf_counter() - started
    return SearchOutcome(solution=solution, stats=stats)


def oracle(space: StateSpace, engine: BoundedSearchEngine, c_star: Cost) -> SearchOutcome:
    """
    One unlimited bounded search at f_max = c_star.

    Raises IntegrityError if that search does not return a solution of cost
    exactly c_star.
    """
    started = time.perf_counter()
    result = engine.run(space, c_star, None)
    stats = SearchStats()
    stats.add(result.expanded_nodes, result.generated_nodes, result.heuristic_evals)
    stats.wall_time = time.perf_counter() - started
    if not result.solution_found or result.solution.cost != c_star:
        found = result.solution.cost if result.solution is not None else None
        raise IntegrityError(f"oracle at C*={c_star} returned cost {found}")
    return SearchOutcome(solution=result.solution, stats=stats)


def brute_force_cstar(space: StateSpace, max_states: int = 1_000_000) -> Cost:
    """
    Optimal cost by uniform-cost search ignoring h; INFINITY if no goal is
    reachable. Raises StateLimitExceeded past max_states distinct states.
    """
    root = space.init()
    best: dict[Any, int] = {root: 0}
    done: set[Any] = set()
    counter = 0
    heap = [(0, counter, root)]
    while heap:
        g, _, state = heapq.heappop(heap)
        if state in done:
            continue
        if space.is_goal(state):
            return g
        done.add(state)
        for action, child in space.succ(state):
            g2 = g + space.cost(action)
            if g2 < best.get(child, INFINITY):
                if child not in best and len(best) >= max_states:
                    raise StateLimitExceeded(f"more than {max_states} states reachable")
                best[child] = g2
                counter += 1
                heapq.heappush(heap, (g2, counter, child))
    return INFINITY


def reachable_states(space: StateSpace, max_states: int = 1_000_000) -> list[Any]:
    """All states reachable from init, in breadth-first order."""
    root = space.init()
    seen = {root}
    order = [root]
    i = 0
    while i < len(order):
        state = order[i]
        i += 1
        for _, child in space.succ(state):
            if child not in seen:
                if len(seen) >= max_states:
                    raise StateLimitExceeded(f"more than {max_states} states reachable")
                seen.add(child)
                order.append(child)
    return order


def goal_distances(space: StateSpace, max_states: int = 1_000_000) -> dict[Any, Cost]:
    """
    Exact h*(s) for every reachable state (INFINITY for dead ends), by a
    multi-source Dijkstra from the goals over reversed edges.
    """
    states = reachable_states(space, max_states)
    reverse: dict[Any, list[tuple[Any, int]]] = {s: [] for s in states}
    for s in states:
        for action, child in space.succ(s):
            reverse[child].append((s, space.cost(action)))
    dist = {s: INFINITY for s in states}
    heap = []
    for counter, s in enumerate(states):
        if space.is_goal(s):
            dist[s] = 0
            heap.append((0, counter, s))
    heapq.heapify(heap)
    counter = len(states)
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        for prev, c in reverse[s]:
            d2 = d + c
            if d2 < dist[prev]:
                dist[prev] = d2
                counter += 1
                heapq.heappush(heap, (d2, counter, prev))
    return dist


def start_distances(space: StateSpace, max_states: int = 1_000_000) -> dict[Any, Cost]:
    """Exact g*(s) from init for every reachable state."""
    states = reachable_states(space, max_states)
    root = space.init()
    dist = {s: INFINITY for s in states}
    dist[root] = 0
    heap = [(0, 0, root)]
    counter = 0
    while heap:
        d, _, s = heapq.heappop(heap)
        if d > dist[s]:
            continue
        for action, child in space.succ(s):
            d2 = d + space.cost(action)
            if d2 < dist[child]:
                dist[child] = d2
                counter += 1
                heapq.heappush(heap, (d2, counter, child))
    return dist


def is_admissible(space: StateSpace, max_states: int = 1_000_000) -> bool:
    hstar = goal_distances(space, max_states)
    return all(space.h(s) <= d for s, d in hstar.items())


def is_consistent(space: StateSpace, max_states: int = 1_000_000) -> bool:
    for s in reachable_states(space, max_states):
        hs = space.h(s)
        for action, child in space.succ(s):
            if hs > space.cost(action) + space.h(child):
                return False
    return True


@dataclass(frozen=True)
class PromisingCounts:
    """
    Paths and states relative to C*.

    A path is promising when f <= C* and it reaches no goal state; highly
    promising when f < C*. s_star / s_plus count the distinct end states.
    """

    c_star: Cost
    p_star: int
    p_plus: int
    s_star: int
    s_plus: int


def enumerate_promising(
    space: StateSpace,
    c_star: Optional[Cost] = None,
    max_paths: int = 10_000_000,
) -> PromisingCounts:
    """
    Exhaustively enumerate every path with g <= C* (extensions of a path
    with f > C* can be promising again when h is inconsistent).

    Raises InfinitePathCountError when a zero-cost cycle lies within the
    bound, StateLimitExceeded past max_paths paths.
    """
    if c_star is None:
        c_star = brute_force_cstar(space)
    if c_star >= INFINITY:
        raise ValueError("no goal is reachable; promising paths are undefined")

    root = space.init()
    p_star = p_plus = 0
    s_star: set[Any] = set()
    s_plus: set[Any] = set()
    visited = 0

    if space.is_goal(root):
        return PromisingCounts(c_star, 0, 0, 0, 0)

    # frame: [state, g, children, next_index]
    on_path: dict[Any, list[int]] = {}
    stack: list[list[Any]] = []

    def enter(state: Any, g: int) -> None:
        nonlocal p_star, p_plus, visited
        visited += 1
        if visited > max_paths:
            raise StateLimitExceeded(f"more than {max_paths} paths within C*={c_star}")
        if g in on_path.get(state, ()):
            raise InfinitePathCountError(f"zero-cost cycle through {state!r}")
        f = g + space.h(state)
        if f <= c_star:
            p_plus += 1
            s_plus.add(state)
            if f < c_star:
                p_star += 1
                s_star.add(state)
        on_path.setdefault(state, []).append(g)
        stack.append([state, g, space.succ(state), 0])

    enter(root, 0)
    while stack:
        frame = stack[-1]
        state, g, children, idx = frame
        if idx >= len(children):
            stack.pop()
            on_path[state].pop()
            continue
        frame[3] = idx + 1
        action, child = children[idx]
        g2 = g + space.cost(action)
        if g2 > c_star or space.is_goal(child):
            continue
        enter(child, g2)

    return PromisingCounts(c_star, p_star, p_plus, len(s_star), len(s_plus))
