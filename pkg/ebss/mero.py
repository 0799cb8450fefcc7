"""
ebss/mero.py

Mero-style graph family with an admissible but inconsistent heuristic, on
which A* with reopening performs a quadratic number of expansions.

Layout for parameter k (m = k // 2):
- s            start, h = 0
- t_1 .. t_k   s -> t_i costs 1, h(t_i) = k + i
- c_0 .. c_k   t_i -> c_0 costs k + 2 - i, plus 1 when i < m;
               c_j -> c_{j+1} costs 1
- goal         c_k -> goal costs k

The family has 2k + 3 states: the 2k + 2 non-goal states s, t_1 .. t_k,
c_0 .. c_k, plus the goal, which no search ever expands.

The t_i pop in increasing f, and each offers a strictly cheaper entry into
the chain, so A* re-expands a growing prefix of the chain after every t_i.
C* = 2k + 3. A* expands (3/4)k^2 + (3/2)k + 2 states for even k; a bounded
Dijkstra at C* expands each of the 2k + 2 non-goal states once.
"""

from __future__ import annotations

import logging
from pathlib import Path
from typing import Optional, Union

from ebss.core import CalibrationError, Cost, ExplicitSpace

logger = logging.getLogger(__name__)


class MeroGraph(ExplicitSpace):
    """
    States are ints: s = 0, t_i = i, c_j = k + 1 + j, goal = 2k + 2.
    """

    def __init__(self, k: int) -> None:
        if k < 1:
            raise ValueError(f"k must be >= 1, got {k}")
        self.k = k
        m = k // 2
        start = 0
        ts = list(range(1, k + 1))
        chain = [k + 1 + j for j in range(k + 1)]
        goal = 2 * k + 2

        edges: list[tuple[int, int, Cost]] = []
        for i in ts:
            edges.append((start, i, 1))
        for i in ts:
            entry = k + 2 - i + (1 if i < m else 0)
            edges.append((i, chain[0], entry))
        for a, b in zip(chain, chain[1:]):
            edges.append((a, b, 1))
        edges.append((chain[-1], goal, k))

        heuristic = {i: k + i for i in ts}
        names = {start: "s", goal: "g"}
        names.update({i: f"t{i}" for i in ts})
        names.update({c: f"c{j}" for j, c in enumerate(chain)})
        super().__init__(start, [goal], edges, heuristic, names)
        self.goal = goal
        self.c_star: Cost = 2 * k + 3

    def inconsistent_edges(self) -> list[tuple[int, int, Cost]]:
        """Edges (src, dst, cost) with h(src) > cost + h(dst)."""
        return [(a, b, c) for a, b, c in self.edges if self.h(a) > c + self.h(b)]


def expected_astar_expansions(k: int) -> int:
    """A* expansion count on mero_graph(k), summed wave by wave."""
    m = k // 2
    chain_len = k + 1
    total = 1 + k + chain_len
    for i in range(1, k):
        entry = k + 2 - i + (1 if i < m else 0)
        total += min(chain_len, max(0, k + i + 2 - entry))
    return total


def expected_oracle_expansions(k: int) -> int:
    return 2 * k + 2


def mero_graph(k: int, verify: Optional[bool] = None) -> MeroGraph:
    """
    Build the family member for k. With verify=True (default: EBSS_DEBUG)
    run A* and the oracle and raise CalibrationError on any mismatch.
    """
    graph = MeroGraph(k)
    if verify is None:
        from ebss.config import load_config

        verify = load_config().debug
    if verify:
        self_test(graph)
    return graph


def self_test(graph: MeroGraph) -> None:
    from ebss.baselines import astar, oracle
    from ebss.bounded import DijkstraEngine

    k = graph.k
    outcome = astar(graph)
    if outcome.cost != graph.c_star:
        raise CalibrationError(f"k={k}: A* cost {outcome.cost}, expected C*={graph.c_star}")
    want = expected_astar_expansions(k)
    if outcome.stats.expansions != want:
        raise CalibrationError(f"k={k}: A* expanded {outcome.stats.expansions}, expected {want}")
    exact = oracle(graph, DijkstraEngine(), graph.c_star)
    want = expected_oracle_expansions(k)
    if exact.stats.expansions != want:
        raise CalibrationError(f"k={k}: oracle expanded {exact.stats.expansions}, expected {want}")
    logger.info("mero k=%s calibrated: A*=%s oracle=%s", k, outcome.stats.expansions, want)


def export_mero(graph: MeroGraph, path: Union[str, Path]) -> Path:
    """Write `src dst cost` lines, then a `# h` section of `state h` lines."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for a, b, c in graph.edges:
            f.write(f"{graph.name(a)} {graph.name(b)} {c}\n")
        f.write("# h\n")
        for s in graph.states:
            f.write(f"{graph.name(s)} {graph.h(s)}\n")
    return path
