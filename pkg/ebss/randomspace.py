"""
ebss/randomspace.py

Seeded random small digraphs for property tests.

Every state is reachable from state 0 through a random spanning tree, and
the goal (the last state) is reachable as well. Zero-cost edges only point
from a lower to a higher state index, so there are no zero-cost cycles.
The heuristic is h = max(0, h* - slack): one slack for all states keeps h
consistent, a slack drawn per state usually makes it inconsistent.
"""

from __future__ import annotations

import random
from typing import Optional

from ebss.baselines import goal_distances
from ebss.core import INFINITY, Cost, ExplicitSpace


class RandomSpace(ExplicitSpace):
    def __init__(
        self,
        seed: int,
        edges: list[tuple[int, int, Cost]],
        n_states: int,
        heuristic: dict[int, Cost],
        slack: Optional[int],
    ) -> None:
        super().__init__(0, [n_states - 1], edges, heuristic)
        self.seed = seed
        self.n_states = n_states
        self.slack = slack


def _random_edges(rng: random.Random, n_states: int, max_cost: int, density: float) -> list[tuple[int, int, Cost]]:
    goal = n_states - 1

    def draw_cost(src: int, dst: int) -> int:
        low = 0 if src < dst else 1
        return rng.randint(low, max(low, max_cost))

    pairs: dict[tuple[int, int], int] = {}
    for dst in range(1, n_states):
        src = rng.randrange(dst)
        pairs[(src, dst)] = draw_cost(src, dst)
    for src in range(n_states):
        if src == goal:
            continue
        for dst in range(n_states):
            if dst != src and (src, dst) not in pairs and rng.random() < density:
                pairs[(src, dst)] = draw_cost(src, dst)
    edges = [(a, b, c) for (a, b), c in pairs.items()]
    rng.shuffle(edges)
    edges.sort(key=lambda e: e[0])
    return edges


def random_space(
    seed: int,
    n_states: int = 8,
    max_cost: int = 5,
    heuristic_slack: int = 2,
    inconsistent: bool = False,
    zero_heuristic: bool = False,
    density: float = 0.25,
) -> RandomSpace:
    """
    Random space with 2 <= n_states <= 12 and integer costs in [0, max_cost]
    (at least 1 on edges that point to a lower index). The goal has no
    outgoing edges.
    """
    if not 2 <= n_states <= 12:
        raise ValueError(f"n_states must be in [2, 12], got {n_states}")
    if not 1 <= max_cost <= 5:
        raise ValueError(f"max_cost must be in [1, 5], got {max_cost}")
    if heuristic_slack < 0:
        raise ValueError(f"heuristic_slack must be >= 0, got {heuristic_slack}")
    rng = random.Random(seed)
    edges = _random_edges(rng, n_states, max_cost, density)
    bare = ExplicitSpace(0, [n_states - 1], edges)
    hstar = goal_distances(bare)

    slack: Optional[int] = None
    heuristic: dict[int, Cost] = {}
    if not zero_heuristic:
        if not inconsistent:
            slack = rng.randint(0, heuristic_slack)
        # Dead ends only lead to dead ends; any h is admissible there.
        ceiling = max((d for d in hstar.values() if d < INFINITY), default=0)
        for s in range(n_states):
            d = hstar.get(s, INFINITY)
            if d >= INFINITY:
                heuristic[s] = ceiling if slack is not None else rng.randint(0, max_cost * n_states)
                continue
            cut = slack if slack is not None else rng.randint(0, heuristic_slack)
            heuristic[s] = max(0, d - cut)
    return RandomSpace(seed, edges, n_states, heuristic, slack)
