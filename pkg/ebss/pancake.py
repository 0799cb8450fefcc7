"""
ebss/pancake.py

Weighted pancake puzzle.

A state is a permutation of 1..N listed from the top of the stack (index 0)
to the bottom. Flipping the top f pancakes (f = 2..N, in increasing order)
costs 1 + f/(10N) raw units. The heuristic is the GAP count, with the plate
acting as pancake N+1, priced at one raw unit per gap: every flip costs at
least one unit and changes at most one adjacency.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from ebss.core import Cost, StateSpace, discretize

PancakeState = tuple[int, ...]


def validate_pancakes(stack: Sequence[int]) -> PancakeState:
    stack = tuple(int(p) for p in stack)
    if len(stack) < 2:
        raise ValueError(f"need at least 2 pancakes, got {len(stack)}")
    if sorted(stack) != list(range(1, len(stack) + 1)):
        raise ValueError(f"not a permutation of 1..{len(stack)}: {stack}")
    return stack


def gap_count(stack: Sequence[int]) -> int:
    n = len(stack)
    gaps = sum(1 for i in range(n - 1) if abs(stack[i] - stack[i + 1]) > 1)
    if abs(stack[-1] - (n + 1)) > 1:
        gaps += 1
    return gaps


def flip_raw_cost(f: int, n: int) -> Fraction:
    return 1 + Fraction(f, 10 * n)


class PancakeSpace(StateSpace):
    def __init__(self, instance: Sequence[int], resolution: int) -> None:
        self.instance = validate_pancakes(instance)
        self.n = len(self.instance)
        self.resolution = int(resolution)
        self._goal = tuple(range(1, self.n + 1))
        self._flip_cost = {f: discretize(flip_raw_cost(f, self.n), resolution) for f in range(2, self.n + 1)}
        self._gap_unit = discretize(1, resolution)

    def init(self) -> PancakeState:
        return self.instance

    def is_goal(self, state: PancakeState) -> bool:
        return state == self._goal

    def succ(self, state: PancakeState) -> list[tuple[int, PancakeState]]:
        return [(f, state[f - 1::-1] + state[f:]) for f in range(2, self.n + 1)]

    def cost(self, action: int) -> Cost:
        return self._flip_cost[action]

    def h(self, state: PancakeState) -> Cost:
        return gap_count(state) * self._gap_unit

    def inverse(self, action: int) -> int:
        return action

    def raw_cost(self, action: int) -> Fraction:
        return flip_raw_cost(action, self.n)

    def raw_h(self, state: PancakeState) -> Fraction:
        return Fraction(gap_count(state))


def pancake_space(instance: Sequence[int], resolution: int) -> PancakeSpace:
    return PancakeSpace(instance, resolution)


def generate_hard_pancakes(n: int, size: int, seed: int) -> list[PancakeState]:
    """Seeded uniform-random stacks of `size` pancakes."""
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        stack = list(range(1, size + 1))
        rng.shuffle(stack)
        out.append(tuple(stack))
    return out
