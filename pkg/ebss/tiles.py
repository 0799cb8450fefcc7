"""
ebss/tiles.py

Weighted sliding-tile puzzle.

Moving tile t costs 1 + 1/(1 + t) raw units, discretized at the space's
resolution. The heuristic is Manhattan distance with each tile's distance
priced at its own move cost. The goal has the blank in position 0 and tile i
in position i.

Boards are position-indexed: tiles[p] is the tile at position p, 0 is the
blank. Successors are blank moves in the fixed order Up, Left, Right, Down;
an action is (direction, tile moved).
"""

from __future__ import annotations

import random
from fractions import Fraction
from pathlib import Path
from typing import NamedTuple, Optional, Sequence, Union

from ebss.core import (
    Cost,
    InstanceFormatError,
    StateSpace,
    UnsolvableInstanceError,
    discretize,
)

UP, LEFT, RIGHT, DOWN = range(4)
DIRECTION_NAMES = ("U", "L", "R", "D")

TileAction = tuple[int, int]


class TilePuzzleState(NamedTuple):
    tiles: tuple[int, ...]
    blank: int

    @classmethod
    def from_tiles(cls, tiles: Sequence[int]) -> "TilePuzzleState":
        tiles = tuple(int(t) for t in tiles)
        if sorted(tiles) != list(range(len(tiles))):
            raise ValueError(f"not a permutation of 0..{len(tiles) - 1}: {tiles}")
        return cls(tiles, tiles.index(0))

    def __str__(self) -> str:
        return " ".join(str(t) for t in self.tiles)


def goal_state(width: int = 4, height: int = 4) -> TilePuzzleState:
    return TilePuzzleState(tuple(range(width * height)), 0)


def tile_raw_cost(tile: int) -> Fraction:
    return 1 + Fraction(1, 1 + tile)


def _permutation_parity(tiles: Sequence[int]) -> int:
    seen = [False] * len(tiles)
    cycles = 0
    for start in range(len(tiles)):
        if seen[start]:
            continue
        cycles += 1
        p = start
        while not seen[p]:
            seen[p] = True
            p = tiles[p]
    return (len(tiles) - cycles) % 2


def is_solvable(state: TilePuzzleState, width: int = 4, height: int = 4) -> bool:
    """
    Every move is a transposition with the blank and shifts the blank by one
    cell, so a board is reachable from the goal iff the permutation parity
    equals the parity of the blank's distance from position 0.
    """
    row, col = divmod(state.blank, width)
    return _permutation_parity(state.tiles) == (row + col) % 2


def _neighbors(width: int, height: int) -> list[tuple[tuple[int, int], ...]]:
    table = []
    for p in range(width * height):
        row, col = divmod(p, width)
        moves = []
        if row > 0:
            moves.append((UP, p - width))
        if col > 0:
            moves.append((LEFT, p - 1))
        if col < width - 1:
            moves.append((RIGHT, p + 1))
        if row < height - 1:
            moves.append((DOWN, p + width))
        table.append(tuple(moves))
    return table


class TileSpace(StateSpace):
    """Weighted width x height sliding-tile puzzle as a StateSpace."""

    def __init__(
        self,
        instance: Union[TilePuzzleState, Sequence[int]],
        resolution: int,
        width: int = 4,
        height: int = 4,
    ) -> None:
        if width < 2 or height < 2:
            raise ValueError(f"board must be at least 2x2, got {width}x{height}")
        if not isinstance(instance, TilePuzzleState):
            instance = TilePuzzleState.from_tiles(instance)
        size = width * height
        if len(instance.tiles) != size:
            raise ValueError(f"expected {size} cells, got {len(instance.tiles)}")
        if not is_solvable(instance, width, height):
            raise UnsolvableInstanceError(f"unsolvable {width}x{height} board: {instance}")
        self.instance = instance
        self.width = width
        self.height = height
        self.resolution = int(resolution)
        self._tile_cost = [discretize(tile_raw_cost(t), resolution) for t in range(size)]
        self._neighbors = _neighbors(width, height)
        self._goal = tuple(range(size))
        # _h_table[t][p]: weighted Manhattan distance of tile t at position p.
        self._h_table = [
            [
                0 if t == 0 else self._distance(p, t) * self._tile_cost[t]
                for p in range(size)
            ]
            for t in range(size)
        ]

    def _distance(self, p: int, q: int) -> int:
        pr, pc = divmod(p, self.width)
        qr, qc = divmod(q, self.width)
        return abs(pr - qr) + abs(pc - qc)

    def init(self) -> TilePuzzleState:
        return self.instance

    def is_goal(self, state: TilePuzzleState) -> bool:
        return state.tiles == self._goal

    def succ(self, state: TilePuzzleState) -> list[tuple[TileAction, TilePuzzleState]]:
        tiles = state.tiles
        blank = state.blank
        out = []
        for direction, q in self._neighbors[blank]:
            tile = tiles[q]
            board = list(tiles)
            board[blank] = tile
            board[q] = 0
            out.append(((direction, tile), TilePuzzleState(tuple(board), q)))
        return out

    def cost(self, action: TileAction) -> Cost:
        return self._tile_cost[action[1]]

    def h(self, state: TilePuzzleState) -> Cost:
        table = self._h_table
        return sum(table[t][p] for p, t in enumerate(state.tiles))

    def inverse(self, action: TileAction) -> TileAction:
        return (3 - action[0], action[1])

    def raw_cost(self, action: TileAction) -> Fraction:
        return tile_raw_cost(action[1])

    def raw_h(self, state: TilePuzzleState) -> Fraction:
        return sum(
            (self._distance(p, t) * tile_raw_cost(t) for p, t in enumerate(state.tiles) if t),
            Fraction(0),
        )

    def manhattan(self, state: TilePuzzleState) -> int:
        """Unweighted Manhattan distance."""
        return sum(self._distance(p, t) for p, t in enumerate(state.tiles) if t)


def tile_space(
    instance: Union[TilePuzzleState, Sequence[int]],
    width: int,
    height: int,
    resolution: int,
) -> TileSpace:
    return TileSpace(instance, resolution, width=width, height=height)


def stp_space(instance: Union[TilePuzzleState, Sequence[int]], resolution: int) -> TileSpace:
    """Weighted 15-puzzle."""
    return TileSpace(instance, resolution, width=4, height=4)


def parse_numbered_line(line: str, line_no: int, size: int = 16) -> tuple[Optional[int], TilePuzzleState]:
    """A board line, optionally prefixed by its 1-based instance number."""
    tokens = line.split()
    try:
        values = [int(tok) for tok in tokens]
    except ValueError as e:
        raise InstanceFormatError(line_no, f"non-integer token ({e})") from e
    number = None
    if len(values) == size + 1:
        number, values = values[0], values[1:]
        if number < 1:
            raise InstanceFormatError(line_no, f"instance number must be positive, got {number}")
    if len(values) != size:
        raise InstanceFormatError(line_no, f"expected {size} integers, got {len(values)}")
    if sorted(values) != list(range(size)):
        raise InstanceFormatError(line_no, f"not a permutation of 0..{size - 1}")
    return number, TilePuzzleState.from_tiles(values)


def parse_tile_line(line: str, line_no: int, size: int = 16) -> TilePuzzleState:
    return parse_numbered_line(line, line_no, size)[1]


def load_korf_table(path: Union[str, Path], size: int = 16) -> dict[int, TilePuzzleState]:
    """
    Read 15-puzzle boards, one per line (position-indexed, 0 = blank), keyed
    by instance number. A line without a number takes the one after the
    previous board. Blank lines and lines starting with '#' are skipped.
    """
    table: dict[int, TilePuzzleState] = {}
    last = 0
    with open(path, "r", encoding="utf-8") as f:
        for line_no, line in enumerate(f, start=1):
            text = line.strip()
            if not text or text.startswith("#"):
                continue
            number, board = parse_numbered_line(text, line_no, size)
            if number is None:
                number = last + 1
            if number in table:
                raise InstanceFormatError(line_no, f"duplicate instance number {number}")
            table[number] = board
            last = number
    return table


def load_korf_instances(path: Union[str, Path], size: int = 16) -> list[TilePuzzleState]:
    """Boards of `path` in file order."""
    return list(load_korf_table(path, size).values())


def random_walk_tiles(
    n: int,
    walk_length: int,
    seed: int,
    width: int = 4,
    height: int = 4,
) -> list[TilePuzzleState]:
    """
    Boards reached by seeded random walks of the blank from the goal, never
    undoing the previous move. Solvable by construction.
    """
    rng = random.Random(seed)
    neighbors = _neighbors(width, height)
    out = []
    for _ in range(n):
        tiles = list(range(width * height))
        blank = 0
        last: Optional[int] = None
        for _ in range(walk_length):
            moves = [(d, q) for d, q in neighbors[blank] if last is None or d != 3 - last]
            direction, q = rng.choice(moves)
            tiles[blank], tiles[q] = tiles[q], 0
            blank = q
            last = direction
        out.append(TilePuzzleState(tuple(tiles), blank))
    return out
