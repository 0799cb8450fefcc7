from __future__ import annotations

import random
from fractions import Fraction

import pytest

from ebss.core import (
    INFINITY,
    MAX_COST,
    CostOverflowError,
    Deadline,
    ExplicitSpace,
    IntegrityError,
    Path,
    SearchTimeout,
    Solution,
    add_costs,
    discretize,
    f_value,
    path_cost,
    solution_raw_cost,
    validate_solution,
)


def test_discretize_tile_costs():
    assert discretize(Fraction(3, 2), 10**6) == 1_500_000
    assert discretize(Fraction(17, 16), 10**6) == 1_062_500


def test_discretize_rounds_to_nearest():
    assert discretize(Fraction(4, 3), 10**6) == 1_333_333
    assert discretize(Fraction(5, 3), 10**6) == 1_666_667


def test_discretize_is_monotone():
    rng = random.Random(11)
    for _ in range(2000):
        a = Fraction(rng.randint(0, 10**6), rng.randint(1, 10**4))
        b = a + Fraction(rng.randint(0, 50), rng.randint(1, 10**4))
        resolution = rng.choice([1, 3, 1000, 10**6, 10**9])
        assert discretize(a, resolution) <= discretize(b, resolution)


def test_discretize_pancake_cost_from_float():
    # 1.01 is not exact in binary; rounding to nearest still lands on the decimal value.
    assert discretize(1.01, 10**6) == 1_010_000
    assert discretize(Fraction(101, 100), 10**6) == 1_010_000


def test_discretize_rounds_half_away_from_zero():
    assert discretize(Fraction(1, 2), 1) == 1
    assert discretize(Fraction(5, 2), 1) == 3
    assert discretize(Fraction(1, 3), 1) == 0
    assert discretize(0, 10**9) == 0


def test_discretize_rejects_bad_input():
    with pytest.raises(ValueError):
        discretize(-1, 10)
    with pytest.raises(ValueError):
        discretize(1, 0)
    with pytest.raises(CostOverflowError):
        discretize(10**12, 10**9)


def test_add_costs_overflow_and_infinity():
    assert add_costs(2, 3) == 5
    assert add_costs(INFINITY, 1) == INFINITY
    assert add_costs(5, INFINITY) == INFINITY
    with pytest.raises(CostOverflowError):
        add_costs(MAX_COST, 1)
    assert INFINITY > MAX_COST


def test_f_value_on_g1(g1):
    root = Path(start="A")
    assert f_value(root, g1) == 2
    ab = root.extend(0, "B", 1)
    assert f_value(ab, g1) == 4
    assert ab.end_state == "B"
    assert path_cost(ab) == 1


def test_explicit_space_successor_order(g1):
    assert [dst for _, dst in g1.succ("A")] == ["B", "C"]
    assert [g1.cost(a) for a, _ in g1.succ("A")] == [1, 3]
    assert g1.succ("G") == ()
    assert g1.is_goal("G") and not g1.is_goal("A")


def test_explicit_space_rejects_goal_with_heuristic():
    with pytest.raises(ValueError):
        ExplicitSpace("A", ["G"], [("A", "G", 1)], {"G": 1})


def test_validate_solution_accepts_and_rejects(g1):
    steps = [("A", 0, "B", 1), ("B", 2, "G", 3)]
    good = Solution(Path.from_steps("A", steps), 4)
    assert validate_solution(g1, good) == 4
    assert solution_raw_cost(g1, good) == Fraction(4)

    wrong_cost = Solution(Path.from_steps("A", steps), 5)
    with pytest.raises(IntegrityError):
        validate_solution(g1, wrong_cost)

    short = Solution(Path.from_steps("A", steps[:1]), 1)
    with pytest.raises(IntegrityError):
        validate_solution(g1, short)

    illegal = Solution(Path.from_steps("A", [("A", 3, "G", 1)]), 1)
    with pytest.raises(IntegrityError):
        validate_solution(g1, illegal)


def test_deadline():
    Deadline(None).check()
    Deadline(60).check()
    expired = Deadline(0)
    with pytest.raises(SearchTimeout):
        expired.check()
