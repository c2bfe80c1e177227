"""Small named games and seeded generators of promise instances with known verdicts."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Sequence

from .game import Game
from .minmax import PromiseInstance, Verdict, classify_bounds, minmax_bounds

LABELS = ("abcdefgh", "xyzstqrp", "uvwklmno")


def labels(shape: Sequence[int]) -> tuple[tuple[str, ...], ...]:
    out = []
    for i, n in enumerate(shape):
        pool = LABELS[i] if i < len(LABELS) else "".join(chr(ord("a") + k) for k in range(8))
        out.append(tuple(pool[k] if n <= len(pool) else f"{pool[0]}{k}" for k in range(n)))
    return tuple(out)


def matching_pennies() -> Game:
    return Game.from_function(
        (("heads", "tails"), ("heads", "tails")), lambda p: (1, -1) if p[0] == p[1] else (-1, 1)
    )


def mismatch_game() -> Game:
    """Player 1 bets on whether players 2 and 3 mismatch; pays 1 on a correct bet."""
    return Game.from_function(
        (("mismatch", "match"), ("x", "y"), ("u", "v")),
        lambda p: (int((p[1] != p[2]) == (p[0] == 0)), 0, 0),
    )


def random_game(rng: random.Random, shape: Sequence[int], values=(0, 1, 2)) -> Game:
    n = len(shape)
    return Game.from_function(labels(shape), lambda p: tuple(rng.choice(values) for _ in range(n)))


def constant_source(shape: Sequence[int], c) -> Game:
    """Player 1 always receives ``c``; the others always receive 0."""
    return Game.from_function(labels(shape), lambda p: (Fraction(c), 0, 0))


def dummy_source(rng: random.Random, n1: int, n2: int, values=(0, 1, 2)) -> Game:
    """Player 3 has a single action, so the minmax is a zero-sum LP value."""
    return random_game(rng, (n1, n2, 1), values)


def _shape(rng: random.Random) -> tuple[int, int, int]:
    return tuple(rng.randint(1, 3) for _ in range(3))


def _draw(rng: random.Random, k: int, values) -> Game:
    if k % 2 == 0:
        return constant_source(_shape(rng), rng.choice(values))
    return dummy_source(rng, rng.randint(1, 3), rng.randint(1, 3), values)


def instances(seed: int, count: int, want: Verdict, thresholds: Sequence[int], values=(0, 1, 2),
              grid_denominator: int = 4) -> list[PromiseInstance]:
    """Constant-payoff and dummy-player sources whose certified verdict is ``want``."""
    rng = random.Random(seed)
    out = []
    k = 0
    while len(out) < count:
        game = _draw(rng, k, values)
        r = Fraction(rng.choice(thresholds))
        k += 1
        if classify_bounds(minmax_bounds(game, grid_denominator), r) is want:
            out.append(PromiseInstance(game, r))
    return out


def positive_instances(seed: int = 0, count: int = 30) -> list[PromiseInstance]:
    return instances(seed, count, Verdict.YES, (1, 2))


def negative_instances(seed: int = 0, count: int = 30) -> list[PromiseInstance]:
    return instances(seed, count, Verdict.NO, (0, 1))
