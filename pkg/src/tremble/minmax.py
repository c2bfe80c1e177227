"""Certified bounds on player 1's minmax value in three-player games.

The independent minmax ``min_{tau2, tau3} max_{a1} u1(a1, tau2, tau3)`` is
NP-hard to compute, so it is bracketed:

* lower: the same minimisation over correlated distributions on the
  opponents' action pairs, which is a single exact LP;
* upper: the best value found by exact coordinate descent (alternating LPs in
  ``tau2`` and ``tau3``) started from every ``tau2`` on a rational grid.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .game import DimensionError, Game, MixedProfile, as_rational, best_reply_value
from .lp import EQ, LE, LinearProgram, solve


class Verdict(str, Enum):
    YES = "YES"
    NO = "NO"
    AMBIGUOUS = "AMBIGUOUS"


@dataclass(frozen=True)
class PromiseInstance:
    """A game and a threshold; YES when player 1's minmax is below ``r``."""

    game: Game
    r: Fraction

    def __post_init__(self):
        if self.game.n_players != 3:
            raise DimensionError(f"promise instances are 3-player games, got {self.game.n_players}")
        object.__setattr__(self, "r", as_rational(self.r))


@dataclass(frozen=True)
class MinmaxBounds:
    lower: Fraction
    upper: Fraction
    upper_witness: tuple[tuple[Fraction, ...], tuple[Fraction, ...]]
    lower_certificate: tuple[Fraction, ...]
    correlated: tuple[Fraction, ...] = ()


def normalize_instance(game: Game, r) -> tuple[Game, Fraction]:
    """Scale every payoff by the denominator of ``r`` so the threshold is an integer."""
    r = as_rational(r)
    q = r.denominator
    if q == 1:
        return game, r
    return game.map_payoffs(lambda i, v: v * q), r * q


def minmax_lp(matrix: Sequence[Sequence[Fraction]]) -> tuple[Fraction, tuple[Fraction, ...], tuple[Fraction, ...]]:
    """``min_q max_r (M q)_r`` over distributions ``q`` on columns.

    Returns the value, the minimising ``q``, and the row player's mixture
    from the dual, which guarantees the value against every column.
    """
    n_rows, n_cols = len(matrix), len(matrix[0])
    rows = tuple(tuple(m) + (-1,) for m in matrix) + ((1,) * n_cols + (0,),)
    lp = LinearProgram(
        objective=(0,) * n_cols + (-1,),
        rows=rows,
        senses=(LE,) * n_rows + (EQ,),
        rhs=(0,) * n_rows + (1,),
        bounds=((Fraction(0), None),) * n_cols + ((None, None),),
    )
    sol = solve(lp)
    return -sol.objective_value, tuple(sol.primal[:n_cols]), tuple(sol.dual[:n_rows])


def _player1_matrix_given(game: Game, fixed: int, strategy: Sequence[Fraction]) -> list[list[Fraction]]:
    """u1(a1, .) as a matrix over the free opponent, averaging the fixed one."""
    n1, n2, n3 = game.shape
    free = 2 if fixed == 1 else 1
    out = [[Fraction(0)] * game.shape[free] for _ in range(n1)]
    for a1 in range(n1):
        for b in range(game.shape[free]):
            acc = Fraction(0)
            for c, p in enumerate(strategy):
                if p:
                    prof = (a1, c, b) if fixed == 1 else (a1, b, c)
                    acc += p * game.payoff(prof)[0]
            out[a1][b] = acc
    return out


def player1_best_reply(game: Game, tau2: Sequence[Fraction], tau3: Sequence[Fraction]) -> Fraction:
    profile = MixedProfile((MixedProfile.uniform(game)[0], tuple(tau2), tuple(tau3)))
    return best_reply_value(game, profile, 0)[0]


def correlated_minmax(game: Game) -> tuple[Fraction, tuple[Fraction, ...], tuple[Fraction, ...]]:
    """Exact correlated minmax of player 1; see :func:`minmax_lp`."""
    n1, n2, n3 = game.shape
    matrix = [[game.payoff((a1, a2, a3))[0] for a2, a3 in itertools.product(range(n2), range(n3))] for a1 in range(n1)]
    return minmax_lp(matrix)


def simplex_points(n: int, denominator: int) -> Iterator[tuple[Fraction, ...]]:
    """All distributions on ``n`` points with entries in multiples of ``1/denominator``."""
    for cut in itertools.combinations_with_replacement(range(denominator + 1), n - 1):
        parts = [b - a for a, b in zip((0,) + cut, cut + (denominator,))]
        yield tuple(Fraction(p, denominator) for p in parts)


def grid(n: int, max_denominator: int) -> list[tuple[Fraction, ...]]:
    seen, out = set(), []
    for d in range(1, max_denominator + 1):
        for v in simplex_points(n, d):
            if v not in seen:
                seen.add(v)
                out.append(v)
    return out


def _descend(game: Game, tau2, cache: dict):
    """Alternate exact best responses of players 3 and 2 until neither improves."""
    value, tau3, _ = minmax_lp(_player1_matrix_given(game, 1, tau2))
    while True:
        improved = False
        v2, new2, _ = minmax_lp(_player1_matrix_given(game, 2, tau3))
        if v2 < value:
            value, tau2, improved = v2, new2, True
        key = tau2
        if key not in cache:
            cache[key] = minmax_lp(_player1_matrix_given(game, 1, tau2))
        v3, new3, _ = cache[key]
        if v3 < value:
            value, tau3, improved = v3, new3, True
        if not improved:
            return value, tau2, tau3


def minmax_bounds(game: Game, grid_denominator: int = 4) -> MinmaxBounds:
    if game.n_players != 3:
        raise DimensionError(f"minmax bounds need a 3-player game, got {game.n_players}")
    if grid_denominator < 1:
        raise ValueError("grid denominator must be at least 1")
    lower, z, x = correlated_minmax(game)

    best = None
    cache: dict = {}
    for start in grid(game.shape[1], grid_denominator):
        value, tau2, tau3 = _descend(game, start, cache)
        if best is None or value < best[0]:
            best = (value, tau2, tau3)
    upper, tau2, tau3 = best
    assert player1_best_reply(game, tau2, tau3) == upper
    assert lower <= upper, "correlated relaxation exceeded an independent value"
    return MinmaxBounds(lower, upper, (tau2, tau3), x, z)


def classify_promise(instance: PromiseInstance, grid_denominator: int = 4) -> Verdict:
    return classify_bounds(minmax_bounds(instance.game, grid_denominator), instance.r)


def classify_bounds(bounds: MinmaxBounds, r: Fraction) -> Verdict:
    if bounds.upper < r:
        return Verdict.YES
    if bounds.lower > r:
        return Verdict.NO
    return Verdict.AMBIGUOUS
