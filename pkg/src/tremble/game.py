"""Strategic-form games, mixed profiles and Nash verification over exact rationals.

Every number that enters a :class:`Game` or a :class:`MixedProfile` is coerced
to :class:`fractions.Fraction`; floats are rejected outright so that no
verdict ever depends on rounding.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

Rational = Fraction


class DimensionError(ValueError):
    """Shapes of a game, a profile or an index do not line up."""


class NotEquilibriumError(ValueError):
    """An operation that requires a Nash equilibrium was given something else."""


def as_rational(value) -> Fraction:
    """Coerce ``value`` (int, Fraction or ``"p/q"`` string) to a Fraction."""
    if isinstance(value, float):
        raise TypeError(f"floating point value {value!r} rejected; use int, Fraction or 'p/q'")
    if isinstance(value, bool):
        raise TypeError("booleans are not payoffs")
    return Fraction(value)


@dataclass(frozen=True)
class Game:
    """An n-player strategic-form game with a dense payoff tensor.

    ``cells`` is stored row-major by player order: the last player's action
    index varies fastest.  Each cell holds one payoff per player.
    """

    actions: tuple[tuple[str, ...], ...]
    cells: tuple[tuple[Fraction, ...], ...]
    _strides: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        actions = tuple(tuple(str(a) for a in labels) for labels in self.actions)
        if len(actions) < 2:
            raise DimensionError("a game needs at least two players")
        for i, labels in enumerate(actions):
            if not labels:
                raise DimensionError(f"player {i} has no actions")
            if len(set(labels)) != len(labels):
                raise DimensionError(f"player {i} has duplicate action labels")
        n = len(actions)
        size = 1
        for labels in actions:
            size *= len(labels)
        if len(self.cells) != size:
            raise DimensionError(f"expected {size} payoff cells, got {len(self.cells)}")
        cells = []
        for k, cell in enumerate(self.cells):
            if len(cell) != n:
                raise DimensionError(f"cell {k} has {len(cell)} entries, expected {n}")
            cells.append(tuple(as_rational(v) for v in cell))
        strides = [1] * n
        for i in range(n - 2, -1, -1):
            strides[i] = strides[i + 1] * len(actions[i + 1])
        object.__setattr__(self, "actions", actions)
        object.__setattr__(self, "cells", tuple(cells))
        object.__setattr__(self, "_strides", tuple(strides))

    @classmethod
    def from_nested(cls, actions: Sequence[Sequence[str]], payoffs) -> "Game":
        """Build from a nested list whose depth equals the player count."""
        n = len(actions)
        cells = []

        def walk(node, depth, path):
            if depth == n:
                cells.append(node)
                return
            if len(node) != len(actions[depth]):
                raise DimensionError(
                    f"payoffs{''.join(f'[{p}]' for p in path)} has {len(node)} entries, "
                    f"expected {len(actions[depth])}"
                )
            for k, child in enumerate(node):
                walk(child, depth + 1, path + [k])

        walk(payoffs, 0, [])
        return cls(tuple(tuple(a) for a in actions), tuple(tuple(c) for c in cells))

    @classmethod
    def from_function(cls, actions: Sequence[Sequence[str]], payoff: Callable[[tuple[int, ...]], Sequence]) -> "Game":
        """Build by calling ``payoff(profile)`` on every pure profile in row-major order."""
        shape = [len(a) for a in actions]
        cells = [tuple(payoff(p)) for p in itertools.product(*(range(s) for s in shape))]
        return cls(tuple(tuple(a) for a in actions), tuple(cells))

    @property
    def n_players(self) -> int:
        return len(self.actions)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(a) for a in self.actions)

    def index(self, profile: Sequence[int]) -> int:
        if len(profile) != self.n_players:
            raise DimensionError(f"profile has {len(profile)} entries, expected {self.n_players}")
        k = 0
        for i, (a, s) in enumerate(zip(profile, self._strides)):
            if not 0 <= a < len(self.actions[i]):
                raise DimensionError(f"action {a} out of range for player {i}")
            k += a * s
        return k

    def payoff(self, profile: Sequence[int]) -> tuple[Fraction, ...]:
        return self.cells[self.index(profile)]

    def profiles(self) -> Iterator[tuple[int, ...]]:
        """All pure profiles, in the same row-major order as ``cells``."""
        return itertools.product(*(range(s) for s in self.shape))

    def to_nested(self) -> list:
        def build(depth, offset):
            if depth == self.n_players:
                return list(self.cells[offset])
            return [build(depth + 1, offset + k * self._strides[depth]) for k in range(self.shape[depth])]

        return build(0, 0)

    def map_payoffs(self, fn: Callable[[int, Fraction], Fraction]) -> "Game":
        """Return a game with every payoff ``v`` of player ``i`` replaced by ``fn(i, v)``."""
        return Game(self.actions, tuple(tuple(fn(i, v) for i, v in enumerate(c)) for c in self.cells))

    def check_player(self, player: int) -> None:
        if not 0 <= player < self.n_players:
            raise DimensionError(f"player {player} out of range for {self.n_players}-player game")


@dataclass(frozen=True)
class MixedProfile:
    """One probability vector per player; each sums to exactly one."""

    strategies: tuple[tuple[Fraction, ...], ...]

    def __post_init__(self):
        strategies = tuple(tuple(as_rational(p) for p in vec) for vec in self.strategies)
        for i, vec in enumerate(strategies):
            if not vec:
                raise DimensionError(f"player {i} has an empty strategy")
            if any(p < 0 for p in vec):
                raise ValueError(f"player {i} has a negative probability")
            if sum(vec) != 1:
                raise ValueError(f"player {i}'s probabilities sum to {sum(vec)}, not 1")
        object.__setattr__(self, "strategies", strategies)

    @classmethod
    def uniform(cls, game: Game) -> "MixedProfile":
        return cls(tuple((Fraction(1, s),) * s for s in game.shape))

    @classmethod
    def point_mass(cls, game: Game, actions: Sequence[int]) -> "MixedProfile":
        return PureProfile(tuple(actions)).to_mixed(game)

    def __len__(self) -> int:
        return len(self.strategies)

    def __getitem__(self, player: int) -> tuple[Fraction, ...]:
        return self.strategies[player]

    def __iter__(self):
        return iter(self.strategies)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(len(v) for v in self.strategies)

    def is_fully_mixed(self) -> bool:
        return all(p > 0 for vec in self.strategies for p in vec)

    def support(self, player: int) -> tuple[int, ...]:
        return tuple(a for a, p in enumerate(self.strategies[player]) if p > 0)

    def replace(self, player: int, strategy: Sequence) -> "MixedProfile":
        s = list(self.strategies)
        s[player] = tuple(strategy)
        return MixedProfile(tuple(s))

    def distance(self, other: "MixedProfile") -> Fraction:
        """Max-norm distance between two profiles of the same shape."""
        if self.shape != other.shape:
            raise DimensionError("profiles have different shapes")
        return max(abs(p - q) for u, v in zip(self, other) for p, q in zip(u, v))

    def pure_actions(self) -> tuple[int, ...] | None:
        """Action indices if every player plays a point mass, else None."""
        out = []
        for vec in self.strategies:
            sup = [a for a, p in enumerate(vec) if p > 0]
            if len(sup) != 1:
                return None
            out.append(sup[0])
        return tuple(out)


@dataclass(frozen=True)
class PureProfile:
    actions: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "actions", tuple(int(a) for a in self.actions))

    def __len__(self) -> int:
        return len(self.actions)

    def __getitem__(self, player: int) -> int:
        return self.actions[player]

    def validate(self, game: Game) -> None:
        game.index(self.actions)

    def to_mixed(self, game: Game) -> MixedProfile:
        self.validate(game)
        return MixedProfile(
            tuple(tuple(Fraction(int(a == k)) for k in range(s)) for a, s in zip(self.actions, game.shape))
        )


Profile = Union[MixedProfile, PureProfile]


def _as_mixed(game: Game, profile: Profile) -> MixedProfile:
    if isinstance(profile, PureProfile):
        return profile.to_mixed(game)
    if profile.shape != game.shape:
        raise DimensionError(f"profile shape {profile.shape} does not match game shape {game.shape}")
    return profile


def action_payoffs(game: Game, profile: Profile, player: int) -> list[Fraction]:
    """Expected payoff to ``player`` of each of its pure actions, opponents fixed."""
    game.check_player(player)
    profile = _as_mixed(game, profile)
    opponents = [j for j in range(game.n_players) if j != player]
    supports = [[(a, p) for a, p in enumerate(profile[j]) if p > 0] for j in opponents]
    out = [Fraction(0)] * game.shape[player]
    stride = game._strides[player]
    for combo in itertools.product(*supports):
        weight = Fraction(1)
        base = 0
        for j, (a, p) in zip(opponents, combo):
            weight *= p
            base += a * game._strides[j]
        for a in range(game.shape[player]):
            out[a] += weight * game.cells[base + a * stride][player]
    return out


def expected_payoff(game: Game, profile: Profile, player: int) -> Fraction:
    profile = _as_mixed(game, profile)
    values = action_payoffs(game, profile, player)
    return sum((p * v for p, v in zip(profile[player], values)), Fraction(0))


def best_reply_value(game: Game, profile: Profile, player: int) -> tuple[Fraction, frozenset[int]]:
    """Best pure-deviation payoff for ``player`` and the exact set of maximisers."""
    values = action_payoffs(game, profile, player)
    best = max(values)
    return best, frozenset(a for a, v in enumerate(values) if v == best)


@dataclass(frozen=True)
class Deviation:
    player: int
    action: int
    gain: Fraction


def profitable_deviation(game: Game, profile: Profile) -> Deviation | None:
    """The deviation with the largest exact gain, or None at an equilibrium.

    Ties are broken by the lowest (player, action) pair.
    """
    profile = _as_mixed(game, profile)
    worst = None
    for i in range(game.n_players):
        values = action_payoffs(game, profile, i)
        current = sum((p * v for p, v in zip(profile[i], values)), Fraction(0))
        for a, v in enumerate(values):
            gain = v - current
            if gain > 0 and (worst is None or gain > worst.gain):
                worst = Deviation(i, a, gain)
    return worst


def check_nash(game: Game, profile: Profile) -> bool:
    """True iff every action in every player's support is a best reply."""
    profile = _as_mixed(game, profile)
    for i in range(game.n_players):
        _, argmax = best_reply_value(game, profile, i)
        if not set(profile.support(i)) <= argmax:
            return False
    return True


def require_nash(game: Game, profile: Profile) -> MixedProfile:
    profile = _as_mixed(game, profile)
    if not check_nash(game, profile):
        dev = profitable_deviation(game, profile)
        raise NotEquilibriumError(
            f"profile is not a Nash equilibrium: player {dev.player} gains {dev.gain} by action {dev.action}"
        )
    return profile
