"""The bottom-strategy gadget and the end-to-end check of its two directions.

From a 3-player game ``G`` and threshold ``r`` the gadget appends one action,
bottom, to every player.  Players 2 and 3 always get 0; player 1 gets ``r``
whenever anyone plays bottom and its ``G`` payoff otherwise.  The all-bottom
profile is then perfect exactly when player 1's minmax in ``G`` is below ``r``
(on promise instances).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .game import DimensionError, Game, MixedProfile, PureProfile, as_rational, check_nash
from .minmax import MinmaxBounds, PromiseInstance, Verdict, classify_bounds, minmax_bounds
from .refinement import (
    DEFAULT_K_BOUND,
    CertificationFailure,
    ConditionalReply,
    PerfectionCertificate,
    build_witness_sequence,
    certify_witness,
    conditional_best_reply_test,
    verify_certificate,
)

BOT = "_bot"


@dataclass(frozen=True)
class ReducedGame:
    gprime: Game
    bot_index: tuple[int, int, int]
    source: Game
    r: Fraction


def build_gprime(game: Game, r) -> ReducedGame:
    if game.n_players != 3:
        raise DimensionError(f"the gadget takes a 3-player game, got {game.n_players}")
    r = as_rational(r)
    for i, labels in enumerate(game.actions):
        if BOT in labels:
            raise ValueError(f"player {i} already has an action labelled {BOT!r}")
    actions = tuple(labels + (BOT,) for labels in game.actions)
    bot = tuple(len(labels) for labels in game.actions)
    zero = Fraction(0)

    def payoff(profile):
        if any(a == b for a, b in zip(profile, bot)):
            return (r, zero, zero)
        return (game.payoff(profile)[0], zero, zero)

    return ReducedGame(Game.from_function(actions, payoff), bot, game, r)


def mu_of(reduced: ReducedGame) -> PureProfile:
    mu = PureProfile(reduced.bot_index)
    assert check_nash(reduced.gprime, mu), "all-bottom profile must be an equilibrium of the gadget"
    return mu


def tremble_toward(reduced: ReducedGame, tau2, tau3) -> MixedProfile:
    """Gadget profile with player 1 on bottom and players 2, 3 on ``tau2``, ``tau3``."""
    n1 = reduced.gprime.shape[0]
    p1 = tuple(Fraction(int(a == reduced.bot_index[0])) for a in range(n1))
    return MixedProfile((p1, tuple(tau2) + (Fraction(0),), tuple(tau3) + (Fraction(0),)))


def negative_family(reduced: ReducedGame, size: int = 50, max_exponent: int = 6) -> list[tuple[tuple, tuple]]:
    """Deterministic fully mixed strategies for players 2 and 3 near bottom.

    Each member is ``(1 - s) bottom + s w`` with scale ``s = 2^-j``,
    ``1 <= j <= max_exponent``, and ``w`` either uniform or tilted toward one
    action.
    """

    def shapes(n):
        out = [tuple(Fraction(1, n) for _ in range(n))]
        for b in range(n):
            out.append(tuple(Fraction(1 + n * (a == b), 2 * n) for a in range(n)))
        return out

    n2, n3 = reduced.gprime.shape[1:]
    b2, b3 = reduced.bot_index[1:]
    pairs = list(itertools.product(shapes(n2), shapes(n3)))

    def tremble(w, bot, s):
        return tuple((1 - s) * int(a == bot) + s * p for a, p in enumerate(w))

    family = []
    for k in range(size):
        s = Fraction(1, 2 ** (k % max_exponent + 1))
        w2, w3 = pairs[(k // max_exponent) % len(pairs)]
        family.append((tremble(w2, b2, s), tremble(w3, b3, s)))
    return family


@dataclass(frozen=True)
class TheoremConfig:
    grid_denominator: int = 4
    k_bound: int = DEFAULT_K_BOUND
    family_size: int = 50
    max_exponent: int = 6


@dataclass(frozen=True)
class TheoremReport:
    instance: PromiseInstance
    verdict: Verdict
    bounds: MinmaxBounds
    reduced: ReducedGame
    certificate: Optional[PerfectionCertificate] = None
    failure: Optional[CertificationFailure] = None
    negative: tuple[ConditionalReply, ...] = field(default=())
    consistent: bool = True


def verify_theorem(instance: PromiseInstance, config: TheoremConfig = TheoremConfig()) -> TheoremReport:
    """Classify the instance, then check the matching direction on the gadget.

    YES: the all-bottom profile must be certified perfect along the family
    trembling toward the minmax witness.  NO: player 1 must strictly beat
    bottom against every member of the negative family.  AMBIGUOUS instances
    are reported without a check.
    """
    bounds = minmax_bounds(instance.game, config.grid_denominator)
    verdict = classify_bounds(bounds, instance.r)
    reduced = build_gprime(instance.game, instance.r)
    mu = mu_of(reduced)
    if verdict is Verdict.YES:
        tau = tremble_toward(reduced, *bounds.upper_witness)
        family = build_witness_sequence(reduced.gprime, mu, tau)
        result = certify_witness(reduced.gprime, mu, family, config.k_bound)
        if isinstance(result, CertificationFailure):
            return TheoremReport(instance, verdict, bounds, reduced, failure=result, consistent=False)
        ok = verify_certificate(reduced.gprime, result)
        return TheoremReport(instance, verdict, bounds, reduced, certificate=result, consistent=ok)
    if verdict is Verdict.NO:
        replies = tuple(
            conditional_best_reply_test(reduced, s2, s3)
            for s2, s3 in negative_family(reduced, config.family_size, config.max_exponent)
        )
        return TheoremReport(
            instance, verdict, bounds, reduced, negative=replies, consistent=all(c.beaten for c in replies)
        )
    return TheoremReport(instance, verdict, bounds, reduced)
