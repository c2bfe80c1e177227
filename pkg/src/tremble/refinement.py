"""Perfection checks: weak dominance, the two-player test, tremble witnesses.

The witness family used for certificates is

    sigma(t) = (1 - t - t**2) * mu + t * tau + t**2 * u,    t = 1/k,

with ``u`` the uniform profile.  For every player and action the payoff gap
between ``mu``'s action and that action is a polynomial in ``t``; perfection
along the family is certified by proving all gaps are ``>= 0`` on ``(0, 1/k0]``
with Sturm sequences.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import TYPE_CHECKING, Iterator, Optional, Sequence, Union

from .game import (
    DimensionError,
    Game,
    MixedProfile,
    PureProfile,
    action_payoffs,
    best_reply_value,
    require_nash,
)
from .lp import GE, EQ, LinearProgram, solve
from .poly import NegativeSpan, Poly, SignProof, check_sign_proof, nonnegativity_proof

if TYPE_CHECKING:
    from .reduction import ReducedGame

DEFAULT_K_BOUND = 2**20


class NotFullyMixedError(ValueError):
    pass


def _opponent_combos(game: Game, player: int) -> list[tuple[int, ...]]:
    ranges = [range(s) if j != player else range(1) for j, s in enumerate(game.shape)]
    return list(itertools.product(*ranges))


def _cell(game: Game, combo: tuple[int, ...], player: int, action: int) -> tuple[Fraction, ...]:
    p = list(combo)
    p[player] = action
    return game.payoff(p)


# -- dominance ---------------------------------------------------------------


@dataclass(frozen=True)
class DominanceReport:
    player: int
    strategy: tuple[Fraction, ...]
    dominated: bool
    dominating: Optional[tuple[Fraction, ...]] = None
    action: Optional[int] = None

    @property
    def verdict(self) -> str:
        return "weakly-dominated" if self.dominated else "undominated"


def check_dominated(game: Game, player: int, strategy: Union[int, Sequence]) -> DominanceReport:
    """Decide whether ``strategy`` (an action index or a mixture) is weakly dominated.

    Weak dominance: some mixture does at least as well against every opponent
    pure combination and strictly better against one.  When ``strategy`` is a
    pure action the dominating mixture puts no weight on it.
    """
    game.check_player(player)
    n = game.shape[player]
    action = None
    if isinstance(strategy, int):
        if not 0 <= strategy < n:
            raise DimensionError(f"action {strategy} out of range for player {player}")
        action = strategy
        sigma = tuple(Fraction(int(a == strategy)) for a in range(n))
    else:
        sigma = tuple(MixedProfile((tuple(strategy),))[0])
        if len(sigma) != n:
            raise DimensionError(f"strategy has {len(sigma)} entries, expected {n}")

    combos = _opponent_combos(game, player)
    U = [[_cell(game, c, player, b)[player] for c in combos] for b in range(n)]
    target = [sum((sigma[b] * U[b][k] for b in range(n)), Fraction(0)) for k in range(len(combos))]
    candidates = [b for b in range(n) if b != action]
    if not candidates:
        return DominanceReport(player, sigma, False, action=action)

    lp = LinearProgram(
        objective=tuple(sum(U[b], Fraction(0)) for b in candidates),
        rows=tuple(tuple(U[b][k] for b in candidates) for k in range(len(combos))) + ((1,) * len(candidates),),
        senses=(GE,) * len(combos) + (EQ,),
        rhs=tuple(target) + (1,),
    )
    sol = solve(lp)
    if not sol.optimal or sol.objective_value <= sum(target, Fraction(0)):
        return DominanceReport(player, sigma, False, action=action)
    mix = [Fraction(0)] * n
    for b, x in zip(candidates, sol.primal):
        mix[b] = x
    achieved = [sum((mix[b] * U[b][k] for b in range(n)), Fraction(0)) for k in range(len(combos))]
    assert all(v >= s for v, s in zip(achieved, target)) and any(v > s for v, s in zip(achieved, target))
    return DominanceReport(player, sigma, True, tuple(mix), action=action)


@dataclass(frozen=True)
class TwoPlayerPerfection:
    perfect: bool
    reports: tuple[DominanceReport, ...]

    def __bool__(self) -> bool:
        return self.perfect


def check_perfect_two_player(game: Game, equilibrium: Union[MixedProfile, PureProfile]) -> TwoPlayerPerfection:
    """Two-player perfection: the equilibrium strategies must be undominated."""
    if game.n_players != 2:
        raise DimensionError(f"two-player test needs 2 players, got {game.n_players}")
    eq = require_nash(game, equilibrium)
    reports = []
    for i in range(2):
        pure = eq.support(i)
        strategy = pure[0] if len(pure) == 1 else eq[i]
        reports.append(check_dominated(game, i, strategy))
    return TwoPlayerPerfection(not any(r.dominated for r in reports), tuple(reports))


# -- the witness family ------------------------------------------------------


@dataclass(frozen=True)
class WitnessFamily:
    """``sigma(t) = (1 - t - t^2) base + t tremble + t^2 uniform``."""

    base: MixedProfile
    tremble: MixedProfile
    uniform: MixedProfile

    @staticmethod
    def weights(t) -> tuple[Fraction, Fraction, Fraction]:
        t = Fraction(t)
        return 1 - t - t * t, t, t * t

    def at(self, t) -> MixedProfile:
        t = Fraction(t)
        wb, wt, wu = self.weights(t)
        if t < 0 or wb < 0:
            raise ValueError(f"t = {t} is outside the family's domain")
        return MixedProfile(
            tuple(
                tuple(wb * b + wt * x + wu * u for b, x, u in zip(bv, tv, uv))
                for bv, tv, uv in zip(self.base, self.tremble, self.uniform)
            )
        )

    def at_k(self, k: int) -> MixedProfile:
        return self.at(Fraction(1, k))

    def probability_polynomials(self) -> list[list[Poly]]:
        """Per player and action, the probability as a polynomial in ``t``."""
        return [
            [Poly([b, x - b, u - b]) for b, x, u in zip(bv, tv, uv)]
            for bv, tv, uv in zip(self.base, self.tremble, self.uniform)
        ]


def build_witness_sequence(game: Game, mu: PureProfile, tau: MixedProfile) -> WitnessFamily:
    if tau.shape != game.shape:
        raise DimensionError(f"tremble profile shape {tau.shape} does not match game shape {game.shape}")
    return WitnessFamily(mu.to_mixed(game), tau, MixedProfile.uniform(game))


def gap_polynomials(game: Game, family: WitnessFamily, mu: PureProfile) -> list[list[Poly]]:
    """payoff(mu's action) - payoff(action) against sigma(t), per player and action."""
    probs = family.probability_polynomials()
    out = []
    for i in range(game.n_players):
        payoff = [Poly() for _ in range(game.shape[i])]
        for combo in _opponent_combos(game, i):
            weight = Poly([1])
            for j, a in enumerate(combo):
                if j != i:
                    weight = weight * probs[j][a]
            if weight.is_zero():
                continue
            for a in range(game.shape[i]):
                v = _cell(game, combo, i, a)[i]
                if v:
                    payoff[a] = payoff[a] + weight * v
        out.append([payoff[mu[i]] - p for p in payoff])
    return out


@dataclass(frozen=True)
class PerfectionCertificate:
    mu: PureProfile
    tau: MixedProfile
    uniform: MixedProfile
    k0: int
    polynomials: tuple[tuple[Poly, ...], ...]
    sign_proofs: tuple[tuple[SignProof, ...], ...]

    ok = True


@dataclass(frozen=True)
class CertificationFailure:
    """The family does not make ``mu`` a best reply near ``t = 0``.

    ``span`` is an interval of ``t`` values on which the deviation to
    ``action`` by ``player`` is strictly profitable.
    """

    player: int
    action: int
    span: NegativeSpan
    reason: str

    ok = False


def certify_witness(
    game: Game, mu: PureProfile, family: WitnessFamily, k_bound: int = DEFAULT_K_BOUND
) -> Union[PerfectionCertificate, CertificationFailure]:
    """Find the least ``k0 >= 2`` with every gap polynomial ``>= 0`` on ``(0, 1/k0]``.

    ``k0`` is searched by doubling up to ``k_bound`` and then bisection.  A
    gap that is negative arbitrarily close to 0 fails immediately.
    """
    require_nash(game, mu)
    if family.base != mu.to_mixed(game):
        raise ValueError("family base is not the given pure profile")
    polys = gap_polynomials(game, family, mu)

    half = Fraction(1, 2)
    for i, row in enumerate(polys):
        for a, p in enumerate(row):
            if not p.is_zero() and p.coeffs[p.trailing_zeros()] < 0:
                res = nonnegativity_proof(p, half)
                return CertificationFailure(i, a, res, "deviation is profitable for all large k")

    def attempt(k: int):
        """Sign proofs on (0, 1/k], or the first (player, action, span) that fails."""
        h = Fraction(1, k)
        proofs = []
        for i, row in enumerate(polys):
            proof_row = []
            for a, p in enumerate(row):
                res = nonnegativity_proof(p, h)
                if isinstance(res, NegativeSpan):
                    return None, (i, a, res)
                proof_row.append(res)
            proofs.append(tuple(proof_row))
        return tuple(proofs), None

    lo, hi = 1, 2
    proofs, bad = attempt(hi)
    while proofs is None:
        if hi >= k_bound:
            i, a, span = bad
            return CertificationFailure(i, a, span, f"threshold exceeds the search bound {k_bound}")
        lo, hi = hi, min(2 * hi, k_bound)
        proofs, bad = attempt(hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        mid_proofs, _ = attempt(mid)
        if mid_proofs is None:
            lo = mid
        else:
            hi, proofs = mid, mid_proofs
    return PerfectionCertificate(mu, family.tremble, family.uniform, hi, tuple(tuple(r) for r in polys), proofs)


def verify_certificate(game: Game, cert: PerfectionCertificate) -> bool:
    """Re-validate ``cert`` using only payoff evaluations and Sturm counts.

    The polynomials are checked against direct expected-payoff computation at
    ``2(n-1) + 1`` distinct points, which pins down any polynomial of the
    family's degree, so no search is repeated.
    """
    try:
        if int(cert.k0) != cert.k0 or cert.k0 < 2:
            return False
        cert.mu.validate(game)
        if cert.uniform != MixedProfile.uniform(game) or cert.tau.shape != game.shape:
            return False
        family = build_witness_sequence(game, cert.mu, cert.tau)
        require_nash(game, cert.mu)
    except (ValueError, DimensionError):
        return False
    if len(cert.polynomials) != game.n_players or len(cert.sign_proofs) != game.n_players:
        return False
    degree = 2 * (game.n_players - 1)
    samples = [Fraction(1, cert.k0 + s) for s in range(degree + 1)]
    direct = []
    for t in samples:
        sigma = family.at(t)
        direct.append([action_payoffs(game, sigma, i) for i in range(game.n_players)])
    h = Fraction(1, cert.k0)
    for i in range(game.n_players):
        if len(cert.polynomials[i]) != game.shape[i] or len(cert.sign_proofs[i]) != game.shape[i]:
            return False
        for a, p in enumerate(cert.polynomials[i]):
            if p.degree > degree:
                return False
            for t, values in zip(samples, direct):
                if p(t) != values[i][cert.mu[i]] - values[i][a]:
                    return False
            if not check_sign_proof(p, h, cert.sign_proofs[i][a]):
                return False
    # weights at t <= 1/2 are all positive, so sigma(1/k) is fully mixed for k >= k0 >= 2
    return True


# -- the conditional best reply of player 1 ----------------------------------


@dataclass(frozen=True)
class ConditionalReply:
    value: Fraction
    source_value: Fraction
    reply: int
    beaten: bool


def conditional_best_reply_test(
    reduced: "ReducedGame", sigma2: Sequence, sigma3: Sequence, r=None
) -> ConditionalReply:
    """Player 1's best non-bottom reply when players 2 and 3 play fully mixed.

    Conditioning on neither opponent playing bottom turns the reply into a
    best reply in the source game; ``value`` is its payoff in the gadget and
    bottom is strictly beaten iff ``value > r``.
    """
    r = reduced.r if r is None else Fraction(r)
    shape = reduced.gprime.shape
    s2 = MixedProfile((tuple(sigma2),))[0]
    s3 = MixedProfile((tuple(sigma3),))[0]
    if len(s2) != shape[1] or len(s3) != shape[2]:
        raise DimensionError("opponent strategies do not match the gadget's action sets")
    if not all(p > 0 for p in s2 + s3):
        raise NotFullyMixedError("opponent strategies must be fully mixed")
    b2, b3 = reduced.bot_index[1], reduced.bot_index[2]
    rest2 = 1 - s2[b2]
    rest3 = 1 - s3[b3]
    cond2 = tuple(p / rest2 for a, p in enumerate(s2) if a != b2)
    cond3 = tuple(p / rest3 for a, p in enumerate(s3) if a != b3)
    source = reduced.source
    profile = MixedProfile((MixedProfile.uniform(source)[0], cond2, cond3))
    v_star, argmax = best_reply_value(source, profile, 0)
    p_clear = rest2 * rest3
    value = r * (1 - p_clear) + v_star * p_clear
    return ConditionalReply(value, v_star, min(argmax), value > r)


# -- epsilon-perfection oracle -----------------------------------------------


@dataclass(frozen=True)
class OracleVerdict:
    """Outcome of the tremble search.

    ``supported`` is evidence, not proof, of perfection for three or more
    players; for two players each level is decided exactly.
    """

    levels_checked: int
    witnesses: tuple[MixedProfile, ...]
    refuted_level: Optional[int] = None

    @property
    def supported(self) -> bool:
        return self.refuted_level is None

    @property
    def verdict(self) -> str:
        return "supported" if self.supported else f"refuted-at-level-{self.refuted_level}"


def is_tremble_witness(game: Game, mu: MixedProfile, sigma: MixedProfile, eps: Fraction) -> bool:
    if not sigma.is_fully_mixed() or sigma.distance(mu) > eps:
        return False
    return all(_player_ok(game, mu, sigma, i) for i in range(game.n_players))


def _player_ok(game: Game, mu: MixedProfile, sigma: MixedProfile, i: int) -> bool:
    _, argmax = best_reply_value(game, sigma, i)
    return set(mu.support(i)) <= argmax


def simplex_grid(n: int, denominator: int) -> Iterator[tuple[Fraction, ...]]:
    """Fully mixed vectors whose entries are multiples of ``1/denominator``."""
    for cut in itertools.combinations(range(1, denominator), n - 1):
        parts = [b - a for a, b in zip((0,) + cut, cut + (denominator,))]
        yield tuple(Fraction(p, denominator) for p in parts)


def _mix(weights: Sequence[Fraction], vectors: Sequence[Sequence[Fraction]]) -> tuple[Fraction, ...]:
    return tuple(sum((w * v[a] for w, v in zip(weights, vectors)), Fraction(0)) for a in range(len(vectors[0])))


def _tremble_lp(game: Game, mu: MixedProfile, sigma: MixedProfile, j: int, eps: Fraction):
    """Most-mixed ``sigma_j`` near ``mu_j`` keeping every other player's ``mu``-support optimal.

    Returns the new vector, or None when no fully mixed choice exists.
    """
    n_j = game.shape[j]
    rows, senses, rhs = [], [], []
    for i in range(game.n_players):
        if i == j:
            continue
        # payoff of player i's action a as a linear function of sigma_j
        coef = [[Fraction(0)] * n_j for _ in range(game.shape[i])]
        for b in range(n_j):
            fixed = sigma.replace(j, tuple(Fraction(int(k == b)) for k in range(n_j)))
            for a, v in enumerate(action_payoffs(game, fixed, i)):
                coef[a][b] = v
        for a in mu.support(i):
            for b in range(game.shape[i]):
                if b != a:
                    rows.append(tuple(x - y for x, y in zip(coef[a], coef[b])) + (0,))
                    senses.append(GE)
                    rhs.append(0)
    for b in range(n_j):
        row = [0] * (n_j + 1)
        row[b], row[n_j] = 1, -1
        rows.append(tuple(row))
        senses.append(GE)
        rhs.append(0)
    rows.append((1,) * n_j + (0,))
    senses.append(EQ)
    rhs.append(1)
    bounds = tuple((max(Fraction(0), p - eps), min(Fraction(1), p + eps)) for p in mu[j]) + ((None, Fraction(1)),)
    sol = solve(LinearProgram((0,) * n_j + (1,), tuple(rows), tuple(senses), tuple(rhs), bounds))
    if not sol.optimal or sol.objective_value <= 0:
        return None
    return tuple(sol.primal[:n_j])


def _search_level(game, mu, eps, cap, directions, max_product):
    uniform = MixedProfile.uniform(game)
    n = game.n_players

    # uniform trembles
    for m in range(4):
        s = eps / 2**m
        sigma = MixedProfile(tuple(_mix((1 - s, s), (b, u)) for b, u in zip(mu, uniform)))
        if is_tremble_witness(game, mu, sigma, eps):
            return sigma

    # directed trembles: supplied profiles, then every pure-action corner
    s = eps / 2
    weights = (1 - s - s * s, s, s * s)
    corners = itertools.product(*(range(k) for k in game.shape))
    targets = list(directions) + [MixedProfile.point_mass(game, c) for c in corners]
    for tau in targets:
        sigma = MixedProfile(tuple(_mix(weights, (b, x, u)) for b, x, u in zip(mu, tau, uniform)))
        if is_tremble_witness(game, mu, sigma, eps):
            return sigma

    if n == 2:
        # each player's best replies depend only on the other player's vector,
        # so one exact LP per player decides the level and no grid is needed
        chosen = []
        for j in range(2):
            found = _tremble_lp(game, mu, mu, j, eps)
            if found is None:
                return None
            chosen.append(found)
        sigma = MixedProfile(tuple(chosen))
        assert is_tremble_witness(game, mu, sigma, eps)
        return sigma

    grids = []
    for j in range(n):
        grid = []
        for d in range(game.shape[j], cap + 1):
            more = [v for v in simplex_grid(game.shape[j], d) if max(abs(p - q) for p, q in zip(v, mu[j])) <= eps]
            grid.extend(v for v in more if v not in grid)
            if len(grid) > round(max_product ** (1 / n)):
                break
        grids.append(grid)
    count = 0
    for combo in itertools.product(*grids):
        count += 1
        if count > max_product:
            break
        sigma = MixedProfile(combo)
        if is_tremble_witness(game, mu, sigma, eps):
            return sigma

    # coordinate refinement by exact LPs from the uniform tremble
    sigma = MixedProfile(tuple(_mix((1 - eps, eps), (b, u)) for b, u in zip(mu, uniform)))
    for _ in range(4 * n):
        for j in range(n):
            v = _tremble_lp(game, mu, sigma, j, eps)
            if v is None:
                return None
            sigma = sigma.replace(j, v)
        if is_tremble_witness(game, mu, sigma, eps):
            return sigma
    return None


def epsilon_perfection_oracle(
    game: Game,
    mu: Union[MixedProfile, PureProfile],
    levels: int,
    denominator_cap: int = 64,
    directions: Sequence[MixedProfile] = (),
    max_product: int = 4096,
) -> OracleVerdict:
    """Search, for ``eps = 2^-1 .. 2^-levels``, fully mixed profiles within
    ``eps`` of ``mu`` (max norm) against which ``mu``'s supports are best replies.

    With two players each level is decided by one exact LP per player, so a
    refutation is a proof.  With more players the search covers trembles, a
    grid capped at ``denominator_cap`` and ``max_product`` combinations, and
    coordinate LP sweeps; a refutation there only means nothing was found.
    """
    mu = require_nash(game, mu)
    if levels < 1:
        raise ValueError("levels must be at least 1")
    if mu.is_fully_mixed():
        return OracleVerdict(levels, (mu,) * levels)
    witnesses = []
    for j in range(1, levels + 1):
        eps = Fraction(1, 2**j)
        sigma = _search_level(game, mu, eps, denominator_cap, directions, max_product)
        if sigma is None:
            return OracleVerdict(j, tuple(witnesses), refuted_level=j)
        witnesses.append(sigma)
    return OracleVerdict(levels, tuple(witnesses))
