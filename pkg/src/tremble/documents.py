"""Canonical JSON documents for games, profiles and perfection certificates.

Rationals are always strings (``"3"``, ``"-3/2"``), never JSON numbers with a
fractional part.  Canonical output uses a fixed key order, reduced fractions,
no whitespace between tokens and one trailing newline, so
``serialize(parse(d)) == d`` byte for byte for every canonical ``d``.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

from .game import DimensionError, Game, MixedProfile, PureProfile
from .poly import Poly, SignProof
from .refinement import PerfectionCertificate

_RATIONAL = re.compile(r"-?\d+(?:/\d+)?")
GAME_KEYS = ("players", "actions", "payoffs", "metadata")


class DocumentError(ValueError):
    """A document does not parse; the message names the offending position."""


def _dumps(obj) -> str:
    return json.dumps(obj, separators=(",", ":"), ensure_ascii=False) + "\n"


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"line {exc.lineno} column {exc.colno}: {exc.msg}") from None


def parse_rational(value, where: str) -> Fraction:
    if isinstance(value, bool) or not isinstance(value, (str, int)):
        raise DocumentError(f"{where}: expected a rational string, got {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if not _RATIONAL.fullmatch(value):
        raise DocumentError(f"{where}: malformed rational {value!r}")
    num, _, den = value.partition("/")
    if den and int(den) == 0:
        raise DocumentError(f"{where}: zero denominator in {value!r}")
    return Fraction(int(num), int(den) if den else 1)


def format_rational(x: Fraction) -> str:
    return str(Fraction(x))


def _expect(cond: bool, where: str, msg: str) -> None:
    if not cond:
        raise DocumentError(f"{where}: {msg}")


# -- games -------------------------------------------------------------------


@dataclass(frozen=True)
class GameDocument:
    game: Game
    metadata: dict = field(default_factory=dict)

    @property
    def bot_index(self):
        bot = self.metadata.get("bot")
        return None if bot is None else tuple(bot)


def parse_game(text: str) -> GameDocument:
    doc = _loads(text)
    _expect(isinstance(doc, dict), "document", "expected an object")
    unknown = set(doc) - set(GAME_KEYS)
    _expect(not unknown, "document", f"unknown fields {sorted(unknown)}")
    players = doc.get("players")
    _expect(isinstance(players, int) and not isinstance(players, bool) and players >= 2, "players",
            "expected an integer >= 2")
    actions = doc.get("actions")
    _expect(isinstance(actions, list) and len(actions) == players, "actions", f"expected {players} label lists")
    for i, labels in enumerate(actions):
        _expect(isinstance(labels, list) and labels and all(isinstance(a, str) for a in labels),
                f"actions[{i}]", "expected a non-empty list of strings")
        _expect(len(set(labels)) == len(labels), f"actions[{i}]", "duplicate labels")
    cells = []

    def walk(node, depth, path):
        where = "payoffs" + "".join(f"[{k}]" for k in path)
        if depth == players:
            _expect(isinstance(node, list) and len(node) == players, where, f"expected {players} payoffs")
            cells.append(tuple(parse_rational(v, f"{where}[{k}]") for k, v in enumerate(node)))
            return
        _expect(isinstance(node, list) and len(node) == len(actions[depth]), where,
                f"expected {len(actions[depth])} entries for player {depth}")
        for k, child in enumerate(node):
            walk(child, depth + 1, path + [k])

    walk(doc.get("payoffs"), 0, [])
    metadata = doc.get("metadata", {})
    _expect(isinstance(metadata, dict), "metadata", "expected an object")
    try:
        game = Game(tuple(tuple(a) for a in actions), tuple(cells))
    except DimensionError as exc:
        raise DocumentError(str(exc)) from None
    bot = metadata.get("bot")
    if bot is not None:
        _expect(isinstance(bot, list) and len(bot) == players
                and all(isinstance(b, int) and 0 <= b < s for b, s in zip(bot, game.shape)),
                "metadata.bot", "expected one in-range action index per player")
    return GameDocument(game, metadata)


def serialize_game(doc: GameDocument | Game) -> str:
    if isinstance(doc, Game):
        doc = GameDocument(doc)
    game = doc.game
    out: dict[str, Any] = {
        "players": game.n_players,
        "actions": [list(a) for a in game.actions],
        "payoffs": _stringify(game.to_nested()),
    }
    if doc.metadata:
        out["metadata"] = json.loads(json.dumps(doc.metadata, sort_keys=True))
    return _dumps(out)


def _stringify(node):
    if isinstance(node, list):
        return [_stringify(v) for v in node]
    return format_rational(node)


# -- profiles ----------------------------------------------------------------


def parse_profile(text: str, game: Game) -> MixedProfile:
    """Entries are probability lists, action labels, or action indices."""
    doc = _loads(text)
    _expect(isinstance(doc, dict) and isinstance(doc.get("profile"), list), "document",
            "expected an object with a 'profile' list")
    entries = doc["profile"]
    _expect(len(entries) == game.n_players, "profile", f"expected {game.n_players} entries")
    vectors = []
    for i, entry in enumerate(entries):
        where = f"profile[{i}]"
        n = game.shape[i]
        if isinstance(entry, list):
            _expect(len(entry) == n, where, f"expected {n} probabilities")
            vec = tuple(parse_rational(v, f"{where}[{k}]") for k, v in enumerate(entry))
            _expect(all(p >= 0 for p in vec) and sum(vec) == 1, where, "not a probability vector")
        else:
            if isinstance(entry, str):
                _expect(entry in game.actions[i], where, f"unknown action label {entry!r}")
                a = game.actions[i].index(entry)
            else:
                _expect(isinstance(entry, int) and not isinstance(entry, bool) and 0 <= entry < n, where,
                        "expected a label, an index or a probability list")
                a = entry
            vec = tuple(Fraction(int(k == a)) for k in range(n))
        vectors.append(vec)
    return MixedProfile(tuple(vectors))


def serialize_profile(profile: MixedProfile) -> str:
    return _dumps({"profile": [[format_rational(p) for p in vec] for vec in profile]})


# -- certificates ------------------------------------------------------------


def certificate_to_json(cert: PerfectionCertificate) -> dict:
    def proof(p: SignProof):
        if p.zero:
            return {"zero": True}
        return {"shift": p.shift, "intervals": [[format_rational(a), format_rational(b)] for a, b in p.intervals]}

    return {
        "kind": "perfection-certificate",
        "k0": cert.k0,
        "mu": list(cert.mu.actions),
        "tau": [[format_rational(p) for p in v] for v in cert.tau],
        "uniform": [[format_rational(p) for p in v] for v in cert.uniform],
        "polynomials": [[[format_rational(c) for c in p.coeffs] for p in row] for row in cert.polynomials],
        "sign_proofs": [[proof(p) for p in row] for row in cert.sign_proofs],
    }


def serialize_certificate(cert: PerfectionCertificate) -> str:
    return _dumps(certificate_to_json(cert))


def parse_certificate(text: str) -> PerfectionCertificate:
    doc = _loads(text)
    _expect(isinstance(doc, dict) and doc.get("kind") == "perfection-certificate", "kind",
            "not a perfection certificate")

    def vectors(key):
        _expect(isinstance(doc.get(key), list), key, "expected a list of vectors")
        return tuple(tuple(parse_rational(x, f"{key}[{i}][{k}]") for k, x in enumerate(v))
                     for i, v in enumerate(doc[key]))

    def proof(obj, where):
        _expect(isinstance(obj, dict), where, "expected an object")
        if obj.get("zero"):
            return SignProof(zero=True)
        ivs = obj.get("intervals", [])
        _expect(isinstance(ivs, list) and all(isinstance(iv, list) and len(iv) == 2 for iv in ivs), where,
                "intervals must be [lo, hi] pairs")
        return SignProof(
            shift=int(obj.get("shift", 0)),
            intervals=tuple((parse_rational(a, where), parse_rational(b, where)) for a, b in ivs),
        )

    k0 = doc.get("k0")
    _expect(isinstance(k0, int) and not isinstance(k0, bool), "k0", "expected an integer")
    mu = doc.get("mu")
    _expect(isinstance(mu, list) and all(isinstance(a, int) for a in mu), "mu", "expected action indices")
    try:
        tau = MixedProfile(vectors("tau"))
        uniform = MixedProfile(vectors("uniform"))
    except (ValueError, DimensionError) as exc:
        raise DocumentError(f"profile: {exc}") from None
    polys = tuple(
        tuple(Poly(parse_rational(c, f"polynomials[{i}][{a}]") for c in p) for a, p in enumerate(row))
        for i, row in enumerate(doc.get("polynomials", []))
    )
    proofs = tuple(
        tuple(proof(p, f"sign_proofs[{i}][{a}]") for a, p in enumerate(row))
        for i, row in enumerate(doc.get("sign_proofs", []))
    )
    return PerfectionCertificate(PureProfile(tuple(mu)), tau, uniform, k0, polys, proofs)
