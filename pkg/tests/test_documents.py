import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tremble.corpus import labels, matching_pennies
from tremble.documents import (
    DocumentError,
    GameDocument,
    parse_certificate,
    parse_game,
    parse_profile,
    parse_rational,
    serialize_certificate,
    serialize_game,
    serialize_profile,
)
from tremble.game import Game, MixedProfile
from tremble.reduction import build_gprime, mu_of
from tremble.refinement import build_witness_sequence, certify_witness

F = Fraction


def _random_game(rng):
    n = rng.randint(2, 4)
    shape = [rng.randint(1, 3) for _ in range(n)]

    def value():
        return F(rng.randint(-50, 50), rng.randint(1, 12))

    return Game.from_function(labels(shape), lambda p: tuple(value() for _ in range(n)))


def test_random_games_round_trip_byte_canonically():
    rng = random.Random(8)
    for k in range(200):
        g = _random_game(rng)
        meta = {"name": f"g{k}", "provenance": "seeded"} if k % 2 else {}
        text = serialize_game(GameDocument(g, meta))
        doc = parse_game(text)
        assert doc.game == g and doc.metadata == meta
        assert serialize_game(doc) == text


def test_non_canonical_input_is_canonicalised():
    text = '{ "actions": [["a"], ["x", "y"]], "players": 2,\n "payoffs": [[["2/4", 3], ["-0", "6/3"]]] }'
    doc = parse_game(text)
    assert doc.game.payoff((0, 0)) == (F(1, 2), 3)
    assert serialize_game(doc) == '{"players":2,"actions":[["a"],["x","y"]],"payoffs":[[["1/2","3"],["0","2"]]]}\n'


@pytest.mark.parametrize("text,where", [
    ("{", "line 1"),
    ("[]", "document"),
    ('{"players":1,"actions":[["a"]],"payoffs":[["1"]]}', "players"),
    ('{"players":2,"actions":[["a"],["x"]],"payoffs":[[["1","1/0"]]]}', "payoffs[0][0][1]"),
    ('{"players":2,"actions":[["a"],["x"]],"payoffs":[[["1","0.5"]]]}', "payoffs[0][0][1]"),
    ('{"players":2,"actions":[["a"],["x"]],"payoffs":[[["1",0.5]]]}', "payoffs[0][0][1]"),
    ('{"players":2,"actions":[["a","b"],["x"]],"payoffs":[[["1","1"]]]}', "payoffs"),
    ('{"players":2,"actions":[["a"],["x"]],"payoffs":[[["1"]]]}', "payoffs[0][0]"),
    ('{"players":2,"actions":[["a","a"],["x"]],"payoffs":[[["1","1"]],[["1","1"]]]}', "actions[0]"),
    ('{"players":2,"actions":[["a"],[]],"payoffs":[[]]}', "actions[1]"),
    ('{"players":2,"actions":[["a"],["x"]],"payoffs":[[["1","1"]]],"extra":1}', "unknown"),
    ('{"players":2,"actions":[["a"],["x"]],"payoffs":[[["1","1"]]],"metadata":{"bot":[1,0]}}', "metadata.bot"),
])
def test_parse_errors_name_the_position(text, where):
    with pytest.raises(DocumentError, match=where.replace("[", r"\[").replace("]", r"\]")):
        parse_game(text)


def test_rational_literals():
    assert parse_rational("-3/2", "x") == F(-3, 2)
    assert parse_rational("7", "x") == 7
    for bad in ("1/0", "1.5", "1e3", " 1", "1/-2", True, None, 1.5):
        with pytest.raises(DocumentError):
            parse_rational(bad, "x")


def test_profile_forms():
    g = matching_pennies()
    assert parse_profile('{"profile":["heads",1]}', g) == MixedProfile(((1, 0), (0, 1)))
    mixed = parse_profile('{"profile":[["1/3","2/3"],["1/2","1/2"]]}', g)
    assert mixed[0] == (F(1, 3), F(2, 3))
    assert serialize_profile(mixed) == '{"profile":[["1/3","2/3"],["1/2","1/2"]]}\n'
    assert parse_profile(serialize_profile(mixed), g) == mixed
    for bad in ('{"profile":["heads"]}', '{"profile":["edge","heads"]}', '{"profile":[2,0]}',
                '{"profile":[["1/2","1/3"],0]}', '{"profile":[["3/2","-1/2"],0]}', '{"p":[]}'):
        with pytest.raises(DocumentError):
            parse_profile(bad, g)


def test_certificate_round_trip():
    red = build_gprime(Game.from_function(labels((2, 1, 2)), lambda p: (p[0], 0, 0)), 2)
    mu = mu_of(red)
    cert = certify_witness(red.gprime, mu, build_witness_sequence(red.gprime, mu, MixedProfile.uniform(red.gprime)))
    text = serialize_certificate(cert)
    back = parse_certificate(text)
    assert back == cert
    assert serialize_certificate(back) == text
    with pytest.raises(DocumentError):
        parse_certificate(json.dumps({"kind": "something-else"}))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.lists(st.fractions(max_denominator=20), min_size=2, max_size=2), min_size=4, max_size=4),
       st.dictionaries(st.sampled_from(["name", "provenance", "note"]), st.text(max_size=8)))
def test_two_by_two_round_trip(values, meta):
    cells = tuple(tuple(v) for v in values)
    g = Game((("a", "b"), ("x", "y")), cells)
    doc = parse_game(serialize_game(GameDocument(g, meta)))
    assert doc.game == g and doc.metadata == meta
