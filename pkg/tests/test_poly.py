from fractions import Fraction

import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from tremble.poly import (
    NegativeSpan,
    Poly,
    SignProof,
    check_sign_proof,
    count_roots,
    isolate_roots,
    nonnegativity_proof,
)

F = Fraction
t = sympy.Symbol("t")

coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=6), min_size=1, max_size=6)


def _sympy(p: Poly):
    return sympy.Poly(list(reversed([sympy.Rational(c.numerator, c.denominator) for c in p.coeffs])), t)


def test_arithmetic():
    p = Poly([1, 1])
    assert p * p == Poly([1, 2, 1])
    q, r = Poly([1, 2, 1]).divmod(Poly([1, 1]))
    assert q == Poly([1, 1]) and r.is_zero()
    assert Poly([0, 0, 3]).trailing_zeros() == 2
    assert Poly([1, 2, 3]).derivative() == Poly([2, 6])


def test_root_counting_examples():
    p = Poly([-2, 0, 1])  # t^2 - 2
    assert count_roots(p, 0, 2) == 1
    assert count_roots(p, -2, 2) == 2
    double = Poly([F(1, 4), -1, 1])  # (t - 1/2)^2
    assert count_roots(double, 0, 1) == 1
    assert count_roots(double, 0, F(1, 2)) == 1
    assert count_roots(double, F(1, 2), 1) == 0


@settings(max_examples=150, deadline=None)
@given(coeffs, st.fractions(min_value=F(1, 50), max_value=2, max_denominator=50))
def test_count_matches_sympy(cs, b):
    p = Poly(cs)
    if p.is_zero() or p.degree == 0:
        return
    assert count_roots(p, 0, b) == _sympy(p).count_roots(0, b) - (1 if p(0) == 0 else 0)


@settings(max_examples=150, deadline=None)
@given(coeffs, st.fractions(min_value=F(1, 50), max_value=1, max_denominator=50))
def test_nonnegativity_matches_sympy(cs, h):
    p = Poly(cs)
    res = nonnegativity_proof(p, h)
    if p.is_zero():
        assert res == SignProof(zero=True)
        return
    # sympy oracle: p >= 0 on (0, h] iff no sign change to negative there
    roots = sorted(set(r for r in sympy.real_roots(_sympy(p)) if 0 < r <= h)) if p.degree > 0 else []
    points = [sympy.Rational(0)] + roots + [sympy.Rational(h.numerator, h.denominator)]
    samples = [(a + b) / 2 for a, b in zip(points, points[1:])] + [points[-1]]
    expr = _sympy(p).as_expr()
    truly = all(expr.subs(t, s) >= 0 for s in samples)
    if isinstance(res, SignProof):
        assert truly
        assert check_sign_proof(p, h, res)
    else:
        assert not truly
        assert isinstance(res, NegativeSpan)
        assert 0 <= res.lo < res.hi <= h
        assert p((res.lo + res.hi) / 2) < 0
        lo, hi = (sympy.Rational(x.numerator, x.denominator) for x in (res.lo, res.hi))
        assert not [r for r in sympy.real_roots(_sympy(p)) if lo < r < hi]


def test_repeated_root_at_endpoint():
    p = Poly([0, 0, 1, -1])  # t^2 (1 - t)
    assert count_roots(p, 0, F(1, 50)) == 0
    assert count_roots(p, -1, F(1, 50)) == 1
    assert count_roots(p, 0, 2) == 1
    q = Poly([F(1, 16), F(-1, 2), 1])  # (t - 1/4)^2, root at the right end
    assert count_roots(q, 0, F(1, 4)) == 1
    assert check_sign_proof(q, F(1, 4), nonnegativity_proof(q, F(1, 4)))


def test_isolation_intervals_are_disjoint():
    p = Poly([F(-6, 1000), F(11, 100), F(-6, 10), 1])  # roots 1/10, 1/5, 3/10
    ivs = isolate_roots(p, 0, 1)
    assert len(ivs) == 3
    for (lo, hi), (lo2, _) in zip(ivs, ivs[1:]):
        assert hi <= lo2
    for lo, hi in ivs:
        assert count_roots(p, lo, hi) == 1


def test_tampered_proof_rejected():
    p = Poly([F(1, 100), F(-1, 5), 1])  # (t - 1/10)^2
    proof = nonnegativity_proof(p, F(1, 2))
    assert check_sign_proof(p, F(1, 2), proof)
    assert not check_sign_proof(p, F(1, 2), SignProof(shift=0, intervals=()))
    assert not check_sign_proof(Poly([F(1, 100), F(-1, 4), 1]), F(1, 2), proof)
