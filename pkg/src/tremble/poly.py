"""Univariate rational polynomials and Sturm-sequence sign certificates."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .game import as_rational


class Poly:
    """Polynomial with Fraction coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_rational(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def const(cls, c) -> "Poly":
        return cls([c])

    @property
    def degree(self) -> int:
        """Degree, with -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def lead(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Poly({[str(c) for c in self.coeffs]})"

    def __add__(self, other: "Poly") -> "Poly":
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly((a[k] if k < len(a) else 0) + (b[k] if k < len(b) else 0) for k in range(n))

    def __neg__(self) -> "Poly":
        return Poly(-c for c in self.coeffs)

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            other = Poly.const(other)
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def derivative(self) -> "Poly":
        return Poly(k * c for k, c in enumerate(self.coeffs) if k)

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [Fraction(0)] * max(len(rem) - len(other.coeffs) + 1, 0)
        lead = other.lead()
        dd = other.degree
        while len(rem) - 1 >= dd and rem:
            shift = len(rem) - 1 - dd
            f = rem[-1] / lead
            q[shift] = f
            for k, c in enumerate(other.coeffs):
                rem[shift + k] -= f * c
            rem.pop()
            while rem and rem[-1] == 0:
                rem.pop()
        return Poly(q), Poly(rem)

    def trailing_zeros(self) -> int:
        """Multiplicity of the root at 0 (0 for the zero polynomial)."""
        for k, c in enumerate(self.coeffs):
            if c:
                return k
        return 0

    def shift_down(self, m: int) -> "Poly":
        """Divide by ``t**m``; the low coefficients must vanish."""
        if any(self.coeffs[:m]):
            raise ValueError("polynomial is not divisible by t**m")
        return Poly(self.coeffs[m:])


def sturm_sequence(p: Poly) -> list[Poly]:
    """Sturm chain of the square-free part of ``p``.

    The plain chain ends in gcd(p, p') and vanishes identically at a repeated
    root, which breaks counts at such an endpoint; dividing through by the last
    element removes that failure.
    """
    seq = [p, p.derivative()]
    while not seq[-1].is_zero():
        _, r = seq[-2].divmod(seq[-1])
        seq.append(-r)
    seq.pop()
    g = seq[-1]
    out = []
    for s in seq:
        q, r = s.divmod(g)
        assert r.is_zero()
        out.append(q)
    return out


def sign_variations(seq: Sequence[Poly], x) -> int:
    signs = [v for v in (q(x) for q in seq) if v != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if (a > 0) != (b > 0))


def count_roots(p: Poly, a, b, seq: Optional[list[Poly]] = None) -> int:
    """Number of distinct real roots of ``p`` in the half-open interval ``(a, b]``."""
    if p.is_zero():
        raise ValueError("the zero polynomial has infinitely many roots")
    if seq is None:
        seq = sturm_sequence(p)
    return sign_variations(seq, a) - sign_variations(seq, b)


def isolate_roots(p: Poly, a, b) -> list[tuple[Fraction, Fraction]]:
    """Disjoint intervals ``(lo, hi]`` in ``(a, b]`` each holding exactly one root.

    Interval endpoints other than ``b`` are never roots of ``p``.
    """
    a, b = as_rational(a), as_rational(b)
    seq = sturm_sequence(p)
    out = []
    stack = [(a, b)]
    while stack:
        lo, hi = stack.pop()
        n = count_roots(p, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append((lo, hi))
            continue
        mid = (lo + hi) / 2
        step = (hi - lo) / 4
        while p(mid) == 0:
            mid -= step
            step /= 2
        stack.append((mid, hi))
        stack.append((lo, mid))
    out.sort()
    return out


@dataclass(frozen=True)
class SignProof:
    """Evidence that a polynomial ``p`` is ``>= 0`` on ``(0, h]``.

    ``p = t**shift * q`` with ``q(0) > 0``; ``intervals`` isolate every root of
    ``q`` in ``(0, h]`` and ``q`` is positive at each right endpoint (except
    possibly at ``h`` itself), so ``q`` never changes sign to negative.  The
    zero polynomial has ``zero=True`` and nothing else.
    """

    shift: int = 0
    intervals: tuple[tuple[Fraction, Fraction], ...] = ()
    zero: bool = False


@dataclass(frozen=True)
class NegativeSpan:
    """A rational interval ``(lo, hi)`` on which a polynomial is strictly negative."""

    lo: Fraction
    hi: Fraction


def nonnegativity_proof(p: Poly, h) -> SignProof | NegativeSpan:
    """Prove ``p >= 0`` on ``(0, h]`` or exhibit an interval where ``p < 0``."""
    h = as_rational(h)
    if p.is_zero():
        return SignProof(zero=True)
    m = p.trailing_zeros()
    q = p.shift_down(m)
    seq = sturm_sequence(q)
    intervals = isolate_roots(q, 0, h)
    if q(0) < 0:
        # shrink toward 0 until no root is left inside
        s = intervals[0][1] if intervals else h
        while count_roots(q, 0, s, seq):
            s /= 2
        return NegativeSpan(Fraction(0), s)
    for k, (lo, hi) in enumerate(intervals):
        if q(hi) < 0:
            if k + 1 < len(intervals):
                return NegativeSpan(hi, intervals[k + 1][0])
            if hi < h:
                return NegativeSpan(hi, h)
            # the sign change is inside (lo, h]: move lo up past the root
            while count_roots(q, lo, h, seq):
                lo = (lo + h) / 2
            return NegativeSpan(lo, h)
    # covers the last segment when its right end is h and h is not a root
    return SignProof(shift=m, intervals=tuple(intervals))


def check_sign_proof(p: Poly, h, proof: SignProof) -> bool:
    """Independent recheck of a :class:`SignProof` for ``p`` on ``(0, h]``."""
    h = as_rational(h)
    if proof.zero:
        return p.is_zero()
    if p.is_zero() or proof.shift < 0:
        return False
    try:
        q = p.shift_down(proof.shift)
    except ValueError:
        return False
    if q(0) <= 0:
        return False
    seq = sturm_sequence(q)
    prev_hi = Fraction(0)
    for k, (lo, hi) in enumerate(proof.intervals):
        if not (prev_hi <= lo < hi <= h):
            return False
        if count_roots(q, lo, hi, seq) != 1:
            return False
        v = q(hi)
        if v < 0 or (v == 0 and not (hi == h and k == len(proof.intervals) - 1)):
            return False
        prev_hi = hi
    return count_roots(q, 0, h, seq) == len(proof.intervals)
