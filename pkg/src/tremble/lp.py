"""Exact rational linear programming.

Two-phase tableau simplex over :class:`fractions.Fraction` with Bland's
anti-cycling rule.  Every answer carries a certificate that is re-checked
before it is returned:

* optimal: a primal point and row multipliers with zero duality gap;
* infeasible: Farkas row multipliers;
* unbounded: a feasible point and an improving ray.

Sign convention for row multipliers ``y`` (the program is a maximisation):
``y_i >= 0`` on ``<=`` rows, ``y_i <= 0`` on ``>=`` rows, free on ``=`` rows.
Multipliers on variable bounds are not stored; they are implied by the
reduced costs ``c - A^T y``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from typing import Optional, Sequence

from .game import DimensionError, as_rational

LE, EQ, GE = "<=", "=", ">="
_SENSES = {"<=": LE, "=": EQ, "==": EQ, ">=": GE}

Bound = Optional[Fraction]


class LPCertificateError(AssertionError):
    """A solver certificate failed its own exact recheck (a solver bug)."""


class Status(str, Enum):
    OPTIMAL = "optimal"
    INFEASIBLE = "infeasible"
    UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LinearProgram:
    """maximize ``objective . x`` subject to ``rows[i] . x (senses[i]) rhs[i]``
    and ``lower_j <= x_j <= upper_j``.  Bounds default to ``0 <= x_j``."""

    objective: tuple[Fraction, ...]
    rows: tuple[tuple[Fraction, ...], ...] = ()
    senses: tuple[str, ...] = ()
    rhs: tuple[Fraction, ...] = ()
    bounds: Optional[tuple[tuple[Bound, Bound], ...]] = None

    def __post_init__(self):
        c = tuple(as_rational(v) for v in self.objective)
        n = len(c)
        rows = tuple(tuple(as_rational(v) for v in r) for r in self.rows)
        for i, r in enumerate(rows):
            if len(r) != n:
                raise DimensionError(f"row {i} has {len(r)} coefficients, expected {n}")
        if len(self.senses) != len(rows) or len(self.rhs) != len(rows):
            raise DimensionError("senses and rhs must have one entry per row")
        try:
            senses = tuple(_SENSES[s] for s in self.senses)
        except KeyError as exc:
            raise ValueError(f"unknown constraint sense {exc.args[0]!r}") from None
        rhs = tuple(as_rational(v) for v in self.rhs)
        bounds = self.bounds
        if bounds is None:
            bounds = ((Fraction(0), None),) * n
        if len(bounds) != n:
            raise DimensionError(f"expected {n} variable bounds, got {len(bounds)}")
        bounds = tuple(
            (None if lo is None else as_rational(lo), None if hi is None else as_rational(hi)) for lo, hi in bounds
        )
        for j, (lo, hi) in enumerate(bounds):
            if lo is not None and hi is not None and lo > hi:
                raise ValueError(f"variable {j} has lower bound above upper bound")
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "senses", senses)
        object.__setattr__(self, "rhs", rhs)
        object.__setattr__(self, "bounds", bounds)

    @property
    def n_vars(self) -> int:
        return len(self.objective)

    @property
    def n_rows(self) -> int:
        return len(self.rows)


@dataclass(frozen=True)
class LPSolution:
    status: Status
    primal: tuple[Fraction, ...] = ()
    objective_value: Optional[Fraction] = None
    dual: tuple[Fraction, ...] = ()
    ray: Optional[tuple[Fraction, ...]] = None

    @property
    def optimal(self) -> bool:
        return self.status is Status.OPTIMAL


@dataclass(frozen=True)
class Feasibility:
    feasible: bool
    point: tuple[Fraction, ...] = ()
    farkas: tuple[Fraction, ...] = ()


def _dot(u, v) -> Fraction:
    return sum((a * b for a, b in zip(u, v)), Fraction(0))


# -- certificate checks ------------------------------------------------------


def _row_value_ok(value, sense, b) -> bool:
    return value <= b if sense == LE else value >= b if sense == GE else value == b


def is_feasible_point(lp: LinearProgram, x: Sequence[Fraction]) -> bool:
    if len(x) != lp.n_vars:
        return False
    for (lo, hi), v in zip(lp.bounds, x):
        if (lo is not None and v < lo) or (hi is not None and v > hi):
            return False
    return all(_row_value_ok(_dot(r, x), s, b) for r, s, b in zip(lp.rows, lp.senses, lp.rhs))


def _multiplier_signs_ok(lp: LinearProgram, y) -> bool:
    if len(y) != lp.n_rows:
        return False
    for s, v in zip(lp.senses, y):
        if (s == LE and v < 0) or (s == GE and v > 0):
            return False
    return True


def _combined_row(lp: LinearProgram, y) -> list[Fraction]:
    g = [Fraction(0)] * lp.n_vars
    for r, v in zip(lp.rows, y):
        if v:
            for j, a in enumerate(r):
                g[j] += v * a
    return g


def dual_objective(lp: LinearProgram, y: Sequence[Fraction]) -> Optional[Fraction]:
    """Objective of the dual solution induced by row multipliers ``y``.

    Returns None when ``y`` is not dual feasible, i.e. when some reduced cost
    would have to be absorbed by a bound that does not exist.
    """
    if not _multiplier_signs_ok(lp, y):
        return None
    total = _dot(y, lp.rhs)
    for j, g in enumerate(_combined_row(lp, y)):
        d = lp.objective[j] - g
        lo, hi = lp.bounds[j]
        if d > 0:
            if hi is None:
                return None
            total += d * hi
        elif d < 0:
            if lo is None:
                return None
            total += d * lo
    return total


def is_farkas_certificate(lp: LinearProgram, y: Sequence[Fraction]) -> bool:
    """True iff ``y`` proves that no point satisfies the rows and bounds."""
    if not _multiplier_signs_ok(lp, y):
        return False
    lowest = Fraction(0)
    for j, g in enumerate(_combined_row(lp, y)):
        lo, hi = lp.bounds[j]
        if g > 0:
            if lo is None:
                return False
            lowest += g * lo
        elif g < 0:
            if hi is None:
                return False
            lowest += g * hi
    return lowest > _dot(y, lp.rhs)


def is_improving_ray(lp: LinearProgram, d: Sequence[Fraction]) -> bool:
    if len(d) != lp.n_vars:
        return False
    for (lo, hi), v in zip(lp.bounds, d):
        if (lo is not None and v < 0) or (hi is not None and v > 0):
            return False
    for r, s in zip(lp.rows, lp.senses):
        v = _dot(r, d)
        if (s == LE and v > 0) or (s == GE and v < 0) or (s == EQ and v != 0):
            return False
    return _dot(lp.objective, d) > 0


def check_solution(lp: LinearProgram, sol: LPSolution) -> None:
    """Raise :class:`LPCertificateError` unless ``sol`` is certified for ``lp``."""
    if sol.status is Status.OPTIMAL:
        if not is_feasible_point(lp, sol.primal):
            raise LPCertificateError("primal point is infeasible")
        value = _dot(lp.objective, sol.primal)
        if value != sol.objective_value:
            raise LPCertificateError("reported objective does not match the primal point")
        if dual_objective(lp, sol.dual) != value:
            raise LPCertificateError("dual certificate is infeasible or leaves a duality gap")
    elif sol.status is Status.INFEASIBLE:
        if not is_farkas_certificate(lp, sol.dual):
            raise LPCertificateError("Farkas certificate does not prove infeasibility")
    else:
        if not is_feasible_point(lp, sol.primal):
            raise LPCertificateError("unbounded status without a feasible point")
        if sol.ray is None or not is_improving_ray(lp, sol.ray):
            raise LPCertificateError("unbounded status without an improving ray")


# -- standard form -----------------------------------------------------------


@dataclass
class _StandardForm:
    """``A x' (senses) b, x' >= 0`` with ``b >= 0`` plus the map back to ``x``."""

    A: list[list[Fraction]]
    b: list[Fraction]
    senses: list[str]
    c: list[Fraction]
    flips: list[int]  # +1/-1 per original row
    columns: list[tuple[int, int]]  # (original variable, sign) per internal column
    offsets: list[Fraction]
    n_original_rows: int
    const: Fraction = Fraction(0)

    def to_original(self, xs: Sequence[Fraction], with_offset: bool = True) -> tuple[Fraction, ...]:
        x = list(self.offsets) if with_offset else [Fraction(0)] * len(self.offsets)
        for (j, sign), v in zip(self.columns, xs):
            x[j] += sign * v
        return tuple(x)


def _standardise(lp: LinearProgram) -> _StandardForm:
    n = lp.n_vars
    columns: list[tuple[int, int]] = []
    offsets = [Fraction(0)] * n
    upper_rows: list[tuple[int, Fraction]] = []
    for j, (lo, hi) in enumerate(lp.bounds):
        if lo is not None:
            offsets[j] = lo
            columns.append((j, 1))
            if hi is not None:
                upper_rows.append((len(columns) - 1, hi - lo))
        elif hi is not None:
            offsets[j] = hi
            columns.append((j, -1))
        else:
            columns.append((j, 1))
            columns.append((j, -1))

    A, b, senses, flips = [], [], [], []
    for r, s, rhs in zip(lp.rows, lp.senses, lp.rhs):
        row = [sign * r[j] for j, sign in columns]
        rhs = rhs - _dot(r, offsets)
        flip = 1
        if rhs < 0:
            flip = -1
            row = [-v for v in row]
            rhs = -rhs
            s = {LE: GE, GE: LE, EQ: EQ}[s]
        A.append(row)
        b.append(rhs)
        senses.append(s)
        flips.append(flip)
    for col, width in upper_rows:
        row = [Fraction(0)] * len(columns)
        row[col] = Fraction(1)
        A.append(row)
        b.append(width)
        senses.append(LE)
    c = [sign * lp.objective[j] for j, sign in columns]
    return _StandardForm(A, b, senses, c, flips, columns, offsets, lp.n_rows, _dot(lp.objective, offsets))


# -- tableau -----------------------------------------------------------------


@dataclass
class _Tableau:
    T: list[list[Fraction]]
    rhs: list[Fraction]
    basis: list[int]
    cost: list[Fraction]
    banned: set[int] = field(default_factory=set)
    d: list[Fraction] = field(default_factory=list)

    def price(self) -> None:
        """Recompute reduced costs ``d_j = c_j - c_B B^-1 A_j``."""
        d = list(self.cost)
        for i, bi in enumerate(self.basis):
            cb = self.cost[bi]
            if cb:
                row = self.T[i]
                for j, a in enumerate(row):
                    if a:
                        d[j] -= cb * a
        self.d = d

    def objective(self) -> Fraction:
        return sum((self.cost[bi] * v for bi, v in zip(self.basis, self.rhs)), Fraction(0))

    def pivot(self, r: int, col: int) -> None:
        row = self.T[r]
        p = row[col]
        if p != 1:
            row[:] = [v / p for v in row]
            self.rhs[r] /= p
        for i, other in enumerate(self.T):
            if i != r:
                f = other[col]
                if f:
                    other[:] = [a - f * b for a, b in zip(other, row)]
                    self.rhs[i] -= f * self.rhs[r]
        f = self.d[col]
        if f:
            self.d = [a - f * b for a, b in zip(self.d, row)]
        self.basis[r] = col

    def run(self) -> Optional[int]:
        """Bland's rule to optimality.  Returns an unbounded column or None."""
        while True:
            entering = next((j for j, v in enumerate(self.d) if v > 0 and j not in self.banned), None)
            if entering is None:
                return None
            best = None
            for i, row in enumerate(self.T):
                a = row[entering]
                if a > 0:
                    key = (self.rhs[i] / a, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return entering
            self.pivot(best[1], entering)


def _simplex(sf: _StandardForm):
    m = len(sf.A)
    n = len(sf.c)
    # columns: structural | one slack/surplus per inequality | one artificial per >=/= row
    slack_col, art_col = {}, {}
    k = n
    for i, s in enumerate(sf.senses):
        if s != EQ:
            slack_col[i] = k
            k += 1
    for i, s in enumerate(sf.senses):
        if s != LE:
            art_col[i] = k
            k += 1
    width = k
    T = []
    for i in range(m):
        row = list(sf.A[i]) + [Fraction(0)] * (width - n)
        if i in slack_col:
            row[slack_col[i]] = Fraction(1 if sf.senses[i] == LE else -1)
        if i in art_col:
            row[art_col[i]] = Fraction(1)
        T.append(row)
    init = [slack_col[i] if sf.senses[i] == LE else art_col[i] for i in range(m)]
    artificials = set(art_col.values())

    phase1_cost = [Fraction(-1) if j in artificials else Fraction(0) for j in range(width)]
    tab = _Tableau(T, list(sf.b), list(init), phase1_cost)
    tab.price()
    tab.run()
    if tab.objective() < 0:
        y = [phase1_cost[init[i]] - tab.d[init[i]] for i in range(m)]
        return Status.INFEASIBLE, None, y, None

    for i in range(m):
        if tab.basis[i] in artificials:
            col = next((j for j, a in enumerate(tab.T[i]) if a and j not in artificials), None)
            if col is not None:
                tab.pivot(i, col)

    tab.cost = list(sf.c) + [Fraction(0)] * (width - n)
    tab.banned = artificials
    tab.price()
    unbounded = tab.run()

    xs = [Fraction(0)] * width
    for i, bi in enumerate(tab.basis):
        xs[bi] = tab.rhs[i]
    if unbounded is not None:
        ray = [Fraction(0)] * width
        ray[unbounded] = Fraction(1)
        for i, bi in enumerate(tab.basis):
            ray[bi] = -tab.T[i][unbounded]
        return Status.UNBOUNDED, xs[:n], None, ray[:n]
    y = [tab.cost[init[i]] - tab.d[init[i]] for i in range(m)]
    return Status.OPTIMAL, xs[:n], y, None


def solve(lp: LinearProgram) -> LPSolution:
    """Solve ``lp`` exactly; the returned certificate has already been rechecked."""
    sf = _standardise(lp)
    status, xs, y, ray = _simplex(sf)
    if y is not None:
        y = tuple(v * f for v, f in zip(y[: sf.n_original_rows], sf.flips))
    if status is Status.INFEASIBLE:
        sol = LPSolution(status, dual=y)
    elif status is Status.UNBOUNDED:
        sol = LPSolution(status, primal=sf.to_original(xs), ray=sf.to_original(ray, with_offset=False))
    else:
        x = sf.to_original(xs)
        sol = LPSolution(status, primal=x, objective_value=_dot(lp.objective, x), dual=y)
    check_solution(lp, sol)
    return sol


def feasible(lp: LinearProgram) -> Feasibility:
    """Decide feasibility of the constraints of ``lp`` (its objective is ignored)."""
    probe = LinearProgram((0,) * lp.n_vars, lp.rows, lp.senses, lp.rhs, lp.bounds)
    sol = solve(probe)
    if sol.status is Status.INFEASIBLE:
        return Feasibility(False, farkas=sol.dual)
    return Feasibility(True, point=sol.primal)
