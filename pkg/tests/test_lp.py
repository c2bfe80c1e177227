import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from tremble.game import DimensionError
from tremble.lp import (
    LinearProgram,
    Status,
    check_solution,
    dual_objective,
    feasible,
    is_farkas_certificate,
    solve,
)

from oracles import vertex_max

F = Fraction


def le(c, A, b):
    return LinearProgram(tuple(c), tuple(map(tuple, A)), ("<=",) * len(A), tuple(b))


def test_single_bound():
    sol = solve(le([1], [[1]], [3]))
    assert sol.status is Status.OPTIMAL
    assert sol.primal == (3,) and sol.objective_value == 3


def test_degenerate_optimum_face():
    sol = solve(le([1, 1], [[1, 1]], [1]))
    assert sol.objective_value == 1
    assert sum(sol.primal) == 1


def test_matching_pennies_value():
    # maximise v subject to x1 - x2 >= v, -x1 + x2 >= v, x1 + x2 = 1
    lp = LinearProgram(
        (0, 0, 1),
        ((1, -1, -1), (-1, 1, -1), (1, 1, 0)),
        (">=", ">=", "="),
        (0, 0, 1),
        ((0, None), (0, None), (None, None)),
    )
    sol = solve(lp)
    assert sol.objective_value == 0
    assert sol.primal[:2] == (F(1, 2), F(1, 2))


def test_infeasible_has_farkas_certificate():
    lp = LinearProgram((0,), ((1,), (1,)), (">=", "<="), (1, 0), ((None, None),))
    sol = solve(lp)
    assert sol.status is Status.INFEASIBLE
    assert is_farkas_certificate(lp, sol.dual)
    res = feasible(lp)
    assert not res.feasible and res.farkas == sol.dual


def test_feasibility_examples():
    assert feasible(LinearProgram((0, 0))).point == (0, 0)
    res = feasible(LinearProgram((0, 0, 0), ((1, 1, 1),), ("=",), (1,)))
    assert res.feasible and sum(res.point) == 1 and min(res.point) >= 0


def test_unbounded_ray():
    lp = LinearProgram((1, 1), ((1, -1),), ("<=",), (1,))
    sol = solve(lp)
    assert sol.status is Status.UNBOUNDED
    check_solution(lp, sol)


def test_free_and_boxed_variables():
    lp = LinearProgram((1, -1), ((1, 1),), ("=",), (2,), ((None, None), (-3, 5)))
    sol = solve(lp)
    assert sol.objective_value == 8 and sol.primal == (5, -3)
    lp = LinearProgram((-1,), (), (), (), ((None, 4),))
    assert solve(lp).status is Status.UNBOUNDED
    lp = LinearProgram((1,), (), (), (), ((None, 4),))
    assert solve(lp).objective_value == 4


def test_beale_cycling_example_terminates():
    lp = le(
        [F(3, 4), -20, F(1, 2), -6],
        [[F(1, 4), -8, -1, 9], [F(1, 2), -12, F(-1, 2), 3], [0, 0, 1, 0]],
        [0, 0, 1],
    )
    sol = solve(lp)
    assert sol.objective_value == F(5, 4)


def test_malformed_dimensions():
    with pytest.raises(DimensionError):
        LinearProgram((1, 2), ((1,),), ("<=",), (1,))
    with pytest.raises(DimensionError):
        LinearProgram((1,), ((1,),), (), (1,))
    with pytest.raises(ValueError):
        LinearProgram((1,), ((1,),), ("<",), (1,))


def test_redundant_equalities():
    lp = LinearProgram((1, 2), ((1, 1), (2, 2), (1, 0)), ("=", "=", "<="), (1, 2, 1))
    sol = solve(lp)
    assert sol.objective_value == 2


def _random_bounded(rng):
    n = rng.randint(2, 3)
    m = rng.randint(1, 4)
    A = [[rng.randint(-3, 5) for _ in range(n)] for _ in range(m)] + [[1] * n]
    b = [rng.randint(0, 9) for _ in range(m)] + [rng.randint(1, 10)]
    c = [rng.randint(-4, 6) for _ in range(n)]
    return c, A, b


def test_dual_program_has_same_value():
    # max c.x, Ax <= b, x >= 0   vs   min b.y, A^T y >= c, y >= 0
    rng = random.Random(99)
    for _ in range(20):
        c, A, b = _random_bounded(rng)
        primal = solve(le(c, A, b))
        AT = [[A[i][j] for i in range(len(A))] for j in range(len(c))]
        dual = solve(LinearProgram(tuple(-v for v in b), tuple(map(tuple, AT)), (">=",) * len(c), tuple(c)))
        assert primal.objective_value == -dual.objective_value
        assert dual_objective(le(c, A, b), primal.dual) == primal.objective_value


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_agrees_with_vertex_enumeration(seed):
    c, A, b = _random_bounded(random.Random(seed))
    assert solve(le(c, A, b)).objective_value == vertex_max(c, A, b)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 10**9))
def test_certificates_on_mixed_senses(seed):
    rng = random.Random(seed)
    n, m = rng.randint(1, 3), rng.randint(1, 4)
    rows = tuple(tuple(rng.randint(-3, 3) for _ in range(n)) for _ in range(m))
    senses = tuple(rng.choice(("<=", ">=", "=")) for _ in range(m))
    rhs = tuple(rng.randint(-4, 4) for _ in range(m))
    bounds = tuple(rng.choice(((0, None), (None, None), (-2, 3), (None, 1))) for _ in range(n))
    lp = LinearProgram(tuple(rng.randint(-3, 3) for _ in range(n)), rows, senses, rhs, bounds)
    check_solution(lp, solve(lp))
