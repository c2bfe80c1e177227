"""Brute-force oracles kept independent of the code paths they check."""

import itertools
from fractions import Fraction


def solve_square(M, v):
    """Exact Gaussian elimination; None if singular."""
    n = len(M)
    A = [list(map(Fraction, row)) + [Fraction(x)] for row, x in zip(M, v)]
    for col in range(n):
        piv = next((r for r in range(col, n) if A[r][col] != 0), None)
        if piv is None:
            return None
        A[col], A[piv] = A[piv], A[col]
        for r in range(n):
            if r != col and A[r][col] != 0:
                f = A[r][col] / A[col][col]
                A[r] = [a - f * b for a, b in zip(A[r], A[col])]
    return [A[r][n] / A[r][r] for r in range(n)]


def vertex_max(c, A, b):
    """max c.x s.t. A x <= b, x >= 0 by enumerating every basic solution.

    Assumes the feasible region is bounded and nonempty.
    """
    n = len(c)
    rows = [list(map(Fraction, r)) for r in A] + [[Fraction(-(k == j)) for k in range(n)] for j in range(n)]
    rhs = [Fraction(x) for x in b] + [Fraction(0)] * n
    best = None
    for subset in itertools.combinations(range(len(rows)), n):
        x = solve_square([rows[i] for i in subset], [rhs[i] for i in subset])
        if x is None:
            continue
        if all(sum(a * xi for a, xi in zip(r, x)) <= bi for r, bi in zip(rows, rhs)):
            val = sum(Fraction(ci) * xi for ci, xi in zip(c, x))
            if best is None or val > best:
                best = val
    return best


def simplex_grid_all(n, denominator):
    """Every distribution on n points with entries in multiples of 1/denominator."""
    for parts in itertools.product(range(denominator + 1), repeat=n):
        if sum(parts) == denominator:
            yield tuple(Fraction(p, denominator) for p in parts)


def pure_payoff(game, profile, player):
    return game.payoff(profile)[player]


def pure_nash_brute(game, profile):
    for i in range(game.n_players):
        here = pure_payoff(game, profile, i)
        for a in range(game.shape[i]):
            dev = list(profile)
            dev[i] = a
            if pure_payoff(game, dev, i) > here:
                return False
    return True


def dominated_by_grid(game, player, action, max_denominator=16):
    """Search mixtures over the other actions on a rational grid."""
    others = [b for b in range(game.shape[player]) if b != action]
    if not others:
        return False
    opp = [range(s) if j != player else [None] for j, s in enumerate(game.shape)]
    combos = list(itertools.product(*opp))

    def u(a, combo):
        p = list(combo)
        p[player] = a
        return game.payoff(p)[player]

    for d in range(1, max_denominator + 1):
        for w in simplex_grid_all(len(others), d):
            diffs = [sum(x * u(b, c) for x, b in zip(w, others)) - u(action, c) for c in combos]
            if all(v >= 0 for v in diffs) and any(v > 0 for v in diffs):
                return True
    return False


def zero_sum_2x2_value(M):
    """Row player's maximin value of a 2x2 matrix game by saddle point or equalisation."""
    M = [[Fraction(v) for v in row] for row in M]
    lower = max(min(row) for row in M)
    upper = min(max(M[0][j], M[1][j]) for j in range(2))
    if lower == upper:
        return lower
    (a, b), (c, d) = M
    return (a * d - b * c) / (a + d - b - c)


def mismatch_sweep(steps=64):
    """min over (p, q) of max(m, 1 - m) with m = p + q - 2pq on a grid."""
    best = None
    for i in range(steps + 1):
        for j in range(steps + 1):
            p, q = Fraction(i, steps), Fraction(j, steps)
            m = p + q - 2 * p * q
            v = max(m, 1 - m)
            best = v if best is None else min(best, v)
    return best


def maximin_by_vertices(matrix):
    """Row player's maximin of a nonnegative matrix via vertex enumeration.

    max v s.t. v <= sum_a p_a M[a][b] for every column b, sum p <= 1.
    """
    n_rows, n_cols = len(matrix), len(matrix[0])
    A = [[-matrix[a][b] for a in range(n_rows)] + [1] for b in range(n_cols)]
    A.append([1] * n_rows + [0])
    A.append([0] * n_rows + [1])
    bound = max(max(row) for row in matrix) + 1
    return vertex_max([0] * n_rows + [1], A, [0] * n_cols + [1, bound])


def gadget_violations(source, reduced):
    """Cells of the gadget breaking a construction rule, plus the bottom-cell count."""
    g, bot, r = reduced.gprime, reduced.bot_index, reduced.r
    bad = []
    if g.shape != tuple(n + 1 for n in source.shape) or tuple(bot) != source.shape:
        bad.append("shape")
    if any(acts[-1] != "_bot" for acts in g.actions):
        bad.append("labels")
    bot_cells = 0
    for p in itertools.product(*(range(n) for n in g.shape)):
        u = g.payoff(p)
        if u[1] != 0 or u[2] != 0:
            bad.append(("others", p))
        if any(a == b for a, b in zip(p, bot)):
            bot_cells += 1
            if u[0] != r:
                bad.append(("bottom", p))
        elif u[0] != source.payoff(p)[0]:
            bad.append(("copy", p))
    return bad, bot_cells
