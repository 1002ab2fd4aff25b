"""Exact rational linear programming and zero-sum matrix games.

The solver is a two-phase dictionary simplex over ``fractions.Fraction`` with
Bland's rule, so it terminates and its optimal vertex is reproducible.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfeasibleError, LPError, UnboundedError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass
class LPSolution:
    value: Fraction
    x: list
    duals: list = field(default_factory=list)


class _Dictionary:
    """Slack form: x_B[i] = b[i] - sum_j A[i][j] x_N[j];  z = v + sum_j c[j] x_N[j]."""

    def __init__(self, A, b, c, nonbasic, basic):
        self.A = A
        self.b = b
        self.c = c
        self.v = ZERO
        self.N = nonbasic
        self.B = basic

    def pivot(self, l, e):
        A, b, c = self.A, self.b, self.c
        row = A[l]
        piv = row[e]
        inv = ONE / piv
        for j in range(len(row)):
            if j != e and row[j]:
                row[j] *= inv
        row[e] = inv
        b[l] *= inv
        for i in range(len(A)):
            if i == l:
                continue
            r = A[i]
            coef = r[e]
            if not coef:
                continue
            for j in range(len(r)):
                if j != e and row[j]:
                    r[j] -= coef * row[j]
            r[e] = -coef * inv
            b[i] -= coef * b[l]
        coef = c[e]
        if coef:
            for j in range(len(c)):
                if j != e and row[j]:
                    c[j] -= coef * row[j]
            c[e] = -coef * inv
            self.v += coef * b[l]
        self.B[l], self.N[e] = self.N[e], self.B[l]

    def run(self):
        while True:
            enter = None
            for j, cj in enumerate(self.c):
                if cj > 0 and (enter is None or self.N[j] < self.N[enter]):
                    enter = j
            if enter is None:
                return
            leave = None
            best = None
            for i, r in enumerate(self.A):
                a = r[enter]
                if a > 0:
                    ratio = self.b[i] / a
                    if best is None or ratio < best or (ratio == best and self.B[i] < self.B[leave]):
                        best, leave = ratio, i
            if leave is None:
                raise UnboundedError("the linear program is unbounded")
            self.pivot(leave, enter)


def solve_lp(c, A_ub, b_ub, A_eq=(), b_eq=(), maximize=True):
    """Optimize ``c.x`` subject to ``A_ub x <= b_ub``, ``A_eq x = b_eq``, ``x >= 0``.

    Raises InfeasibleError or UnboundedError. ``duals`` holds one multiplier
    per inequality row (equality rows contribute the difference of their two
    halves), in the sign convention of the maximization form.
    """
    c = [Fraction(v) for v in c]
    n = len(c)
    rows = [[Fraction(v) for v in r] for r in A_ub]
    rhs = [Fraction(v) for v in b_ub]
    n_ub = len(rows)
    for r, v in zip(A_eq, b_eq):
        rows.append([Fraction(x) for x in r])
        rhs.append(Fraction(v))
        rows.append([-Fraction(x) for x in r])
        rhs.append(-Fraction(v))
    for r in rows:
        if len(r) != n:
            raise LPError("constraint row length does not match the objective")
    if not maximize:
        c = [-v for v in c]
    m = len(rows)

    if any(v < 0 for v in rhs):
        aux = n + m
        D = _Dictionary([r[:] + [-ONE] for r in rows], rhs[:], [ZERO] * n + [-ONE],
                        list(range(n)) + [aux], list(range(n, n + m)))
        worst = min(range(m), key=lambda i: (D.b[i], i))
        D.pivot(worst, n)
        D.run()
        if D.v < 0:
            raise InfeasibleError("the linear program is infeasible")
        if aux in D.B:
            l = D.B.index(aux)
            e = next(j for j, a in enumerate(D.A[l]) if a)
            D.pivot(l, e)
        k = D.N.index(aux)
        for r in D.A:
            del r[k]
        del D.N[k]
        A, b, N, B = D.A, D.b, D.N, D.B
    else:
        A, b, N, B = [r[:] for r in rows], rhs[:], list(range(n)), list(range(n, n + m))

    # objective in terms of the current nonbasic variables
    obj = [ZERO] * len(N)
    v = ZERO
    for j, var in enumerate(N):
        if var < n:
            obj[j] += c[var]
    for i, var in enumerate(B):
        if var < n and c[var]:
            v += c[var] * b[i]
            for j in range(len(N)):
                obj[j] -= c[var] * A[i][j]
    D = _Dictionary(A, b, obj, N, B)
    D.v = v
    D.run()

    x = [ZERO] * n
    for i, var in enumerate(D.B):
        if var < n:
            x[var] = D.b[i]
    slack_dual = [ZERO] * m
    for j, var in enumerate(D.N):
        if var >= n:
            slack_dual[var - n] = -D.c[j]
    duals = slack_dual[:n_ub]
    for k in range(len(A_eq)):
        duals.append(slack_dual[n_ub + 2 * k] - slack_dual[n_ub + 2 * k + 1])
    value = D.v if maximize else -D.v
    return LPSolution(value, x, duals)


# ---------------------------------------------------------------------------
# matrix games


@dataclass
class GameMatrix:
    entries: list
    row_labels: list = None
    col_labels: list = None

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("a game needs at least one row and one column")
        width = len(self.entries[0])
        if any(len(r) != width for r in self.entries):
            raise ValueError("ragged game matrix")
        if self.row_labels is None:
            self.row_labels = list(range(len(self.entries)))
        if self.col_labels is None:
            self.col_labels = list(range(width))

    @classmethod
    def from_columns(cls, nrows, columns, row_labels=None, col_labels=None):
        """0/1 game whose j-th column is the bitmask ``columns[j]`` over the rows."""
        entries = [[(col >> i) & 1 for col in columns] for i in range(nrows)]
        return cls(entries, row_labels, col_labels)

    @property
    def shape(self):
        return len(self.entries), len(self.entries[0])


@dataclass
class GameSolution:
    """Row player minimizes the column payoff; column player maximizes."""

    value: Fraction
    row_strategy: dict
    col_strategy: dict
    row_payoffs: list   # payoff of row_strategy against each column
    col_payoffs: list   # payoff of col_strategy against each row


def _dominance(M, rows, cols):
    """Drop duplicate/dominated columns (<= another) and rows (>= another)."""
    changed = True
    while changed:
        changed = False
        keep = []
        for j in cols:
            vj = [M[i][j] for i in rows]
            if any(all(vj[t] <= M[i][k] for t, i in enumerate(rows)) and (
                    any(vj[t] < M[i][k] for t, i in enumerate(rows)) or k < j)
                   for k in cols if k != j):
                changed = True
                continue
            keep.append(j)
        cols = keep
        keep = []
        for i in rows:
            ri = [M[i][j] for j in cols]
            if any(all(ri[t] >= M[k][j] for t, j in enumerate(cols)) and (
                    any(ri[t] > M[k][j] for t, j in enumerate(cols)) or k < i)
                   for k in rows if k != i):
                changed = True
                continue
            keep.append(i)
        rows = keep
    return rows, cols


def game_value(game, reduce=True):
    """Exact value and optimal mixed strategies of a zero-sum matrix game."""
    if not isinstance(game, GameMatrix):
        game = GameMatrix([list(r) for r in game])
    M = [[Fraction(v) for v in r] for r in game.entries]
    nr, nc = len(M), len(M[0])
    rows, cols = list(range(nr)), list(range(nc))
    if reduce:
        rows, cols = _dominance(M, rows, cols)
    shift = 1 - min(min(r) for r in M)
    # maximize sum x  s.t.  sum_i x_i (M[i][j] + shift) <= 1 for each kept column j
    A = [[M[i][j] + shift for i in rows] for j in cols]
    sol = solve_lp([1] * len(rows), A, [1] * len(cols))
    total = sum(sol.x)
    shifted_value = 1 / total
    lam = [ZERO] * nr
    for t, i in enumerate(rows):
        lam[i] = sol.x[t] * shifted_value
    nu = [ZERO] * nc
    for t, j in enumerate(cols):
        nu[j] = sol.duals[t] * shifted_value
    value = shifted_value - shift
    row_payoffs = [sum(lam[i] * M[i][j] for i in range(nr) if lam[i]) for j in range(nc)]
    col_payoffs = [sum(nu[j] * M[i][j] for j in range(nc) if nu[j]) for i in range(nr)]
    if not (max(row_payoffs) == value == min(col_payoffs)) or sum(nu) != 1:
        raise LPError("duality certificate failed; this is a solver bug")
    return GameSolution(
        value,
        {game.row_labels[i]: a for i, a in enumerate(lam) if a},
        {game.col_labels[j]: a for j, a in enumerate(nu) if a},
        row_payoffs,
        col_payoffs,
    )


def maximin_value(game):
    """Value when the row player maximizes the minimum column payoff."""
    if not isinstance(game, GameMatrix):
        game = GameMatrix([list(r) for r in game])
    neg = GameMatrix([[-Fraction(v) for v in r] for r in game.entries], game.row_labels, game.col_labels)
    sol = game_value(neg)
    return GameSolution(-sol.value, sol.row_strategy, sol.col_strategy,
                        [-v for v in sol.row_payoffs], [-v for v in sol.col_payoffs])
