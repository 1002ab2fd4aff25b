import itertools
from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremal.errors import EmptySupportError, InfeasibleError, UnboundedError
from extremal.grp import Cyclic, Explicit, FreeAbelian, Residues, make_group
from extremal.meas import Measure, act_convolve, convolve, dirac, evaluate, invariance_defect, uniform
from extremal.ratlp import GameMatrix, game_value, maximin_value, solve_lp


# ---------------------------------------------------------------------------
# measures


def test_measure_validation():
    with pytest.raises(EmptySupportError):
        Measure({})
    with pytest.raises(ValueError):
        Measure({0: Fr(1, 2)})
    with pytest.raises(ValueError):
        Measure({0: Fr(3, 2), 1: Fr(-1, 2)})
    with pytest.raises(EmptySupportError):
        uniform([])
    with pytest.raises(ValueError):
        uniform([1, 1])
    assert Measure({0: 1, 1: 0}).support == {0}


def test_measure_evaluation(C4, Z):
    mu = uniform([0, 1, 2])
    assert evaluate(C4, mu, Explicit({0, 2})) == Fr(2, 3)
    nu = convolve(C4, dirac(1), mu)
    assert nu == uniform([1, 2, 3])
    f = act_convolve(C4, uniform([0, 2]), Explicit({0}))
    assert [f(x) for x in range(4)] == [Fr(1, 2), 0, Fr(1, 2), 0]
    even = Residues(2, [0])
    assert evaluate(Z, uniform([(0,), (1,), (2,)]), even) == Fr(2, 3)


def test_invariance_defect_of_intervals(Z):
    for N in (3, 10):
        pts = [(k,) for k in range(-N, N + 1)]
        mu = uniform(pts)
        assert invariance_defect(Z, mu, Explicit(pts), [(1,)]) == Fr(1, 2 * N + 1)
        assert invariance_defect(Z, mu, Residues(2, [0]), [(1,)]) == Fr(1, 2 * N + 1)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.lists(st.integers(1, 5), min_size=1, max_size=4))
def test_convolution_is_a_probability_measure(a, b):
    G = make_group(Cyclic(5))
    mu = Measure({i: Fr(w, sum(a)) for i, w in enumerate(a)})
    nu = Measure({i: Fr(w, sum(b)) for i, w in enumerate(b)})
    c = convolve(G, mu, nu)
    assert sum(v for _, v in c.items()) == 1
    # (mu * nu)(A) = sum_y nu(y) mu(A y^-1)
    A = Explicit({0, 3})
    lhs = evaluate(G, c, A)
    rhs = sum(v * evaluate(G, mu, Explicit({G.mul(x, G.inv(y)) for x in (0, 3)})) for y, v in nu.items())
    assert lhs == rhs


# ---------------------------------------------------------------------------
# linear programs


def test_lp_examples():
    assert solve_lp([1], [[1]], [3]).value == 3
    sol = solve_lp([1, 1], [[1, 2], [3, 1]], [4, 6])
    assert sol.value == Fr(14, 5) and sol.x == [Fr(8, 5), Fr(6, 5)]
    with pytest.raises(InfeasibleError):
        solve_lp([1], [[1], [-1]], [1, -2])
    with pytest.raises(UnboundedError):
        solve_lp([1, 0], [[-1, 1]], [1])


def test_lp_equality_and_minimize():
    sol = solve_lp([1, 2], [], [], A_eq=[[1, 1]], b_eq=[1], maximize=False)
    assert sol.value == 1 and sol.x == [1, 0]
    # phase one from an infeasible origin: x >= 2 written as -x <= -2
    sol = solve_lp([1], [[-1]], [-2], maximize=False)
    assert sol.value == 2


def test_lp_duals_certify_optimum():
    c, A, b = [3, 2], [[1, 1], [1, 3], [2, 1]], [4, 6, 7]
    sol = solve_lp(c, A, b)
    assert all(y >= 0 for y in sol.duals)
    assert sum(y * bi for y, bi in zip(sol.duals, b)) == sol.value
    for j in range(2):
        assert sum(sol.duals[i] * A[i][j] for i in range(3)) >= c[j]


def test_game_examples():
    sol = game_value([[1, 0], [0, 1]])
    assert sol.value == Fr(1, 2)
    assert sol.row_strategy == {0: Fr(1, 2), 1: Fr(1, 2)}
    assert sol.col_strategy == {0: Fr(1, 2), 1: Fr(1, 2)}
    assert game_value([[1, 1], [1, 1]]).value == 1
    assert game_value([[0]]).value == 0
    assert maximin_value([[1, 0], [0, 1]]).value == Fr(1, 2)


def _two_row_oracle(M):
    """min over p in [0,1] of max_j p M[0][j] + (1-p) M[1][j], via breakpoints."""
    lines = [(M[0][j] - M[1][j], M[1][j]) for j in range(len(M[0]))]   # slope, intercept
    cands = {Fr(0), Fr(1)}
    for (a1, b1), (a2, b2) in itertools.combinations(lines, 2):
        if a1 != a2:
            p = Fr(b2 - b1, a1 - a2)
            if 0 <= p <= 1:
                cands.add(p)
    return min(max(a * p + b for a, b in lines) for p in cands)


@given(st.lists(st.lists(st.integers(-3, 3), min_size=1, max_size=5), min_size=2, max_size=2)
       .filter(lambda r: len(r[0]) == len(r[1])))
def test_two_row_games_match_breakpoint_oracle(M):
    assert game_value(M).value == _two_row_oracle(M)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
def test_game_certificate_and_reduction_agree(r, c, data):
    M = [[data.draw(st.integers(-2, 3)) for _ in range(c)] for _ in range(r)]
    full = game_value(M, reduce=False)
    reduced = game_value(M)
    assert full.value == reduced.value
    assert max(reduced.row_payoffs) == reduced.value == min(reduced.col_payoffs)
    # transposed, negated game has the negated value
    T = [[-M[i][j] for i in range(r)] for j in range(c)]
    assert game_value(T).value == -full.value


def test_game_matrix_from_columns():
    g = GameMatrix.from_columns(2, [0b01, 0b10, 0b11])
    assert g.entries == [[1, 0, 1], [0, 1, 1]]
    assert game_value(g).value == 1
    with pytest.raises(ValueError):
        GameMatrix([[1], [1, 2]])


def test_free_abelian_measure_pushforward():
    Z = make_group(FreeAbelian(1))
    mu = uniform([(0,), (2,), (4,)])
    pushed = mu.push(lambda x: x[0] % 2)
    assert pushed == dirac(0)
    assert evaluate(Z, mu, Residues(2, [0])) == 1
