from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremal.dens import (
    DensityResult,
    ExtremalPattern,
    dstar_window,
    eval_extremal,
    is12,
    iss213,
    kelley_bruteforce,
    kelley_lp,
    si21,
    sis123,
    subadditivize,
    translate_family,
    us12,
    uss213_search,
)
from extremal.errors import (
    EmptySupportError,
    InnerSupNotExactError,
    InvalidPatternError,
    UnsupportedGroupError,
    UnsupportedReductionError,
    WindowTooSmallError,
)
from extremal.grp import (
    Complement,
    Cyclic,
    Explicit,
    Free,
    Prefix,
    Product,
    Residues,
    Symmetric,
    ball,
    contains,
    make_group,
)
from extremal.meas import evaluate

masks6 = st.integers(0, 63)


def count(G, m):
    return Fr(bin(m).count("1"), G.order)


# ---------------------------------------------------------------------------
# Kelley intersection number


def test_kelley_examples(C4):
    fam = translate_family(C4, Explicit({0, 2}))
    assert kelley_bruteforce(fam, 4) == Fr(1, 2)
    assert kelley_lp(fam, range(4)).value == Fr(1, 2)
    assert kelley_bruteforce([frozenset(range(4))], 3) == 1
    C3 = make_group(Cyclic(3))
    assert kelley_bruteforce(translate_family(C3, Explicit({0})), 3) == Fr(1, 3)
    assert kelley_lp(translate_family(C4, Explicit(())), range(4)).value == 0
    assert kelley_lp(translate_family(C4, Explicit(range(4))), range(4)).value == 1
    with pytest.raises(EmptySupportError):
        kelley_bruteforce([], 2)


@given(masks6)
def test_kelley_bruteforce_is_nonincreasing_and_dominates_lp(m):
    G = make_group(Cyclic(6))
    fam = translate_family(G, m)
    vals = [kelley_bruteforce(fam, k) for k in range(1, 7)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    lp = kelley_lp(fam, range(6)).value
    assert vals[-1] == lp and all(v >= lp for v in vals)


# ---------------------------------------------------------------------------
# is12 and its dual


def test_is12_examples(Z, C4, F2):
    r = is12(Z, Residues(2, [0]))
    assert r.is_exact and r.value == Fr(1, 2) and r.method == "quotient"
    assert is12(C4, Explicit(range(4))).value == 1
    assert is12(C4, Explicit(())).value == 0
    assert is12(C4, Explicit({0})).value == Fr(1, 4)
    r = is12(F2, Prefix({1, -1}), support=[(-2,) * i for i in range(6)])
    assert r.kind == "upper" and r.value == Fr(1, 6)


def test_free_group_upper_bound_certificate(F2):
    """The reported measure really has sup_x mu(A x^-1) <= bound, checked on a larger ball."""
    A = Prefix({1, -1})
    r = is12(F2, A, support=[(-2,) * i for i in range(6)])
    mu = r.witness["measure"]
    worst = max(sum(a for g, a in mu.items() if contains(F2, A, F2.mul(g, x))) for x in ball(F2, 8))
    assert worst == r.value


def test_is12_window_modes(Z):
    even = Residues(2, [0])
    bounds = [is12(Z, even, support=[(k,) for k in range(n)], mode="window").value for n in (2, 4, 8)]
    assert bounds == [Fr(1, 2)] * 3
    with pytest.raises(UnsupportedReductionError):
        is12(Z, Explicit({(0,), (1,)}), mode="exact")


def test_window_refinement_is_monotone(Z):
    A = Explicit({(0,), (1,), (3,)})
    vals = [is12(Z, A, support=list(ball(Z, r))).value for r in range(4)]
    assert all(a >= b for a, b in zip(vals, vals[1:]))
    assert vals[0] == 1 and vals[-1] < 1


def test_inner_sup_must_be_exact(F2):
    # a product of two infinite sets has no bounded membership depth
    with pytest.raises(InnerSupNotExactError):
        is12(F2, Product(Prefix({1}), Prefix({2})), support=[()])


def test_si21_examples(C4):
    assert si21(C4, Explicit({0, 2})).value == Fr(1, 2)
    assert si21(C4, Explicit(range(4))).value == 1
    assert si21(make_group(Cyclic(5)), Explicit({0, 1})).value == Fr(2, 5)
    with pytest.raises(UnsupportedGroupError):
        si21(make_group(Free(2)), Prefix({1}))


@given(masks6)
def test_exact_duality_on_cyclic6(m):
    G = make_group(Cyclic(6))
    a = is12(G, m).value
    assert a == si21(G, m).value == kelley_lp(translate_family(G, m), range(6)).value == count(G, m)


@given(st.integers(0, 63), st.integers(0, 5))
def test_is12_is_translation_invariant(m, g):
    G = make_group(Symmetric(3))
    assert is12(G, m).value == is12(G, G.left_translate(g, m)).value


@given(masks6, masks6)
def test_monotone_densities(a, b):
    G = make_group(Cyclic(6))
    lo, hi = a & b, a
    for f in (is12, iss213):
        assert f(G, lo).value <= f(G, hi).value


# ---------------------------------------------------------------------------
# uniform and two-sided variants


def test_us12_examples(C4, Z):
    assert us12(C4, Explicit({0, 2}), kmax=4).value == Fr(1, 2)
    assert us12(C4, Explicit({0, 2}), kmax=4).is_exact
    assert us12(C4, Explicit(range(4))).value == 1
    r = us12(Z, Residues(2, [0]), kmax=2, support=[(0,), (1,)])
    assert r.kind == "upper" and r.value == Fr(1, 2) and r.witness["set"] == [(0,), (1,)]


def test_us12_cap_refinement(C6):
    A = Explicit({0, 1, 3})
    vals = [us12(C6, A, kmax=k).value for k in range(1, 7)]
    assert all(x >= y for x, y in zip(vals, vals[1:]))
    assert vals[-1] == Fr(1, 2)


def test_iss213_examples(C6, S3):
    assert iss213(C6, Explicit({0, 1})).value == Fr(1, 3)
    assert iss213(C6, Explicit(())).value == 0
    a3 = Explicit({S3.perm_index[p] for p in [(0, 1, 2), (1, 2, 0), (2, 0, 1)]})
    assert iss213(S3, a3).value == Fr(1, 2)
    assert is12(S3, a3).value == iss213(S3, a3).value     # inner-invariant set


def test_uss213_examples(C6, F2):
    for m in range(64):
        assert uss213_search(C6, m, kmax=6).value == iss213(C6, m).value
    assert uss213_search(C6, Explicit(range(6)), kmax=2).value == 1
    r = uss213_search(F2, Prefix({1, -1}), kmax=5, support=list(ball(F2, 4)))
    assert r.value >= Fr(1, 2) - Fr(1, 10)


def test_free_two_sided_witness_shift(F2):
    """The x, y reported for prefix sets really push the whole support into A."""
    A = Prefix({1, -1})
    support = list(ball(F2, 3))
    r = iss213(F2, A, support=support)
    x, y = r.witness["shift"]
    assert r.value == 1
    assert all(contains(F2, A, F2.mul(F2.mul(x, g), y)) for g in support)
    with pytest.raises(InnerSupNotExactError):
        iss213(F2, Explicit({(1,)}), support=support)


@given(masks6, masks6)
def test_iss213_subadditive_and_ishat(a, b):
    G = make_group(Cyclic(6))
    assert iss213(G, a | b).value <= iss213(G, a).value + iss213(G, b).value
    assert is12(G, a | b).value <= is12(G, a).value + iss213(G, b).value


def test_sis123_examples(C4):
    r = sis123(C4, Explicit({0}))
    assert r.kind == "interval" and Fr(1, 4) in r and r.lo == Fr(1, 4)
    assert sis123(C4, Explicit(range(4))).lo == 1
    assert sis123(C4, Explicit(())).hi == 0
    full = sis123(C4, Explicit({0, 1}), exhaustive=True)
    assert full.lo == full.hi == Fr(1, 2)


# ---------------------------------------------------------------------------
# subadditivization and d*


def test_subadditivize_examples(C4):
    def additive(G, S):
        return Fr(len(S.elements), G.order)
    for m in range(16):
        assert subadditivize(additive, m, C4).value == count(C4, m)
    assert subadditivize(lambda G, S: is12(G, S), Explicit({0}), C4).value == Fr(1, 4)
    assert subadditivize(lambda G, S: is12(G, S), Explicit(()), C4).value == 0


def test_subadditivize_sampling_is_seeded():
    G = make_group(Cyclic(13))
    base = lambda H, S: Fr(len(S.elements), H.order)   # noqa: E731
    a = subadditivize(base, Explicit({0, 1}), G, samples=20, seed=3)
    b = subadditivize(base, Explicit({0, 1}), G, samples=20, seed=3)
    assert a.kind == "lower" and a == b and a.value == Fr(2, 13)


def test_dstar_examples(Z):
    r = dstar_window(Z, Residues(3, [0]), [3, 6])
    assert r.is_exact and r.value == Fr(1, 3)
    # interval counting over [0, 300)
    assert Fr(sum(1 for k in range(300) if k % 3 == 0), 300) == r.value
    assert dstar_window(Z, Complement(Explicit(())), [1, 2]).value == 1
    r = dstar_window(Z, Explicit({(0,)}), [1, 2, 4, 8])
    assert r.kind == "upper"
    assert [v for _, v in r.witness["rungs"]] == [Fr(1, n) for n in (1, 2, 4, 8)]
    with pytest.raises(WindowTooSmallError):
        dstar_window(Z, Product(Complement(Explicit({(0,)})), Complement(Explicit({(0,)}))), [2])


def test_dstar_two_dimensional(Z2):
    A = Residues((2, 2), [(0, 0)])
    assert dstar_window(Z2, A, [2]).value == Fr(1, 4)
    r = dstar_window(Z2, Explicit({(0, 0), (1, 1)}), [1, 2, 3])
    assert [v for _, v in r.witness["rungs"]] == [1, Fr(2, 4), Fr(2, 9)]


# ---------------------------------------------------------------------------
# extremal patterns


def test_pattern_validation():
    ExtremalPattern("iS", (1, 2))
    ExtremalPattern.parse("iss:213")
    with pytest.raises(InvalidPatternError):
        ExtremalPattern("Si", (1, 2))     # S only at the position holding the last factor
    with pytest.raises(InvalidPatternError):
        ExtremalPattern("ix", (1, 2))
    with pytest.raises(InvalidPatternError):
        ExtremalPattern("is", (1, 1))
    with pytest.raises(InvalidPatternError):
        ExtremalPattern("isis", (1, 2, 3, 4))
    assert str(ExtremalPattern.parse("is")) == "is:12"


def test_pattern_examples(C4):
    C3 = make_group(Cyclic(3))
    for m in range(15):
        assert eval_extremal("i", C4, m).value == 0
    for m in range(1, 16):
        assert eval_extremal("s", C4, m).value == 1
    assert eval_extremal("is", C4, Explicit({0, 2})).value == Fr(1, 2)
    assert eval_extremal("si", C3, Explicit({0})).value == Fr(1, 3)


@pytest.mark.parametrize("pat", ["iss:213", "sis", "isi", "ssi:132", "uis", "ius", "sui:213"])
def test_depth_three_patterns_bracket_counting(pat, S3):
    for m in (0b000011, 0b010110, 0b111000):
        r = eval_extremal(pat, S3, m)
        assert r.lo <= count(S3, m) <= r.hi


def test_pattern_needs_finite_group(Z):
    with pytest.raises(UnsupportedGroupError):
        eval_extremal("is", Z, Residues(2, [0]))


def test_density_result_contract():
    with pytest.raises(ValueError):
        DensityResult.interval(1, 0, "grid")
    r = DensityResult.upper(Fr(1, 3), "lp-game")
    assert r.value == Fr(1, 3) and 0 in r
    with pytest.raises(ValueError):
        DensityResult.interval(0, 1, "grid").value


def test_us12_witness_achieves_value(C6):
    A = Explicit({0, 1, 3})
    r = us12(C6, A, kmax=6)
    F = r.witness["set"]
    best = max(sum(1 for f in F if contains(C6, A, C6.mul(f, x))) for x in range(6))
    assert Fr(best, len(F)) == r.value


def test_is12_measure_witness_achieves_value(S3):
    A = Explicit({0, 3})
    r = is12(S3, A)
    mu = r.witness["measure"]
    worst = max(evaluate(S3, mu, Explicit({S3.mul(a, S3.inv(x)) for a in (0, 3)})) for x in range(6))
    assert worst == r.value
