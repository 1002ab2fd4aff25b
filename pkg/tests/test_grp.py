import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremal.errors import (
    CapacityError,
    InvalidElementError,
    SetTypeError,
    UnsupportedReductionError,
    WindowTooSmallError,
)
from extremal.grp import (
    Complement,
    Conjugate,
    Cyclic,
    DirectProduct,
    Explicit,
    Free,
    FreeAbelian,
    Intersection,
    Inverse,
    Prefix,
    Product,
    Residues,
    Symmetric,
    Translate,
    Union,
    Wreath,
    ball,
    check_subset,
    contains,
    difference_set,
    finite_mask,
    first_letter_form,
    local_depth,
    make_group,
    periodic_form,
    prefix_meets,
    quotient_map,
    realize,
    reduce_periodic,
    reduce_word,
)

from conftest import SMALL_FINITE


@pytest.mark.parametrize("spec", SMALL_FINITE, ids=str)
def test_finite_group_axioms(spec):
    G = make_group(spec)
    e = G.identity
    els = range(G.order)
    for a in els:
        assert G.mul(a, e) == a == G.mul(e, a)
        assert G.mul(a, G.inv(a)) == e
    for a, b, c in itertools.product(els, repeat=3):
        assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


@pytest.mark.parametrize("spec,order,abelian", [
    (Cyclic(7), 7, True), (Symmetric(4), 24, False), (DirectProduct((Cyclic(2), Cyclic(2))), 4, True),
])
def test_orders(spec, order, abelian):
    G = make_group(spec)
    assert G.order == order and G.is_abelian == abelian


def test_symmetric_capacity():
    with pytest.raises(CapacityError):
        Symmetric(9)


def test_symmetric_composition_applies_right_factor_first():
    G = make_group(Symmetric(3))
    a = G.perm_index[(1, 0, 2)]
    b = G.perm_index[(0, 2, 1)]
    ab = G.permutations[G.mul(a, b)]
    assert ab == tuple((1, 0, 2)[v] for v in (0, 2, 1))


def test_dihedral_relations():
    n = 5
    from extremal.grp import Dihedral
    G = make_group(Dihedral(n))
    r, s = 1, n
    assert G.mul(s, s) == 0
    assert G.mul(G.mul(s, r), s) == G.inv(r)
    assert G.format(r) == "r1" and G.format(s) == "s0"


def test_product_formatting():
    G = make_group(DirectProduct((Cyclic(2), Cyclic(3))))
    assert G.format(G.join([1, 2])) == "(1,2)"
    assert G.split(G.join([1, 2])) == [1, 2]


def test_validate_rejects_bad_elements(F2, Z2, C4):
    with pytest.raises(InvalidElementError):
        C4.validate(4)
    with pytest.raises(InvalidElementError):
        Z2.validate((1,))
    with pytest.raises(InvalidElementError):
        F2.validate((1, -1))
    with pytest.raises(InvalidElementError):
        F2.validate((3,))


words = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=8).map(reduce_word)


@given(words, words, words)
def test_free_group_is_a_group(a, b, c):
    G = make_group(Free(2))
    assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))
    assert G.mul(a, G.inv(a)) == ()
    G.validate(G.mul(a, b))


def test_free_ball_sizes(F2):
    # 1 + 4 * (3^r - 1) / 2 reduced words of length <= r
    for r in range(5):
        assert len(ball(F2, r)) == 1 + 2 * (3 ** r - 1)
    assert ball(F2, 1).elements == ((), (1,), (-1,), (2,), (-2,))


def test_z_ball_order(Z2):
    b = ball(Z2, 1)
    assert len(b) == 9 and b[0] == (0, 0)


def test_word_parsing(F2):
    assert F2.word("abA") == (1, 2, -1)
    assert F2.word("aA") == ()
    assert F2.format(()) == "1"
    with pytest.raises(InvalidElementError):
        F2.word("c")


@given(words, st.sets(st.sampled_from([1, -1, 2, -2]), min_size=1))
def test_prefix_meets_matches_search(u, letters):
    """uP meets P iff some w in P (searched up to length |u| + 2) has u w in P."""
    G = make_group(Free(2))
    P = Prefix(letters)
    found = any(contains(G, P, w) and contains(G, P, G.mul(u, w)) for w in ball(G, len(u) + 2))
    assert prefix_meets(u, frozenset(letters)) == found


def test_difference_set_of_prefix(F2):
    A = Prefix({1, -1})
    D = difference_set(A)
    assert contains(F2, D, (1, 2))
    assert not contains(F2, D, (2,))
    assert contains(F2, D, ())


def test_membership_of_compound_sets(C6, Z):
    A = Explicit({0, 1})
    assert C6.members(finite_mask(C6, Product(A, Inverse(A)))) == [0, 1, 5]
    assert C6.members(finite_mask(C6, Translate(2, A))) == [2, 3]
    assert C6.members(finite_mask(C6, Complement(A))) == [2, 3, 4, 5]
    assert C6.members(finite_mask(C6, Union(A, Explicit({4})))) == [0, 1, 4]
    assert C6.members(finite_mask(C6, Intersection(A, Explicit({1, 2})))) == [1]
    even = Residues(2, [0])
    assert contains(Z, even, (4,)) and not contains(Z, even, (3,))
    assert contains(Z, Translate((1,), even), (3,))


def test_conjugation_and_wreath(S3):
    t = S3.perm_index[(1, 0, 2)]
    c = S3.perm_index[(1, 2, 0)]
    A = Explicit({c})
    conj = S3.members(finite_mask(S3, Conjugate(A, t)))
    assert conj == [S3.mul(S3.mul(S3.inv(t), c), t)]
    # a union of all conjugates is conjugation invariant
    W = finite_mask(S3, Wreath(A, Explicit(range(6))))
    for g in range(6):
        assert finite_mask(S3, Conjugate(Explicit(S3.members(W)), g)) == W


def test_wreath_single_identity_is_identity(C6):
    A = Explicit({0, 1})
    D = Product(Inverse(A), A)
    assert finite_mask(C6, Wreath(D, Explicit({0}))) == finite_mask(C6, D)


def test_periodic_forms(Z, Z2):
    even = Residues(2, [0])
    three = Residues(3, [0])
    u = periodic_form(Z, Union(even, three))
    assert u.moduli == (6,) and u.residues == {(0,), (2,), (3,), (4,)}
    assert periodic_form(Z, Complement(even)).residues == {(1,)}
    assert periodic_form(Z, Product(even, Explicit({(1,)}))).residues == {(1,)}
    H, mask, proj, moduli = reduce_periodic(Z, even)
    assert H.order == 2 and H.members(mask) == [0] and proj((7,)) == 1
    H2, proj2 = quotient_map(Z2, (2, 3))
    assert H2.order == 6 and proj2((3, 4)) == H2.join([1, 1])


def test_window_search_limits(Z):
    # a product of two infinite non-periodic sets needs a window
    A = Complement(Explicit({(0,)}))
    S = Product(A, Complement(Explicit({(1,)})))
    with pytest.raises(WindowTooSmallError):
        contains(Z, S, (5,))
    assert contains(Z, S, (5,), window=list(ball(Z, 6)))


def test_realize_over_window(Z):
    W = ball(Z, 2)
    m = realize(Z, Residues(2, [0]), W)
    assert [W[i] for i in range(len(W)) if m >> i & 1] == [(0,), (-2,), (2,)]


def test_check_subset_type_errors(C4, Z, F2):
    with pytest.raises(SetTypeError):
        check_subset(C4, Prefix({1}))
    with pytest.raises(SetTypeError):
        check_subset(F2, Residues(2, [0]))
    with pytest.raises(SetTypeError):
        check_subset(Z, Residues((2, 2), [(0, 0)]))
    check_subset(F2, Union(Prefix({1}), Explicit({()})))


def test_free_group_analysis(F2):
    assert local_depth(F2, Prefix({1})) == 1
    assert local_depth(F2, Explicit({(1, 2)})) == 3
    assert first_letter_form(F2, Complement(Prefix({1}))) == (frozenset({-1, 2, -2}), True)
    assert first_letter_form(F2, Translate((1,), Prefix({2}))) is None


def test_direct_product_rejects_infinite():
    with pytest.raises(UnsupportedReductionError):
        DirectProduct((Cyclic(2), FreeAbelian(1)))


@pytest.mark.parametrize("spec", SMALL_FINITE[:6], ids=str)
def test_masks_roundtrip(spec):
    G = make_group(spec)
    for m in range(min(G.full_mask + 1, 64)):
        assert G.mask(G.members(m)) == m
        assert G.inverse_mask(G.inverse_mask(m)) == m
