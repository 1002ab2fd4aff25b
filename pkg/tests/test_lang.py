from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from extremal.errors import CapacityError, ParseError, UnsupportedReductionError
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
    Translate,
    Union,
    Wreath,
    make_group,
    reduce_word,
)
from extremal.lang import canonical_print, format_group, parse_element, parse_group, parse_set

GOLDEN = Path(__file__).parent / "golden"


def _rows(name):
    for line in (GOLDEN / name).read_text().splitlines():
        if line and not line.startswith("#"):
            yield line.split("\t")


@pytest.mark.parametrize("group,text,canonical", list(_rows("sets.txt")))
def test_golden_sets(group, text, canonical):
    G = make_group(parse_group(group))
    expr = parse_set(text, G)
    out = canonical_print(expr, G)
    assert out == canonical
    assert parse_set(out, G) == expr
    assert canonical_print(parse_set(out, G), G) == out


@pytest.mark.parametrize("group,text,line,col,expected", list(_rows("errors.txt")))
def test_golden_errors(group, text, line, col, expected):
    G = make_group(parse_group(group))
    with pytest.raises(ParseError) as info:
        parse_set(text.replace("\\n", "\n"), G)
    err = info.value
    assert (err.line, err.column) == (int(line), int(col))
    assert expected in err.expected


@pytest.mark.parametrize("text,spec", [
    ("Zmod(6)", Cyclic(6)),
    ("Z", FreeAbelian(1)),
    ("Z^3", FreeAbelian(3)),
    ("Z x Z", FreeAbelian(2)),
    ("Z^2 x Z", FreeAbelian(3)),
    ("Free(2)", Free(2)),
    ("Zmod(2) x Zmod(3)", DirectProduct((Cyclic(2), Cyclic(3)))),
    ("(Zmod(2) x Zmod(2)) x Zmod(2)", DirectProduct((Cyclic(2),) * 3)),
])
def test_parse_group(text, spec):
    assert parse_group(text) == spec
    assert parse_group(format_group(spec)) == spec


def test_group_errors():
    with pytest.raises(CapacityError):
        parse_group("Sym(9)")
    with pytest.raises(UnsupportedReductionError):
        parse_group("Zmod(2) x Z")
    for bad in ("Zmod(0)", "Zmod(", "Q", "Z^", "Zmod(3) y"):
        with pytest.raises(ParseError):
            parse_group(bad)


def test_parse_element():
    F2 = make_group(Free(2))
    assert parse_element("abA", F2) == (1, 2, -1)
    assert parse_element("1", F2) == ()
    Z2 = make_group(FreeAbelian(2))
    assert parse_element("(3,-1)", Z2) == (3, -1)
    with pytest.raises(ParseError):
        parse_element("(3)", Z2)


# ---------------------------------------------------------------------------
# random expressions print and parse back to the same tree

C4_ELEMENTS = st.integers(0, 3)
F2_ELEMENTS = st.lists(st.sampled_from([1, -1, 2, -2]), max_size=4).map(reduce_word)


def _exprs(elements, atoms):
    base = st.one_of(st.frozensets(elements, max_size=3).map(Explicit), *atoms)

    def extend(sub):
        return st.one_of(
            st.builds(Union, sub, sub),
            st.builds(Intersection, sub, sub),
            st.builds(Product, sub, sub),
            st.builds(Complement, sub),
            st.builds(Inverse, sub),
            st.builds(Translate, elements, sub),
            st.builds(Conjugate, sub, elements),
            st.builds(Wreath, sub, sub),
        )

    return st.recursive(base, extend, max_leaves=6)


@given(_exprs(C4_ELEMENTS, []))
def test_roundtrip_finite(expr):
    G = make_group(Cyclic(4))
    text = canonical_print(expr, G)
    assert parse_set(text, G) == expr


@given(_exprs(F2_ELEMENTS, [st.frozensets(st.sampled_from([1, -1, 2, -2]), min_size=1).map(Prefix)]))
def test_roundtrip_free(expr):
    G = make_group(Free(2))
    text = canonical_print(expr, G)
    assert parse_set(text, G) == expr
