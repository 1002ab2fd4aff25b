"""Text syntax for groups and subsets.

Groups::

    group  := factor ("x" factor)*
    factor := "Z" | "Z^" int | "Zmod(" int ")" | "Sym(" int ")" | "Dih(" int ")"
            | "Free(" int ")" | "(" group ")"

Sets (``!`` binds tightest, then ``*``, ``&``, ``|``; binary operators
associate to the right)::

    set   := inter ("|" set)?
    inter := prod ("&" inter)?
    prod  := unary ("*" prod)?
    unary := "!" unary | atom
    atom  := "{" elems "}" | "residues(" mod ";" elems ")" | "prefix(" letters ")"
           | "inv(" set ")" | "shift(" elem "," set ")" | "conj(" set "," elem ")"
           | "wr(" set "," set ")" | "(" set ")"

Elements are integers for Z and Zmod(n), tuples for Z^d and products, words
such as ``abA`` (capital = inverse, ``1`` = identity) for free groups,
``[1,0,2]`` for permutations and ``r2`` / ``s0`` for dihedral elements.
"""
from __future__ import annotations

import re

from .errors import CapacityError, InvalidElementError, ParseError, SetTypeError, UnsupportedReductionError
from .grp import (
    Complement,
    Conjugate,
    Cyclic,
    Dihedral,
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
    check_subset,
    finite_order,
    letter_char,
    letter_key,
    make_group,
)


class _Scanner:
    def __init__(self, text, pattern):
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _SPACE.match(text, pos)
            if m.end() > pos:
                pos = m.end()
                continue
            m = pattern.match(text, pos)
            if not m:
                self.tokens.append(("?", text[pos], pos))
                break
            self.tokens.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.tokens.append(("end", "", len(text)))
        self.i = 0

    def where(self, pos):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, expected, message=None, tok=None):
        kind, value, pos = tok or self.peek()
        line, col = self.where(pos)
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(message or f"unexpected {found}", line, col, expected)

    def peek(self):
        return self.tokens[self.i]

    def next(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def accept(self, value):
        if self.peek()[1] == value and self.peek()[0] != "end":
            return self.next()
        return None

    def expect(self, value):
        tok = self.accept(value)
        if tok is None:
            self.error(repr(value))
        return tok

    def expect_kind(self, kind, expected):
        if self.peek()[0] != kind:
            self.error(expected)
        return self.next()

    def finish(self):
        if self.peek()[0] != "end":
            self.error("end of input")


_SPACE = re.compile(r"\s*")
_GROUP_TOKENS = re.compile(
    r"(?P<kw>Zmod|Sym|Dih|Free|Z)|(?P<x>x)|(?P<int>\d+)|(?P<p>[()^])")
_SET_TOKENS = re.compile(
    r"(?P<int>-?\d+)|(?P<ident>[A-Za-z][A-Za-z0-9]*)|(?P<p>[(){}\[\],;|&!*])")


# ---------------------------------------------------------------------------
# groups


def parse_group(text):
    """Parse a group description into a group specification."""
    sc = _Scanner(text, _GROUP_TOKENS)
    spec = _group(sc)
    sc.finish()
    return spec


def _group(sc):
    start = sc.peek()
    factors = [_factor(sc)]
    while sc.accept("x"):
        factors.append(_factor(sc))
    if len(factors) == 1:
        return factors[0]
    finite = [finite_order(f) is not None for f in factors]
    if all(finite):
        flat = []
        for f in factors:
            flat.extend(f.factors if isinstance(f, DirectProduct) else [f])
        return DirectProduct(tuple(flat))
    if not any(finite):
        return FreeAbelian(sum(_rank(sc, f, start) for f in factors))
    raise UnsupportedReductionError("products mixing finite and infinite factors are not supported")


def _rank(sc, f, tok):
    if isinstance(f, FreeAbelian):
        return f.d
    sc.error("Z or Z^d", "only free abelian factors can be multiplied with Z", tok)


def _int(sc):
    return int(sc.expect_kind("int", "an integer")[1])


def _factor(sc):
    if sc.accept("("):
        g = _group(sc)
        sc.expect(")")
        return g
    tok = sc.peek()
    if tok[0] != "kw":
        sc.error("a group name")
    name = sc.next()[1]
    if name == "Z":
        if sc.accept("^"):
            return _build(sc, FreeAbelian, _int(sc), tok)
        return FreeAbelian(1)
    sc.expect("(")
    n = _int(sc)
    sc.expect(")")
    cls = {"Zmod": Cyclic, "Sym": Symmetric, "Dih": Dihedral, "Free": Free}[name]
    return _build(sc, cls, n, tok)


def _build(sc, cls, n, tok):
    try:
        return cls(n)
    except CapacityError:
        raise
    except ValueError as exc:
        sc.error("a valid size", str(exc), tok)


def format_group(spec):
    return str(spec)


# ---------------------------------------------------------------------------
# elements


def parse_element(text, G):
    """Parse a single element of the group handle ``G``."""
    sc = _Scanner(text, _SET_TOKENS)
    x = _element(sc, G)
    sc.finish()
    return x


def _element(sc, G):
    spec = G.spec
    tok = sc.peek()
    try:
        if isinstance(spec, Cyclic):
            return G.validate(_signed_int(sc))
        if isinstance(spec, FreeAbelian):
            if spec.d == 1 and tok[0] == "int":
                return (int(sc.next()[1]),)
            return G.validate(tuple(_int_tuple(sc)))
        if isinstance(spec, Free):
            if tok[0] == "int":
                if sc.next()[1] != "1":
                    sc.error("a word or 1", tok=tok)
                return ()
            return G.word(sc.expect_kind("ident", "a word")[1])
        if isinstance(spec, Symmetric):
            sc.expect("[")
            vals = [_signed_int(sc)]
            while sc.accept(","):
                vals.append(_signed_int(sc))
            sc.expect("]")
            idx = G.perm_index.get(tuple(vals))
            if idx is None:
                raise InvalidElementError(f"{vals} is not a permutation of 0..{spec.n - 1}")
            return idx
        if isinstance(spec, Dihedral):
            word = sc.expect_kind("ident", "r<i> or s<i>")[1]
            m = re.fullmatch(r"([rs])(\d+)", word)
            if not m or int(m.group(2)) >= spec.n:
                sc.error("r<i> or s<i>", f"{word!r} is not an element of {spec}", tok)
            return (m.group(1) == "s") * spec.n + int(m.group(2))
        if isinstance(spec, DirectProduct):
            sc.expect("(")
            parts = []
            for k, H in enumerate(G.factors):
                if k:
                    sc.expect(",")
                parts.append(_element(sc, H))
            sc.expect(")")
            return G.join(parts)
    except InvalidElementError as exc:
        sc.error(f"an element of {spec}", str(exc), tok)
    sc.error("an element", f"no element syntax for {spec}", tok)


def _signed_int(sc):
    return int(sc.expect_kind("int", "an integer")[1])


def _int_tuple(sc):
    sc.expect("(")
    vals = [_signed_int(sc)]
    while sc.accept(","):
        vals.append(_signed_int(sc))
    sc.expect(")")
    return vals


# ---------------------------------------------------------------------------
# sets


def parse_set(text, G):
    """Parse a subset expression for the group handle (or spec) ``G``."""
    if not hasattr(G, "mul"):
        G = make_group(G)
    sc = _Scanner(text, _SET_TOKENS)
    expr = _union(sc, G)
    sc.finish()
    try:
        check_subset(G, expr)
    except (SetTypeError, InvalidElementError) as exc:
        raise ParseError(str(exc), 1, 1, f"a set for {G.spec}") from None
    return expr


def _union(sc, G):
    left = _inter(sc, G)
    if sc.accept("|"):
        return Union(left, _union(sc, G))
    return left


def _inter(sc, G):
    left = _prod(sc, G)
    if sc.accept("&"):
        return Intersection(left, _inter(sc, G))
    return left


def _prod(sc, G):
    left = _unary(sc, G)
    if sc.accept("*"):
        return Product(left, _prod(sc, G))
    return left


def _unary(sc, G):
    if sc.accept("!"):
        return Complement(_unary(sc, G))
    return _atom(sc, G)


_KEYWORDS = ("residues", "prefix", "inv", "shift", "conj", "wr")


def _atom(sc, G):
    tok = sc.peek()
    if sc.accept("{"):
        elems = []
        if not sc.accept("}"):
            elems.append(_element(sc, G))
            while sc.accept(","):
                elems.append(_element(sc, G))
            sc.expect("}")
        return Explicit(elems)
    if sc.accept("("):
        inner = _union(sc, G)
        sc.expect(")")
        return inner
    if tok[0] != "ident" or tok[1] not in _KEYWORDS:
        sc.error("a set (one of '{', '(', '!', " + ", ".join(_KEYWORDS) + ")")
    name = sc.next()[1]
    sc.expect("(")
    if name == "residues":
        if not isinstance(G.spec, FreeAbelian):
            sc.error("a set valid in " + str(G.spec), f"residues() needs Z or Z^d, not {G.spec}", tok)
        if sc.peek()[1] == "(":
            mod = tuple(_int_tuple(sc))
        else:
            mod = (_signed_int(sc),)
        sc.expect(";")
        rs = []
        if sc.peek()[1] != ")":
            rs.append(_residue(sc))
            while sc.accept(","):
                rs.append(_residue(sc))
        sc.expect(")")
        try:
            out = Residues(mod, rs)
        except ValueError as exc:
            sc.error("matching modulus and residues", str(exc), tok)
        return out
    if name == "prefix":
        if not isinstance(G.spec, Free):
            sc.error("a set valid in " + str(G.spec), f"prefix() needs a free group, not {G.spec}", tok)
        letters = [_letter(sc, G)]
        while sc.accept(","):
            letters.append(_letter(sc, G))
        sc.expect(")")
        return Prefix(letters)
    if name == "inv":
        out = Inverse(_union(sc, G))
    elif name == "shift":
        g = _element(sc, G)
        sc.expect(",")
        out = Translate(g, _union(sc, G))
    elif name == "conj":
        s = _union(sc, G)
        sc.expect(",")
        out = Conjugate(s, _element(sc, G))
    else:
        s = _union(sc, G)
        sc.expect(",")
        out = Wreath(s, _union(sc, G))
    sc.expect(")")
    return out


def _residue(sc):
    if sc.peek()[1] == "(":
        return tuple(_int_tuple(sc))
    return _signed_int(sc)


def _letter(sc, G):
    tok = sc.expect_kind("ident", "a generator letter")
    w = tok[1]
    if len(w) != 1:
        sc.error("a single letter", f"{w!r} is not a single letter", tok)
    try:
        return G.word(w)[0]
    except InvalidElementError as exc:
        sc.error("a generator letter", str(exc), tok)


# ---------------------------------------------------------------------------
# printing


def _fmt_element(x, G):
    if G is not None:
        return G.format(x)
    if isinstance(x, tuple):
        return "(" + ",".join(map(str, x)) + ")"
    return str(x)


def _sort_key(G):
    if G is not None:
        return G.key
    return lambda x: (isinstance(x, tuple), x)


def canonical_print(expr, G=None):
    """Deterministic text for a subset expression; ``parse_set`` inverts it."""
    if G is not None and not hasattr(G, "mul"):
        G = make_group(G)
    return _print(expr, G, 0)


# precedence levels: union 1, intersection 2, product 3, unary/atom 4
def _print(e, G, ctx):
    if isinstance(e, Union):
        s, level = _binary(e, G, Union, " | ", 1)
    elif isinstance(e, Intersection):
        s, level = _binary(e, G, Intersection, " & ", 2)
    elif isinstance(e, Product):
        s, level = _binary(e, G, Product, " * ", 3)
    else:
        return _print_atom(e, G)
    return f"({s})" if ctx >= level else s


def _binary(e, G, cls, op, level):
    left = _print(e.left, G, level)          # a same-level left operand needs parentheses
    right = _print(e.right, G, level - 1 if isinstance(e.right, cls) else level)
    return left + op + right, level


def _print_atom(e, G):
    if isinstance(e, Explicit):
        return "{" + ",".join(_fmt_element(x, G) for x in sorted(e.elements, key=_sort_key(G))) + "}"
    if isinstance(e, Residues):
        mod = str(e.moduli[0]) if len(e.moduli) == 1 else "(" + ",".join(map(str, e.moduli)) + ")"
        if len(e.moduli) == 1:
            rs = [str(r[0]) for r in sorted(e.residues)]
        else:
            rs = ["(" + ",".join(map(str, r)) + ")" for r in sorted(e.residues)]
        return f"residues({mod};{','.join(rs)})"
    if isinstance(e, Prefix):
        return "prefix(" + ",".join(letter_char(l) for l in sorted(e.letters, key=letter_key)) + ")"
    if isinstance(e, Complement):
        return "!" + _print(e.operand, G, 4)
    if isinstance(e, Inverse):
        return f"inv({_print(e.operand, G, 0)})"
    if isinstance(e, Translate):
        return f"shift({_fmt_element(e.element, G)},{_print(e.operand, G, 0)})"
    if isinstance(e, Conjugate):
        return f"conj({_print(e.operand, G, 0)},{_fmt_element(e.element, G)})"
    if isinstance(e, Wreath):
        return f"wr({_print(e.operand, G, 0)},{_print(e.conjugators, G, 0)})"
    raise SetTypeError(f"not a subset expression: {e!r}")
