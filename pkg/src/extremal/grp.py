"""Group backends, enumeration windows and symbolic subsets.

Three kinds of group handle are provided:

* finite table-backed groups (cyclic, symmetric, dihedral and finite direct
  products), whose elements are integer indices into a canonical carrier;
* the free abelian group Z^d, whose elements are integer tuples;
* the free group F_k, whose elements are reduced words stored as tuples of
  nonzero integers (``i`` is the i-th generator, ``-i`` its inverse).

Subsets are immutable expression trees. Membership is decided directly where
that is possible and otherwise raises rather than guessing.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

from .errors import (
    CapacityError,
    InvalidElementError,
    SetTypeError,
    UnsupportedReductionError,
    WindowTooSmallError,
)

SYMMETRIC_MAX_DEGREE = 8
TABLE_MAX_ORDER = 5040


# ---------------------------------------------------------------------------
# group specifications


@dataclass(frozen=True)
class Cyclic:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Cyclic order must be >= 1")

    def __str__(self):
        return f"Zmod({self.n})"


@dataclass(frozen=True)
class Symmetric:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Symmetric degree must be >= 1")
        if self.n > SYMMETRIC_MAX_DEGREE:
            raise CapacityError(f"Sym({self.n}) exceeds the supported degree {SYMMETRIC_MAX_DEGREE}")

    def __str__(self):
        return f"Sym({self.n})"


@dataclass(frozen=True)
class Dihedral:
    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("Dihedral parameter must be >= 1")

    def __str__(self):
        return f"Dih({self.n})"


@dataclass(frozen=True)
class FreeAbelian:
    d: int

    def __post_init__(self):
        if self.d < 1:
            raise ValueError("FreeAbelian dimension must be >= 1")

    def __str__(self):
        return "Z" if self.d == 1 else f"Z^{self.d}"


@dataclass(frozen=True)
class Free:
    k: int

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("Free rank must be >= 1")
        if self.k > 26:
            raise CapacityError("Free rank is limited to 26 letters")

    def __str__(self):
        return f"Free({self.k})"


@dataclass(frozen=True)
class DirectProduct:
    factors: tuple

    def __post_init__(self):
        if len(self.factors) < 2:
            raise ValueError("DirectProduct needs at least two factors")
        for f in self.factors:
            if finite_order(f) is None:
                raise UnsupportedReductionError(
                    "direct products are supported for finite factors only; use Z^d for free abelian groups")

    def __str__(self):
        return " x ".join(f"({f})" if isinstance(f, DirectProduct) else str(f) for f in self.factors)


GroupSpec = (Cyclic, Symmetric, Dihedral, FreeAbelian, Free, DirectProduct)


def finite_order(spec):
    """Order of the group described by ``spec``, or None if it is infinite."""
    if isinstance(spec, Cyclic):
        return spec.n
    if isinstance(spec, Symmetric):
        return math.factorial(spec.n)
    if isinstance(spec, Dihedral):
        return 2 * spec.n
    if isinstance(spec, DirectProduct):
        return math.prod(finite_order(f) for f in spec.factors)
    return None


# ---------------------------------------------------------------------------
# group handles


class Group:
    spec = None
    is_finite = False
    order = None
    identity = None
    is_abelian = False

    def mul(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def validate(self, x):
        """Return the canonical encoding of ``x`` or raise InvalidElementError."""
        raise NotImplementedError

    def key(self, x):
        raise NotImplementedError

    def format(self, x):
        raise NotImplementedError

    def sorted(self, elements):
        return sorted(elements, key=self.key)

    def __repr__(self):
        return f"<group {self.spec}>"


class FiniteGroup(Group):
    """Finite group on the carrier ``range(order)``."""

    is_finite = True
    identity = 0

    def __init__(self, spec, order, mul, inv, fmt, abelian):
        self.spec = spec
        self.order = order
        self._mul = mul
        self._inv = inv
        self._fmt = fmt
        self.is_abelian = abelian
        self._table = None
        self._left = {}
        self._right = {}
        self._inverses = None

    def mul(self, a, b):
        if self._table is not None:
            return self._table[a][b]
        return self._mul(a, b)

    def inv(self, a):
        if self._inverses is None:
            self._inverses = tuple(self._inv(x) for x in range(self.order))
        return self._inverses[a]

    @property
    def table(self):
        """Full multiplication table; only materialized for small orders."""
        if self._table is None:
            if self.order > TABLE_MAX_ORDER:
                raise CapacityError(f"multiplication table of order {self.order} is not materialized")
            self._table = [[self._mul(a, b) for b in range(self.order)] for a in range(self.order)]
        return self._table

    def validate(self, x):
        if isinstance(x, bool) or not isinstance(x, int) or not 0 <= x < self.order:
            raise InvalidElementError(f"{x!r} is not an element of {self.spec}")
        return x

    def key(self, x):
        return x

    def format(self, x):
        return self._fmt(x)

    @property
    def carrier(self):
        return range(self.order)

    @property
    def full_mask(self):
        return (1 << self.order) - 1

    # bitmask helpers; bit i stands for element i

    def left_perm(self, g):
        p = self._left.get(g)
        if p is None:
            p = self._left[g] = tuple(self.mul(g, x) for x in range(self.order))
        return p

    def right_perm(self, g):
        p = self._right.get(g)
        if p is None:
            p = self._right[g] = tuple(self.mul(x, g) for x in range(self.order))
        return p

    def mask(self, elements):
        m = 0
        for x in elements:
            m |= 1 << x
        return m

    def members(self, mask):
        out = []
        i = 0
        while mask:
            if mask & 1:
                out.append(i)
            mask >>= 1
            i += 1
        return out

    def left_translate(self, g, mask):
        p = self.left_perm(g)
        return self.mask(p[x] for x in self.members(mask))

    def right_translate(self, mask, g):
        p = self.right_perm(g)
        return self.mask(p[x] for x in self.members(mask))

    def inverse_mask(self, mask):
        return self.mask(self.inv(x) for x in self.members(mask))

    def product_mask(self, a, b):
        out = 0
        bm = b
        for x in self.members(a):
            out |= self.left_translate(x, bm)
            if out == self.full_mask:
                break
        return out


def _cyclic(spec):
    n = spec.n
    return FiniteGroup(spec, n, lambda a, b: (a + b) % n, lambda a: (-a) % n, str, True)


def _symmetric(spec):
    perms = list(itertools.permutations(range(spec.n)))
    index = {p: i for i, p in enumerate(perms)}

    def mul(a, b):
        # (a*b)(x) = a(b(x)): apply b first
        pa, pb = perms[a], perms[b]
        return index[tuple(pa[v] for v in pb)]

    def inv(a):
        p = perms[a]
        q = [0] * len(p)
        for i, v in enumerate(p):
            q[v] = i
        return index[tuple(q)]

    def fmt(a):
        return "[" + ",".join(map(str, perms[a])) + "]"

    g = FiniteGroup(spec, len(perms), mul, inv, fmt, spec.n <= 2)
    g.permutations = perms
    g.perm_index = index
    return g


def _dihedral(spec):
    n = spec.n

    # index f*n + i encodes r^i s^f
    def mul(a, b):
        fa, ia = divmod(a, n)
        fb, ib = divmod(b, n)
        i = (ia + (-ib if fa else ib)) % n
        return ((fa + fb) % 2) * n + i

    def inv(a):
        f, i = divmod(a, n)
        return a if f else (-i) % n

    def fmt(a):
        f, i = divmod(a, n)
        return f"{'s' if f else 'r'}{i}"

    return FiniteGroup(spec, 2 * n, mul, inv, fmt, n <= 2)


def _product(spec):
    parts = [make_group(f) for f in spec.factors]
    sizes = [p.order for p in parts]

    def split(a):
        out = []
        for s in reversed(sizes):
            a, r = divmod(a, s)
            out.append(r)
        return out[::-1]

    def join(cs):
        a = 0
        for c, s in zip(cs, sizes):
            a = a * s + c
        return a

    def mul(a, b):
        return join([p.mul(x, y) for p, x, y in zip(parts, split(a), split(b))])

    def inv(a):
        return join([p.inv(x) for p, x in zip(parts, split(a))])

    def fmt(a):
        return "(" + ",".join(p.format(x) for p, x in zip(parts, split(a))) + ")"

    g = FiniteGroup(spec, math.prod(sizes), mul, inv, fmt, all(p.is_abelian for p in parts))
    g.factors = parts
    g.split = split
    g.join = join
    return g


class FreeAbelianGroup(Group):
    """Z^d with elements encoded as integer tuples of length d."""

    identity = None
    is_abelian = True

    def __init__(self, spec):
        self.spec = spec
        self.d = spec.d
        self.identity = (0,) * spec.d

    def mul(self, a, b):
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        return tuple(-x for x in a)

    def validate(self, x):
        if isinstance(x, int) and not isinstance(x, bool) and self.d == 1:
            return (x,)
        if (isinstance(x, tuple) and len(x) == self.d
                and all(isinstance(v, int) and not isinstance(v, bool) for v in x)):
            return x
        raise InvalidElementError(f"{x!r} is not an element of {self.spec}")

    def key(self, x):
        return (max((abs(v) for v in x), default=0), x)

    def format(self, x):
        if self.d == 1:
            return str(x[0])
        return "(" + ",".join(map(str, x)) + ")"


def letter_key(letter):
    """Letter order a < a^-1 < b < b^-1 < ..."""
    return 2 * (abs(letter) - 1) + (letter < 0)


def letter_char(letter):
    c = chr(ord("a") + abs(letter) - 1)
    return c if letter > 0 else c.upper()


def reduce_word(letters):
    out = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


class FreeGroup(Group):
    """Free group on k generators; elements are reduced words."""

    identity = ()

    def __init__(self, spec):
        self.spec = spec
        self.k = spec.k
        self.is_abelian = spec.k == 1
        self.letters = tuple(sorted((s * i for i in range(1, spec.k + 1) for s in (1, -1)), key=letter_key))

    def mul(self, a, b):
        i = 0
        n = min(len(a), len(b))
        while i < n and a[-1 - i] == -b[i]:
            i += 1
        return a[:len(a) - i] + b[i:]

    def inv(self, a):
        return tuple(-l for l in reversed(a))

    def validate(self, x):
        if not isinstance(x, tuple):
            raise InvalidElementError(f"{x!r} is not a word of {self.spec}")
        for i, l in enumerate(x):
            if isinstance(l, bool) or not isinstance(l, int) or l == 0 or abs(l) > self.k:
                raise InvalidElementError(f"{x!r} uses a letter outside {self.spec}")
            if i and x[i - 1] == -l:
                raise InvalidElementError(f"{x!r} is not reduced")
        return x

    def key(self, x):
        return (len(x), tuple(letter_key(l) for l in x))

    def format(self, x):
        return "".join(letter_char(l) for l in x) if x else "1"

    def word(self, text):
        """Parse a word such as ``"abA"`` (capital letter = inverse); ``"1"`` is the identity."""
        if text in ("1", ""):
            return ()
        letters = []
        for c in text:
            i = ord(c.lower()) - ord("a") + 1
            if not c.isalpha() or not 1 <= i <= self.k:
                raise InvalidElementError(f"{c!r} is not a letter of {self.spec}")
            letters.append(i if c.islower() else -i)
        return reduce_word(letters)


@lru_cache(maxsize=None)
def make_group(spec):
    """Build (and cache) the group handle for a specification."""
    if isinstance(spec, Cyclic):
        return _cyclic(spec)
    if isinstance(spec, Symmetric):
        return _symmetric(spec)
    if isinstance(spec, Dihedral):
        return _dihedral(spec)
    if isinstance(spec, DirectProduct):
        return _product(spec)
    if isinstance(spec, FreeAbelian):
        return FreeAbelianGroup(spec)
    if isinstance(spec, Free):
        return FreeGroup(spec)
    raise TypeError(f"not a group specification: {spec!r}")


def multiply(G, a, b):
    return G.mul(G.validate(a), G.validate(b))


def invert(G, a):
    return G.inv(G.validate(a))


# ---------------------------------------------------------------------------
# windows


class Window:
    """Finite ordered list of distinct group elements."""

    def __init__(self, elements):
        self.elements = tuple(elements)
        self.index = {x: i for i, x in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise ValueError("window elements must be distinct")

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __getitem__(self, i):
        return self.elements[i]

    def __repr__(self):
        return f"Window({len(self)} elements)"


def carrier_window(G):
    if not G.is_finite:
        raise UnsupportedReductionError(f"{G.spec} has no finite carrier")
    return Window(range(G.order))


def _free_words(G, radius):
    layer = [()]
    yield ()
    for _ in range(radius):
        nxt = []
        for w in layer:
            for l in G.letters:
                if w and w[-1] == -l:
                    continue
                nxt.append(w + (l,))
        yield from nxt
        layer = nxt


def ball(G, radius):
    """Elements of word length (resp. sup-norm) at most ``radius``, length-lexicographically."""
    if radius < 0:
        raise ValueError("radius must be >= 0")
    if G.is_finite:
        return carrier_window(G)
    if isinstance(G, FreeGroup):
        return Window(_free_words(G, radius))
    pts = itertools.product(range(-radius, radius + 1), repeat=G.d)
    return Window(sorted(pts, key=G.key))


# ---------------------------------------------------------------------------
# subsets


@dataclass(frozen=True)
class Explicit:
    elements: frozenset

    def __init__(self, elements):
        object.__setattr__(self, "elements", frozenset(elements))


@dataclass(frozen=True)
class Residues:
    """Union of residue classes modulo a box ``moduli`` in Z^d."""

    moduli: tuple
    residues: frozenset

    def __init__(self, moduli, residues):
        if isinstance(moduli, int):
            moduli = (moduli,)
        moduli = tuple(moduli)
        if not moduli or any(m < 1 for m in moduli):
            raise ValueError("moduli must be positive")
        rs = set()
        for r in residues:
            if isinstance(r, int):
                r = (r,)
            if len(r) != len(moduli):
                raise ValueError("residue dimension does not match the moduli")
            rs.add(tuple(v % m for v, m in zip(r, moduli)))
        object.__setattr__(self, "moduli", moduli)
        object.__setattr__(self, "residues", frozenset(rs))


@dataclass(frozen=True)
class Prefix:
    """Reduced words whose first letter lies in ``letters``."""

    letters: frozenset

    def __init__(self, letters):
        object.__setattr__(self, "letters", frozenset(letters))


@dataclass(frozen=True)
class Union:
    left: object
    right: object


@dataclass(frozen=True)
class Intersection:
    left: object
    right: object


@dataclass(frozen=True)
class Complement:
    operand: object


@dataclass(frozen=True)
class Product:
    left: object
    right: object


@dataclass(frozen=True)
class Inverse:
    operand: object


@dataclass(frozen=True)
class Translate:
    """Left translate ``element * operand``."""

    element: object
    operand: object


@dataclass(frozen=True)
class Conjugate:
    """``element^-1 * operand * element``."""

    operand: object
    element: object


@dataclass(frozen=True)
class Wreath:
    """Union of the conjugates ``x^-1 * operand * x`` over x in ``conjugators``."""

    operand: object
    conjugators: object


Subset = (Explicit, Residues, Prefix, Union, Intersection, Complement, Product, Inverse, Translate,
          Conjugate, Wreath)

EMPTY = Explicit(())


def difference_set(A):
    """A * A^-1."""
    return Product(A, Inverse(A))


def check_subset(G, S):
    """Validate every leaf of ``S`` against ``G``; raise on mismatch."""
    if isinstance(S, Explicit):
        for x in S.elements:
            G.validate(x)
    elif isinstance(S, Residues):
        if not isinstance(G, FreeAbelianGroup):
            raise SetTypeError(f"residues() needs a free abelian group, not {G.spec}")
        if len(S.moduli) != G.d:
            raise SetTypeError(f"residues() modulus has dimension {len(S.moduli)}, group has {G.d}")
    elif isinstance(S, Prefix):
        if not isinstance(G, FreeGroup):
            raise SetTypeError(f"prefix() needs a free group, not {G.spec}")
        for l in S.letters:
            if not isinstance(l, int) or l == 0 or abs(l) > G.k:
                raise SetTypeError(f"prefix letter {l!r} is not a generator of {G.spec}")
    elif isinstance(S, (Union, Intersection, Product)):
        check_subset(G, S.left)
        check_subset(G, S.right)
    elif isinstance(S, (Complement, Inverse)):
        check_subset(G, S.operand)
    elif isinstance(S, Translate):
        G.validate(S.element)
        check_subset(G, S.operand)
    elif isinstance(S, Conjugate):
        G.validate(S.element)
        check_subset(G, S.operand)
    elif isinstance(S, Wreath):
        check_subset(G, S.operand)
        check_subset(G, S.conjugators)
    else:
        raise SetTypeError(f"not a subset expression: {S!r}")
    return S


def prefix_meets(u, letters):
    """Whether ``u * P`` meets ``P`` for the prefix set P with first letters ``letters``.

    Works by case analysis on how much of ``u`` a word of P cancels.
    """
    P = letters
    if not P:
        return False
    if not u:
        return True
    first, last_inv = u[0], -u[-1]
    # partial (or no) cancellation keeps the first letter of u in front
    if first in P and (P - {last_inv} or (len(u) >= 2 and last_inv in P)):
        return True
    # full cancellation: w = u^-1 v with v in P and v[0] != first
    return last_inv in P and bool(P - {first})


def finite_elements(G, S):
    """The elements of ``S`` if it is evidently finite, else None."""
    if G.is_finite:
        return frozenset(G.members(finite_mask(G, S)))
    if isinstance(S, Explicit):
        return S.elements
    if isinstance(S, Union):
        a, b = finite_elements(G, S.left), finite_elements(G, S.right)
        return None if a is None or b is None else a | b
    if isinstance(S, Intersection):
        a = finite_elements(G, S.left)
        if a is not None:
            return frozenset(x for x in a if contains(G, S.right, x))
        b = finite_elements(G, S.right)
        if b is not None:
            return frozenset(x for x in b if contains(G, S.left, x))
        return None
    if isinstance(S, Inverse):
        a = finite_elements(G, S.operand)
        return None if a is None else frozenset(G.inv(x) for x in a)
    if isinstance(S, Translate):
        a = finite_elements(G, S.operand)
        return None if a is None else frozenset(G.mul(S.element, x) for x in a)
    if isinstance(S, Conjugate):
        a = finite_elements(G, S.operand)
        g = S.element
        return None if a is None else frozenset(G.mul(G.mul(G.inv(g), x), g) for x in a)
    if isinstance(S, Product):
        a, b = finite_elements(G, S.left), finite_elements(G, S.right)
        return None if a is None or b is None else frozenset(G.mul(x, y) for x in a for y in b)
    if isinstance(S, Wreath):
        a, e = finite_elements(G, S.operand), finite_elements(G, S.conjugators)
        if a is None or e is None:
            return None
        return frozenset(G.mul(G.mul(G.inv(g), x), g) for g in e for x in a)
    return None


def _box(moduli):
    return itertools.product(*(range(m) for m in moduli))


def _lift(R, L):
    """Express the periodic set R (a Residues) with the finer modulus box L."""
    return frozenset(r for r in _box(L) if tuple(v % m for v, m in zip(r, R.moduli)) in R.residues)


def _common(a, b):
    L = tuple(math.lcm(x, y) for x, y in zip(a.moduli, b.moduli))
    return L, _lift(a, L), _lift(b, L)


def periodic_form(G, S):
    """Residues normal form of ``S`` in Z^d, or None if ``S`` is not evidently periodic."""
    if not isinstance(G, FreeAbelianGroup):
        return None
    if isinstance(S, Residues):
        return S
    if isinstance(S, Complement):
        a = periodic_form(G, S.operand)
        if a is None:
            return None
        return Residues(a.moduli, set(_box(a.moduli)) - a.residues)
    if isinstance(S, (Union, Intersection)):
        a, b = periodic_form(G, S.left), periodic_form(G, S.right)
        if a is None or b is None:
            return None
        L, ra, rb = _common(a, b)
        return Residues(L, ra | rb if isinstance(S, Union) else ra & rb)
    if isinstance(S, (Inverse, Translate, Conjugate, Wreath)):
        a = periodic_form(G, S.operand)
        if a is None:
            return None
        if isinstance(S, Inverse):
            return Residues(a.moduli, [G.inv(r) for r in a.residues])
        if isinstance(S, Translate):
            return Residues(a.moduli, [G.mul(S.element, r) for r in a.residues])
        if isinstance(S, Wreath):
            e = finite_elements(G, S.conjugators)
            if e is None:
                return None
            return a if e else Residues(a.moduli, ())
        return a
    if isinstance(S, Product):
        a, b = periodic_form(G, S.left), periodic_form(G, S.right)
        fa, fb = finite_elements(G, S.left), finite_elements(G, S.right)
        if a is not None and b is not None:
            L, ra, rb = _common(a, b)
            return Residues(L, [G.mul(x, y) for x in ra for y in rb])
        if a is not None and fb is not None:
            return Residues(a.moduli, [G.mul(r, y) for r in a.residues for y in fb])
        if b is not None and fa is not None:
            return Residues(b.moduli, [G.mul(x, r) for x in fa for r in b.residues])
        return None
    return None


def local_depth(G, S):
    """For a free group, the prefix length that decides membership in ``S``.

    Membership of a word w of length >= depth depends only on its first
    ``depth`` letters. Returns None when no such bound is evident.
    """
    if not isinstance(G, FreeGroup):
        return None
    fin = finite_elements(G, S)
    if fin is not None:
        return max((len(x) for x in fin), default=0) + 1
    if isinstance(S, Prefix):
        return 1
    if isinstance(S, Complement):
        return local_depth(G, S.operand)
    if isinstance(S, (Union, Intersection)):
        a, b = local_depth(G, S.left), local_depth(G, S.right)
        return None if a is None or b is None else max(a, b)
    if isinstance(S, Translate):
        a = local_depth(G, S.operand)
        return None if a is None else a + len(S.element)
    return None


def first_letter_form(G, S):
    """For a free group, ``(letters, has_identity)`` if membership depends only on the first letter."""
    if not isinstance(G, FreeGroup):
        return None
    if isinstance(S, Prefix):
        return frozenset(S.letters), False
    if isinstance(S, Explicit):
        if S.elements <= {()}:
            return frozenset(), bool(S.elements)
        return None
    if isinstance(S, Complement):
        a = first_letter_form(G, S.operand)
        return None if a is None else (frozenset(G.letters) - a[0], not a[1])
    if isinstance(S, (Union, Intersection)):
        a, b = first_letter_form(G, S.left), first_letter_form(G, S.right)
        if a is None or b is None:
            return None
        if isinstance(S, Union):
            return a[0] | b[0], a[1] or b[1]
        return a[0] & b[0], a[1] and b[1]
    return None


def contains(G, S, x, window=None):
    """Membership test. ``window`` is only consulted for products of two infinite sets."""
    if G.is_finite:
        return bool(finite_mask(G, S) >> x & 1)
    if isinstance(S, Explicit):
        return x in S.elements
    if isinstance(S, Residues):
        return tuple(v % m for v, m in zip(x, S.moduli)) in S.residues
    if isinstance(S, Prefix):
        return bool(x) and x[0] in S.letters
    if isinstance(S, Union):
        return contains(G, S.left, x, window) or contains(G, S.right, x, window)
    if isinstance(S, Intersection):
        return contains(G, S.left, x, window) and contains(G, S.right, x, window)
    if isinstance(S, Complement):
        return not contains(G, S.operand, x, window)
    if isinstance(S, Inverse):
        return contains(G, S.operand, G.inv(x), window)
    if isinstance(S, Translate):
        return contains(G, S.operand, G.mul(G.inv(S.element), x), window)
    if isinstance(S, Conjugate):
        g = S.element
        return contains(G, S.operand, G.mul(G.mul(g, x), G.inv(g)), window)
    if isinstance(S, Wreath):
        e = finite_elements(G, S.conjugators)
        if e is None:
            raise UnsupportedReductionError("wr() needs a finite set of conjugators")
        return any(contains(G, S.operand, G.mul(G.mul(g, x), G.inv(g)), window) for g in e)
    if isinstance(S, Product):
        return _product_contains(G, S, x, window)
    raise SetTypeError(f"not a subset expression: {S!r}")


def _product_contains(G, S, x, window):
    A, B = S.left, S.right
    fa = finite_elements(G, A)
    if fa is not None:
        return any(contains(G, B, G.mul(G.inv(a), x), window) for a in fa)
    fb = finite_elements(G, B)
    if fb is not None:
        return any(contains(G, A, G.mul(x, G.inv(b)), window) for b in fb)
    per = periodic_form(G, S)
    if per is not None:
        return contains(G, per, x)
    if isinstance(G, FreeGroup) and isinstance(B, Inverse) and B.operand == A:
        flf = first_letter_form(G, A)
        if flf is not None and not flf[1]:
            # x in A A^-1 iff x A meets A
            return prefix_meets(x, flf[0])
    if window is None:
        raise WindowTooSmallError("membership in a product of two infinite sets needs a search window")
    for a in window:
        if contains(G, A, a, window) and contains(G, B, G.mul(G.inv(a), x), window):
            return True
    raise WindowTooSmallError(f"no factorization of {G.format(x)} found inside the window; "
                              "absence cannot be certified")


def realize(G, S, W):
    """Bitmask over the window ``W``: bit i is set iff ``W[i]`` lies in ``S``."""
    if G.is_finite and len(W) == G.order and all(W[i] == i for i in range(len(W))):
        return finite_mask(G, S)
    m = 0
    for i, x in enumerate(W):
        if contains(G, S, x, W):
            m |= 1 << i
    return m


@lru_cache(maxsize=200_000)
def finite_mask(G, S):
    """Bitmask of ``S`` over the canonical carrier of a finite group."""
    if isinstance(S, Explicit):
        return G.mask(G.validate(x) for x in S.elements)
    if isinstance(S, Union):
        return finite_mask(G, S.left) | finite_mask(G, S.right)
    if isinstance(S, Intersection):
        return finite_mask(G, S.left) & finite_mask(G, S.right)
    if isinstance(S, Complement):
        return G.full_mask ^ finite_mask(G, S.operand)
    if isinstance(S, Inverse):
        return G.inverse_mask(finite_mask(G, S.operand))
    if isinstance(S, Translate):
        return G.left_translate(S.element, finite_mask(G, S.operand))
    if isinstance(S, Conjugate):
        g = S.element
        return G.right_translate(G.left_translate(G.inv(g), finite_mask(G, S.operand)), g)
    if isinstance(S, Wreath):
        a = finite_mask(G, S.operand)
        out = 0
        for g in G.members(finite_mask(G, S.conjugators)):
            out |= G.right_translate(G.left_translate(G.inv(g), a), g)
        return out
    if isinstance(S, Product):
        return G.product_mask(finite_mask(G, S.left), finite_mask(G, S.right))
    if isinstance(S, (Residues, Prefix)):
        raise SetTypeError(f"{type(S).__name__} sets do not live in the finite group {G.spec}")
    raise SetTypeError(f"not a subset expression: {S!r}")


def mask_subset(G, mask):
    """Explicit subset of a finite group from a bitmask."""
    return Explicit(G.members(mask))


# ---------------------------------------------------------------------------
# quotients of Z^d


def quotient_map(G, moduli):
    """Finite quotient Z^d / m Z^d and the projection onto it."""
    if not isinstance(G, FreeAbelianGroup):
        raise UnsupportedReductionError("quotient maps are defined for Z^d only")
    moduli = (moduli,) if isinstance(moduli, int) else tuple(moduli)
    if len(moduli) != G.d or any(m < 1 for m in moduli):
        raise ValueError("modulus vector must have one positive entry per dimension")
    if len(moduli) == 1:
        H = make_group(Cyclic(moduli[0]))

        def proj(x):
            return x[0] % moduli[0]
    else:
        H = make_group(DirectProduct(tuple(Cyclic(m) for m in moduli)))

        def proj(x):
            return H.join([v % m for v, m in zip(x, moduli)])
    return H, proj


def reduce_periodic(G, S):
    """Project a periodic subset of Z^d into its finite quotient: ``(H, mask, proj, moduli)``."""
    per = periodic_form(G, S)
    if per is None:
        raise UnsupportedReductionError("the set is not periodic, so it has no finite quotient")
    H, proj = quotient_map(G, per.moduli)
    return H, H.mask(proj(r) for r in per.residues), proj, per.moduli


def lift_quotient_element(H, moduli, h):
    """Representative in the box [0, m) of a quotient element."""
    if len(moduli) == 1:
        return (h,)
    return tuple(H.split(h))
