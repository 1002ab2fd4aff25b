"""Extremal densities and submeasures.

Every density here is the value of a zero-sum game between a finitely
supported measure on G (the row player, restricted to a support window) and
test points of X = G (the columns). On finite groups and periodic subsets of
Z^d the games are solved exactly; elsewhere the result is a certified upper
bound, which requires the column set to cover every test point exactly.
"""
from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import (
    EmptySupportError,
    InnerSupNotExactError,
    InvalidPatternError,
    UnsupportedGroupError,
    WindowTooSmallError,
    UnsupportedReductionError,
)
from .grp import (
    Complement,
    Explicit,
    FreeAbelianGroup,
    FreeGroup,
    Window,
    ball,
    contains,
    finite_elements,
    finite_mask,
    first_letter_form,
    lift_quotient_element,
    local_depth,
    periodic_form,
    reduce_periodic,
    _box,
)
from .meas import Measure, dirac, uniform
from .ratlp import GameMatrix, game_value, maximin_value

ZERO = Fraction(0)
ONE = Fraction(1)

DEFAULT_FINITE_KMAX = 12
DEFAULT_WINDOW_KMAX = 8
DEFAULT_GRID = 4
DEFAULT_RADIUS = 2


@dataclass
class DensityResult:
    """A density value: exact, or a certified bound/interval.

    ``lo``/``hi`` always bracket the true value; an upper bound has lo = 0,
    a lower bound hi = 1.
    """

    kind: str
    lo: Fraction
    hi: Fraction
    method: str
    witness: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval with lo > hi")

    @classmethod
    def exact(cls, v, method, witness=None):
        v = Fraction(v)
        return cls("exact", v, v, method, witness or {})

    @classmethod
    def upper(cls, v, method, witness=None):
        return cls("upper", ZERO, Fraction(v), method, witness or {})

    @classmethod
    def lower(cls, v, method, witness=None):
        return cls("lower", Fraction(v), ONE, method, witness or {})

    @classmethod
    def interval(cls, lo, hi, method, witness=None):
        lo, hi = Fraction(lo), Fraction(hi)
        return cls("interval", lo, hi, method, witness or {})

    @property
    def is_exact(self):
        return self.kind == "exact"

    @property
    def value(self):
        """The exact value, or the informative end of a one-sided bound."""
        if self.kind in ("exact", "upper"):
            return self.hi
        if self.kind == "lower":
            return self.lo
        raise ValueError("an interval has no single value")

    def __contains__(self, v):
        return self.lo <= v <= self.hi


# ---------------------------------------------------------------------------
# helpers


def _popcount(m):
    return bin(m).count("1")


def _is_empty_or_full(G, A):
    """0 if A is evidently empty, 1 if evidently all of G, else None."""
    if isinstance(A, int):
        return 0 if A == 0 else (1 if A == G.full_mask else None)
    if G.is_finite:
        m = finite_mask(G, A)
        return 0 if m == 0 else (1 if m == G.full_mask else None)
    if isinstance(A, Complement):
        inner = _is_empty_or_full(G, A.operand)
        return None if inner is None else 1 - inner
    per = periodic_form(G, A)
    if per is not None:
        if not per.residues:
            return 0
        if len(per.residues) == _box_size(per.moduli):
            return 1
        return None
    fin = finite_elements(G, A)
    if fin is not None:
        return 0 if not fin else None
    flf = first_letter_form(G, A)
    if flf is not None:
        letters, eps = flf
        if not letters and not eps:
            return 0
        if len(letters) == len(G.letters) and eps:
            return 1
    return None


def _box_size(moduli):
    n = 1
    for m in moduli:
        n *= m
    return n


def _mask(G, A):
    return A if isinstance(A, int) else finite_mask(G, A)


def _support_list(G, support, default_radius=DEFAULT_RADIUS):
    if support is None:
        if G.is_finite:
            return list(range(G.order))
        return list(ball(G, default_radius))
    elements = list(support)
    if not elements:
        raise EmptySupportError("empty support window")
    out = [G.validate(x) for x in elements]
    if len(set(out)) != len(out):
        raise ValueError("support window contains duplicates")
    return out


def _reduce_columns(columns):
    """Keep one witness per distinct mask and drop masks contained in another."""
    seen = {}
    for m, w in columns:
        if m not in seen:
            seen[m] = w
    masks = list(seen)
    keep = []
    for m in masks:
        if any(o != m and o & m == m for o in masks):
            continue
        keep.append((m, seen[m]))
    return keep


def left_columns(G, A, rows):
    """Distinct payoff columns x -> {i : rows[i] x in A}, exhaustive over all x in G.

    Returns ``(mask, x)`` pairs. Raises InnerSupNotExactError if the test
    domain of A cannot be covered by a finite enumeration.
    """
    out = []
    if G.is_finite:
        am = _mask(G, A)
        for x in range(G.order):
            rp = G.right_perm(x)
            m = 0
            for i, g in enumerate(rows):
                if am >> rp[g] & 1:
                    m |= 1 << i
            out.append((m, x))
        return out
    if isinstance(G, FreeAbelianGroup):
        per = periodic_form(G, A)
        if per is not None:
            for x in _box(per.moduli):
                out.append((_row_mask(G, per, rows, x), x))
            return out
        fin = finite_elements(G, A)
        if fin is not None:
            cands = {G.mul(G.inv(g), a) for g in rows for a in fin}
            for x in sorted(cands, key=G.key):
                out.append((_row_mask(G, A, rows, x), x))
            out.append((0, None))
            return out
        raise InnerSupNotExactError("only periodic or finite subsets of Z^d have an exact inner sup")
    if isinstance(G, FreeGroup):
        depth = local_depth(G, A)
        if depth is None:
            raise InnerSupNotExactError("the set has no bounded membership depth in the free group")
        radius = max(len(g) for g in rows) + depth
        for x in ball(G, radius):
            out.append((_row_mask(G, A, rows, x), x))
        return out
    raise InnerSupNotExactError(f"no exact inner sup for {G.spec}")


def _row_mask(G, A, rows, x):
    m = 0
    for i, g in enumerate(rows):
        if contains(G, A, G.mul(g, x)):
            m |= 1 << i
    return m


def two_sided_columns(G, A, rows):
    """Distinct payoff columns (x, y) -> {i : x rows[i] y in A}, exhaustive over G x G."""
    if G.is_finite:
        am = _mask(G, A)
        out = []
        for x in range(G.order):
            lp = G.left_perm(x)
            for y in range(G.order):
                rp = G.right_perm(y)
                m = 0
                for i, g in enumerate(rows):
                    if am >> rp[lp[g]] & 1:
                        m |= 1 << i
                out.append((m, (x, y)))
        return out
    if G.is_abelian and isinstance(G, FreeAbelianGroup):
        return [(m, (x, G.identity)) for m, x in left_columns(G, A, rows)]
    if isinstance(G, FreeGroup):
        flf = first_letter_form(G, A)
        if flf is None:
            raise InnerSupNotExactError("two-sided sup in a free group needs a first-letter set")
        letters, eps = flf
        if letters:
            p = min(letters, key=lambda l: (abs(l), l < 0))
            x = (p,) * (max(len(g) for g in rows) + 1)
            return [((1 << len(rows)) - 1, (x, ()))]
        if eps:
            return [(1 << i, (G.inv(g), ())) for i, g in enumerate(rows)]
        return [(0, ((), ()))]
    raise InnerSupNotExactError(f"no exact two-sided sup for {G.spec}")


def _solve_columns(rows, columns):
    """Min-max game over 0/1 columns; returns (GameSolution, reduced columns)."""
    cols = _reduce_columns(columns)
    game = GameMatrix.from_columns(len(rows), [m for m, _ in cols], list(rows), [w for _, w in cols])
    return game_value(game), cols


def _argmax_column(sol):
    best = max(sol.row_payoffs)
    return sol.row_payoffs.index(best)


# ---------------------------------------------------------------------------
# Kelley intersection number


def kelley_bruteforce(family, max_tuple):
    """min over multisets B_1..B_n (n <= max_tuple) of (1/n) max_y #{k : y in B_k}."""
    family = list(dict.fromkeys(frozenset(B) for B in family))
    if not family:
        raise EmptySupportError("empty family")
    if max_tuple < 1:
        raise ValueError("max_tuple must be >= 1")
    points = sorted(set().union(*family), key=repr)
    if not points:
        return ZERO
    incidence = [[1 if y in B else 0 for y in points] for B in family]
    best = ONE
    for n in range(1, max_tuple + 1):
        for combo in itertools.combinations_with_replacement(range(len(family)), n):
            counts = [0] * len(points)
            for k in combo:
                row = incidence[k]
                for t in range(len(points)):
                    counts[t] += row[t]
            v = Fraction(max(counts), n)
            if v < best:
                best = v
    return best


def kelley_lp(family, window):
    """I(B) = min ||f|| over f in conv{chi_B}, solved as a game (B vs window points)."""
    family = list(dict.fromkeys(frozenset(B) for B in family))
    window = list(window)
    if not family:
        raise EmptySupportError("empty family")
    if any(not B for B in family):
        return DensityResult.exact(0, "lp-game", {"weights": {frozenset(): ONE}})
    entries = [[1 if y in B else 0 for y in window] for B in family]
    sol = game_value(GameMatrix(entries, family, window))
    return DensityResult.exact(sol.value, "lp-game", {"weights": sol.row_strategy, "points": sol.col_strategy})


def translate_family(G, A):
    """The family {xA : x in G} of a finite group, as element sets."""
    am = _mask(G, A)
    return [frozenset(G.members(G.left_translate(x, am))) for x in range(G.order)]


# ---------------------------------------------------------------------------
# is12 / si21 / us12


def is12(G, A, support=None, mode="auto"):
    """inf over mu in P_w(G) of sup_x (mu * delta_x)(A)."""
    deg = _is_empty_or_full(G, A)
    if deg is not None:
        return DensityResult.exact(deg, "closed-form")
    if mode not in ("auto", "exact", "window"):
        raise ValueError(f"unknown mode {mode!r}")
    if not G.is_finite and support is None and mode != "window" and periodic_form(G, A) is not None:
        return _via_quotient(G, A, is12)
    if mode == "exact" and not G.is_finite:
        if periodic_form(G, A) is None:
            raise UnsupportedReductionError("exact is12 needs a finite group or a periodic set")
        return _via_quotient(G, A, is12)
    rows = _support_list(G, support)
    sol, cols = _solve_columns(rows, left_columns(G, A, rows))
    witness = {"measure": Measure(sol.row_strategy), "test_point": cols[_argmax_column(sol)][1]}
    if G.is_finite and len(rows) == G.order:
        return DensityResult.exact(sol.value, "lp-game", witness)
    return DensityResult.upper(sol.value, "lp-game", witness)


def _via_quotient(G, A, fn, **kw):
    H, mask, _, moduli = reduce_periodic(G, A)
    r = fn(H, mask, **kw)
    witness = {}
    for k, v in r.witness.items():
        if isinstance(v, Measure):
            witness[k] = v.push(lambda h: lift_quotient_element(H, moduli, h))
        elif isinstance(v, int):
            witness[k] = lift_quotient_element(H, moduli, v)
        else:
            witness[k] = v
    witness["modulus"] = moduli
    return DensityResult(r.kind, r.lo, r.hi, "quotient", witness)


def si21(G, A):
    """sup over nu on X of inf_x nu(xA): the column side of the is12 game."""
    if not G.is_finite:
        if periodic_form(G, A) is not None:
            return _via_quotient(G, A, si21)
        raise UnsupportedGroupError("si21 is only representable exactly on finite groups")
    deg = _is_empty_or_full(G, A)
    if deg is not None:
        return DensityResult.exact(deg, "closed-form")
    rows = list(range(G.order))
    sol, _ = _solve_columns(rows, left_columns(G, A, rows))
    return DensityResult.exact(sol.value, "lp-game-dual", {"measure": Measure(sol.col_strategy)})


def _subset_search(rows, columns, kmax):
    """min over non-empty F (|F| <= kmax) of max_col |F & col| / |F|."""
    masks = [m for m, _ in _reduce_columns(columns)]
    best = None
    best_f = None
    for k in range(1, min(kmax, len(rows)) + 1):
        for combo in itertools.combinations(range(len(rows)), k):
            f = 0
            for i in combo:
                f |= 1 << i
            v = Fraction(max(_popcount(f & m) for m in masks), k)
            if best is None or v < best:
                best, best_f = v, combo
        if best == 0:
            break
    return best, [rows[i] for i in best_f]


def _default_kmax(G, kmax):
    if kmax is not None:
        if kmax < 1:
            raise ValueError("kmax must be >= 1")
        return kmax
    return min(G.order, DEFAULT_FINITE_KMAX) if G.is_finite else DEFAULT_WINDOW_KMAX


def us12(G, A, kmax=None, support=None):
    """is12 with the outer measure restricted to uniform measures on finite sets F."""
    deg = _is_empty_or_full(G, A)
    if deg is not None:
        return DensityResult.exact(deg, "closed-form")
    kmax = _default_kmax(G, kmax)
    rows = _support_list(G, support)
    v, F = _subset_search(rows, left_columns(G, A, rows), kmax)
    witness = {"set": F}
    if G.is_finite and len(rows) == G.order and kmax >= G.order:
        return DensityResult.exact(v, "subset-enum", witness)
    return DensityResult.upper(v, "subset-enum", witness)


# ---------------------------------------------------------------------------
# two-sided: iss213 / uss213


def _free_prefix_full(G, A):
    if isinstance(G, FreeGroup):
        flf = first_letter_form(G, A)
        if flf is not None and flf[0]:
            return True
    return False


def iss213(G, A, support=None):
    """inf over mu in P_w(G) of sup_{x,y} mu(x^-1 A y^-1)  (the Solecki submeasure)."""
    deg = _is_empty_or_full(G, A)
    if deg is not None:
        return DensityResult.exact(deg, "closed-form")
    if not G.is_finite and support is None and periodic_form(G, A) is not None:
        return _via_quotient(G, A, iss213)
    rows = _support_list(G, support)
    if _free_prefix_full(G, A):
        # every finite support is swallowed by a long power of a letter of A
        (_, (x, y)), = two_sided_columns(G, A, rows)
        return DensityResult.exact(1, "prefix-analysis", {"shift": (x, y)})
    sol, cols = _solve_columns(rows, two_sided_columns(G, A, rows))
    witness = {"measure": Measure(sol.row_strategy), "shift": cols[_argmax_column(sol)][1]}
    if G.is_finite and len(rows) == G.order:
        return DensityResult.exact(sol.value, "lp-game", witness)
    return DensityResult.upper(sol.value, "lp-game", witness)


def uss213_search(G, A, kmax=None, support=None):
    """min over finite F of max_{x,y} |F & xAy| / |F|."""
    deg = _is_empty_or_full(G, A)
    if deg is not None:
        return DensityResult.exact(deg, "closed-form")
    kmax = _default_kmax(G, kmax)
    rows = _support_list(G, support)
    if _free_prefix_full(G, A):
        (_, (x, y)), = two_sided_columns(G, A, rows)
        return DensityResult.exact(1, "prefix-analysis", {"shift": (x, y)})
    v, F = _subset_search(rows, two_sided_columns(G, A, rows), kmax)
    witness = {"set": F}
    if G.is_finite and len(rows) == G.order and kmax >= G.order:
        return DensityResult.exact(v, "subset-enum", witness)
    return DensityResult.upper(v, "subset-enum", witness)


# ---------------------------------------------------------------------------
# sis123


def uniform_candidates(G, kmax):
    for k in range(1, min(kmax, G.order) + 1):
        for combo in itertools.combinations(range(G.order), k):
            yield uniform(combo)


def grid_candidates(G, denominator):
    """All measures on G whose weights are multiples of 1/denominator."""
    n = G.order
    for bars in itertools.combinations(range(denominator + n - 1), n - 1):
        parts = []
        prev = -1
        for b in bars + (denominator + n - 1,):
            parts.append(b - prev - 1)
            prev = b
        yield Measure({g: Fraction(c, denominator) for g, c in enumerate(parts) if c})


def _inner_sis(G, am, mu1):
    """min over mu2 of max over x of (mu1 * mu2 * delta_x)(A), exactly."""
    items = list(mu1.items())
    entries = []
    for h in range(G.order):
        row = []
        for x in range(G.order):
            hx = G.mul(h, x)
            row.append(sum((a for g, a in items if am >> G.mul(g, hx) & 1), ZERO))
        entries.append(row)
    return game_value(entries).value


def sis123(G, A, kmax=None, grid_denominator=DEFAULT_GRID, exhaustive=False):
    """Interval [lower bound by outer search, iss213] for sup inf sup (mu1*mu2*mu3)(A)."""
    if not G.is_finite:
        raise UnsupportedGroupError("sis123 is computed on finite groups only")
    deg = _is_empty_or_full(G, A)
    if deg is not None:
        return DensityResult.interval(deg, deg, "closed-form")
    am = _mask(G, A)
    kmax = _default_kmax(G, kmax)
    upper = iss213(G, am).hi
    best, best_mu = None, None
    for mu in itertools.chain(uniform_candidates(G, kmax), grid_candidates(G, grid_denominator)):
        v = _inner_sis(G, am, mu)
        if best is None or v > best:
            best, best_mu = v, mu
        if best == upper and not exhaustive:
            break
    return DensityResult.interval(best, upper, "grid+chain", {"measure": best_mu})


# ---------------------------------------------------------------------------
# subadditivization


def subadditivize(base, A, G, exact_limit=12, samples=512, seed=0):
    """sup over C of base(A | C) - base(C).

    ``base(G, S)`` must return a Fraction or an exact DensityResult.
    """
    if not G.is_finite:
        raise UnsupportedGroupError("subadditivization is computed on finite groups only")
    am = _mask(G, A)
    cache = {}

    def f(mask):
        v = cache.get(mask)
        if v is None:
            r = base(G, Explicit(G.members(mask)))
            if isinstance(r, DensityResult):
                if not r.is_exact:
                    raise UnsupportedReductionError("subadditivize needs an exact base density")
                r = r.value
            v = cache[mask] = Fraction(r)
        return v

    if G.order <= exact_limit:
        cs = range(G.full_mask + 1)
        exact = True
    else:
        rng = random.Random(seed)
        cs = [0] + [rng.getrandbits(G.order) for _ in range(samples)]
        exact = False
    best, best_c = None, None
    for c in cs:
        v = f(am | c) - f(c)
        if best is None or v > best:
            best, best_c = v, c
    witness = {"complement_set": G.members(best_c)}
    if exact:
        return DensityResult.exact(best, "subset-enum", witness)
    return DensityResult.lower(best, "sampled", witness)


# ---------------------------------------------------------------------------
# upper Banach density on Z^d by box ladders


def dstar_window(G, A, ladder):
    """Box approximants max_t |A & (t + [0,L)^d)| / L^d for each side L in ``ladder``.

    Every rung is an upper bound on d*(A) because the translate search is
    exhaustive; periodic sets are additionally evaluated exactly.
    """
    if not isinstance(G, FreeAbelianGroup):
        raise UnsupportedGroupError("box ladders are defined on Z^d")
    ladder = list(ladder)
    if not ladder or any(L < 1 for L in ladder):
        raise ValueError("ladder sides must be positive")
    d = G.d
    deg = _is_empty_or_full(G, A)
    if deg is not None:
        return DensityResult.exact(deg, "closed-form", {"rungs": [(L, Fraction(deg)) for L in ladder]})
    if isinstance(A, Complement) and finite_elements(G, A.operand) is not None:
        # a cofinite set contains arbitrarily large boxes
        return DensityResult.exact(1, "closed-form", {"rungs": [(L, ONE) for L in ladder]})
    per = periodic_form(G, A)
    fin = None if per is not None else finite_elements(G, A)
    if per is None and fin is None:
        raise WindowTooSmallError("box ladders are only decidable for periodic, finite or cofinite sets")
    rungs = []
    for L in ladder:
        size = L ** d
        if per is not None:
            best = 0
            for t in _box(per.moduli):
                c = sum(1 for p in _box((L,) * d)
                        if contains(G, per, tuple(a + b for a, b in zip(t, p))))
                best = max(best, c)
        else:
            best = 0
            for t in {tuple(a - b for a, b in zip(x, p)) for x in fin for p in _box((L,) * d)}:
                c = sum(1 for x in fin if all(0 <= xi - ti < L for xi, ti in zip(x, t)))
                best = max(best, c)
        rungs.append((L, Fraction(best, size)))
    witness = {"rungs": rungs}
    if per is not None:
        return DensityResult.exact(Fraction(len(per.residues), _box_size(per.moduli)), "quotient", witness)
    return DensityResult.upper(min(v for _, v in rungs), "grid", witness)


# ---------------------------------------------------------------------------
# hierarchy of extremal densities


QUANTIFIERS = "isuIS"


@dataclass(frozen=True)
class ExtremalPattern:
    """Quantifier word ``e`` (one letter per measure) and convolution order ``s`` (1-based)."""

    e: str
    s: tuple

    def __post_init__(self):
        n = len(self.e)
        if not 1 <= n <= 3:
            raise InvalidPatternError("patterns have length 1..3")
        if any(c not in QUANTIFIERS for c in self.e):
            raise InvalidPatternError(f"quantifiers must be among {QUANTIFIERS!r}")
        if tuple(sorted(self.s)) != tuple(range(1, n + 1)):
            raise InvalidPatternError("s must be a permutation of 1..n")
        last = self.s.index(n) + 1   # s^-1(n)
        for pos, c in enumerate(self.e, 1):
            if pos != last and c not in "uis":
                raise InvalidPatternError(
                    f"quantifier {c!r} at position {pos} is only allowed at position {last}")

    @classmethod
    def parse(cls, text):
        """``"is"`` (identity order) or ``"iss:213"``."""
        e, _, s = text.partition(":")
        s = tuple(int(c) for c in s) if s else tuple(range(1, len(e) + 1))
        return cls(e, s)

    def __str__(self):
        return f"{self.e}:{''.join(map(str, self.s))}"


def _direction(q):
    return "max" if q in "sS" else "min"


def eval_extremal(pattern, G, A, budget=DEFAULT_GRID, kmax=None):
    """Evaluate e_s(A) on a finite group (P(G) = P_w(G) there, so I = i and S = s)."""
    if isinstance(pattern, str):
        pattern = ExtremalPattern.parse(pattern)
    if not G.is_finite:
        raise UnsupportedGroupError("extremal patterns are evaluated on finite groups")
    am = _mask(G, A)
    q = pattern.e.replace("I", "i").replace("S", "s")
    n = len(q)
    order = [k - 1 for k in pattern.s]      # slot -> measure position
    kmax = _default_kmax(G, kmax)
    dirs = [_direction(c) for c in q]

    def payoff(gs):
        z = G.identity
        for pos in order:
            z = G.mul(z, gs[pos])
        return am >> z & 1

    p = n
    while p > 0 and dirs[p - 1] == dirs[-1]:
        p -= 1
    elems = range(G.order)

    if p == 0:
        vals = [payoff(gs) for gs in itertools.product(elems, repeat=n)]
        return DensityResult.exact(max(vals) if dirs[0] == "max" else min(vals), "dirac")

    if p == 1:
        cols = list(itertools.product(elems, repeat=n - 1))
        entries = [[payoff((g,) + c) for c in cols] for g in elems]
        return _outer_single(G, q[0], entries, kmax)

    # p == 2, n == 3: the innermost measure is Dirac, two outer quantifiers remain
    slot0, slot1 = order.index(0), order.index(1)
    if dirs[0] == dirs[1] and abs(slot0 - slot1) == 1 and not (q[0] == "u" and q[1] == "u"):
        # the convolution of two adjacent same-direction measures sweeps all of P_w(G)
        entries = []
        for g in elems:
            row = []
            for x in elems:
                gs = [None, None, x]
                gs[0] = g if slot0 < slot1 else G.identity
                gs[1] = G.identity if slot0 < slot1 else g
                row.append(payoff(gs))
            entries.append(row)
        merged = "s" if dirs[0] == "max" else "i"
        r = _outer_single(G, merged, entries, kmax)
        return DensityResult(r.kind, r.lo, r.hi, "merged-" + r.method, r.witness)
    return _depth3_bounds(G, q, dirs, payoff, budget, kmax)


def _outer_single(G, q1, entries, kmax):
    if q1 == "i":
        return DensityResult.exact(game_value(entries).value, "lp-game")
    if q1 == "s":
        return DensityResult.exact(maximin_value(entries).value, "lp-game")
    # uniform outer infimum against an inner maximum
    rows = list(range(len(entries)))
    width = len(entries[0])
    cols = [(sum(entries[i][j] << i for i in rows), j) for j in range(width)]
    v, F = _subset_search(rows, cols, kmax)
    witness = {"set": F}
    if kmax >= G.order:
        return DensityResult.exact(v, "subset-enum", witness)
    return DensityResult.upper(v, "subset-enum", witness)


def _depth3_bounds(G, q, dirs, payoff, budget, kmax):
    elems = list(range(G.order))
    outer_max = dirs[0] == "max"

    def inner_value(mu1):
        items = list(mu1.items())
        entries = [[sum((a for g, a in items if payoff((g, h, x))), ZERO) for x in elems] for h in elems]
        if q[1] == "i":
            return game_value(entries).value
        if q[1] == "s":
            return maximin_value(entries).value
        return _uniform_inf(entries, kmax)

    cands = uniform_candidates(G, kmax)
    if q[0] != "u":
        cands = itertools.chain(cands, grid_candidates(G, budget))
    best, best_mu = None, None
    for mu in cands:
        v = inner_value(mu)
        if best is None or (v > best if outer_max else v < best):
            best, best_mu = v, mu
    searched_exact = q[0] == "u" and kmax >= G.order

    # the opposite bound from a relaxation solved exactly
    if dirs[0] != dirs[1]:
        # swap the two outer quantifiers (minimax inequality)
        cols = [(g, x) for g in elems for x in elems]
        entries = [[payoff((g, h, x)) for g, x in cols] for h in elems]
        if q[1] == "u":
            other = _uniform_inf(entries, kmax)
        elif q[1] == "i":
            other = game_value(entries).value
        else:
            other = maximin_value(entries).value
    else:
        # optimize jointly over measures on pairs instead of product measures
        pairs = [(g, h) for g in elems for h in elems]
        entries = [[payoff((g, h, x)) for x in elems] for g, h in pairs]
        other = game_value(entries).value if dirs[0] == "min" else maximin_value(entries).value

    witness = {"measure": best_mu}
    if searched_exact:
        return DensityResult.exact(best, "subset-enum", witness)
    lo, hi = (best, other) if outer_max else (other, best)
    if lo == hi:
        return DensityResult.exact(lo, "grid+relaxation", witness)
    return DensityResult.interval(lo, hi, "grid+relaxation", witness)


def _uniform_inf(entries, kmax):
    """min over uniform measures on row sets F of max over columns (rational entries)."""
    rows = range(len(entries))
    width = len(entries[0])
    best = None
    for k in range(1, min(kmax, len(entries)) + 1):
        for combo in itertools.combinations(rows, k):
            v = max(sum(entries[i][j] for i in combo) for j in range(width)) / k
            if best is None or v < best:
                best = Fraction(v)
    return best


def i1(G, A):
    deg = _is_empty_or_full(G, A)
    return DensityResult.exact(1 if deg == 1 else 0, "closed-form")


def s1(G, A):
    deg = _is_empty_or_full(G, A)
    return DensityResult.exact(0 if deg == 0 else 1, "closed-form")


# ---------------------------------------------------------------------------
# cached finite-group values for exhaustive suites


@lru_cache(maxsize=None)
def finite_values(G, mask):
    """(is12, us12, iss213) on a finite group, all exact."""
    return (is12(G, mask).value, us12(G, mask, kmax=G.order).value, iss213(G, mask).value)
