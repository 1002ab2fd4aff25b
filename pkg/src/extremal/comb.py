"""Packing and covering indices, thickness, partitions, homotheties and Følner sets.

All searches are exhaustive in a fixed canonical order, so the first optimum
found is the reported witness. Witnesses are re-verified before returning.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction

from .dens import finite_values, is12, iss213, sis123
from .errors import (
    NotAPartitionError,
    UndefinedIndexError,
    UnsupportedGroupError,
    UnsupportedReductionError,
)
from .grp import (
    Explicit,
    FreeAbelianGroup,
    ball,
    contains,
    difference_set,
    finite_elements,
    finite_mask,
    first_letter_form,
    lift_quotient_element,
    periodic_form,
    reduce_periodic,
)

EXACT_PACK_VERTICES = 64
EXACT_COVER_SIZE = 20
DEFAULT_PACK_CAP = 6
DEFAULT_PACK_RADIUS = 6


def _popcount(m):
    return bin(m).count("1")


def _mask(G, A):
    return A if isinstance(A, int) else finite_mask(G, A)


@dataclass
class PackResult:
    """``kind`` is "exact" or "at-least"."""

    value: int
    kind: str
    witness: list


@dataclass
class CovResult:
    """``kind`` is "exact", "at-most" or "infinite" (value None)."""

    value: int | None
    kind: str
    witness: list
    greedy: int | None = None


# ---------------------------------------------------------------------------
# packing


def _max_independent(adj, n):
    """Maximum independent set of a graph on 0..n-1 given as neighbour bitmasks."""
    best = [0, 0]

    def rec(cand, chosen, size):
        if not cand:
            if size > best[0]:
                best[0], best[1] = size, chosen
            return
        if size + _popcount(cand) <= best[0]:
            return
        v = (cand & -cand).bit_length() - 1
        bit = 1 << v
        rec(cand & ~adj[v] & ~bit, chosen | bit, size + 1)
        rec(cand & ~bit, chosen, size)

    rec((1 << n) - 1, 0, 0)
    return best[1]


def _greedy_independent(adj, n):
    chosen = 0
    blocked = 0
    for v in range(n):
        if not blocked >> v & 1:
            chosen |= 1 << v
            blocked |= adj[v] | 1 << v
    return chosen


def _finite_pack(G, am, cap):
    diff = G.product_mask(am, G.inverse_mask(am)) & ~1   # AA^-1 minus the identity
    n = G.order
    adj = []
    for x in range(n):
        # y conflicts with x iff x^-1 y lies in AA^-1 \ {e}
        adj.append(G.left_translate(x, diff))
    if n <= EXACT_PACK_VERTICES:
        chosen = _max_independent(adj, n)
        kind = "exact"
    else:
        chosen = _greedy_independent(adj, n)
        kind = "at-least"
    F = G.members(chosen)
    if cap is not None and len(F) >= cap and kind != "exact":
        F = F[:cap]
    return F, kind


def _verify_disjoint(G, A, F):
    if G.is_finite:
        am = _mask(G, A)
        seen = 0
        for x in F:
            t = G.left_translate(x, am)
            if seen & t:
                raise AssertionError("packing witness translates overlap")
            seen |= t
        return
    D = difference_set(A)
    for x, y in itertools.combinations(F, 2):
        if contains(G, D, G.mul(G.inv(x), y)):
            raise AssertionError("packing witness translates overlap")


def packing_index(G, A, cap=None, search_window=None):
    """Largest number of pairwise disjoint left translates of A."""
    if _is_empty(G, A):
        raise UndefinedIndexError("the packing index of the empty set is undefined")
    if cap is not None and cap < 1:
        raise ValueError("cap must be >= 1")
    if G.is_finite:
        F, kind = _finite_pack(G, _mask(G, A), cap)
        _verify_disjoint(G, A, F)
        return PackResult(len(F), kind, F)
    if periodic_form(G, A) is not None:
        H, hm, _, moduli = reduce_periodic(G, A)
        F, kind = _finite_pack(H, hm, cap)
        lifted = [lift_quotient_element(H, moduli, h) for h in F]
        _verify_disjoint(G, A, lifted)
        return PackResult(len(F), kind, lifted)
    cap = DEFAULT_PACK_CAP if cap is None else cap
    window = list(search_window if search_window is not None else ball(G, DEFAULT_PACK_RADIUS))
    D = difference_set(A)
    F = []
    for x in window:
        if len(F) >= cap:
            break
        if all(not contains(G, D, G.mul(G.inv(y), x)) for y in F):
            F.append(x)
    if len(F) < cap:
        # exhaustive search inside the window for a larger family
        n = len(window)
        adj = [0] * n
        for i, j in itertools.combinations(range(n), 2):
            if contains(G, D, G.mul(G.inv(window[i]), window[j])):
                adj[i] |= 1 << j
                adj[j] |= 1 << i
        chosen = _max_independent(adj, n)
        best = [window[i] for i in range(n) if chosen >> i & 1][:cap]
        if len(best) > len(F):
            F = best
    _verify_disjoint(G, A, F)
    return PackResult(len(F), "at-least", F)


def _is_empty(G, A):
    if G.is_finite:
        return _mask(G, A) == 0
    fin = finite_elements(G, A)
    if fin is not None:
        return not fin
    per = periodic_form(G, A)
    if per is not None:
        return not per.residues
    flf = first_letter_form(G, A)
    if flf is not None:
        return not flf[0] and not flf[1]
    return False


# ---------------------------------------------------------------------------
# covering


def _greedy_cover(full, translates):
    covered = 0
    chosen = []
    while covered != full:
        x, t = max(translates, key=lambda p: (_popcount(p[1] & ~covered), -p[0]))
        chosen.append(x)
        covered |= t
    return chosen


def _finite_cover(G, am, cap):
    """Exact set cover by left translates ``xA``; ``(F, kind, greedy_size)``."""
    full = G.full_mask
    seen = {}
    for x in range(G.order):
        seen.setdefault(G.left_translate(x, am), x)
    translates = [(x, t) for t, x in seen.items()]
    greedy = _greedy_cover(full, translates)
    best = [list(greedy)]
    limit = min(cap, EXACT_COVER_SIZE)
    size = _popcount(am)
    containing = [[(x, t) for x, t in translates if t >> u & 1] for u in range(G.order)]

    def rec(covered, chosen):
        if covered == full:
            if len(chosen) < len(best[0]):
                best[0] = list(chosen)
            return
        missing = G.order - _popcount(covered)
        if len(chosen) + -(-missing // size) >= min(len(best[0]), limit + 1):
            return
        u = (~covered & full & -(~covered & full)).bit_length() - 1
        for x, t in containing[u]:
            chosen.append(x)
            rec(covered | t, chosen)
            chosen.pop()

    rec(0, [])
    F = sorted(best[0])
    # the search is complete whenever the optimum is at most the limit + 1
    kind = "exact" if len(F) <= limit + 1 else "at-most"
    return F, kind, len(greedy)


def covering_number(G, A, cap=EXACT_COVER_SIZE):
    """Fewest left translates of A covering G."""
    if _is_empty(G, A):
        raise UndefinedIndexError("the empty set covers nothing")
    if cap < 1:
        raise ValueError("cap must be >= 1")
    if G.is_finite:
        am = _mask(G, A)
        F, kind, greedy = _finite_cover(G, am, cap)
        if G.product_mask(G.mask(F), am) != G.full_mask:
            raise AssertionError("cover witness does not cover the group")
        return CovResult(len(F), kind, F, greedy)
    if periodic_form(G, A) is not None:
        H, hm, _, moduli = reduce_periodic(G, A)
        F, kind, greedy = _finite_cover(H, hm, cap)
        return CovResult(len(F), kind, [lift_quotient_element(H, moduli, h) for h in F], greedy)
    if isinstance(G, FreeAbelianGroup) and finite_elements(G, A) is not None:
        return CovResult(None, "infinite", [])
    raise UnsupportedReductionError("covering numbers need a finite group or a periodic set")


# ---------------------------------------------------------------------------
# set algebra and simple predicates


def set_algebra(G, expr):
    """Evaluate a subset expression to its simplest equivalent form."""
    if G.is_finite:
        return Explicit(G.members(finite_mask(G, expr)))
    per = periodic_form(G, expr)
    if per is not None:
        return per
    fin = finite_elements(G, expr)
    if fin is not None:
        return Explicit(fin)
    return expr


def is_right_thick(G, A):
    """Every finite F has a right translate Fx inside A; on a finite group this means A = G."""
    if not G.is_finite:
        raise UnsupportedGroupError("thickness is decided on finite groups only")
    return _mask(G, A) == G.full_mask


def ergo_sum_check(G, A, B):
    """us12(A) + us12(B) > 1 implies AB = G."""
    if not G.is_finite:
        raise UnsupportedGroupError("the ergo-sum check runs on finite groups")
    am, bm = _mask(G, A), _mask(G, B)
    if not am or not bm:
        return True
    ua, ub = finite_values(G, am)[1], finite_values(G, bm)[1]
    if ua + ub <= 1:
        return True
    return G.product_mask(am, bm) == G.full_mask


def dinasso_lupini_check(G, A, B):
    """cov(AB) <= 1 / (d*(A) d*(B)) with d* = |.|/|G| on a finite group."""
    am, bm = _mask(G, A), _mask(G, B)
    if not am or not bm:
        return True
    c = covering_number(G, G.product_mask(am, bm)).value
    return c * _popcount(am) * _popcount(bm) <= G.order * G.order


def jbbf_witness(G, A, B):
    """A finite F with FAB = G (it exists for all non-empty A, B of a finite group)."""
    return covering_number(G, G.product_mask(_mask(G, A), _mask(G, B))).witness


# ---------------------------------------------------------------------------
# partitions


def brs_bound(n):
    """max over 1 <= k <= n of 1 + k + ... + k^(n-k); the k = 1 term equals n."""
    if n < 1:
        raise ValueError("a partition has at least one cell")
    return max(sum(k ** i for i in range(n - k + 1)) for k in range(1, n + 1))


def brs_bound_strict(n):
    """The same maximum restricted to 1 < k <= n (1 when that range is empty)."""
    vals = [(k ** (n + 1 - k) - 1) // (k - 1) for k in range(2, n + 1)]
    return max(vals, default=1)


@dataclass
class CellReport:
    cell: list
    is12: Fraction
    iss213: Fraction
    pack: int
    cov_diff: int
    cov_diff_witness: list
    inner_invariant: bool


@dataclass
class PartitionReport:
    n: int
    cells: list
    protasov: bool              # some cell has cov(A A^-1) <= n
    min_cov: int
    brs_bound: int
    brs_ok: bool
    wreath_cell: int | None     # index of a cell with cov((A^-1 A)^{wr E}) <= n
    wreath_set: list = field(default_factory=list)
    wreath_cov: int | None = None
    bps_applies: bool = False
    bps_ok: bool | None = None

    @property
    def violations(self):
        out = []
        if not self.protasov:
            out.append("protasov")
        if not self.brs_ok:
            out.append("brs")
        if self.wreath_cell is None:
            out.append("wreath")
        if self.bps_applies and not self.bps_ok:
            out.append("bps")
        return out


def _wreath_mask(G, sm, E):
    out = 0
    for x in E:
        out |= G.right_translate(G.left_translate(G.inv(x), sm), x)
    return out


def _conjugation_invariant(G, am):
    return all(_wreath_mask(G, am, [g]) == am for g in range(G.order))


def _candidate_conjugator_sets(G, max_size=3):
    for k in range(1, min(max_size, G.order) + 1):
        yield from itertools.combinations(range(G.order), k)
    if G.order > max_size:
        yield tuple(range(G.order))


def partition_analyze(G, cells):
    """Per-cell densities and indices plus the Protasov-type flags."""
    if not G.is_finite:
        raise UnsupportedGroupError("partitions are analyzed on finite groups")
    masks = [_mask(G, c) for c in cells]
    if not masks or any(m == 0 for m in masks):
        raise NotAPartitionError("cells must be non-empty")
    union = 0
    for m in masks:
        if union & m:
            raise NotAPartitionError("cells overlap")
        union |= m
    if union != G.full_mask:
        raise NotAPartitionError("cells do not cover the group")
    n = len(masks)
    reports = []
    for m in masks:
        diff = G.product_mask(m, G.inverse_mask(m))
        cov = covering_number(G, diff)
        reports.append(CellReport(
            G.members(m), is12(G, m).value, iss213(G, m).value,
            packing_index(G, m).value, cov.value, cov.witness, _conjugation_invariant(G, m)))
    min_cov = min(r.cov_diff for r in reports)
    bound = brs_bound(n)
    rep = PartitionReport(n, reports, min_cov <= n, min_cov, bound, min_cov <= bound, None)
    for E in _candidate_conjugator_sets(G):
        for i, m in enumerate(masks):
            d = _wreath_mask(G, G.product_mask(G.inverse_mask(m), m), E)
            c = covering_number(G, d).value
            if c <= n:
                rep.wreath_cell, rep.wreath_set, rep.wreath_cov = i, list(E), c
                break
        if rep.wreath_cell is not None:
            break
    rep.bps_applies = all(r.inner_invariant for r in reports)
    if rep.bps_applies:
        rep.bps_ok = any(r.cov_diff <= r.pack <= n for r in reports)
    return rep


def set_partitions(n, max_cells):
    """All partitions of 0..n-1 into at most ``max_cells`` blocks, as lists of bitmasks."""
    def rec(i, blocks):
        if i == n:
            yield list(blocks)
            return
        for b in range(len(blocks)):
            blocks[b] |= 1 << i
            yield from rec(i + 1, blocks)
            blocks[b] &= ~(1 << i)
        if len(blocks) < max_cells:
            blocks.append(1 << i)
            yield from rec(i + 1, blocks)
            blocks.pop()
    if n == 0:
        return iter(())
    return rec(0, [])


# ---------------------------------------------------------------------------
# homotheties


@dataclass(frozen=True)
class Homothety:
    """h(x) = a_0 x a_1 x ... x a_n."""

    constants: tuple

    @property
    def degree(self):
        return len(self.constants) - 1

    def __call__(self, G, x):
        y = self.constants[0]
        for a in self.constants[1:]:
            y = G.mul(G.mul(y, x), a)
        return y

    def describe(self, G):
        if G.is_abelian and all(a == G.identity for a in self.constants[1:]):
            return f"{self.degree}x + {G.format(self.constants[0])}"
        return "x".join(G.format(a) for a in self.constants)


def homothety_witness(G, A, F, degree_cap=1):
    """First homothety h (degree ascending, constants in carrier order) with h(F) inside A."""
    if not G.is_finite:
        raise UnsupportedGroupError("homothety search runs on finite groups")
    F = [G.validate(x) for x in F]
    if not F:
        raise ValueError("F must be non-empty")
    if degree_cap < 1:
        raise ValueError("degree_cap must be >= 1")
    am = _mask(G, A)
    e = G.identity
    for n in range(1, degree_cap + 1):
        if G.is_abelian:
            # nx + a covers every homothety of degree n in an abelian group
            tuples = ((a,) + (e,) * n for a in range(G.order))
        else:
            tuples = itertools.product(range(G.order), repeat=n + 1)
        for consts in tuples:
            h = Homothety(tuple(consts))
            if all(am >> h(G, x) & 1 for x in F):
                return h
    return None


# ---------------------------------------------------------------------------
# Følner boxes and representability


def folner_set(d, F, eps, max_side=10_000):
    """Smallest cube E = [0, L)^d with |(F + E) \\ E| < eps |E|; returns (L, defect)."""
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError("eps must be positive")
    pts = [(f,) if isinstance(f, int) else tuple(f) for f in F]
    if not pts or any(len(p) != d for p in pts):
        raise ValueError(f"F must be a non-empty set of points of Z^{d}")
    for L in range(1, max_side + 1):
        outside = _boundary_count(pts, L, d)
        defect = Fraction(outside, L ** d)
        if defect < eps:
            return L, defect
    raise ValueError("no Følner cube found below max_side")


def _boundary_count(pts, L, d):
    """|(F + [0,L)^d) \\ [0,L)^d| counted exactly by inclusion over the shifted boxes."""
    shifted = set()
    for f in pts:
        for e in itertools.product(range(L), repeat=d):
            p = tuple(a + b for a, b in zip(f, e))
            if any(v < 0 or v >= L for v in p):
                shifted.add(p)
    return len(shifted)


def finitely_representable(G, A, B, search_window=None):
    """A y inside B for some y in the window; returns y or None."""
    fin = finite_elements(G, A)
    if fin is None:
        raise UnsupportedReductionError("the represented set must be finite")
    window = search_window if search_window is not None else ball(G, 3)
    for y in window:
        if all(contains(G, B, G.mul(a, y)) for a in fin):
            return y
    return None


# ---------------------------------------------------------------------------
# covering bound from sis123


@dataclass
class T92Report:
    sis_lower: Fraction
    sis_upper: Fraction
    bound: int                  # ceil(1 / sis lower bound)
    conjugators: list
    cov: int
    cov_witness: list
    holds: bool
    holds_floor: bool           # cov <= floor(1 / sis lower bound)
    cov_double: int
    cov_double_witness: list


def t92_check(G, A, kmax=None, grid_denominator=4):
    """cov((A A^-1)^{wr E}) <= 1/sis123(A) for a small E, and cov(AA^-1AA^-1) < infinity."""
    if not G.is_finite:
        raise UnsupportedGroupError("the covering bound is checked on finite groups")
    am = _mask(G, A)
    if not am:
        raise UndefinedIndexError("the bound needs a non-empty set")
    s = sis123(G, am, kmax=kmax, grid_denominator=grid_denominator)
    bound = math.ceil(1 / s.lo)
    diff = G.product_mask(am, G.inverse_mask(am))
    best = None
    for E in _candidate_conjugator_sets(G):
        c = covering_number(G, _wreath_mask(G, diff, E))
        if best is None or c.value < best[1].value:
            best = (list(E), c)
        if c.value <= bound:
            break
    E, c = best
    dd = covering_number(G, G.product_mask(diff, diff))
    return T92Report(s.lo, s.hi, bound, E, c.value, c.witness, c.value <= bound,
                     c.value <= math.floor(1 / s.lo), dd.value, dd.witness)


__all__ = [
    "CellReport", "CovResult", "Homothety", "PackResult", "PartitionReport", "T92Report",
    "brs_bound", "brs_bound_strict", "covering_number", "dinasso_lupini_check", "ergo_sum_check",
    "finitely_representable", "folner_set", "homothety_witness", "is_right_thick", "jbbf_witness",
    "packing_index", "partition_analyze", "set_algebra", "set_partitions", "t92_check",
]
