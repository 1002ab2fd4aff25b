"""Exhaustive theorem-check suites over small finite groups.

Each suite returns a ``SuiteOutcome``: one record per checked instance in
canonical order (subsets by size, then bitmask) and the list of failing
records. The first failure is therefore the smallest counterexample.
"""
from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

from .comb import (
    brs_bound_strict,
    covering_number,
    ergo_sum_check,
    folner_set,
    packing_index,
    partition_analyze,
    set_partitions,
    t92_check,
)
from .dens import (
    ExtremalPattern,
    QUANTIFIERS,
    eval_extremal,
    finite_values,
    is12,
    kelley_bruteforce,
    kelley_lp,
    si21,
    sis123,
    subadditivize,
    translate_family,
)
from .errors import UnsupportedGroupError
from .grp import Explicit, FreeAbelian, make_group
from .lang import canonical_print
from .meas import invariance_defect, uniform
from .report import check_record

SUITES = ("kelley-duality", "finite-collapse", "pack-cov", "ergo-sum", "partition", "chain",
          "hierarchy", "t92", "folner")


@dataclass
class SuiteOutcome:
    suite: str
    records: list = field(default_factory=list)
    violations: list = field(default_factory=list)

    def add(self, rec):
        self.records.append(rec)
        if rec["value"] == "fail":
            self.violations.append(rec)

    @property
    def ok(self):
        return not self.violations

    def summary(self):
        return {"suite": self.suite, "checked": len(self.records), "violations": len(self.violations),
                "counterexample": self.violations[0] if self.violations else None}


def pmap(fn, items, threads=1):
    """Ordered map; with several threads results still come back in input order."""
    items = list(items)
    if threads <= 1 or len(items) < 2:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def subsets(G, nonempty=False):
    """Bitmasks of all subsets, ordered by size and then numerically."""
    out = sorted(range(1 if nonempty else 0, G.full_mask + 1), key=lambda m: (bin(m).count("1"), m))
    return out


def _require_finite(G):
    if not G.is_finite:
        raise UnsupportedGroupError(f"suites enumerate subsets of finite groups, not {G.spec}")


def _text(G, mask):
    return canonical_print(Explicit(G.members(mask)), G)


# ---------------------------------------------------------------------------


def kelley_duality(G, max_tuple=None, threads=1):
    _require_finite(G)
    max_tuple = max_tuple or G.order
    out = SuiteOutcome("kelley-duality")

    def one(m):
        fam = translate_family(G, m)
        a = is12(G, m).value
        b = si21(G, m).value
        c = kelley_lp(fam, range(G.order)).value
        d = kelley_bruteforce(fam, max_tuple)
        return check_record("kelley-duality", str(G.spec), _text(G, m), a == b == c == d,
                            {"is12": a, "si21": b, "kelley_lp": c, "kelley_bruteforce": d})

    for rec in pmap(one, subsets(G), threads):
        out.add(rec)
    return out


def finite_collapse(G, threads=1):
    _require_finite(G)
    out = SuiteOutcome("finite-collapse")

    def one(m):
        a, u, s = finite_values(G, m)
        d = Fraction(bin(m).count("1"), G.order)
        return check_record("finite-collapse", str(G.spec), _text(G, m), a == u == s == d,
                            {"is12": a, "us12": u, "iss213": s, "counting": d})

    for rec in pmap(one, subsets(G), threads):
        out.add(rec)
    return out


def pack_cov(G, threads=1):
    """pack <= 1/is12, cov(AA^-1) <= pack, is12(A|B) <= is12(A) + iss213(B), iss213 subadditive."""
    _require_finite(G)
    out = SuiteOutcome("pack-cov")
    masks = subsets(G)

    def one(m):
        if not m:
            return None
        p = packing_index(G, m)
        c = covering_number(G, G.product_mask(m, G.inverse_mask(m)))
        v = finite_values(G, m)[0]
        ok = p.value * v <= 1 and c.value <= p.value
        return check_record("pack-cov", str(G.spec), _text(G, m), ok,
                            {"is12": v, "pack": p.value, "cov_diff": c.value},
                            {"packing": [G.format(x) for x in p.witness],
                             "cover": [G.format(x) for x in c.witness]})

    for rec in pmap(one, masks, threads):
        if rec is not None:
            out.add(rec)
    for a, b in itertools.product(masks, repeat=2):
        ia, _, sa = finite_values(G, a)
        _, _, sb = finite_values(G, b)
        iu, _, su = finite_values(G, a | b)
        if not (iu <= ia + sb and su <= sa + sb):
            out.add(check_record("pack-cov:pairs", str(G.spec), f"{_text(G, a)} ; {_text(G, b)}", False,
                                 {"is12_union": iu, "is12_A": ia, "iss213_B": sb,
                                  "iss213_union": su, "iss213_A": sa}))
    out.records.append(check_record("pack-cov:pairs", str(G.spec), "all pairs", not out.violations,
                                    {"pairs": len(masks) ** 2}))
    return out


def ergo_sum(G, threads=1):
    _require_finite(G)
    out = SuiteOutcome("ergo-sum")
    masks = subsets(G)
    checked = 0
    for a, b in itertools.product(masks, repeat=2):
        checked += 1
        if not ergo_sum_check(G, a, b):
            out.add(check_record("ergo-sum", str(G.spec), f"{_text(G, a)} ; {_text(G, b)}", False,
                                 {"us12_A": finite_values(G, a)[1], "us12_B": finite_values(G, b)[1],
                                  "product": _text(G, G.product_mask(a, b))}))
    out.records.append(check_record("ergo-sum", str(G.spec), "all pairs", not out.violations,
                                    {"pairs": checked}))
    return out


def partitions(G, max_cells=3, threads=1):
    _require_finite(G)
    out = SuiteOutcome("partition")

    def one(blocks):
        rep = partition_analyze(G, blocks)
        text = " ; ".join(_text(G, b) for b in blocks)
        vals = {"cells": rep.n, "min_cov_diff": rep.min_cov, "brs_bound": rep.brs_bound,
                "brs_bound_strict_k": brs_bound_strict(rep.n),
                "protasov": rep.protasov, "brs": rep.brs_ok,
                "wreath_cov": rep.wreath_cov, "bps": rep.bps_ok}
        wit = {"cov_diff": [[G.format(x) for x in c.cov_diff_witness] for c in rep.cells],
               "wreath_cell": rep.wreath_cell, "conjugators": [G.format(x) for x in rep.wreath_set]}
        return check_record("partition", str(G.spec), text, not rep.violations, vals, wit)

    for rec in pmap(one, list(set_partitions(G.order, max_cells)), threads):
        out.add(rec)
    return out


def chain(G, seed=0, grid_denominator=4, threads=1):
    """is12 <= hat(is12) <= iss213 and [sis123 lower, iss213] contains |A|/|G|."""
    _require_finite(G)
    out = SuiteOutcome("chain")

    def base(H, S):
        return finite_values(H, H.mask(S.elements))[0]

    def one(m):
        i, _, s = finite_values(G, m)
        h = subadditivize(base, m, G, seed=seed).value
        sis = sis123(G, m, grid_denominator=grid_denominator)
        d = Fraction(bin(m).count("1"), G.order)
        ok = i <= h <= s and sis.lo <= d <= sis.hi and d - sis.lo <= Fraction(1, 20)
        return check_record("chain", str(G.spec), _text(G, m), ok,
                            {"is12": i, "hat_is12": h, "iss213": s, "sis123_lo": sis.lo,
                             "sis123_hi": sis.hi, "counting": d})

    for rec in pmap(one, subsets(G), threads):
        out.add(rec)
    return out


def all_patterns(max_len=2):
    out = []
    for n in range(1, max_len + 1):
        for perm in itertools.permutations(range(1, n + 1)):
            for e in itertools.product(QUANTIFIERS, repeat=n):
                try:
                    out.append(ExtremalPattern("".join(e), perm))
                except ValueError:
                    continue
    return out


def hierarchy(G, threads=1):
    """Every pattern of length <= 2 equals i1, s1, is12 or si12."""
    _require_finite(G)
    out = SuiteOutcome("hierarchy")
    pats = all_patterns(2)
    ref = [ExtremalPattern("i", (1,)), ExtremalPattern("s", (1,)),
           ExtremalPattern("is", (1, 2)), ExtremalPattern("si", (1, 2))]

    def one(m):
        base = {str(p): eval_extremal(p, G, m).value for p in ref}
        allowed = set(base.values())
        vals = {str(p): eval_extremal(p, G, m).value for p in pats}
        bad = sorted(k for k, v in vals.items() if v not in allowed)
        return check_record("hierarchy", str(G.spec), _text(G, m), not bad,
                            {"reference": base, "patterns": len(pats)}, {"outside": bad})

    for rec in pmap(one, subsets(G), threads):
        out.add(rec)
    return out


def t92(G, threads=1):
    _require_finite(G)
    out = SuiteOutcome("t92")

    def one(m):
        r = t92_check(G, m)
        ok = r.holds and r.cov_double is not None
        return check_record("t92", str(G.spec), _text(G, m), ok,
                            {"sis123_lo": r.sis_lower, "bound": r.bound, "cov_wreath": r.cov,
                             "floor_bound_holds": r.holds_floor, "cov_double": r.cov_double},
                            {"conjugators": [G.format(x) for x in r.conjugators],
                             "cover": [G.format(x) for x in r.cov_witness],
                             "cover_double": [G.format(x) for x in r.cov_double_witness]})

    for rec in pmap(one, subsets(G, nonempty=True), threads):
        out.add(rec)
    return out


def folner(threads=1):
    """Følner cubes for {-1,0,1}^d and invariance of symmetric intervals under a unit shift."""
    out = SuiteOutcome("folner")
    for d in (1, 2):
        F = list(itertools.product((-1, 0, 1), repeat=d))
        for eps in (Fraction(1, 5), Fraction(1, 10)):
            L, defect = folner_set(d, F, eps)
            exact = Fraction((L + 2) ** d - L ** d, L ** d)
            out.add(check_record("folner", f"Z^{d}" if d > 1 else "Z", "{-1,0,1}^%d" % d,
                                 defect < eps and defect == exact,
                                 {"eps": eps, "side": L, "defect": defect}))
    Z = make_group(FreeAbelian(1))
    for N in (10, 50):
        mu = uniform([(k,) for k in range(-N, N + 1)])
        full = Explicit([(k,) for k in range(-N, N + 1)])
        v = invariance_defect(Z, mu, full, [(1,)])
        out.add(check_record("folner:invariance", "Z", f"uniform(-{N}..{N})", v <= Fraction(2, 2 * N + 1),
                             {"defect": v, "bound": Fraction(2, 2 * N + 1)}))
    return out


def run_suite(name, G=None, threads=1, seed=0, max_cells=3, grid_denominator=4, max_tuple=None):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    if name == "folner":
        return folner(threads)
    if G is None:
        raise ValueError(f"suite {name} needs --group")
    if name == "kelley-duality":
        return kelley_duality(G, max_tuple, threads)
    if name == "finite-collapse":
        return finite_collapse(G, threads)
    if name == "pack-cov":
        return pack_cov(G, threads)
    if name == "ergo-sum":
        return ergo_sum(G, threads)
    if name == "partition":
        return partitions(G, max_cells, threads)
    if name == "chain":
        return chain(G, seed, grid_denominator, threads)
    if name == "hierarchy":
        return hierarchy(G, threads)
    return t92(G, threads)


__all__ = ["SUITES", "SuiteOutcome", "all_patterns", "pmap", "run_suite", "subsets"]
