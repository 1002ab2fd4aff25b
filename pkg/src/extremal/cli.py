"""Command-line driver.

Exit status: 0 on success, 1 on usage or input errors, 2 when a theorem
check finds a violation (the report then carries the first counterexample).
"""
from __future__ import annotations

import argparse
import os
import sys
import time

from . import comb, dens
from .errors import ExtremalError
from .grp import Explicit, ball, finite_elements, make_group
from .lang import canonical_print, parse_group, parse_set
from .report import check_record, density_record, index_record, make_report, render
from .suites import SUITES, run_suite

QUANTITIES = ("is12", "si21", "us12", "iss213", "uss213", "sis123", "hat-is12", "dstar", "kelley",
              "pattern", "pack", "cov")
THREADS_ENV = "EXTREMAL_THREADS"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _positive(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def _default_threads():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "tsv"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--threads", type=_positive, default=None,
                        help=f"worker threads (default: ${THREADS_ENV} or 1)")
    common.add_argument("--timing", action="store_true",
                        help="record wall-clock runtime_ms (makes reports non-reproducible)")
    common.add_argument("--output", "-o", help="write the report to this file instead of stdout")

    p = _Parser(prog="extremal", description="Extremal densities and combinatorial indices on groups.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__import__('extremal').__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    e = sub.add_parser("eval", parents=[common], help="evaluate one quantity on one set")
    e.add_argument("--group", required=True)
    e.add_argument("--set", required=True, dest="set_text")
    e.add_argument("--quantity", required=True, choices=QUANTITIES)
    e.add_argument("--radius", type=int, help="support window = ball of this radius")
    e.add_argument("--support", help="support window as an explicit set, e.g. \"{1,B,BB}\"")
    e.add_argument("--kmax", type=_positive)
    e.add_argument("--grid", type=_positive, default=4, help="grid denominator")
    e.add_argument("--mode", choices=("auto", "exact", "window"), default="auto")
    e.add_argument("--pattern", help="extremal pattern such as is or iss:213")
    e.add_argument("--ladder", default="1,2,4,8,16", help="box sides for dstar")
    e.add_argument("--cap", type=_positive)

    c = sub.add_parser("check", parents=[common], help="run a theorem-check suite")
    c.add_argument("suite", choices=SUITES)
    c.add_argument("--group")
    c.add_argument("--cells", type=_positive, default=3, help="maximal number of partition cells")
    c.add_argument("--grid", type=_positive, default=4)
    c.add_argument("--max-tuple", type=_positive)

    pa = sub.add_parser("partition", parents=[common], help="analyze an explicit partition")
    pa.add_argument("--group", required=True)
    pa.add_argument("--cell", action="append", required=True, dest="cells")

    w = sub.add_parser("witness", parents=[common], help="search for a witness")
    w.add_argument("kind", choices=("packing", "homothety", "representable"))
    w.add_argument("--group", required=True)
    w.add_argument("--set", required=True, dest="set_text")
    w.add_argument("--points", help="the finite set F (homothety) or A (representable)")
    w.add_argument("--degree-cap", type=_positive, default=1)
    w.add_argument("--cap", type=_positive)
    w.add_argument("--radius", type=int)
    return p


def _config(args):
    cfg = {k: v for k, v in sorted(vars(args).items())
           if k not in ("output", "timing", "threads") and v is not None}
    return cfg


def _window(G, args):
    if getattr(args, "support", None):
        S = parse_set(args.support, G)
        fin = finite_elements(G, S)
        if fin is None:
            raise UsageError("--support must be a finite set")
        return G.sorted(fin)
    if getattr(args, "radius", None) is not None:
        return list(ball(G, args.radius))
    return None


def _eval(args, G):
    A = parse_set(args.set_text, G)
    set_text = canonical_print(A, G)
    gtext = str(G.spec)
    W = _window(G, args)
    q = args.quantity
    if q == "is12":
        r = dens.is12(G, A, W, args.mode)
    elif q == "si21":
        r = dens.si21(G, A)
    elif q == "us12":
        r = dens.us12(G, A, args.kmax, W)
    elif q == "iss213":
        r = dens.iss213(G, A, W)
    elif q == "uss213":
        r = dens.uss213_search(G, A, args.kmax, W)
    elif q == "sis123":
        r = dens.sis123(G, A, args.kmax, args.grid)
    elif q == "hat-is12":
        r = dens.subadditivize(lambda H, S: dens.is12(H, S), A, G, seed=args.seed)
    elif q == "dstar":
        try:
            ladder = [int(x) for x in args.ladder.split(",")]
        except ValueError:
            raise UsageError("--ladder must be a comma-separated list of integers") from None
        r = dens.dstar_window(G, A, ladder)
    elif q == "kelley":
        if not G.is_finite:
            raise UsageError("kelley needs a finite group")
        r = dens.kelley_lp(dens.translate_family(G, A), range(G.order))
        r = dens.DensityResult(r.kind, r.lo, r.hi, r.method, {})
    elif q == "pattern":
        if not args.pattern:
            raise UsageError("--quantity pattern needs --pattern")
        r = dens.eval_extremal(dens.ExtremalPattern.parse(args.pattern), G, A, budget=args.grid,
                               kmax=args.kmax)
        q = f"pattern:{dens.ExtremalPattern.parse(args.pattern)}"
    elif q == "pack":
        p = comb.packing_index(G, A, args.cap, W)
        kind = "Exact" if p.kind == "exact" else "AtLeast"
        return index_record(q, gtext, set_text, kind, p.value, "branch-and-bound", {"witness": p.witness}, G)
    else:
        c = comb.covering_number(G, A, args.cap or comb.EXACT_COVER_SIZE)
        kind = {"exact": "Exact", "at-most": "AtMost", "infinite": "Infinite"}[c.kind]
        return index_record(q, gtext, set_text, kind, c.value, "branch-and-bound", {"cover": c.witness}, G)
    return density_record(q, gtext, set_text, r, G)


def _partition(args, G):
    cells = [parse_set(t, G) for t in args.cells]
    rep = comb.partition_analyze(G, cells)
    text = " ; ".join(canonical_print(Explicit(c.cell), G) for c in rep.cells)
    values = {
        "cells": [{"cell": canonical_print(Explicit(c.cell), G), "is12": c.is12, "iss213": c.iss213,
                   "pack": c.pack, "cov_diff": c.cov_diff, "inner_invariant": c.inner_invariant}
                  for c in rep.cells],
        "protasov": rep.protasov, "min_cov_diff": rep.min_cov, "brs_bound": rep.brs_bound,
        "brs": rep.brs_ok, "wreath_cov": rep.wreath_cov, "bps_applies": rep.bps_applies, "bps": rep.bps_ok,
    }
    witness = {"cov_diff": [[G.format(x) for x in c.cov_diff_witness] for c in rep.cells],
               "wreath_cell": rep.wreath_cell, "conjugators": [G.format(x) for x in rep.wreath_set]}
    rec = check_record("partition", str(G.spec), text, not rep.violations, values, witness)
    return rec, rep.violations


def _witness(args, G):
    A = parse_set(args.set_text, G)
    set_text = canonical_print(A, G)
    gtext = str(G.spec)
    if args.kind == "packing":
        W = list(ball(G, args.radius)) if args.radius is not None else None
        p = comb.packing_index(G, A, args.cap, W)
        kind = "Exact" if p.kind == "exact" else "AtLeast"
        return index_record("pack", gtext, set_text, kind, p.value, "branch-and-bound",
                            {"witness": p.witness}, G)
    if not args.points:
        raise UsageError(f"witness {args.kind} needs --points")
    P = parse_set(args.points, G)
    fin = finite_elements(G, P)
    if fin is None:
        raise UsageError("--points must be a finite set")
    if args.kind == "homothety":
        h = comb.homothety_witness(G, A, G.sorted(fin), args.degree_cap)
        found = h is not None
        wit = {"constants": [G.format(a) for a in h.constants], "form": h.describe(G)} if found else {}
        rec = check_record("homothety", gtext, set_text, True,
                           {"found": found, "degree": h.degree if found else None}, wit)
        rec["kind"] = "Witness" if found else "None"
        rec["value"] = "found" if found else "none"
        return rec
    W = list(ball(G, args.radius)) if args.radius is not None else None
    y = comb.finitely_representable(G, P, A, W)
    rec = check_record("representable", gtext, set_text, True, {"found": y is not None},
                       {"y": G.format(y)} if y is not None else {})
    rec["kind"] = "Witness" if y is not None else "None"
    rec["value"] = "found" if y is not None else "none"
    return rec


def run(argv=None, stdout=None):
    """Run the CLI; returns the exit status."""
    stdout = stdout or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    threads = args.threads or _default_threads()
    start = time.perf_counter()
    status = 0
    summary = None
    try:
        G = make_group(parse_group(args.group)) if getattr(args, "group", None) else None
        if args.command == "eval":
            results = [_eval(args, G)]
        elif args.command == "check":
            out = run_suite(args.suite, G, threads=threads, seed=args.seed, max_cells=args.cells,
                            grid_denominator=args.grid, max_tuple=args.max_tuple)
            results = out.records
            summary = out.summary()
            status = 0 if out.ok else 2
        elif args.command == "partition":
            rec, violations = _partition(args, G)
            results = [rec]
            summary = {"violations": violations}
            status = 2 if violations else 0
        else:
            results = [_witness(args, G)]
    except (ExtremalError, UsageError, ValueError) as exc:
        print(f"extremal: error: {exc}", file=sys.stderr)
        return 1
    if args.timing:
        ms = round((time.perf_counter() - start) * 1000, 3)
        for rec in results:
            rec["runtime_ms"] = ms
    report = make_report(_config(args), results, summary)
    text = render(report, args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if status == 2 and summary is not None:
        print("extremal: violation found; see the counterexample in the report", file=sys.stderr)
    return status


def main(argv=None):
    try:
        return run(argv)
    except KeyboardInterrupt:
        return 130

