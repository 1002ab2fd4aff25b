"""Report records and their JSON / TSV serializations.

Rationals are always written as ``"p/q"`` strings and group elements in the
same notation the DSL parses, so every witness can be pasted back into the CLI.
"""
from __future__ import annotations

import json
from fractions import Fraction

from . import __version__
from .dens import DensityResult
from .meas import Measure

KIND_NAMES = {"exact": "Exact", "upper": "UpperBound", "lower": "LowerBound", "interval": "Interval"}

# witness keys holding a single element, a pair of elements, or a list of elements
_ELEMENT_KEYS = {"test_point", "y"}
_PAIR_KEYS = {"shift"}
_LIST_KEYS = {"set", "complement_set", "witness", "cover", "conjugators", "cell"}


def rational(v):
    v = Fraction(v)
    return f"{v.numerator}/{v.denominator}"


def _plain(v):
    if isinstance(v, Fraction):
        return rational(v)
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (frozenset, set)):
        return sorted(_plain(x) for x in v)
    return v


def measure_json(G, mu):
    return [[G.format(x), rational(a)] for x, a in mu.sorted_items(G)]


def witness_json(G, witness):
    out = {}
    for k, v in witness.items():
        if isinstance(v, Measure):
            out[k] = measure_json(G, v)
        elif k in _ELEMENT_KEYS and v is not None:
            out[k] = G.format(v)
        elif k in _PAIR_KEYS:
            out[k] = [G.format(x) for x in v]
        elif k in _LIST_KEYS:
            out[k] = [G.format(x) for x in v]
        else:
            out[k] = _plain(v)
    return out


def density_record(quantity, group_text, set_text, result, G, runtime_ms=None):
    rec = {"quantity": quantity, "group": group_text, "set": set_text,
           "kind": KIND_NAMES[result.kind]}
    if result.kind == "interval":
        rec["lo"] = rational(result.lo)
        rec["hi"] = rational(result.hi)
    else:
        rec["value"] = rational(result.value)
    rec["method"] = result.method
    rec["witness"] = witness_json(G, result.witness)
    rec["runtime_ms"] = runtime_ms
    return rec


def index_record(quantity, group_text, set_text, kind, value, method, witness, G, runtime_ms=None):
    """Record for an integer index (packing, covering)."""
    return {"quantity": quantity, "group": group_text, "set": set_text, "kind": kind,
            "value": value, "method": method, "witness": witness_json(G, witness),
            "runtime_ms": runtime_ms}


def check_record(quantity, group_text, set_text, ok, values, witness=None, runtime_ms=None):
    """Record for one instance of a theorem check."""
    return {"quantity": quantity, "group": group_text, "set": set_text, "kind": "Check",
            "value": "pass" if ok else "fail", "method": "exhaustive",
            "values": _plain(values), "witness": _plain(witness or {}), "runtime_ms": runtime_ms}


def make_report(config, results, summary=None):
    meta = {"tool": "extremal", "version": __version__, "config": _plain(config)}
    if summary is not None:
        meta["summary"] = _plain(summary)
    return {"meta": meta, "results": results}


def to_json(report):
    return json.dumps(report, indent=2, ensure_ascii=False) + "\n"


TSV_COLUMNS = ("quantity", "group", "set", "kind", "value", "lo", "hi", "method", "witness", "runtime_ms")


def to_tsv(report):
    lines = ["\t".join(TSV_COLUMNS)]
    for rec in report["results"]:
        row = []
        for col in TSV_COLUMNS:
            v = rec.get(col)
            if col == "witness":
                extra = {k: rec[k] for k in ("values",) if k in rec}
                v = json.dumps({**extra, **(v or {})}, separators=(",", ":"), ensure_ascii=False)
            row.append("" if v is None else str(v))
        lines.append("\t".join(row))
    return "\n".join(lines) + "\n"


def render(report, fmt):
    if fmt == "json":
        return to_json(report)
    if fmt == "tsv":
        return to_tsv(report)
    raise ValueError(f"unknown format {fmt!r}")


__all__ = ["DensityResult", "check_record", "density_record", "index_record", "make_report",
           "measure_json", "rational", "render", "to_json", "to_tsv", "witness_json"]
