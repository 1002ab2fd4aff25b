"""Finitely supported probability measures with exact rational weights."""
from __future__ import annotations

from fractions import Fraction

from .errors import EmptySupportError
from .grp import contains


class Measure:
    """Immutable map element -> positive Fraction whose weights sum to exactly 1."""

    __slots__ = ("_w",)

    def __init__(self, weights):
        w = {}
        for x, a in dict(weights).items():
            a = Fraction(a)
            if a < 0:
                raise ValueError("measure weights must be nonnegative")
            if a:
                w[x] = a
        if not w:
            raise EmptySupportError("a probability measure needs a non-empty support")
        if sum(w.values()) != 1:
            raise ValueError(f"weights sum to {sum(w.values())}, not 1")
        self._w = w

    def __getitem__(self, x):
        return self._w.get(x, Fraction(0))

    def items(self):
        return self._w.items()

    @property
    def support(self):
        return frozenset(self._w)

    def __len__(self):
        return len(self._w)

    def __eq__(self, other):
        return isinstance(other, Measure) and self._w == other._w

    def __hash__(self):
        return hash(frozenset(self._w.items()))

    def __repr__(self):
        body = ", ".join(f"{x!r}: {a}" for x, a in sorted(self._w.items(), key=lambda t: repr(t[0])))
        return f"Measure({{{body}}})"

    def sorted_items(self, G):
        return sorted(self._w.items(), key=lambda t: G.key(t[0]))

    def push(self, f):
        """Push-forward along the map ``f``."""
        out = {}
        for x, a in self._w.items():
            y = f(x)
            out[y] = out.get(y, 0) + a
        return Measure(out)


def dirac(x):
    return Measure({x: 1})


def uniform(elements):
    elements = list(elements)
    if not elements:
        raise EmptySupportError("uniform measure on an empty set")
    if len(set(elements)) != len(elements):
        raise ValueError("uniform support contains duplicates")
    a = Fraction(1, len(elements))
    return Measure({x: a for x in elements})


def evaluate(G, mu, A):
    """mu(A)."""
    return sum((a for x, a in mu.items() if contains(G, A, x)), Fraction(0))


def convolve(G, mu, nu):
    out = {}
    for x, a in mu.items():
        for y, b in nu.items():
            z = G.mul(x, y)
            out[z] = out.get(z, 0) + a * b
    return Measure(out)


def act_convolve(G, mu, A):
    """The evaluator x -> (mu * delta_x)(A) = sum_i a_i [g_i x in A]."""
    items = list(mu.items())

    def value(x):
        return sum((a for g, a in items if contains(G, A, G.mul(g, x))), Fraction(0))

    return value


def invariance_defect(G, mu, A, shifts):
    """max over the shifts s of |mu(sA) - mu(A)|."""
    base = evaluate(G, mu, A)
    worst = Fraction(0)
    for s in shifts:
        s_inv = G.inv(s)
        shifted = sum((a for x, a in mu.items() if contains(G, A, G.mul(s_inv, x))), Fraction(0))
        worst = max(worst, abs(shifted - base))
    return worst
