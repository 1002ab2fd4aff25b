"""Extremal densities on groups: exact games on finite groups, certified bounds elsewhere."""

__version__ = "0.1.0"

from .dens import (  # noqa: E402
    DensityResult,
    ExtremalPattern,
    eval_extremal,
    is12,
    iss213,
    kelley_bruteforce,
    kelley_lp,
    si21,
    sis123,
    subadditivize,
    us12,
    uss213_search,
    dstar_window,
)
from .grp import make_group  # noqa: E402
from .lang import canonical_print, parse_group, parse_set  # noqa: E402

__all__ = [
    "DensityResult", "ExtremalPattern", "canonical_print", "dstar_window", "eval_extremal", "is12",
    "iss213", "kelley_bruteforce", "kelley_lp", "make_group", "parse_group", "parse_set", "si21",
    "sis123", "subadditivize", "us12", "uss213_search",
]
