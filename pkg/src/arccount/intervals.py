"""Directed-rounding helpers on top of mpmath interval arithmetic.

Verifier verdicts must never hinge on a rounded float, so every
comparison against a transcendental quantity goes through an enclosing
interval: True means the inequality holds for every point of the
interval, and a too-wide interval is refined or treated conservatively.
"""

from __future__ import annotations

from contextlib import contextmanager
from fractions import Fraction
from typing import Callable

from mpmath import iv, mp


@contextmanager
def iv_prec(prec: int):
    old = iv.prec
    iv.prec = prec
    try:
        yield
    finally:
        iv.prec = old


def rational_iv(value: Fraction):
    """Exact rational as an interval (tight up to the working precision)."""
    return iv.mpf(value.numerator) / iv.mpf(value.denominator)


def ceil_of_interval(build: Callable[[], object], max_prec: int = 1280) -> int:
    """ceil(x) for a positive real described by ``build``, refining the
    enclosure until both endpoints give the same ceiling."""
    prec = 80
    while prec <= max_prec:
        with iv_prec(prec):
            x = build()
            lo = int(mp.ceil(x.a))
            hi = int(mp.ceil(x.b))
        if lo == hi:
            return lo
        prec *= 2
    raise ArithmeticError("interval too wide to determine a ceiling")


def certainly_lt(build_lhs: Callable[[], object], rhs: Fraction, prec: int = 120) -> bool:
    """True iff the enclosure of lhs lies strictly below the rational rhs."""
    with iv_prec(prec):
        lhs = build_lhs()
        return lhs.b < rational_iv(rhs).a


def certainly_ge(lhs: int, build_rhs: Callable[[], object], prec: int = 120) -> bool:
    """True iff the integer lhs is >= the upper end of the rhs enclosure."""
    with iv_prec(prec):
        return iv.mpf(lhs) >= build_rhs().b
