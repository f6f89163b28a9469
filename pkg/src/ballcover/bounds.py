"""Certified rational bounds for expressions involving e and natural logs.

Every inequality that involves ``e`` or ``log`` is decided here with
interval arithmetic (``mpmath.iv``), refining the working precision until
the answer is unambiguous.  Callers never see floating point values.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Callable

from mpmath import iv
from mpmath.libmp import to_rational

from .errors import InternalError

# Rational over-approximation of e, used where a threshold must be a
# fixed rational (larger e only weakens the targets it appears in).
E_UPPER = Fraction(2719, 1000)

_START_PREC = 64
_MAX_PREC = 1 << 14


def ivq(x: Fraction | int):
    """Exact rational ``x`` as an mpmath interval."""
    x = Fraction(x)
    return iv.mpf(x.numerator) / iv.mpf(x.denominator)


def _endpoints(value) -> tuple[Fraction, Fraction]:
    lo, hi = value._mpi_
    p, q = to_rational(lo)
    a = Fraction(int(p), int(q))
    p, q = to_rational(hi)
    return a, Fraction(int(p), int(q))


def enclose(expr: Callable[[], object], prec: int = _START_PREC) -> tuple[Fraction, Fraction]:
    """Evaluate ``expr`` (built from ``iv`` operations) at ``prec`` bits."""
    saved = iv.prec
    iv.prec = prec
    try:
        return _endpoints(expr())
    finally:
        iv.prec = saved


def upper_bound(expr: Callable[[], object], prec: int = 96) -> Fraction:
    return enclose(expr, prec)[1]


def lower_bound(expr: Callable[[], object], prec: int = 96) -> Fraction:
    return enclose(expr, prec)[0]


def exact_floor(expr: Callable[[], object]) -> int:
    """``floor`` of a real number known not to be an integer."""
    prec = _START_PREC
    while prec <= _MAX_PREC:
        lo, hi = enclose(expr, prec)
        if math.floor(lo) == math.floor(hi) and hi != math.floor(hi):
            return math.floor(lo)
        prec *= 2
    raise InternalError("could not separate value from an integer")


def exact_ceil(expr: Callable[[], object]) -> int:
    """``ceil`` of a real number known not to be an integer."""
    return -exact_floor(lambda: -expr())


def sign_of(expr: Callable[[], object]) -> int:
    """Sign of a real number known to be nonzero."""
    prec = _START_PREC
    while prec <= _MAX_PREC:
        lo, hi = enclose(expr, prec)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
        prec *= 2
    raise InternalError("could not decide the sign of an expression")


def exceeds_e_times(x: Fraction | int, coef: Fraction | int) -> bool:
    """Exact test of ``x > coef * e`` for rationals ``x`` and ``coef``."""
    x, coef = Fraction(x), Fraction(coef)
    if coef == 0:
        return x > 0
    return sign_of(lambda: ivq(x) - ivq(coef) * iv.e) > 0


def floor_e_times(coef: Fraction | int) -> int:
    """Exact ``floor(coef * e)``; zero when ``coef`` is zero."""
    coef = Fraction(coef)
    if coef == 0:
        return 0
    return exact_floor(lambda: ivq(coef) * iv.e)
