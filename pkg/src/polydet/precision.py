"""Working-precision policy and compensated summation.

Double precision (53 bits) is used up to ``DOUBLE_MAX_N``; above that the
routines switch to mpmath floats with ``default_extended_bits()`` of mantissa.
Every public numerical routine takes ``prec=None`` meaning "apply the policy".
"""

from __future__ import annotations

import math
import os
from typing import Iterable

import mpmath

DOUBLE = 53
DOUBLE_MAX_N = 10_000
_EXTENDED_FALLBACK = 128
PRECISION_ENV = "POLYDET_PRECISION"


def default_extended_bits() -> int:
    """Extended mantissa width, overridable through ``POLYDET_PRECISION``."""
    raw = os.environ.get(PRECISION_ENV)
    if not raw:
        return _EXTENDED_FALLBACK
    bits = int(raw)
    if bits < DOUBLE:
        raise ValueError(f"{PRECISION_ENV}={raw} is below double precision")
    return bits


def resolve_prec(n: int, prec: int | None = None) -> int:
    """Pick the working precision for problem size ``n``."""
    if prec is not None:
        if prec < DOUBLE:
            raise ValueError(f"precision must be at least {DOUBLE} bits, got {prec}")
        return int(prec)
    return DOUBLE if n <= DOUBLE_MAX_N else default_extended_bits()


def is_double(prec: int) -> bool:
    return prec <= DOUBLE


def to_real(x, prec: int):
    """Convert ``x`` (int, float, Fraction, str, mpf) to the working type."""
    if is_double(prec):
        return float(x)
    with mpmath.workprec(prec):
        if hasattr(x, "numerator") and hasattr(x, "denominator") and not isinstance(x, int):
            return mpmath.mpf(x.numerator) / x.denominator
        return +mpmath.mpf(x)


def neumaier_sum(values: Iterable[float]) -> float:
    """Kahan-Babuska (Neumaier) compensated sum of floats."""
    total = 0.0
    comp = 0.0
    for v in values:
        t = total + v
        if abs(total) >= abs(v):
            comp += (total - t) + v
        else:
            comp += (v - t) + total
        total = t
    return total + comp


def csum(values: Iterable, prec: int):
    """Compensated sum at the working precision.

    Floats go through ``math.fsum`` (exactly rounded); mpf values through
    ``mpmath.fsum`` evaluated at ``prec`` bits.
    """
    if is_double(prec):
        return math.fsum(values)
    with mpmath.workprec(prec):
        return mpmath.fsum(values)


def log(x, prec: int):
    if is_double(prec):
        return math.log(x)
    with mpmath.workprec(prec):
        return mpmath.log(x)


def pi(prec: int):
    if is_double(prec):
        return math.pi
    with mpmath.workprec(prec):
        return +mpmath.pi
