"""Log-gamma by Stirling's series, independent of the platform libm.

Integer arguments below ``STIRLING_THRESHOLD`` use the logarithm of the exact
factorial.  Everything else is shifted up until the asymptotic series reaches
the working precision, then summed with the Bernoulli-number coefficients.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

import mpmath

from .precision import is_double

STIRLING_THRESHOLD = 10

# B_{2k} / (2k (2k-1)) for k = 1..9; enough for 53 bits once x >= 10.
DOUBLE_COEFFS = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
)

HALF_LOG_2PI = 0.91893853320467274178


@lru_cache(maxsize=None)
def _bernoulli(m: int) -> Fraction:
    """Exact Bernoulli number B_m (B_1 = -1/2 convention) via the Akiyama-Tanigawa table."""
    row = [Fraction(0)] * (m + 1)
    for i in range(m + 1):
        row[i] = Fraction(1, i + 1)
        for j in range(i, 0, -1):
            row[j - 1] = j * (row[j - 1] - row[j])
    return row[0] if m != 1 else Fraction(-1, 2)


@lru_cache(maxsize=None)
def _mp_coeffs(prec: int) -> tuple[int, tuple]:
    """Shift threshold and Stirling coefficients sufficient for ``prec`` bits."""
    # the smallest series term near k ~ pi*x is about exp(-2*pi*x)
    x0 = max(STIRLING_THRESHOLD, int(math.ceil(0.2 * prec)) + 2)
    coeffs = []
    with mpmath.workprec(prec + 20):
        eps = mpmath.mpf(2) ** (-prec - 10)
        k = 1
        while True:
            b = _bernoulli(2 * k)
            c = mpmath.mpf(b.numerator) / b.denominator / (2 * k * (2 * k - 1))
            coeffs.append(c)
            if abs(c) / mpmath.mpf(x0) ** (2 * k - 1) < eps or k > 4 * prec:
                break
            k += 1
    return x0, tuple(coeffs)


def _log_factorial_exact(m: int, prec: int):
    value = math.factorial(m)
    if is_double(prec):
        return math.log(value)
    with mpmath.workprec(prec):
        return mpmath.log(value)


def stirling_double(x: float) -> float:
    """Stirling series in double precision, valid for ``x >= STIRLING_THRESHOLD``."""
    inv = 1.0 / x
    inv2 = inv * inv
    acc = 0.0
    for c in reversed(DOUBLE_COEFFS):
        acc = acc * inv2 + c
    return (x - 0.5) * math.log(x) - x + HALF_LOG_2PI + acc * inv


def log_gamma(x, prec: int = 53):
    """Natural log of Gamma(x) for real ``x > 0`` at ``prec`` bits."""
    if x <= 0:
        raise ValueError(f"log_gamma requires x > 0, got {x}")
    if float(x) == int(float(x)) and x < STIRLING_THRESHOLD:
        return _log_factorial_exact(int(x) - 1, prec)
    if is_double(prec):
        x = float(x)
        prod = 1.0
        while x < STIRLING_THRESHOLD:
            prod *= x
            x += 1.0
        return stirling_double(x) - math.log(prod)
    x0, coeffs = _mp_coeffs(prec)
    with mpmath.workprec(prec + 20):
        x = mpmath.mpf(x)
        shift = mpmath.mpf(0)
        if x < x0:
            m = int(mpmath.ceil(x0 - x))
            shift = mpmath.log(mpmath.rf(x, m))
            x = x + m
        inv = 1 / x
        inv2 = inv * inv
        acc = mpmath.mpf(0)
        for c in reversed(coeffs):
            acc = acc * inv2 + c
        result = (x - 0.5) * mpmath.log(x) - x + mpmath.log(2 * mpmath.pi) / 2 + acc * inv - shift
    with mpmath.workprec(prec):
        return +result
