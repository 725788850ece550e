"""Closed-form determinant of the Dirichlet polyharmonic operator and its exact ingredients.

The operator is P_n = (-1)^n d^{2n}/dx^{2n} on (0, T) with u, u', ..., u^{(n-1)}
vanishing at both ends.  Its zeta-regularised determinant factors as

    det P_n = (T/2)^{n^2} (4n)^n / prod_{k<n} sin^{2(n-k)}(k pi / 2n) * prod_{k<n} k!/(n+k)!

and every piece of that product is available here on its own, both in
floating point (``prec`` bits, see :mod:`polydet.precision`) and, for the
two matrix identities behind it, in exact integer/rational arithmetic.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import mpmath

from . import kernels
from .constants import constant
from .lgamma import log_gamma
from .linalg import bareiss_det
from .precision import csum, is_double, resolve_prec, to_real
from .types import LogDet, PolyPotential

BINOMIAL_MAX_N = 64
TOEPLITZ_MAX_N = 20


@dataclass(frozen=True)
class OperatorSpec:
    """Order parameter n (operator order 2n), interval length T, optional lower-order terms."""

    n: int
    T: float
    perturbation: Optional[PolyPotential] = None

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 1:
            raise ValueError(f"n must be a positive integer, got {self.n}")
        if not self.T > 0:
            raise ValueError(f"T must be positive, got {self.T}")
        if self.perturbation is not None and self.perturbation.max_order > self.n:
            raise ValueError(
                f"perturbation order {self.perturbation.max_order} exceeds n={self.n}; "
                "only orders m <= n are covered"
            )


def _check_n(n: int) -> None:
    if int(n) != n or n < 1:
        raise ValueError(f"n must be a positive integer, got {n}")


def _sin_log_sum(n: int, prec: int):
    """sum_{j=1}^{n-1} (n-j) log sin(j pi / 2n) at ``prec`` bits."""
    if is_double(prec):
        return kernels.log_sin_weighted_sum(n)
    with mpmath.workprec(prec + 10):
        step = mpmath.pi / (2 * n)
        total = mpmath.fsum((n - j) * mpmath.log(mpmath.sin(j * step)) for j in range(1, n))
    with mpmath.workprec(prec):
        return +total


def log_abs_h_alpha(n: int, prec: int | None = None):
    """log |h_alpha| = (n(n-1)/2) log 2 + sum_{j<n} (n-j) log sin(j pi / 2n)."""
    _check_n(n)
    prec = resolve_prec(n, prec)
    pairs = n * (n - 1) // 2
    if is_double(prec):
        return csum([pairs * constant("log2", prec), _sin_log_sum(n, prec)], prec)
    with mpmath.workprec(prec):
        return csum([pairs * constant("log2", prec), _sin_log_sum(n, prec)], prec)


def vandermonde_h_alpha(n: int) -> complex:
    """prod_{1<=k<j<=n} (w_j - w_k) with w_j = exp(i pi (j-1)/n), as a double complex.

    Evaluated as the explicit pairwise product; intended for n <= 16 where the
    result stays well inside double range.
    """
    _check_n(n)
    nodes = [cmath.exp(1j * math.pi * (j - 1) / n) for j in range(1, n + 1)]
    det = 1 + 0j
    for j in range(n):
        for k in range(j):
            det *= nodes[j] - nodes[k]
    return det


def log_factorial_ratio(n: int, prec: int | None = None):
    """log prod_{k=0}^{n-1} k!/(n+k)! via the Stirling log-gamma."""
    _check_n(n)
    prec = resolve_prec(n, prec)
    if is_double(prec):
        return kernels.log_factorial_ratio(n)
    with mpmath.workprec(prec + 10):
        terms = [log_gamma(k + 1, prec + 10) - log_gamma(n + k + 1, prec + 10) for k in range(n)]
    return csum(terms, prec)


def log_det_polyharmonic(n: int, T, prec: int | None = None) -> LogDet:
    """Zeta-regularised log det of (-1)^n d^{2n} on (0, T) with Dirichlet conditions.

    The breakdown lists the four additive factors of the closed form; their
    compensated sum is ``log_modulus``.  The phase is zero for every n and T.
    """
    _check_n(n)
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    prec = resolve_prec(n, prec)
    Tw = to_real(T, prec)
    # -2 [log|h_alpha| - (n(n-1)/2) log 2] is just -2 * (sine sum)
    sines = _sin_log_sum(n, prec)
    ratio = log_factorial_ratio(n, prec)
    if is_double(prec):
        t_power = n * n * math.log(Tw / 2)
        order_power = n * math.log(4 * n)
        sine = -2 * sines
    else:
        with mpmath.workprec(prec):
            t_power = n * n * mpmath.log(Tw / 2)
            order_power = n * mpmath.log(4 * n)
            sine = -2 * sines
    breakdown = {
        "T-power": t_power,
        "order-power": order_power,
        "h_alpha": sine,
        "factorial-ratio": ratio,
    }
    return LogDet(csum(breakdown.values(), prec), 0.0, breakdown, prec=prec)


def log_det_polyharmonic_via_F(n: int, T, prec: int | None = None):
    """Same determinant written as n log n + n log 2 - 2 log F(n) + n^2 log T + log(factorial ratio).

    F(n) = |h_alpha|.  Kept separate from :func:`log_det_polyharmonic` so the
    two algebraic forms can be checked against each other.
    """
    _check_n(n)
    prec = resolve_prec(n, prec)
    Tw = to_real(T, prec)
    log_F = log_abs_h_alpha(n, prec)
    ratio = log_factorial_ratio(n, prec)
    if is_double(prec):
        parts = [n * math.log(n), n * math.log(2), -2 * log_F, n * n * math.log(Tw), ratio]
    else:
        with mpmath.workprec(prec):
            parts = [n * mpmath.log(n), n * mpmath.log(2), -2 * log_F, n * n * mpmath.log(Tw), ratio]
    return csum(parts, prec)


def navier_log_det(n: int, T, prec: int | None = None):
    """log det of the same operator under Navier conditions: n (log 2 + log T)."""
    _check_n(n)
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    prec = resolve_prec(n, prec)
    Tw = to_real(T, prec)
    if is_double(prec):
        return n * (math.log(2) + math.log(Tw))
    with mpmath.workprec(prec):
        return n * (mpmath.log(2) + mpmath.log(Tw))


def binomial_matrix(n: int) -> list[list[int]]:
    """Entry (i, j), 1-based: C(n + j - 1, i - 1)."""
    return [[math.comb(n + j - 1, i - 1) for j in range(1, n + 1)] for i in range(1, n + 1)]


def binomial_matrix_det(n: int) -> int:
    """Exact determinant of :func:`binomial_matrix` (always 1)."""
    _check_n(n)
    if n > BINOMIAL_MAX_N:
        raise ValueError(f"n={n} outside supported range 1..{BINOMIAL_MAX_N}")
    return bareiss_det(binomial_matrix(n))


def _as_fraction(T) -> Fraction:
    if isinstance(T, Fraction):
        return T
    if isinstance(T, (int, str)):
        return Fraction(T)
    raise TypeError(f"T must be an exact rational (Fraction, int or str), got {type(T).__name__}")


def factorial_toeplitz_matrix(n: int, T) -> list[list[Fraction]]:
    """Entry (i, j), 1-based: T^(n+j-i) / (n+j-i)!."""
    T = _as_fraction(T)
    return [
        [T ** (n + j - i) / math.factorial(n + j - i) for j in range(1, n + 1)]
        for i in range(1, n + 1)
    ]


def factorial_toeplitz_closed_form(n: int, T) -> Fraction:
    """T^(n^2) prod_{j<n} j!/(n+j)! as an exact rational."""
    T = _as_fraction(T)
    value = T ** (n * n)
    for j in range(n):
        value *= Fraction(math.factorial(j), math.factorial(n + j))
    return value


def factorial_toeplitz_det(n: int, T) -> Fraction:
    """Exact determinant of :func:`factorial_toeplitz_matrix`."""
    _check_n(n)
    if n > TOEPLITZ_MAX_N:
        raise ValueError(f"n={n} outside supported range 1..{TOEPLITZ_MAX_N}")
    return Fraction(bareiss_det(factorial_toeplitz_matrix(n, T)))
