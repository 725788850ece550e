"""Determinants: exact fraction-free elimination and log-domain LU."""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

import mpmath

from .types import wrap_phase


class SingularMatrixError(ArithmeticError):
    """A pivot fell below the resolution guard; the determinant is zero at this precision."""

    def __init__(self, step: int, pivot, guard):
        super().__init__(f"pivot {mpmath.nstr(pivot, 5)} at step {step} is below guard {mpmath.nstr(guard, 5)}")
        self.step = step
        self.pivot = pivot
        self.guard = guard


def bareiss_det(matrix: Sequence[Sequence]):
    """Exact determinant of an integer or Fraction matrix (Bareiss elimination).

    Every division in the recurrence is exact, so integer input stays integer
    throughout and rational input never needs a common denominator.
    """
    a = [list(row) for row in matrix]
    n = len(a)
    if any(len(row) != n for row in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((r for r in range(k + 1, n) if a[r][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                num = a[i][j] * pivot - a[i][k] * a[k][j]
                a[i][j] = num // prev if isinstance(num, int) and isinstance(prev, int) else Fraction(num) / prev
            a[i][k] = 0
        prev = pivot
    det = a[n - 1][n - 1]
    return det if sign > 0 else -det


def log_det_lu(matrix, prec: int, guard=None):
    """(log|det A|, phase) by LU with partial pivoting at ``prec`` bits.

    Pivot moduli are accumulated as logarithms and the phase as the sum of
    pivot arguments plus pi per row swap.  ``guard`` is an absolute lower
    limit for pivot moduli; smaller pivots raise :class:`SingularMatrixError`.
    """
    with mpmath.workprec(prec):
        a = [[mpmath.mpmathify(x) for x in row] for row in matrix]
        n = len(a)
        log_mod = mpmath.mpf(0)
        phase = mpmath.mpf(0)
        swaps = 0
        if guard is None:
            scale = max((abs(x) for row in a for x in row), default=mpmath.mpf(1))
            guard = scale * mpmath.mpf(2) ** (-prec + 16)
        for k in range(n):
            p = max(range(k, n), key=lambda r: abs(a[r][k]))
            if abs(a[p][k]) <= guard:
                raise SingularMatrixError(k, abs(a[p][k]), guard)
            if p != k:
                a[k], a[p] = a[p], a[k]
                swaps += 1
            pivot = a[k][k]
            log_mod += mpmath.log(abs(pivot))
            if isinstance(pivot, mpmath.mpc) or pivot < 0:
                phase += mpmath.arg(pivot)
            inv = 1 / pivot
            for i in range(k + 1, n):
                f = a[i][k] * inv
                if f:
                    row_i, row_k = a[i], a[k]
                    for j in range(k + 1, n):
                        row_i[j] -= f * row_k[j]
        if swaps % 2:
            phase += mpmath.pi
        return +log_mod, wrap_phase(float(phase))


def inverse(matrix, prec: int):
    with mpmath.workprec(prec):
        return mpmath.inverse(mpmath.matrix(matrix))
