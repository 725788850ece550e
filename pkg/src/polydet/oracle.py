"""Checks that share no code with the closed form or the BFK pipeline.

Dirichlet eigenvalues of -d^2/dx^2 + q on (0, T) by shooting and by finite
differences, determinant ratios from truncated eigenvalue products, and a
table of values known in closed form.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import mpmath
import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.linalg import eigh_tridiagonal

from . import kernels
from .types import PolyPotential

SHOOTING_STEPS = 4096
FD_MESH = 512
EPS = np.finfo(np.float64).eps


class BracketError(RuntimeError):
    """The search interval for eigenvalue ``index`` (1-based) does not isolate it."""

    def __init__(self, index: int, reason: str):
        super().__init__(f"eigenvalue {index}: {reason}")
        self.index = index


class RatioUndefined(ArithmeticError):
    """An eigenvalue is zero or negative, so the log-ratio product is undefined."""


@dataclass(frozen=True)
class EigenList:
    """Lowest ``count`` eigenvalues, ascending, with per-value error estimates."""

    values: np.ndarray
    count: int
    method: str
    est_error: np.ndarray

    def __post_init__(self):
        if len(self.values) != self.count or len(self.est_error) != self.count:
            raise ValueError("values, est_error and count disagree")
        if self.count > 1 and not np.all(np.diff(self.values) > 0):
            raise ValueError("eigenvalues must be strictly increasing")


def _order_zero(q: PolyPotential | float | int) -> np.ndarray:
    if isinstance(q, (int, float)):
        q = PolyPotential.constant(q)
    if any(j != 0 for j in q.coefficients):
        raise ValueError("the eigenvalue oracles accept an order-0 potential only")
    if not q.is_real:
        raise ValueError("the eigenvalue oracles need a real potential")
    coeffs = [float(c) for c in q.order(0)]
    return np.array(coeffs if coeffs else [0.0])


def _free_eigenvalues(T: float, K: int) -> np.ndarray:
    k = np.arange(1, K + 1, dtype=np.float64)
    return (k * math.pi / T) ** 2


def _shoot(coeffs: np.ndarray, T: float, K: int, steps: int, rtol: float):
    h = T / steps
    qmid = npoly.polyval((np.arange(steps) + 0.5) * h, coeffs)
    qmin, qmax = float(qmid.min()), float(qmid.max())
    free = _free_eigenvalues(T, K)
    # Dirichlet gap lambda_{k+1} - lambda_k >= 3 pi^2/T^2; each bracket must hold one eigenvalue
    if K > 1 or qmax > qmin:
        gap = 3 * (math.pi / T) ** 2
        if qmax - qmin >= gap / 2:
            raise BracketError(1, f"potential oscillation {qmax - qmin:.3g} is not below half the gap {gap:.3g}")
    delta = 1e-10 * free + 1e-12
    lo = free + qmin - delta
    hi = free + qmax + delta
    sign_lo = np.sign(kernels.shoot_dirichlet(qmid, h, lo))
    sign_hi = np.sign(kernels.shoot_dirichlet(qmid, h, hi))
    # y(T; lambda) has sign (-1)^k just above lambda_k
    parity = np.where(np.arange(K) % 2 == 0, 1.0, -1.0)
    bad = np.flatnonzero((sign_lo != parity) | (sign_hi != -parity))
    if bad.size:
        raise BracketError(int(bad[0]) + 1, "no sign change of y(T) across the bracket")
    for _ in range(200):
        width = hi - lo
        if np.all(width <= rtol * np.abs(hi)):
            break
        mid = 0.5 * (lo + hi)
        s = np.sign(kernels.shoot_dirichlet(qmid, h, mid))
        below = s == parity
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi), hi - lo


def eigen_shooting(q, T: float, K: int, steps: int = SHOOTING_STEPS, rtol: float = 1e-13) -> EigenList:
    """Lowest K Dirichlet eigenvalues of -d^2/dx^2 + q on (0, T) by shooting.

    y'' = (q - lambda) y is propagated exactly over ``steps`` cells with q
    frozen at each cell midpoint, and every eigenvalue is bisected on the sign
    of y(T).  The solve is repeated on twice as many cells and the two results
    are Richardson-combined (the frozen-coefficient error is O(h^2)); the
    difference sets ``est_error`` together with the bisection width and
    rounding.
    """
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    coeffs = _order_zero(q)
    T = float(T)
    coarse, w1 = _shoot(coeffs, T, K, steps, rtol)
    fine, w2 = _shoot(coeffs, T, K, 2 * steps, rtol)
    values = fine + (fine - coarse) / 3
    est = np.abs(fine - coarse) / 3 + w1 + w2 + 4 * steps * EPS * np.abs(values)
    return EigenList(values, K, "shooting", est)


def _fd_solve(coeffs: np.ndarray, T: float, K: int, mesh: int) -> np.ndarray:
    h = T / mesh
    x = np.arange(1, mesh) * h
    diag = 2.0 / h**2 + npoly.polyval(x, coeffs)
    off = np.full(mesh - 2, -1.0 / h**2)
    return eigh_tridiagonal(diag, off, eigvals_only=True, select="i", select_range=(0, K - 1))


def eigen_finite_difference(q, T: float, K: int, mesh: int = FD_MESH) -> EigenList:
    """Lowest K eigenvalues by the 3-point finite-difference matrix on meshes M, 2M, 4M.

    Two Richardson steps remove the O(h^2) error; the spread of the two
    corrected values is ``est_error``.
    """
    if K < 1 or K >= mesh - 1:
        raise ValueError(f"K must lie in [1, {mesh - 2}], got {K}")
    coeffs = _order_zero(q)
    T = float(T)
    l1, l2, l4 = (_fd_solve(coeffs, T, K, m) for m in (mesh, 2 * mesh, 4 * mesh))
    r1 = (4 * l2 - l1) / 3
    r2 = (4 * l4 - l2) / 3
    est = np.abs(r2 - r1) + 16 * mesh * EPS * np.abs(r2)
    return EigenList(r2, K, "finite-difference", est)


@dataclass(frozen=True)
class RatioEstimate:
    """Truncated log-products L(K') = sum_{k<=K'} log(lambda_k(H)/lambda_k(P)) and their extrapolation.

    ``extrapolated`` is exp(2 L(K) - L(K/2)), which cancels the 1/K tail;
    ``est_error`` is the relative change of the same extrapolation one
    halving earlier plus the propagated eigenvalue errors.
    """

    K: int
    log_partial: dict = field(default_factory=dict)
    extrapolated: float = 1.0
    est_error: float = 0.0

    def raw(self, K: int) -> float:
        return math.exp(self.log_partial[K])


def eigen_ratio(q, T: float, K: int, method: str = "shooting") -> RatioEstimate:
    """Eigenvalue-product estimate of det H / det P for H = -d^2 + q on (0, T)."""
    if K < 4 or K % 4:
        raise ValueError(f"K must be a positive multiple of 4, got {K}")
    coeffs = _order_zero(q)
    if not np.any(coeffs):
        return RatioEstimate(K, {K: 0.0, K // 2: 0.0, K // 4: 0.0}, 1.0, 0.0)
    if method == "shooting":
        eig = eigen_shooting(q, T, K)
    elif method == "finite-difference":
        eig = eigen_finite_difference(q, T, K)
    else:
        raise ValueError(f"unknown method {method!r}")
    if np.any(eig.values <= 0):
        k = int(np.flatnonzero(eig.values <= 0)[0]) + 1
        raise RatioUndefined(f"eigenvalue {k} of H is {eig.values[k - 1]:.3g} <= 0")
    logs = np.log(eig.values / _free_eigenvalues(float(T), K))
    partial = {m: math.fsum(logs[:m]) for m in (K // 4, K // 2, K)}
    e_full = 2 * partial[K] - partial[K // 2]
    e_half = 2 * partial[K // 2] - partial[K // 4]
    # e_full carries each log-eigenvalue error with weight up to 2
    propagated = 2 * math.fsum(eig.est_error / eig.values)
    return RatioEstimate(K, partial, math.exp(e_full), abs(math.expm1(e_full - e_half)) + propagated)


def det_ratio_by_eigenvalues(q, T: float, K: int, method: str = "shooting") -> float:
    """Extrapolated prod_{k<=K} lambda_k(H)/lambda_k(P), an estimate of det H / det P."""
    return eigen_ratio(q, T, K, method).extrapolated


_T_TOKEN = r"(?P<T>[0-9]*\.?[0-9]*(?:pi)?(?:/[0-9]+)?)"
_PATTERNS = {
    "dirichlet": re.compile(r"dirichlet_n1_T" + _T_TOKEN + r"$"),
    "navier": re.compile(r"navier_n(?P<n>[0-9]+)_T" + _T_TOKEN + r"$"),
    "navier_zeta_prime": re.compile(r"navier_zeta_prime_n(?P<n>[0-9]+)_T" + _T_TOKEN + r"$"),
}


def _parse_length(token: str, prec: int):
    """'1', '0.5', 'pi', '2pi', 'pi/2', '3/2' -> mpf."""
    m = re.fullmatch(r"([0-9]*\.?[0-9]*)(pi)?(?:/([0-9]+))?", token)
    if not token or not m or not (m.group(1) or m.group(2)):
        raise KeyError(f"cannot read interval length {token!r}")
    with mpmath.workprec(prec):
        value = mpmath.mpf(m.group(1)) if m.group(1) else mpmath.mpf(1)
        if m.group(2):
            value *= mpmath.pi
        if m.group(3):
            value /= int(m.group(3))
        if value <= 0:
            raise KeyError(f"interval length must be positive, got {token!r}")
        return value


def exact_reference(name: str, prec: int = 128):
    """Closed-form reference values.

    Keys: ``dirichlet_n1_T<T>`` (det = 2T; 2 pi at T = pi),
    ``navier_n<n>_T<T>`` (2^n T^n) and ``navier_zeta_prime_n<n>_T<T>``
    (zeta'(0) = -n log 2T).  T is written as ``1``, ``0.5``, ``pi``,
    ``2pi`` or ``3/2``.
    """
    for kind, pattern in _PATTERNS.items():
        m = pattern.match(name)
        if not m:
            continue
        T = _parse_length(m.group("T"), prec)
        with mpmath.workprec(prec):
            if kind == "dirichlet":
                return 2 * T
            n = int(m.group("n"))
            if n < 1:
                raise KeyError(f"n must be >= 1 in {name!r}")
            if kind == "navier":
                return (2 * T) ** n
            return -n * mpmath.log(2 * T)
    raise KeyError(f"unknown reference {name!r}")
