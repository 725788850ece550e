"""Pure-Python (numpy) versions of the hot kernels.

Signatures and semantics match ``_kernels.pyx`` exactly; ``kernels.py`` picks
one of the two at import time.
"""

from __future__ import annotations

import math

import numpy as np

from .lgamma import DOUBLE_COEFFS, HALF_LOG_2PI, STIRLING_THRESHOLD

_LOG_FACT_SMALL = np.array([math.log(math.factorial(m)) for m in range(STIRLING_THRESHOLD)])


def log_sin_weighted_sum(n: int) -> float:
    """sum_{j=1}^{n-1} (n - j) * log(sin(j*pi/(2n)))."""
    if n < 2:
        return 0.0
    j = np.arange(1, n, dtype=np.float64)
    terms = (n - j) * np.log(np.sin(j * math.pi / (2 * n)))
    return math.fsum(terms)


def _lgamma_int_array(x: np.ndarray) -> np.ndarray:
    """Stirling log-gamma at positive integer points (float array)."""
    out = np.empty_like(x)
    small = x < STIRLING_THRESHOLD
    out[small] = _LOG_FACT_SMALL[x[small].astype(np.int64) - 1]
    big = x[~small]
    inv = 1.0 / big
    inv2 = inv * inv
    acc = np.zeros_like(big)
    for c in reversed(DOUBLE_COEFFS):
        acc = acc * inv2 + c
    out[~small] = (big - 0.5) * np.log(big) - big + HALF_LOG_2PI + acc * inv
    return out


def log_factorial_ratio(n: int) -> float:
    """sum_{k=0}^{n-1} [lgamma(k+1) - lgamma(n+k+1)] with the Stirling lgamma."""
    k = np.arange(n, dtype=np.float64)
    terms = _lgamma_int_array(k + 1.0) - _lgamma_int_array(k + n + 1.0)
    return math.fsum(terms)


def shoot_dirichlet(qmid: np.ndarray, h: float, lambdas: np.ndarray) -> np.ndarray:
    """Propagate y'' = (q - lambda) y, y(0)=0, y'(0)=1 across piecewise-constant q.

    ``qmid[i]`` is q at the midpoint of step i.  Returns y(T) for each lambda,
    up to a positive rescaling applied to avoid overflow; only its sign and
    zero crossings are meaningful.
    """
    lam = np.asarray(lambdas, dtype=np.float64)
    y = np.zeros_like(lam)
    yp = np.ones_like(lam)
    for qv in np.asarray(qmid, dtype=np.float64):
        v = qv - lam
        w = np.sqrt(np.abs(v))
        wh = w * h
        osc = v < 0.0
        c = np.where(osc, np.cos(wh), np.cosh(np.where(osc, 0.0, wh)))
        s = np.where(osc, np.sin(wh), np.sinh(np.where(osc, 0.0, wh)))
        with np.errstate(divide="ignore", invalid="ignore"):
            s_over_w = np.where(w > 0.0, s / w, h)
        sign = np.where(osc, -1.0, 1.0)
        y, yp = c * y + s_over_w * yp, sign * w * s * y + c * yp
        big = np.abs(y) + np.abs(yp) > 1e150
        if big.any():
            y = np.where(big, y * 1e-150, y)
            yp = np.where(big, yp * 1e-150, yp)
    return y
