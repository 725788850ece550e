"""Two-sided bounds on -log F(n), on the factorial ratio, and on log det P_n.

F(n) = 2^{n(n-1)/2} prod_{j<n} sin^{n-j}(j pi / 2n) is |h_alpha|.  The bound
formulas are transcribed literally; nothing is simplified or re-derived, so a
transcription slip shows up as a failed sandwich in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath
import numpy as np

from .constants import constant
from .exactdet import _sin_log_sum, log_det_polyharmonic
from .precision import csum, is_double, resolve_prec, to_real


@dataclass(frozen=True)
class BoundReport:
    """lower <= direct <= upper, with the two slacks precomputed."""

    n: int
    lower: object
    direct: object
    upper: object
    slack_lower: object
    slack_upper: object
    certified_range: bool = True

    @property
    def certified(self) -> bool:
        return self.slack_lower >= 0 and self.slack_upper >= 0

    @classmethod
    def build(cls, n, lower, direct, upper, prec, certified_range=True):
        if is_double(prec):
            return cls(n, lower, direct, upper, direct - lower, upper - direct, certified_range)
        with mpmath.workprec(prec):
            return cls(n, lower, direct, upper, direct - lower, upper - direct, certified_range)


@dataclass(frozen=True)
class AsymptoticCoefficients:
    """log det P_n ~ c2_logn * n^2 log n + c2 * n^2."""

    c2: float
    c2_logn: float
    T: float

    @classmethod
    def for_length(cls, T, prec: int = 53) -> "AsymptoticCoefficients":
        return cls(_c2(T, prec), -1.0 if is_double(prec) else mpmath.mpf(-1), T)


class _Consts:
    """Constants at one working precision, fetched once per call."""

    def __init__(self, prec: int):
        self.prec = prec
        self.zeta3 = constant("zeta3", prec)
        self.gamma = constant("gamma", prec)
        self.A = constant("glaisher", prec)
        self.pi = constant("pi", prec)
        if is_double(prec):
            self.log = math.log
            self.one = 1.0
        else:
            self.log = mpmath.log
            self.one = mpmath.mpf(1)


def _ctx(n: int, prec: int | None):
    prec = resolve_prec(n, prec)
    return prec, _Consts(prec)


def _run(prec: int, fn):
    if is_double(prec):
        return fn()
    with mpmath.workprec(prec):
        return +fn()


def neg_log_F(n: int, prec: int | None = None):
    """-log F(n) = -(n(n-1)/2) log 2 - sum_{j<n} (n-j) log sin(j pi / 2n)."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    prec = resolve_prec(n, prec)
    pairs = n * (n - 1) // 2
    return _run(prec, lambda: csum([-pairs * constant("log2", prec), -_sin_log_sum(n, prec)], prec))


def lower_bound_neg_log_F(n: int, prec: int | None = None):
    """Lower bound on -log F(n), valid for every n >= 1."""
    prec, c = _ctx(n, prec)

    def value():
        N = c.one * n
        pi, log = c.pi, c.log
        return (
            7 * c.zeta3 / (4 * pi**2) * N**2
            - N * log(N) / 2
            + N * (-1 + log(pi) / 2)
            + c.one / 4
            - pi**2 / (72 * N)
            - pi**2 / (144 * N**2)
            - pi**4 / (1080 * N**3)
            + pi**4 / (2160 * N**4)
        )

    return _run(prec, value)


def upper_bound_neg_log_F(n: int, prec: int | None = None):
    """Upper bound on -log F(n); derived for n >= 2, evaluated as-is at n = 1."""
    prec, c = _ctx(n, prec)

    def value():
        N = c.one * n
        pi, log = c.pi, c.log
        return (
            7 * c.zeta3 / (4 * pi**2) * N**2
            - N * log(N) / 2
            + (log(pi) - log(2 * c.one) / 2 - c.one * 43 / 48) * N
            + log(N) / 12
            + (c.one * 3 / 16 - c.gamma / 12 - log(pi / 2)) / 2
            + (c.one * 13 / 4 - pi**2 / 3) / (24 * N)
            + pi**2 / (48 * N**2)
        )

    return _run(prec, value)


def neg_log_F_report(n: int, prec: int | None = None) -> BoundReport:
    """Sandwich of -log F(n) between the lower and upper bounds."""
    prec = resolve_prec(n, prec)
    return BoundReport.build(
        n,
        lower_bound_neg_log_F(n, prec),
        neg_log_F(n, prec),
        upper_bound_neg_log_F(n, prec),
        prec,
        certified_range=n >= 2,
    )


def barnes_bounds(n: int, prec: int | None = None):
    """(lower, upper) for log prod_{j<n} j!/(n+j)!, with A the Glaisher-Kinkelin constant."""
    prec, c = _ctx(n, prec)

    def common():
        N = c.one * n
        log = c.log
        return (
            -N**2 * log(N)
            + (c.one * 3 / 2 - 2 * log(2 * c.one)) * N**2
            - log(N) / 12
            + log(2 * c.one) / 12
            - log(c.A)
        )

    def lower():
        return common() - c.one / 12 - c.one / (320 * n * n)

    def upper():
        return common() + c.one / 6 + c.one / (320 * n * n)

    return _run(prec, lower), _run(prec, upper)


def _c2(T, prec: int):
    c = _Consts(prec)

    def value():
        Tw = to_real(T, prec)
        return 7 * c.zeta3 / (2 * c.pi**2) + c.one * 3 / 2 + c.log(Tw / 4)

    return _run(prec, value)


def critical_length(prec: int = 53):
    """T at which the n^2 coefficient of the asymptote changes sign."""
    c = _Consts(prec)
    exp = math.exp if is_double(prec) else mpmath.exp
    return _run(prec, lambda: 4 * exp(-7 * c.zeta3 / (2 * c.pi**2) - c.one * 3 / 2))


def asymptotic_logdet(n: int, T, prec: int | None = None):
    """-n^2 log n + [7 zeta(3)/(2 pi^2) + 3/2 + log(T/4)] n^2 (no O(n) term)."""
    prec, c = _ctx(n, prec)
    coeff = _c2(T, prec)
    return _run(prec, lambda: -(c.one * n) ** 2 * c.log(c.one * n) + coeff * n * n)


def logdet_lower_bound(n: int, T, prec: int | None = None):
    """Lower bound on log det P_n from combining the -log F and Barnes lower bounds."""
    prec, c = _ctx(n, prec)

    def value():
        N = c.one * n
        pi, log = c.pi, c.log
        return (
            -N**2 * log(N)
            + _c2(T, prec) * N**2
            + (log(2 * pi) - 2) * N
            - log(N) / 12
            + (log(2 * c.one) + 5 - 12 * log(c.A)) / 12
            - pi**2 / (36 * N)
            - (c.one / 320 + pi**2 / 72) / N**2
            - pi**4 / (540 * N**3)
            + pi**4 / (1080 * N**4)
        )

    return _run(prec, value)


def logdet_upper_bound(n: int, T, prec: int | None = None):
    """Upper bound on log det P_n from combining the -log F and Barnes upper bounds."""
    prec, c = _ctx(n, prec)

    def value():
        N = c.one * n
        pi, log = c.pi, c.log
        return (
            -N**2 * log(N)
            + _c2(T, prec) * N**2
            + (2 * log(pi) - c.one * 43 / 24) * N
            + log(N) / 12
            + (c.one * 17 / 4 - c.gamma + 13 * log(2 * c.one) - 12 * log(pi * c.A)) / 12
            + (c.one * 13 / 4 - pi**2 / 3) / (12 * N)
            + (pi**2 + c.one * 3 / 40) / (24 * N**2)
        )

    return _run(prec, value)


def logdet_two_sided(n: int, T, prec: int | None = None) -> BoundReport:
    """Sandwich log det P_n between the combined bounds; check ``.certified``."""
    if n < 2:
        raise ValueError(f"two-sided bounds are certified from n = 2, got n={n}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    prec = resolve_prec(n, prec)
    direct = log_det_polyharmonic(n, T, prec).log_modulus
    return BoundReport.build(
        n, logdet_lower_bound(n, T, prec), direct, logdet_upper_bound(n, T, prec), prec
    )


def asymptotic_remainder(n: int, T, prec: int | None = None):
    """log det P_n minus the two-term asymptote."""
    prec = resolve_prec(n, prec)
    direct = log_det_polyharmonic(n, T, prec).log_modulus
    asym = asymptotic_logdet(n, T, prec)
    return _run(prec, lambda: direct - asym)


def remainder_envelope(n: int, T, prec: int | None = None):
    """(low, high) range for the remainder implied by the combined bounds."""
    prec = resolve_prec(n, prec)
    asym = asymptotic_logdet(n, T, prec)
    lo = logdet_lower_bound(n, T, prec)
    hi = logdet_upper_bound(n, T, prec)
    return _run(prec, lambda: lo - asym), _run(prec, lambda: hi - asym)


def log_bound_check(y):
    """(y - y^2/2 + y^3/3 - 2y^4/3, log(1+y), y - y^2/2 + y^3/3) for y in [-1/2, 1/2].

    Evaluated in mpmath with enough guard bits that the y^4 gap is resolved
    even for tiny |y|, so the returned triple is ordered exactly when the
    inequality holds.
    """
    if not -0.5 <= y <= 0.5:
        raise ValueError(f"y must lie in [-1/2, 1/2], got {y}")
    if y == 0:
        z = mpmath.mpf(0)
        return z, z, z
    bits = 80 + 5 * max(0, -int(mpmath.floor(mpmath.log(abs(mpmath.mpf(y)), 2))))
    with mpmath.workprec(bits):
        y = mpmath.mpf(y)
        upper = y - y**2 / 2 + y**3 / 3
        lower = upper - 2 * y**4 / 3
        return +lower, mpmath.log1p(y), +upper


def cotangent_bounds_check(x):
    """(1/x - 4x/pi^2, cot x, 1/x) for x in (0, pi/2]."""
    if not 0 < x:
        raise ValueError(f"x must lie in (0, pi/2], got {x}")
    bits = 80 + 3 * max(0, -int(mpmath.floor(mpmath.log(mpmath.mpf(x), 2))))
    with mpmath.workprec(bits):
        x = mpmath.mpf(x)
        if x > mpmath.pi / 2:
            raise ValueError(f"x must lie in (0, pi/2], got {x}")
        upper = 1 / x
        return upper - 4 * x / mpmath.pi**2, mpmath.cot(x), +upper


def _count_violations(lower, exact, upper, scale, points, scalar_check) -> int:
    # a double verdict stands when both gaps clear the rounding bound; the rest go through mpmath
    err = 16 * np.finfo(np.float64).eps * scale
    gap = np.minimum(exact - lower, upper - exact)
    unsure = np.abs(gap) <= err
    count = int(np.count_nonzero(gap[~unsure] < 0))
    for p in points[unsure]:
        lo, ex, hi = scalar_check(float(p))
        count += not lo <= ex <= hi
    return count


def log_bound_violations(ys) -> int:
    """Number of points in ``ys`` where the log(1+y) sandwich fails."""
    y = np.asarray(ys, dtype=np.float64)
    if np.any(np.abs(y) > 0.5):
        raise ValueError("y must lie in [-1/2, 1/2]")
    upper = y - y**2 / 2 + y**3 / 3
    lower = upper - 2 * y**4 / 3
    return _count_violations(lower, np.log1p(y), upper, np.abs(y), y, log_bound_check)


def cotangent_bound_violations(xs) -> int:
    """Number of points in ``xs`` where 1/x - 4x/pi^2 <= cot x <= 1/x fails."""
    x = np.asarray(xs, dtype=np.float64)
    if np.any(x <= 0) or np.any(x > math.pi / 2):
        raise ValueError("x must lie in (0, pi/2]")
    upper = 1 / x
    return _count_violations(upper - 4 * x / math.pi**2, 1 / np.tan(x), upper, upper, x, cotangent_bounds_check)


# Series with closed-form targets.  Summands whose two halves cancel are
# switched to their Taylor form for large k.

TAYLOR_SWITCH = 1000


@dataclass(frozen=True)
class SeriesTarget:
    """sum_{k>=1} term(k) = target, with |tail after K| ~ tail_coeff / K**tail_exponent.

    ``term`` and ``target`` take a precision in bits.  A geometric series sets
    ``tail_ratio`` instead and leaves the power model unused.
    """

    name: str
    term: Callable[[int, int], object]
    target: Callable[[int], object]
    tail_exponent: float
    tail_coeff: float
    tail_ratio: Optional[float] = None

    def tail_model(self, K: int) -> float:
        if self.tail_ratio is not None:
            return self.tail_coeff * self.tail_ratio**K
        return self.tail_coeff / K**self.tail_exponent


def _even_taylor(k: int, coeff) -> float:
    # sum_{s>=1} coeff(s) x^s with x = 1/(2k)^2, summed until terms vanish
    x = 1.0 / (4.0 * k * k)
    total, xs, s = 0.0, x, 1
    while True:
        t = coeff(s) * xs
        total += t
        if abs(t) < 1e-18 * abs(total):
            return total
        s += 1
        xs *= x


def _guard_bits(k: int, prec: int) -> int:
    return prec + 2 * k.bit_length() + 20


def _lb2_term(k: int, prec: int = 53):
    if is_double(prec):
        if k > TAYLOR_SWITCH:
            return _even_taylor(k, lambda s: 1.0 / (2 * (s + 1)))
        return -0.5 - 2.0 * k * k * math.log1p(-1.0 / (4.0 * k * k))
    with mpmath.workprec(_guard_bits(k, prec)):
        return -mpmath.mpf(1) / 2 - 2 * k * k * mpmath.log1p(-mpmath.mpf(1) / (4 * k * k))


def _lb3_term(k: int, prec: int = 53):
    if is_double(prec):
        if k > TAYLOR_SWITCH:
            return -2.0 * _even_taylor(k, lambda m: 1.0 / (2 * m + 1))
        h = 1.0 / (2.0 * k)
        return 2.0 * (1.0 + k * math.log1p(-h) - k * math.log1p(h))
    with mpmath.workprec(_guard_bits(k, prec)):
        h = mpmath.mpf(1) / (2 * k)
        return 2 * (1 + k * mpmath.log1p(-h) - k * mpmath.log1p(h))


def _lb4_term(k: int, prec: int = 53):
    if is_double(prec):
        return math.log1p(-1.0 / (4.0 * k * k))
    with mpmath.workprec(prec + 10):
        return mpmath.log1p(-mpmath.mpf(1) / (4 * k * k))


def _zeta_term(s: int, prec: int = 53):
    with mpmath.workprec(max(prec, 53) + 10):
        value = mpmath.zeta(2 * s) / (mpmath.mpf(4) ** s * (2 * s + 1))
    return float(value) if is_double(prec) else value


def _const(fn):
    def target(prec: int = 53):
        c = _Consts(prec)
        return _run(prec, lambda: fn(c))

    return target


SERIES: dict[str, SeriesTarget] = {
    "lemma-lb2": SeriesTarget(
        "lemma-lb2",
        _lb2_term,
        _const(lambda c: 7 * c.zeta3 / (4 * c.pi**2) + c.one / 4 - c.log(2 * c.one) / 2),
        tail_exponent=1.0,
        tail_coeff=1 / 16,
    ),
    "lemma-lb3": SeriesTarget(
        "lemma-lb3",
        _lb3_term,
        _const(lambda c: -c.one + c.log(2 * c.one)),
        tail_exponent=1.0,
        tail_coeff=1 / 6,
    ),
    "lemma-lb4": SeriesTarget(
        "lemma-lb4",
        _lb4_term,
        _const(lambda c: c.log(2 * c.one) - c.log(c.pi)),
        tail_exponent=1.0,
        tail_coeff=1 / 4,
    ),
    "eq-2s+1": SeriesTarget(
        "eq-2s+1",
        _zeta_term,
        _const(lambda c: c.one / 2 - c.log(2 * c.one) / 2),
        tail_exponent=1.0,
        tail_coeff=1 / 3,
        tail_ratio=1 / 4,
    ),
}


def series_target(name: str) -> SeriesTarget:
    try:
        return SERIES[name]
    except KeyError:
        raise KeyError(f"unknown series {name!r}; known: {sorted(SERIES)}") from None


def _geometric_terms(target: SeriesTarget, K: int, prec: int) -> list:
    # once the tail model drops below the last bit the remaining terms cannot move the sum
    terms = []
    for k in range(1, K + 1):
        t = target.term(k, prec)
        terms.append(t)
        if target.tail_coeff * target.tail_ratio**k < 2.0 ** (-prec - 16) * abs(terms[0]):
            break
    return terms


def series_partial_sum(target: SeriesTarget | str, K: int, prec: int = 53):
    """sum_{k=1}^{K} term(k) with compensated summation at ``prec`` bits."""
    if isinstance(target, str):
        target = series_target(target)
    if K < 1:
        raise ValueError(f"K must be >= 1, got {K}")
    if target.tail_ratio is not None:
        terms = _geometric_terms(target, K, prec)
    else:
        terms = [target.term(k, prec) for k in range(1, K + 1)]
    if is_double(prec):
        return csum(terms, prec)
    with mpmath.workprec(prec + 10):
        total = mpmath.fsum(terms)
    with mpmath.workprec(prec):
        return +total


def series_error(target: SeriesTarget | str, K: int, prec: int = 53):
    """(partial sum, target, |error|) at ``prec`` bits."""
    if isinstance(target, str):
        target = series_target(target)
    s = series_partial_sum(target, K, prec)
    t = target.target(prec)
    return s, t, _run(prec, lambda: abs(s - t))
