"""Determinants of perturbed polyharmonic operators through the BFK formula.

H_n = (-1)^n d^{2n} + sum_{j<=m} q_j d^j on (0, T), Dirichlet conditions,
polynomial q_j, m <= n.  The Cauchy solutions y_l (y_l^{(k)}(0) = delta_kl)
solve y^{(2n)} = (-1)^{n+1} sum_j q_j y^{(j)}, i.e. the fixed point of

    y = x^l/l! + L y,    L = I^{2n} o (-1)^{n+1} sum_j q_j D^j,

with I the integral from 0.  Polynomials are held in the factorial basis
y = sum_d a_d x^d/d!, in which I and D are index shifts and multiplication by
x^e is the integer factor (d+1)...(d+e).  Every Picard step is therefore
exact and the only error is truncation of the Neumann series sum_p L^p g,
which is bounded by the same series for the majorant operator with |q_j|
replaced by sum_d |c_{j,d}| T^d.

det H_n = K_theta * det M with M_{kl} = y_l^{(k)}(T), 0 <= k < n <= l < 2n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import mpmath

from .exactdet import _check_n, log_abs_h_alpha, log_det_polyharmonic
from .linalg import SingularMatrixError, inverse, log_det_lu
from .precision import to_real
from .types import LogDet, PolyPotential, wrap_phase

ITERATE_DEGREE_CAP = 4096
MAX_N = 32
DEFAULT_TOL = 1e-30
FLOAT_INPUT_EPS = 2.0**-52


class DegreeCapError(ValueError):
    """The Picard iterate would exceed the configured degree cap."""


class DeterminantZero(ArithmeticError):
    """The Cauchy block is singular to within its error budget: 0 is an eigenvalue."""

    def __init__(self, n: int, relative_uncertainty):
        super().__init__(
            f"det(BY(T) - C) is indistinguishable from zero for n={n} "
            f"(first-order relative uncertainty {mpmath.nstr(relative_uncertainty, 3)})"
        )
        self.n = n
        self.relative_uncertainty = relative_uncertainty


def default_prec(tol: float) -> int:
    """Working bits for a Picard tolerance: the tolerance plus 64 guard bits, at least 128."""
    return max(128, int(math.ceil(-math.log2(tol))) + 64)


def _validate(n: int, potential: PolyPotential, T, tol) -> None:
    _check_n(n)
    if n > MAX_N:
        raise ValueError(f"n={n} outside supported range 1..{MAX_N}")
    if not T > 0:
        raise ValueError(f"T must be positive, got {T}")
    if not tol > 0:
        raise ValueError(f"tol must be positive, got {tol}")
    if potential.max_order > n:
        raise ValueError(
            f"perturbation order {potential.max_order} exceeds n={n}; only m <= n is covered"
        )
    if n == 1 and potential.order(1):
        # order 2n-1 = 1 would bring in the exp(i/2 int a_{2n-1}) trace factor
        raise ValueError("a first-order term at n=1 is of order 2n-1; not supported")


class _Operator:
    """L and its majorant at a fixed precision, in the factorial basis."""

    def __init__(self, n: int, potential: PolyPotential, T, prec: int):
        self.n = n
        self.prec = prec
        self.sign = 1 if n % 2 == 1 else -1  # (-1)^{n+1}
        with mpmath.workprec(prec):
            self.terms = [
                (j, [mpmath.mpmathify(c) for c in potential.order(j)])
                for j in sorted(potential.coefficients)
            ]
            self.T = to_real(T, prec) if not isinstance(T, mpmath.mpf) else T
            self.majorant = [
                (j, mpmath.fsum(abs(c) * self.T**d for d, c in enumerate(cs)))
                for j, cs in self.terms
            ]
        self.shift = max((2 * n - j + len(cs) - 1 for j, cs in self.terms), default=0)

    def apply(self, a: list) -> list:
        """Coefficients of L y for y = sum_d a[d] x^d/d!."""
        n2 = 2 * self.n
        out = [0] * (len(a) + self.shift)
        for j, cs in self.terms:
            for d in range(j, len(a)):
                ad = a[d]
                if not ad:
                    continue
                base = d - j  # D^j shifts the index down by j
                for e, c in enumerate(cs):
                    if c:
                        # x^e * x^base/base! = perm(base+e, e) x^{base+e}/(base+e)!
                        out[base + e + n2] += c * math.perm(base + e, e) * ad
        while out and not out[-1]:
            out.pop()
        if self.sign < 0:
            out = [-v for v in out]
        return out

    def majorant_values(self, ell: int, ks: Sequence[int], p_max: int):
        """t[p][k] = D^k (Lhat^p g)(T) for g = x^ell/ell!, p = 0..p_max."""
        n2 = 2 * self.n
        powers = {ell: mpmath.mpf(1)}
        rows = []
        for p in range(p_max + 1):
            rows.append([
                mpmath.fsum(c * self.T ** (d - k) / mpmath.factorial(d - k) for d, c in powers.items())
                for k in ks
            ])
            nxt: dict[int, object] = {}
            for d, c in powers.items():
                for j, Q in self.majorant:
                    if Q:
                        nxt[d + n2 - j] = nxt.get(d + n2 - j, 0) + c * Q
            powers = nxt
            if not powers:
                break
        return rows


def _tails(rows: list, k_index: int) -> list:
    """tail[M] = sum_{p>M} rows[p][k]; beyond the last row a geometric bound is added."""
    vals = [r[k_index] for r in rows]
    P = len(vals) - 1
    extra = mpmath.mpf(0)
    if P >= 1 and vals[P]:
        ratio = vals[P] / vals[P - 1] if vals[P - 1] else mpmath.mpf(0)
        if ratio >= 1:
            raise AssertionError("majorant series not yet contracting; increase p_max")
        extra = vals[P] * ratio / (1 - ratio)
    tails = [mpmath.mpf(0)] * (P + 1)
    running = extra
    for M in range(P, -1, -1):
        tails[M] = running
        running += vals[M]
    return tails


def _majorant_rows(op: _Operator, ell: int, ks: Sequence[int], floor) -> list:
    """Majorant rows until the terms fall below ``floor`` and contract by at least 2."""
    p_max = 4
    while True:
        rows = op.majorant_values(ell, ks, p_max)
        if len(rows) <= p_max:  # zero potential: series terminates
            return rows
        last, prev = rows[-1], rows[-2]
        if all(l <= floor for l in last) and all(
            l <= pr / 2 for l, pr in zip(last, prev) if pr
        ):
            return rows
        p_max *= 2


@dataclass
class PicardState:
    """Truncated Neumann series for one Cauchy solution.

    ``coeffs[d]`` multiplies x^d/d!.  ``tail_bound`` bounds |y - y_m| at x = T
    (derivative order 0) and ``deviation_bound`` bounds |y_m - x^l/l!| there.
    """

    n: int
    ell: int
    T: object
    coeffs: list
    iterations: int
    tail_bound: object
    deviation_bound: object
    prec: int

    def __call__(self, x, k: int = 0):
        """k-th derivative of the iterate at x."""
        with mpmath.workprec(self.prec):
            x = mpmath.mpmathify(x)
            return mpmath.fsum(
                a * x ** (d - k) / mpmath.factorial(d - k)
                for d, a in enumerate(self.coeffs)
                if d >= k and a
            )

    def monomial_coeffs(self) -> list:
        """Coefficients in the plain monomial basis (ascending degree)."""
        with mpmath.workprec(self.prec):
            return [a / mpmath.factorial(d) for d, a in enumerate(self.coeffs)]


def _neumann(op: _Operator, ell: int, iterations: int, degree_cap: int) -> list:
    g = [0] * ell + [mpmath.mpf(1)]
    total = list(g)
    term = g
    for _ in range(iterations):
        term = op.apply(term)
        if not term:
            break
        if len(term) - 1 > degree_cap:
            raise DegreeCapError(
                f"Picard iterate degree {len(term) - 1} exceeds cap {degree_cap}; "
                "pass a larger degree_cap"
            )
        if len(term) > len(total):
            total.extend([0] * (len(term) - len(total)))
        for d, v in enumerate(term):
            if v:
                total[d] += v
    return total


def _first_below(tails: list, limit) -> int:
    for M, t in enumerate(tails):
        if t < limit:
            return M
    raise AssertionError("majorant tail did not reach tolerance")  # rows end below floor


def picard_solve(
    n: int,
    potential: PolyPotential,
    T,
    ell: int,
    tol: float = DEFAULT_TOL,
    prec: Optional[int] = None,
    degree_cap: int = ITERATE_DEGREE_CAP,
) -> PicardState:
    """Cauchy solution y_ell with y^{(k)}(0) = delta_{k,ell}, as a polynomial.

    The iteration count is the smallest m whose majorant tail at x = T is
    below ``tol * T^ell/ell!``.
    """
    _validate(n, potential, T, tol)
    if not 0 <= ell < 2 * n:
        raise ValueError(f"ell must lie in [0, {2 * n - 1}], got {ell}")
    prec = prec or default_prec(tol)
    with mpmath.workprec(prec):
        op = _Operator(n, potential, T, prec)
        scale = op.T**ell / mpmath.factorial(ell)
        limit = tol * scale
        rows = _majorant_rows(op, ell, [0], limit * mpmath.mpf(2) ** -20)
        tails = _tails(rows, 0)
        m = _first_below(tails, limit)
        coeffs = _neumann(op, ell, m, degree_cap)
        return PicardState(n, ell, op.T, coeffs, m, tails[m], tails[0], prec)


@dataclass
class CauchyBlock:
    """Scaled n x n block S with M_{kl} = S_{kl} k! T^{l-k} / l!.

    At q = 0, S is the binomial matrix C(l, k).  ``scaling_log`` is
    n^2 log T + sum_j log(j!/(n+j)!), so log det M = scaling_log + log det S.
    ``tails`` bound |S - S_exact| entrywise.
    """

    n: int
    entries: list
    scaling_log: object
    tails: list
    iterations: list = field(default_factory=list)
    prec: int = 128


def cauchy_block(
    n: int,
    potential: PolyPotential,
    T,
    tol: float = DEFAULT_TOL,
    prec: Optional[int] = None,
    degree_cap: int = ITERATE_DEGREE_CAP,
) -> CauchyBlock:
    """Scaled Cauchy block for rows k = 0..n-1 and columns l = n..2n-1.

    Each column uses the smallest iteration count whose majorant tail is
    below ``tol`` times the free entry T^{l-k}/(l-k)! for every row.
    """
    _validate(n, potential, T, tol)
    prec = prec or default_prec(tol)
    ks = list(range(n))
    with mpmath.workprec(prec):
        op = _Operator(n, potential, T, prec)
        Tm = op.T
        entries = [[None] * n for _ in range(n)]
        tails = [[None] * n for _ in range(n)]
        iterations = []
        for col, ell in enumerate(range(n, 2 * n)):
            free = [Tm ** (ell - k) / mpmath.factorial(ell - k) for k in ks]
            floor = tol * min(free) * mpmath.mpf(2) ** -20
            rows = _majorant_rows(op, ell, ks, floor)
            per_k = [_tails(rows, i) for i in range(n)]
            m = max(_first_below(per_k[i], tol * free[i]) for i in range(n))
            iterations.append(m)
            coeffs = _neumann(op, ell, m, degree_cap)
            for k in ks:
                val = mpmath.fsum(
                    a * Tm ** (d - k) / mpmath.factorial(d - k)
                    for d, a in enumerate(coeffs)
                    if d >= k and a
                )
                factor = mpmath.factorial(ell) / (mpmath.factorial(k) * Tm ** (ell - k))
                entries[k][col] = val * factor
                tails[k][col] = per_k[k][m] * factor
        scaling = n * n * mpmath.log(Tm) + mpmath.fsum(
            mpmath.loggamma(j + 1) - mpmath.loggamma(n + j + 1) for j in range(n)
        )
        return CauchyBlock(n, entries, +scaling, tails, iterations, prec)


def k_theta(n: int, prec: Optional[int] = None):
    """(log|K_theta|, phase) with |K_theta| = (2n)^n |h_alpha|^{-2}; the phase is 0."""
    _check_n(n)
    prec = prec or 53
    if prec <= 53:
        return n * math.log(2 * n) - 2 * log_abs_h_alpha(n, prec), 0.0
    with mpmath.workprec(prec):
        return +(n * mpmath.log(2 * n) - 2 * log_abs_h_alpha(n, prec)), 0.0


def _input_eps(potential: PolyPotential) -> float:
    # coefficients given as Python floats carry one rounding of their intended value
    exact = (int, mpmath.mpf, mpmath.mpc)
    loose = any(not isinstance(c, exact) for cs in potential.coefficients.values() for c in cs)
    return FLOAT_INPUT_EPS if loose else 0.0


def det_perturbed(
    n: int,
    potential: PolyPotential,
    T,
    tol: float = DEFAULT_TOL,
    prec: Optional[int] = None,
    degree_cap: int = ITERATE_DEGREE_CAP,
) -> LogDet:
    """log det H_n = log K_theta + scaling_log + log det S, with phase.

    ``truncation_bound`` is the first-order effect of the Picard tails on
    log|det|, sum_{ij} |S^{-1}_{ji}| tail_{ij}.  The determinant is reported
    as zero (:class:`DeterminantZero`) when the same first-order estimate,
    widened by input rounding and working precision, reaches 1.
    """
    _validate(n, potential, T, tol)
    prec = prec or default_prec(tol)
    block = cauchy_block(n, potential, T, tol, prec, degree_cap)
    log_k, phase_k = k_theta(n, prec)
    eps_in = _input_eps(potential)
    with mpmath.workprec(prec):
        S = block.entries
        try:
            log_s, phase_s = log_det_lu(S, prec)
            inv = inverse(S, prec)
        except (SingularMatrixError, ZeroDivisionError):
            raise DeterminantZero(n, mpmath.inf) from None
        ulp = mpmath.mpf(2) ** (-prec + 8)
        trunc = mpmath.mpf(0)
        uncertainty = mpmath.mpf(0)
        for i in range(n):
            for j in range(n):
                w = abs(inv[j, i])
                deviation = abs(S[i][j] - math.comb(n + j, i))
                trunc += w * block.tails[i][j]
                uncertainty += w * (block.tails[i][j] + eps_in * deviation + ulp * abs(S[i][j]))
        if uncertainty >= 1:
            raise DeterminantZero(n, uncertainty)
        breakdown = {"k_theta": log_k, "scaling": block.scaling_log, "block": log_s}
        total = mpmath.fsum(breakdown.values())
    return LogDet(total, wrap_phase(phase_k + phase_s), breakdown, float(trunc), prec)


def perturbation_decay(
    n_list: Iterable[int],
    potential: PolyPotential,
    T,
    tol: float = 1e-60,
    prec: int = 256,
) -> list[tuple[int, object]]:
    """[(n, r_n)] with r_n = |log det H_n - log det P_n|, both at ``prec`` bits."""
    out = []
    for n in n_list:
        h = det_perturbed(n, potential, T, tol, prec)
        p = log_det_polyharmonic(n, T, prec)
        with mpmath.workprec(prec):
            out.append((n, abs(h.log_modulus - p.log_modulus)))
    return out
