"""Data types shared across modules."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import mpmath

DEFAULT_DEGREE_CAP = 32


@dataclass(frozen=True)
class PolyPotential:
    """Lower-order coefficients q_j(x) = sum_d c[j][d] x^d of sum_j q_j d^j.

    ``coefficients`` maps derivative order j to monomial coefficients
    (ascending degree).  Entries may be real or complex; strings of the form
    ``"a+bi"`` are accepted by :meth:`parse`.
    """

    coefficients: Mapping[int, tuple] = field(default_factory=dict)
    degree_cap: int = DEFAULT_DEGREE_CAP

    def __post_init__(self):
        cleaned = {}
        for order, coeffs in sorted(self.coefficients.items()):
            if order < 0:
                raise ValueError(f"derivative order must be >= 0, got {order}")
            coeffs = tuple(coeffs)
            while coeffs and coeffs[-1] == 0:
                coeffs = coeffs[:-1]
            if len(coeffs) - 1 > self.degree_cap:
                raise ValueError(
                    f"q_{order} has degree {len(coeffs) - 1} above the cap {self.degree_cap}; "
                    "raise degree_cap to allow it"
                )
            if coeffs:
                cleaned[order] = coeffs
        object.__setattr__(self, "coefficients", cleaned)

    @classmethod
    def zero(cls) -> "PolyPotential":
        return cls({})

    @classmethod
    def constant(cls, c, order: int = 0) -> "PolyPotential":
        return cls({order: (c,)})

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, order: int = 0) -> "PolyPotential":
        return cls({order: tuple(coeffs)})

    @property
    def max_order(self) -> int:
        """Highest derivative order with a nonzero coefficient (0 if none)."""
        return max(self.coefficients, default=0)

    @property
    def is_zero(self) -> bool:
        return not self.coefficients

    @property
    def is_real(self) -> bool:
        return all(not isinstance(c, complex) and not isinstance(c, mpmath.mpc)
                   for cs in self.coefficients.values() for c in cs)

    def order(self, j: int) -> tuple:
        return self.coefficients.get(j, ())

    def sup_bound(self, j: int, T) -> float:
        """sum_d |c_d| T^d, an upper bound for max |q_j| on [0, T]."""
        return sum(abs(c) * T ** d for d, c in enumerate(self.order(j)))

    def __call__(self, x, j: int = 0):
        acc = 0
        for c in reversed(self.order(j)):
            acc = acc * x + c
        return acc


def wrap_phase(phase: float) -> float:
    """Reduce an angle to (-pi, pi]."""
    wrapped = math.remainder(float(phase), 2 * math.pi)
    if wrapped <= -math.pi:
        wrapped += 2 * math.pi
    return wrapped


@dataclass(frozen=True)
class LogDet:
    """log|det| plus phase, with the additive pieces that produced it."""

    log_modulus: object
    phase: float = 0.0
    breakdown: Mapping[str, object] = field(default_factory=dict)
    truncation_bound: float = 0.0
    prec: int = 53

    def value(self):
        """The determinant itself as an mpmath complex (never overflows)."""
        with mpmath.workprec(self.prec):
            return mpmath.exp(mpmath.mpf(self.log_modulus)) * mpmath.expjpi(self.phase / math.pi)

    def components_sum(self):
        if not self.breakdown:
            return self.log_modulus
        with mpmath.workprec(self.prec):
            return mpmath.fsum(self.breakdown.values())


def parse_complex(text: str) -> complex | float:
    """Parse ``"1.5"``, ``"-2"``, ``"i"``, ``"3-0.5i"`` into float or complex."""
    s = text.strip().replace(" ", "").replace("I", "i")
    if "i" not in s and "j" not in s:
        return float(s)
    s = s.replace("i", "j")
    if s in ("j", "+j", "-j"):
        s = s.replace("j", "1j")
    elif s.endswith("j") and s[-2:-1] in ("+", "-"):
        s = s[:-1] + "1j"
    value = complex(s)
    return value if value.imag != 0 else value.real


def phase_of(z) -> float:
    if isinstance(z, mpmath.mpc):
        return float(mpmath.arg(z))
    if isinstance(z, complex):
        return cmath.phase(z)
    return 0.0 if z >= 0 else math.pi
