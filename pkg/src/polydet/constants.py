"""Mathematical constants stored as decimal literals.

The digits are fixed inputs, not computed at runtime; ``tests/test_constants.py``
checks each literal against mpmath at 200 bits.  Sources: DLMF 5.2.3 (Euler's
gamma), DLMF 25.6 (Apery's constant), DLMF 5.17.6 (Glaisher-Kinkelin), OEIS
A000796 (pi), A002162 (log 2).  The literals carry about 210 bits; wider
requests are computed by mpmath instead.
"""

from __future__ import annotations

import mpmath

ZETA3 = "1.2020569031595942853997381615114499907649862923404988817922715553"
EULER_GAMMA = "0.57721566490153286060651209008240243104215933593992359880576723"
GLAISHER_A = "1.2824271291006226368753425688697917277676889273250011920637400217"
PI = "3.1415926535897932384626433832795028841971693993751058209749445923"
LOG2 = "0.69314718055994530941723212145817656807550013436025525412068000949"

_LITERALS = {
    "zeta3": ZETA3,
    "gamma": EULER_GAMMA,
    "glaisher": GLAISHER_A,
    "pi": PI,
    "log2": LOG2,
}

LITERAL_BITS = 200

_COMPUTED = {
    "zeta3": lambda: mpmath.zeta(3),
    "gamma": lambda: +mpmath.euler,
    "glaisher": lambda: +mpmath.glaisher,
    "pi": lambda: +mpmath.pi,
    "log2": lambda: mpmath.log(2),
}


def constant(name: str, prec: int = 53):
    """Return a named constant as a float (``prec == 53``) or an mpf at ``prec`` bits."""
    text = _LITERALS[name]
    if prec <= 53:
        return float(text)
    with mpmath.workprec(prec):
        if prec > LITERAL_BITS:
            return _COMPUTED[name]()
        return +mpmath.mpf(text)
