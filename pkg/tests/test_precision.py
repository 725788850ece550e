import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydet import precision


def test_policy_switches_above_ten_thousand(monkeypatch):
    monkeypatch.delenv(precision.PRECISION_ENV, raising=False)
    assert precision.resolve_prec(10_000) == 53
    assert precision.resolve_prec(10_001) == 128
    assert precision.resolve_prec(5, 200) == 200


def test_env_override(monkeypatch):
    monkeypatch.setenv(precision.PRECISION_ENV, "192")
    assert precision.resolve_prec(10**5) == 192
    monkeypatch.setenv(precision.PRECISION_ENV, "20")
    with pytest.raises(ValueError):
        precision.resolve_prec(10**5)


def test_rejects_sub_double():
    with pytest.raises(ValueError):
        precision.resolve_prec(3, 24)


def test_to_real_fraction_is_exact_at_high_precision():
    x = precision.to_real(Fraction(1, 3), 200)
    with mpmath.workprec(200):
        assert x == mpmath.mpf(1) / 3


@given(st.lists(st.floats(min_value=-1e12, max_value=1e12), max_size=60))
def test_neumaier_matches_fsum(values):
    assert abs(precision.neumaier_sum(values) - math.fsum(values)) <= 1e-15 * sum(map(abs, values)) + 1e-300


def test_neumaier_recovers_cancelled_terms():
    assert precision.neumaier_sum([1.0, 1e100, 1.0, -1e100]) == 2.0


def test_csum_extended():
    vals = [mpmath.mpf(1), mpmath.mpf(2) ** -150, -mpmath.mpf(1)]
    with mpmath.workprec(200):
        assert precision.csum(vals, 200) == mpmath.mpf(2) ** -150
