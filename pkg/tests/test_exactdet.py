import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydet.bounds import barnes_bounds
from polydet.exactdet import (
    OperatorSpec,
    binomial_matrix,
    binomial_matrix_det,
    factorial_toeplitz_closed_form,
    factorial_toeplitz_det,
    factorial_toeplitz_matrix,
    log_abs_h_alpha,
    log_det_polyharmonic,
    log_det_polyharmonic_via_F,
    log_factorial_ratio,
    navier_log_det,
    vandermonde_h_alpha,
)
from polydet.types import PolyPotential


def mp_logdet(n, T, prec=200):
    """Closed-form product evaluated term by term in mpmath."""
    with mpmath.workprec(prec):
        T = mpmath.mpf(T)
        s = mpmath.fsum(2 * (n - k) * mpmath.log(mpmath.sin(k * mpmath.pi / (2 * n))) for k in range(1, n))
        r = mpmath.fsum(mpmath.loggamma(k + 1) - mpmath.loggamma(n + k + 1) for k in range(n))
        return n * n * mpmath.log(T / 2) + n * mpmath.log(4 * n) - s + r


# --- h_alpha ---------------------------------------------------------------------


def test_h_alpha_small_cases():
    assert log_abs_h_alpha(1) == 0.0
    assert log_abs_h_alpha(2) == pytest.approx(0.5 * math.log(2), rel=1e-15)
    assert vandermonde_h_alpha(1) == 1
    assert vandermonde_h_alpha(2) == pytest.approx(-1 + 1j)


@pytest.mark.parametrize("n", range(1, 17))
def test_h_alpha_against_vandermonde(n):
    direct = abs(vandermonde_h_alpha(n))
    assert abs(math.exp(log_abs_h_alpha(n)) - direct) <= 1e-12 * direct


def test_h_alpha_extended_matches_double():
    assert float(log_abs_h_alpha(500, 128)) == pytest.approx(log_abs_h_alpha(500), rel=1e-14)


# --- factorial ratio ---------------------------------------------------------------


def test_factorial_ratio_small():
    assert log_factorial_ratio(1) == 0.0
    assert log_factorial_ratio(2) == pytest.approx(math.log(1 / 12), rel=1e-15)


def test_factorial_ratio_in_barnes_window():
    lo, hi = barnes_bounds(50)
    assert lo <= log_factorial_ratio(50) <= hi


@pytest.mark.parametrize("n", [3, 40, 777])
def test_factorial_ratio_exact_integers(n):
    exact = Fraction(1)
    for k in range(n):
        exact *= Fraction(math.factorial(k), math.factorial(n + k))
    with mpmath.workprec(200):
        ref = mpmath.log(exact.numerator) - mpmath.log(exact.denominator)
    assert log_factorial_ratio(n) == pytest.approx(float(ref), rel=1e-14)
    with mpmath.workprec(128):
        assert abs(log_factorial_ratio(n, 128) - ref) < mpmath.mpf(2) ** -110 * abs(ref)


# --- closed form ---------------------------------------------------------------------


def test_reference_values():
    assert math.exp(log_det_polyharmonic(1, math.pi).log_modulus) == pytest.approx(2 * math.pi, rel=1e-14)
    assert log_det_polyharmonic(2, 1).log_modulus == pytest.approx(math.log(2 / 3), abs=1e-15)
    assert log_det_polyharmonic(1, 1).log_modulus == pytest.approx(math.log(2), abs=1e-15)


@pytest.mark.parametrize("T", [0.25, 1.0, math.pi, 10.0])
def test_n1_is_two_T(backend, T):
    assert abs(log_det_polyharmonic(1, T).log_modulus - math.log(2 * T)) <= 1e-13


@pytest.mark.parametrize("n,T", [(3, 0.5), (17, 1.0), (64, 2.5), (1000, 1.0)])
def test_against_mpmath_product(backend, n, T):
    ref = float(mp_logdet(n, T))
    assert log_det_polyharmonic(n, T).log_modulus == pytest.approx(ref, rel=1e-13, abs=1e-12)


def test_extended_precision_path():
    got = log_det_polyharmonic(300, 1.5, 160).log_modulus
    ref = mp_logdet(300, 1.5, 240)
    with mpmath.workprec(160):
        assert abs(got - ref) < mpmath.mpf(2) ** -140 * abs(ref)


def test_phase_is_zero_and_breakdown_keys():
    d = log_det_polyharmonic(7, 0.3)
    assert d.phase == 0.0
    assert set(d.breakdown) == {"T-power", "order-power", "h_alpha", "factorial-ratio"}


@pytest.mark.parametrize("n,prec", [(5, 53), (900, 53), (12, 128), (20001, None)])
def test_breakdown_sums_to_log_modulus(n, prec):
    d = log_det_polyharmonic(n, 1.7, prec)
    bits = d.prec
    with mpmath.workprec(bits + 30):
        diff = abs(mpmath.fsum(mpmath.mpf(v) for v in d.breakdown.values()) - mpmath.mpf(d.log_modulus))
        ulp = mpmath.mpf(2) ** (mpmath.floor(mpmath.log(abs(mpmath.mpf(d.log_modulus)), 2)) - bits + 1)
        assert diff <= 4 * ulp


@given(st.integers(min_value=1, max_value=1000), st.floats(min_value=0.05, max_value=20))
@settings(max_examples=60, deadline=None)
def test_two_algebraic_forms_agree(n, T):
    a = log_det_polyharmonic(n, T).log_modulus
    b = log_det_polyharmonic_via_F(n, T)
    assert abs(a - b) <= 1e-12 * max(1.0, abs(a))


def test_rejects_bad_input():
    with pytest.raises(ValueError):
        log_det_polyharmonic(0, 1)
    with pytest.raises(ValueError):
        log_det_polyharmonic(2, -1)


# --- Navier ------------------------------------------------------------------------


def test_navier():
    assert navier_log_det(1, math.pi) == pytest.approx(math.log(2 * math.pi))
    assert navier_log_det(3, 1) == pytest.approx(3 * math.log(2))
    assert navier_log_det(5, 0.5) == pytest.approx(0.0, abs=1e-15)
    assert navier_log_det(1, math.pi) == pytest.approx(log_det_polyharmonic(1, math.pi).log_modulus)


# --- exact identities ------------------------------------------------------------------


def test_binomial_matrix_layout():
    assert binomial_matrix(3) == [[1, 1, 1], [3, 4, 5], [3, 6, 10]]


@pytest.mark.parametrize("n", [1, 5, 30, 64])
def test_binomial_det_is_one(n):
    assert binomial_matrix_det(n) == 1


def test_binomial_range():
    with pytest.raises(ValueError):
        binomial_matrix_det(65)


def test_toeplitz_examples():
    assert factorial_toeplitz_det(1, 1) == 1
    assert factorial_toeplitz_det(2, 1) == Fraction(1, 12)
    assert factorial_toeplitz_matrix(2, 1) == [[Fraction(1, 2), Fraction(1, 6)], [1, Fraction(1, 2)]]
    expected = Fraction(3, 2) ** 36
    for j in range(6):
        expected *= Fraction(math.factorial(j), math.factorial(6 + j))
    assert factorial_toeplitz_det(6, Fraction(3, 2)) == expected


@pytest.mark.parametrize("T", [Fraction(1, 2), 1, Fraction(3, 2), Fraction(355, 113)])
@pytest.mark.parametrize("n", [3, 11, 20])
def test_toeplitz_identity(n, T):
    assert factorial_toeplitz_det(n, T) == factorial_toeplitz_closed_form(n, T)


def test_toeplitz_rejects_float_and_range():
    with pytest.raises(TypeError):
        factorial_toeplitz_det(3, 0.5)
    with pytest.raises(ValueError):
        factorial_toeplitz_det(21, 1)


def test_operator_spec_validation():
    OperatorSpec(3, 1.0, PolyPotential({3: (1,)}))
    with pytest.raises(ValueError):
        OperatorSpec(2, 1.0, PolyPotential({3: (1,)}))
    with pytest.raises(ValueError):
        OperatorSpec(0, 1.0)
    with pytest.raises(ValueError):
        OperatorSpec(1, 0.0)


def test_independent_of_global_mpmath_precision():
    # every extended-precision step runs in its own context
    old = mpmath.mp.prec
    try:
        results = []
        for global_prec in (53, 300):
            mpmath.mp.prec = global_prec
            results.append(log_det_polyharmonic(8, 1, 256).log_modulus)
    finally:
        mpmath.mp.prec = old
    with mpmath.workprec(256):
        assert abs(results[0] - results[1]) < mpmath.mpf(2) ** -240
