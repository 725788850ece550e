import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from polydet.types import LogDet, PolyPotential, parse_complex, phase_of, wrap_phase


def test_potential_trims_and_reports_order():
    q = PolyPotential({0: (1, 0, 0), 2: (0,)})
    assert q.coefficients == {0: (1,)}
    assert q.max_order == 0
    assert PolyPotential.zero().is_zero


def test_potential_degree_cap():
    with pytest.raises(ValueError, match="cap"):
        PolyPotential({0: tuple(range(1, 40))})
    assert PolyPotential({0: tuple(range(1, 40))}, degree_cap=64).order(0)[-1] == 39


def test_potential_rejects_negative_order():
    with pytest.raises(ValueError):
        PolyPotential({-1: (1,)})


def test_potential_evaluation_and_sup():
    q = PolyPotential({0: (1, -2, 3)})
    assert q(2.0) == 1 - 4 + 12
    assert q.sup_bound(0, 2.0) == 1 + 4 + 12
    assert not PolyPotential({0: (1j,)}).is_real


@pytest.mark.parametrize(
    "text,value",
    [("1.5", 1.5), ("-2", -2.0), ("i", 1j), ("-i", -1j), ("3-0.5i", 3 - 0.5j), ("0+1i", 1j), ("2+0i", 2.0)],
)
def test_parse_complex(text, value):
    assert parse_complex(text) == value


@given(st.floats(min_value=-1e3, max_value=1e3))
def test_wrap_phase_range(x):
    w = wrap_phase(x)
    assert -math.pi < w <= math.pi
    assert math.isclose(math.cos(w), math.cos(x), abs_tol=1e-9)


def test_phase_of():
    assert phase_of(-2.0) == math.pi
    assert phase_of(1j) == pytest.approx(math.pi / 2)
    assert phase_of(mpmath.mpc(0, -1)) == pytest.approx(-math.pi / 2)


def test_logdet_value_and_components():
    d = LogDet(math.log(6.0), math.pi, {"a": math.log(2.0), "b": math.log(3.0)})
    assert complex(d.value()) == pytest.approx(-6.0)
    assert float(d.components_sum()) == pytest.approx(math.log(6.0))
