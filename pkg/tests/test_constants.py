import mpmath
import pytest

from polydet.constants import constant

REFERENCE = {
    "zeta3": lambda: mpmath.zeta(3),
    "gamma": lambda: +mpmath.euler,
    "glaisher": lambda: +mpmath.glaisher,
    "pi": lambda: +mpmath.pi,
    "log2": lambda: mpmath.log(2),
}


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_literal_matches_mpmath(name):
    with mpmath.workprec(240):
        assert abs(constant(name, 240) - REFERENCE[name]()) < mpmath.mpf(10) ** -62


@pytest.mark.parametrize("name", sorted(REFERENCE))
def test_double_is_correctly_rounded(name):
    with mpmath.workprec(240):
        assert constant(name) == float(REFERENCE[name]())


def test_unknown_name():
    with pytest.raises(KeyError):
        constant("e")


@pytest.mark.parametrize("name", ["zeta3", "gamma", "glaisher", "pi", "log2"])
def test_wide_requests_exceed_literal_accuracy(name):
    with mpmath.workprec(400):
        ref = REFERENCE[name]()
        assert abs(constant(name, 300) - ref) < mpmath.mpf(2) ** -295
