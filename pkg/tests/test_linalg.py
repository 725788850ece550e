import itertools
import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from polydet.linalg import SingularMatrixError, bareiss_det, log_det_lu

square = st.integers(min_value=1, max_value=6).flatmap(
    lambda n: st.lists(
        st.lists(st.integers(min_value=-9, max_value=9), min_size=n, max_size=n), min_size=n, max_size=n
    )
)


def leibniz(m):
    n = len(m)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(perm[i] > perm[j] for i in range(n) for j in range(i + 1, n))
        total += (-1) ** inversions * math.prod(m[i][perm[i]] for i in range(n))
    return total


@given(square)
@settings(max_examples=150, deadline=None)
def test_bareiss_matches_leibniz(m):
    assert bareiss_det(m) == leibniz(m)


def test_bareiss_fraction():
    m = [[Fraction(1, 2), Fraction(1, 6)], [Fraction(1), Fraction(1, 2)]]
    assert bareiss_det(m) == Fraction(1, 12)


def test_bareiss_needs_pivot_swap():
    assert bareiss_det([[0, 1], [1, 0]]) == -1
    assert bareiss_det([[0, 0], [1, 2]]) == 0


@given(square)
@settings(max_examples=150, deadline=None)
def test_log_det_lu_matches_exact(m):
    exact = bareiss_det(m)
    if exact == 0:
        return
    log_mod, phase = log_det_lu(m, 128)
    assert float(log_mod) == pytest.approx(math.log(abs(exact)), abs=1e-12)
    assert phase == (0.0 if exact > 0 else math.pi)


def test_log_det_lu_complex_phase():
    log_mod, phase = log_det_lu([[1j, 0], [0, 2]], 128)
    assert float(log_mod) == pytest.approx(math.log(2))
    assert phase == pytest.approx(math.pi / 2)


def test_log_det_lu_singular():
    with pytest.raises(SingularMatrixError):
        log_det_lu([[1, 2], [2, 4]], 128)
