import math
from fractions import Fraction

import mpmath
import pytest

from weylcert import constants as C


@pytest.mark.parametrize("n, expected", [(1, 2.0), (2, math.pi), (3, 4 * math.pi / 3)])
def test_unit_ball_volume(n, expected):
    assert C.unit_ball_volume(n) == pytest.approx(expected, rel=1e-15)


@pytest.mark.parametrize("n", [0, -1, 1.5])
def test_dimension_errors(n):
    with pytest.raises(ValueError):
        C.unit_ball_volume(n)


@pytest.mark.parametrize("fn, arg, expected", [
    (C.c1, 1, 2 / 3),
    (C.c1, 2, 3 * math.pi / 16),
    (C.c1, 3, 16 / 27),
    (C.c2, 1, 2 * math.sqrt(2) * math.pi),
    (C.c2, 2, 9 * math.sqrt(3)),
    (C.c3, 1, 1 / 8),
    (C.c3, 1.5, 1 / 9),
    (C.c3, 2, 1 / 9),
    (C.c3, 3, (1 / 8) * (247 / 256) ** 2),
])
def test_closed_forms(fn, arg, expected):
    assert fn(arg) == pytest.approx(expected, rel=1e-12)


def test_exact_forms():
    assert C.c1_exact(3).coeff == Fraction(16, 27) and C.c1_exact(3).pi_pow == 0
    assert str(C.c2_exact(2)) == "9*sqrt(3)"
    assert str(C.c1_exact(2)) == "3/16*pi"


def test_c2_n5_against_mpmath():
    with mpmath.workdps(40):
        b = mpmath.beta(1.5, 2.5) / mpmath.beta(1.5, 2)
        ref = (16 * mpmath.mpf(6) ** 1.5 / 3) * b * (mpmath.mpf(256) / 247) ** 1.5
    assert C.c2(5) == pytest.approx(float(ref), rel=1e-12)


@pytest.mark.parametrize("n", range(1, 13))
def test_range_sanity(n):
    assert 0 < C.c1(n) < 1
    assert C.c2(n) >= 2 * math.sqrt(2) * math.pi * (1 - 1e-15)


@pytest.mark.parametrize("n", range(4, 13))
def test_c2_c1_identity(n):
    assert C.c2(n) == pytest.approx((n + 1) ** 1.5 * math.pi / C.c1(n), rel=1e-12)


@pytest.mark.parametrize("a", [0.5, 1, 1.5, 2, 2.5, 3.5, 5, 6.5])
@pytest.mark.parametrize("b", [0.5, 2, 2.5, 4])
def test_beta_half_integers_against_lgamma(a, b):
    ref = math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))
    assert C.beta(a, b) == pytest.approx(ref, rel=1e-12)
    assert C.beta(a, b) == pytest.approx(C.gamma(a) * C.gamma(b) / C.gamma(a + b), rel=1e-12)


def test_c3_errors():
    with pytest.raises(ValueError):
        C.c3(0.5)


def test_dim_constants_record():
    d = C.dim_constants(2).as_dict()
    assert set(d) == {"n", "omega", "c1", "c2", "c3_half_n"}
    assert d["c3_half_n"] == C.c3(1)
