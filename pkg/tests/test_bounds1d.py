import math

import numpy as np
import pytest

from weylcert import bounds1d as B
from weylcert.constants import c3
from weylcert.oracles import interval_riesz_mean
from weylcert.spectra import interval, riesz_mean_exact

PI = math.pi


def exact(length, lam, p):
    return riesz_mean_exact(interval(length), lam, p)


def test_riesz1_examples():
    assert B.riesz1_upper(1, PI ** 2 / 2).value == 0
    assert B.riesz1_upper(1, 2 * PI ** 2).value >= PI ** 2
    assert B.riesz1_upper(2, 100).value >= exact(2, 100, 1) > 0


def test_riesz_half_examples():
    assert B.riesz_half_upper(1, 2 * PI ** 2).value >= PI
    mid, env = B.riesz_half_upper(1, 1000).value, B.riesz_half_upper_envelope(1, 1000).value
    assert env >= mid >= exact(1, 1000, 0.5)
    edge = B.riesz_half_upper(1, PI ** 2 * 1.0001)
    assert math.isfinite(edge.value) and edge.value >= exact(1, PI ** 2 * 1.0001, 0.5)
    assert exact(1, PI ** 2 * 1.0001, 0.5) == pytest.approx(PI * math.sqrt(1e-4))
    bad = B.riesz_half_upper(1, PI ** 2)
    assert not bad.valid and math.isnan(bad.value)


def test_riesz_half_lower_examples():
    assert not B.riesz_half_lower_interval(1, PI ** 2).valid
    assert B.riesz_half_lower_interval(1, PI ** 2 * (1 + 1e-12)).value == pytest.approx(0, abs=1e-9)
    v = B.riesz_half_lower_interval(1, 100 * PI ** 2).value
    assert v == pytest.approx(25 * PI ** 2 * 0.81, rel=1e-12)
    assert v <= exact(1, 100 * PI ** 2, 0.5)
    assert B.riesz_half_lower_interval(3, 50).value <= exact(3, 50, 0.5)


def test_riesz_p_examples():
    for p in (1.5, 2, 2.5):
        assert B.riesz_p_upper(1, 200, p).value >= exact(1, 200, p) > 0
    # the C3 branch enters linearly: compare two p values around 2
    assert c3(2) == 1 / 9 and c3(2.5) == pytest.approx((1 / 8) * (247 / 256) ** 1.5)
    with pytest.raises(ValueError):
        B.riesz_p_upper(1, 200, 1.0)
    assert not B.riesz_p_upper(1, 5, 1.5).valid


def test_input_errors():
    with pytest.raises(ValueError):
        B.riesz1_upper(0, 1)
    with pytest.raises(ValueError):
        B.riesz1_upper(1, -1)


def test_floor_candidates_near_integer():
    assert B.floor_candidates(3.0) == (2, 3)
    assert B.floor_candidates(3.5) == (3,)
    assert B.floor_candidates(3 - 1e-14) == (2, 3)


def test_oracle_interval_riesz_matches():
    for L, lam in [(1, 50), (2.5, 700), (0.7, 300)]:
        for p in (0.5, 1, 2):
            assert interval_riesz_mean(L, lam, p) == pytest.approx(exact(L, lam, p), rel=1e-10)


def test_sandwich_grid(rng):
    for L in rng.uniform(0.1, 10, 20):
        lo = PI ** 2 / L ** 2
        for lam in lo * np.geomspace(1.0001, 1e4, 25):
            e_half = exact(L, lam, 0.5)
            assert B.riesz_half_lower_interval(L, lam).value <= e_half * (1 + 1e-12) + 1e-12
            mid = B.riesz_half_upper(L, lam).value
            assert e_half <= mid * (1 + 1e-12)
            assert mid <= B.riesz_half_upper_envelope(L, lam).value * (1 + 1e-12)
            assert exact(L, lam, 1) <= B.riesz1_upper(L, lam).value * (1 + 1e-12)
            for p in (1.25, 1.5, 2, 2.5, 3):
                assert exact(L, lam, p) <= B.riesz_p_upper(L, lam, p).value * (1 + 1e-12)


def test_continuity_between_floor_jumps():
    L = 1.3
    lams = np.linspace(PI ** 2 / L ** 2 * 1.01, 400, 4000)
    vals = np.array([B.riesz_half_lower_interval(L, x).value for x in lams])
    assert np.max(np.abs(np.diff(vals))) < 0.1
