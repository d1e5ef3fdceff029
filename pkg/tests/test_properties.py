import math
from fractions import Fraction as F

from hypothesis import assume, given
from hypothesis import strategies as st

from weylcert import admissible as A
from weylcert import bounds1d as B1
from weylcert import geometry as G
from weylcert.certify import lambda_epsilon
from weylcert.oracles import naive_count
from weylcert.spectra import Box, count_exact, count_fast_2d, count_t, riesz_mean_exact, interval

side = st.integers(5, 48).map(lambda k: F(k, 16))
tval = st.fractions(min_value=0, max_value=300, max_denominator=64)


def boxes(n_min=2, n_max=4):
    return st.integers(n_min, n_max).flatmap(lambda n: st.tuples(*[side] * n).map(Box))


@given(boxes(), tval, tval)
def test_count_monotone_in_lambda(b, t1, t2):
    lo, hi = sorted((t1, t2))
    assert count_t(b, lo) <= count_t(b, hi)
    assert count_t(b, lo) <= count_t(b, lo, strict=False)


@given(boxes(2, 3), st.lists(st.integers(0, 16), min_size=3, max_size=3), tval)
def test_domain_monotonicity(b, grow, t):
    bigger = Box(tuple(s + F(g, 16) for s, g in zip(b.sides, grow)))
    assert count_t(b, t) <= count_t(bigger, t)


@given(boxes(2, 3), st.integers(1, 4), tval)
def test_scaling(b, s, t):
    scaled = Box(tuple(x * s for x in b.sides))
    assert count_t(scaled, t) == count_t(b, t * s * s)


@given(st.tuples(side, side).map(Box), st.floats(0, 5000))
def test_fast_2d_equals_exact_and_naive(b, lam):
    c = count_exact(b, lam)
    assert count_fast_2d(b.sides, lam) == c == naive_count(b, lam)


@given(boxes(2, 3), st.floats(0, 3000))
def test_riesz_zero_is_count(b, lam):
    assert riesz_mean_exact(b, lam, 0) == count_exact(b, lam)


@given(st.floats(0.1, 10), st.floats(1.0001, 1e4))
def test_1d_sandwich(length, factor):
    lam = math.pi ** 2 / length ** 2 * factor
    e_half = riesz_mean_exact(interval(length), lam, 0.5)
    tol = 1e-11 * max(1.0, e_half)
    assert B1.riesz_half_lower_interval(length, lam).value <= e_half + tol
    assert e_half <= B1.riesz_half_upper(length, lam).value + tol
    assert B1.riesz_half_upper(length, lam).value <= B1.riesz_half_upper_envelope(length, lam).value + tol
    e1 = riesz_mean_exact(interval(length), lam, 1)
    assert e1 <= B1.riesz1_upper(length, lam).value * (1 + 1e-12) + 1e-12


@given(boxes(2, 3), st.lists(st.integers(-8, 8), min_size=3, max_size=3), st.permutations([0, 1, 2]))
def test_metrics_translation_and_permutation(b, shift, perm):
    n = b.n
    perm = [p for p in perm if p < n]
    moved = Box(tuple(b.sides[p] for p in perm), tuple(F(s, 4) for s in shift[:n]))
    m1, m2 = G.box_metrics(b), G.box_metrics(moved)
    for key in ("volume", "surface", "width", "diameter", "r_in", "mar_sides"):
        assert getattr(m1, key) == getattr(m2, key) or math.isclose(getattr(m1, key), getattr(m2, key))


@given(boxes(2, 3), st.floats(0.01, 0.99))
def test_tube_ordering(b, frac):
    d = G.RectilinearDomain([b])
    e = float(min(b.sides)) * frac
    inner = G.tube_volume(d, e, "interior")
    assert 0 < inner <= G.tube_volume(d, e, "two_sided")
    assert inner <= e * float(b.surface) * (1 + 1e-12)


@given(st.lists(st.integers(1, 6), min_size=1, max_size=4), st.lists(st.integers(1, 6), min_size=1, max_size=4))
def test_family_union_additive(ka, kb):
    a = A.CubeFamily(2, [(F(1), 1)] + [(F(1, 2 ** k), 1) for k in ka])
    b = A.CubeFamily(2, [(F(1), 1)] + [(F(1, 2 ** k), 1) for k in kb])
    u = a.union(b)
    assert u.s_q_exact == a.s_q_exact + b.s_q_exact
    assert u.v_q_exact == a.v_q_exact + b.v_q_exact


@given(st.floats(0.1, 500), st.floats(0.1, 500), st.integers(2, 30))
def test_certificate_monotone_in_base(v1, v2, depth):
    f = A.remark_family(2, depth, layout=False)
    lo, hi = sorted((v1, v2))
    if A.check_rectangle_minus_cubes(lo, f).verdict == "certified":
        assert A.check_rectangle_minus_cubes(hi, f).verdict == "certified"


@given(boxes(2, 3), st.floats(0.05, 0.9), st.floats(0.05, 0.9))
def test_lambda_epsilon_monotone(b, e1, e2):
    assume(abs(e1 - e2) > 1e-6)
    m = G.box_metrics(b)
    lo, hi = sorted((e1, e2))
    s_lo, s_hi = lambda_epsilon(m, lo), lambda_epsilon(m, hi)
    assert s_lo.capital_lambda > s_hi.capital_lambda >= m.width ** -2
    assert s_lo.residual <= 1e-10 and s_hi.residual <= 1e-10
