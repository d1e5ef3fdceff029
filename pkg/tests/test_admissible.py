import math
from fractions import Fraction as F

import pytest

from weylcert import admissible as A
from weylcert.certify import weyl_main
from weylcert.constants import c2
from weylcert.geometry import RectilinearDomain
from weylcert.spectra import Box, count_exact, cube, eigenvalues


def test_aggregates_examples():
    assert A.family_aggregates(A.CubeFamily.from_cubes([cube(1, 2)])) == (1.0, 1.0)
    f = A.CubeFamily.from_cubes([cube(1, 3), Box((F(1, 2),) * 3, (2, 0, 0))])
    assert (f.s_q_exact, f.v_q_exact) == (F(5, 4), F(9, 8))


def test_overlap_reports_pair():
    with pytest.raises(A.OverlapError) as info:
        A.CubeFamily.from_cubes([cube(1, 2), Box((F(1, 2),) * 2, (3, 3)), Box((F(1, 2),) * 2, (F(1, 2), 0))])
    assert info.value.pair == (0, 2)


def test_touching_cubes_are_disjoint():
    A.check_disjoint([cube(1, 2), Box((1, 1), (1, 0)), Box((1, 1), (0, 1))])


def test_rescaling_logged():
    f = A.CubeFamily(2, [(F(2), 1), (F(1), 4)])
    assert f.levels == [(F(1), 1), (F(1, 2), 4)] and f.scale == F(1, 2) and f.notes


def test_family_validation():
    with pytest.raises(ValueError):
        A.CubeFamily(1, [(1, 1)])
    with pytest.raises(ValueError):
        A.CubeFamily.from_cubes([Box((1, F(1, 2)))])
    with pytest.raises(ValueError):
        A.CubeFamily(2, [(1, 1)], tail_bound=-1)


def test_union_additive():
    a = A.CubeFamily.from_cubes([cube(1, 2)])
    b = A.CubeFamily.from_cubes([Box((F(1, 4),) * 2, (2, 0)), Box((1, 1), (4, 0))])
    u = a.union(b)
    assert u.s_q_exact == a.s_q_exact + b.s_q_exact and u.v_q_exact == a.v_q_exact + b.v_q_exact
    with pytest.raises(A.OverlapError):
        a.union(a)


def test_remark_family_depth6():
    f = A.remark_family(2, 6)
    expected = 1 + sum(F(2 ** (k // 2), 2 ** (k - 1)) for k in range(2, 7))
    assert f.s_q_exact == expected == F(7, 2)
    A.check_disjoint(f.cubes)
    assert all(0 <= c.lo[0] and c.hi[0] <= 4 and 0 <= c.lo[1] and c.hi[1] <= 1 for c in f.cubes)


def test_remark_family_bound_all_depths():
    prev = 0.0
    for depth in range(2, 61):
        f = A.remark_family(2, depth, layout=False)
        assert f.s_q > prev
        assert f.s_q_total <= A.REMARK_BOUND
        prev = f.s_q


def test_remark_family_theorem_check():
    f = A.remark_family(2, 40)
    base = 8 * (1 + math.sqrt(2)) * math.pi + 0.01
    cert = A.check_rectangle_minus_cubes(base, f)
    assert cert.verdict == "certified" and cert.data["margin"] > 0
    m = A.margins(f, base)
    assert m["remark_slack"] >= 0 and m["margin"] == pytest.approx(cert.data["margin"])
    # the verbatim remark bound also certifies at this rectangle size
    assert base >= c2(1) * A.REMARK_BOUND


def test_rectangle_check_below_threshold():
    f = A.remark_family(2, 10)
    cert = A.check_rectangle_minus_cubes(1.0, f)
    assert cert.verdict == "inconclusive" and "needs" in cert.reason


def test_rectangle_check_equality_n3():
    f = A.CubeFamily.from_cubes([cube(1, 3)])
    cert = A.check_rectangle_minus_cubes(9 * math.sqrt(3), f)
    assert cert.verdict == "certified"


def test_containment_checked_with_coordinates():
    f = A.remark_family(2, 6)
    assert A.check_rectangle_minus_cubes(100, f, mar=Box((2, 1))).hypotheses[1].status == "checked"
    bad = A.check_rectangle_minus_cubes(100, f, mar=Box((1, 1)))
    assert bad.verdict == "inconclusive" and bad.hypotheses[1].status == "failed"


def test_monotone_in_base_volume():
    f = A.remark_family(2, 12)
    verdicts = [A.check_rectangle_minus_cubes(v, f).verdict for v in range(1, 200, 5)]
    first = verdicts.index("certified")
    assert all(v == "certified" for v in verdicts[first:])


def test_tiled_check():
    f = A.CubeFamily.from_cubes([cube(1, 2)])
    t1 = A.check_rectangle_minus_cubes(1, f).data["threshold"]
    assert A.check_tiled_minus_cubes(2, 1, f).data["threshold"] == pytest.approx(2 * t1)
    assert A.check_tiled_minus_cubes(4, 1, f).data["threshold"] == pytest.approx(8 * math.sqrt(2) * math.pi)
    cert = A.check_tiled_minus_cubes(4, 1, f)
    assert any("tiles" in h.name and h.status == "assumed" for h in cert.hypotheses)
    with pytest.raises(ValueError):
        A.check_tiled_minus_cubes(1, 1, f)


def test_product_check():
    thr = A.product_length_threshold(10, 1, 2)
    assert thr == pytest.approx(10 / (4 * math.sqrt(2) * math.pi)) and thr == pytest.approx(0.5627, abs=1e-4)
    assert A.check_product_minus_cubes(10, 1, 0.5, 2).verdict == "certified"
    assert A.check_product_minus_cubes(10, 1, 0.6, 2).verdict == "inconclusive"
    t3 = A.product_length_threshold(10, 1, 3)
    assert t3 == pytest.approx(10 / (2 * 3 ** 2.5) * (247 / 256) ** 0.5)
    assert A.product_length_threshold(10, 1, 5) > 0


def test_removed_cubes_oracle_on_box_complement():
    # a family realized as removed cubes whose complement is a box union:
    # the 3x1 strip minus its middle unit cube leaves two unit squares
    f = A.CubeFamily.from_cubes([Box((1, 1), (1, 0))])
    dom = RectilinearDomain([Box((3, 1))], [Box((1, 1), (1, 0))])
    assert dom.has_exact_spectrum and dom.volume == 2
    for lam in eigenvalues(dom, 1e3):
        k = count_exact(dom, lam * (1 + 2 ** -40))
        assert k <= weyl_main(float(dom.volume), 2, lam) * (1 + 1e-12)
    assert f.s_q == 1.0
