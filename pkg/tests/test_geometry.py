import math
from fractions import Fraction as F

import numpy as np
import pytest

from weylcert import geometry as G
from weylcert.spectra import Box, cube

SQ = G.RectilinearDomain([cube(1, 2)])
L2 = G.RectilinearDomain([Box((2, 2))], [Box((1, 1), (1, 1))])


def test_unit_square_metrics(square):
    m = G.metrics(square)
    assert (m.volume, m.surface, m.width, m.r_in) == (1, 4, 1, 0.5)
    assert m.diameter == pytest.approx(math.sqrt(2))
    assert m.mar_sides == (1.0, 1.0) and m.r_in_exact and m.convex
    assert m.mar_boundary_off_domain == 0


def test_box_width_axis():
    d = G.RectilinearDomain([Box((3, 2))])
    m = G.metrics(d)
    assert m.width == 2 and m.mar_sides[-1] == 2 and d.mar_axes[-1] == 1


def test_union_additivity():
    d = G.RectilinearDomain([cube(1, 2), Box((1, 1), (2, 0))])
    assert d.volume == 2 and d.surface == 8 and d.is_separated()


def test_touching_boxes_stay_separate_components():
    d = G.RectilinearDomain([cube(1, 2), Box((1, 1), (1, 0))])
    assert d.has_exact_spectrum and len(d.spectral_components()) == 2
    assert d.surface == 7  # the shared face is a slit, counted once as a boundary set
    joined = G.RectilinearDomain([cube(1, 2), Box((1, 1), (1, 0))], joined=True)
    assert joined.surface == 6 and joined.is_single_box


def test_removed_half_leaves_unit_square():
    d = G.RectilinearDomain([Box((2, 1))], [Box((1, 1), (1, 0))])
    assert d.volume == 1 and d.surface == 4 and d.is_single_box
    assert d.spectral_components() == [cube(1, 2)]


def test_l_shape_metrics():
    m = G.metrics(L2)
    assert m.volume == 3 and m.surface == 8 and m.width == 2
    assert not m.exact_spectrum and not m.r_in_exact
    assert m.r_in <= m.r_in_upper == 1.0
    assert m.mar_boundary_off_domain == 2


@pytest.mark.parametrize("bad", [
    lambda: G.RectilinearDomain([cube(1, 2), Box((1, 1), (F(1, 2), 0))]),
    lambda: G.RectilinearDomain([cube(1, 2)], [cube(1, 2)]),
    lambda: G.RectilinearDomain([cube(1, 2)], [Box((1, 1), (F(1, 2), 0))]),
    lambda: G.RectilinearDomain([Box((1,))]),
])
def test_validation(bad):
    with pytest.raises(ValueError):
        bad()


def test_tube_examples():
    assert G.tube_volume(SQ, 0.1, "interior") == pytest.approx(0.36)
    assert G.tube_volume(SQ, 0.1, "two_sided") == pytest.approx(0.8)
    with pytest.raises(ValueError):
        G.tube_volume(SQ, 1.5)


def test_l_shape_tube_against_voxels():
    eps = 0.1
    h = eps / 100
    x = np.arange(h / 2, 2, h)
    X, Y = np.meshgrid(x, x, indexing="ij")
    inside = ~((X > 1) & (Y > 1))
    d_frame = np.minimum.reduce([X, 2 - X, Y, 2 - Y])
    dx, dy = np.maximum(1 - X, 0), np.maximum(1 - Y, 0)
    d_hole = np.hypot(dx, dy)
    voxel = np.sum(inside & (np.minimum(d_frame, d_hole) < eps)) * h * h
    tube = G.tube_volume(L2, eps, "interior")
    assert tube >= voxel * (1 - 1e-3)
    assert tube == pytest.approx(voxel, rel=0.01)


def test_c_lip_boxes():
    # two-sided ratio is exactly 2 below half the width; the window runs to the width
    for e in (0.05, 0.2, 0.45):
        assert G.tube_volume(SQ, e, "two_sided") / (4 * e) == pytest.approx(2.0)
    assert G.c_lip(SQ) == pytest.approx(2.25 * 1.001, rel=1e-6)
    cu = G.RectilinearDomain([cube(1, 3)])
    assert G.c_lip(cu) == pytest.approx(4.5 * 1.001, rel=1e-6)


@pytest.mark.parametrize("sides", [(1, 3), (2, 5, 1), (F(1, 2), F(7, 3))])
def test_c_lip_single_box_closed_form(sides):
    s = np.array([float(x) for x in sides])
    w = s.min()
    e = np.linspace(w * 1e-6, w * (1 - 1e-9), 200_001)
    outer = np.prod(s[None, :] + 2 * e[:, None], axis=1)
    inner = np.prod(np.maximum(s[None, :] - 2 * e[:, None], 0), axis=1)
    surf = float(Box(sides).surface)
    best = np.max((outer - inner) / (e * surf))
    got = G.c_lip(G.RectilinearDomain([Box(sides)]))
    assert best <= got <= best * 1.001 * (1 + 1e-6)


def test_c_lip_at_least_one_and_convex_interior_ratio(rng):
    from weylcert.oracles import random_rectilinear
    for _ in range(5):
        d = random_rectilinear(rng, 2)
        assert G.c_lip(d) >= 1
    box = G.RectilinearDomain([Box((2, 1, F(3, 2)))])
    for e in (0.1, 0.3, 0.49):
        assert G.tube_volume(box, e, "interior") <= e * float(box.surface) * (1 + 1e-12)


def test_complement_in_mar():
    assert G.complement_in_mar(SQ).is_empty
    c = G.complement_in_mar(L2)
    assert c.volume == 1 and c.joined
    assert G.metrics(c, with_c_lip=False).surface == 4


def test_complement_surrogate_inequality():
    c = G.complement_in_mar(L2)
    cl = G.c_lip(L2)
    for e in (0.05, 0.2, 0.4):
        assert G.tube_volume(c, e, "interior") <= cl * e * float(c.surface)


def test_box_to_complement_distance():
    q = Box((F(1, 5),) * 2, (F(2, 5),) * 2)
    assert G.box_to_complement_distance(q, SQ, squared=True) == F(4, 25)
    assert G.box_to_complement_distance(q, SQ) == pytest.approx(0.4)
    assert G.box_to_complement_distance(Box((F(1, 2),) * 2), SQ) == 0
    q = Box((F(1, 4),) * 2, (F(1, 2), F(1, 2)))
    assert G.box_to_complement_distance(q, L2, squared=True) == F(1, 8)


def test_distance_against_point_sampling(rng):
    q = Box((F(1, 8),) * 2, (F(5, 8), F(1, 4)))
    exact = float(G.box_to_complement_distance(q, L2))
    pts = rng.uniform(-0.5, 2.5, (200_000, 2))
    outside = ~(((pts > 0) & (pts < 2)).all(1) & ~((pts >= 1).all(1)))
    pts = pts[outside]
    lo, hi = np.array([5 / 8, 1 / 4]), np.array([6 / 8, 3 / 8])
    gap = np.maximum(np.maximum(lo - pts, pts - hi), 0)
    sampled = np.min(np.hypot(gap[:, 0], gap[:, 1]))
    assert exact <= sampled + 1e-12 and sampled - exact < 0.02


def test_metrics_invariance():
    a = G.metrics(G.RectilinearDomain([Box((1, 2)), Box((1, 1), (1, 0))], joined=True))
    b = G.metrics(G.RectilinearDomain([Box((2, 1), (5, 7)), Box((1, 1), (5, 8))], joined=True))
    for key in ("volume", "surface", "width", "r_in", "mar_sides"):
        assert getattr(a, key) == pytest.approx(getattr(b, key))
    assert a.c_lip == pytest.approx(b.c_lip, rel=1e-9)


def test_metrics_round_trip_and_validation():
    m = G.metrics(L2)
    assert G.DomainMetrics.from_dict(m.as_dict()) == m
    with pytest.raises(ValueError):
        G.DomainMetrics(n=2, volume=1, surface=4, diameter=1, width=2, r_in=0.5, c_lip=2,
                        mar_sides=(2, 2))


def test_whitney_unit_square():
    fam = G.whitney(SQ, depth=6)
    rep = G.check_whitney(fam)
    assert rep["ok"] and rep["b_lower_violations"] == rep["b_upper_violations"] == 0
    collar = 5 * math.sqrt(2) * 2.0 ** -6
    assert fam.covered_volume() >= 1 - G.tube_volume(SQ, collar, "interior") - 1e-12
    assert rep["max_neighbours"] <= 12 ** 2


def test_whitney_largest_cube_unit_cube():
    fam = G.whitney(G.RectilinearDomain([cube(1, 3)]), depth=5)
    side = float(fam.side(fam.largest_generation()))
    r = 0.5
    assert r / (5 * math.sqrt(3)) <= side <= r / math.sqrt(3)


def test_whitney_l_shape_checks():
    assert G.check_whitney(G.whitney(L2, depth=6))["ok"]


def test_whitney_locality():
    a, b = cube(1, 2), Box((1, 1), (2, 0))
    lattice = ((0, 0), 4)
    both = G.whitney(G.RectilinearDomain([a, b]), depth=7, lattice=lattice)
    parts = [G.whitney(G.RectilinearDomain([x]), depth=7, lattice=lattice) for x in (a, b)]

    def keyset(fam):
        return {(int(k), *map(int, j)) for k, j in zip(fam.gen, fam.index)}

    assert keyset(both) == keyset(parts[0]) | keyset(parts[1])
    assert not keyset(parts[0]) & keyset(parts[1])


def test_neighbourhood_volume_bracket():
    q = Box((2, 2), (-0.5, -0.5))
    lo, hi = G.neighbourhood_volume(SQ, 0.25, q)
    assert lo == hi == pytest.approx(1 + 4 * 0.25 + math.pi * 0.25 ** 2)
    lo, hi = G.neighbourhood_volume(L2, 0.1, Box((3, 3), (-0.5, -0.5)))
    steiner_like = 3 + 8 * 0.1 + math.pi * 0.01 * 0.75  # three convex corners plus a reentrant one
    assert lo <= steiner_like <= hi
