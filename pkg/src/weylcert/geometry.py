"""Rectilinear domains and the geometric quantities the bounds consume.

A :class:`RectilinearDomain` is a finite union of open axis-aligned boxes
with disjoint interiors, minus finitely many closed boxes.  Internally it is
a label array on the grid spanned by all input coordinates: label 0 is
outside, and two neighbouring cells with different positive labels are
separated by a wall (a face of the boundary).  Touching input boxes are
therefore separate Dirichlet components, which is what makes the spectrum
of a box union exactly computable.  Set predicates use exact rationals;
volumes of derived sets are accumulated in double precision.

Neighbourhoods ``{x : dist(x, S) <= eps}`` are taken in the max-norm, so the
neighbourhood of a box is a box.  The max-norm neighbourhood contains the
Euclidean one, which makes every tube volume below an upper bound for the
Euclidean tube.
"""
from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product

import numpy as np
from scipy import ndimage

from ._rational import Number, as_fraction
from .spectra import Box, NoExactSpectrum

C_LIP_GUARD = 1.001


def _slices(lo_idx, hi_idx):
    return tuple(slice(a, b) for a, b in zip(lo_idx, hi_idx))


def _cover(mask: np.ndarray) -> list[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Greedy decomposition of a boolean array into disjoint index boxes."""
    mask = mask.copy()
    out = []
    nd = mask.ndim
    while True:
        flat = np.flatnonzero(mask)
        if flat.size == 0:
            return out
        start = np.unravel_index(flat[0], mask.shape)
        hi = [s + 1 for s in start]
        for ax in range(nd):
            while hi[ax] < mask.shape[ax]:
                sl = tuple(slice(start[a], hi[a]) if a != ax else slice(hi[ax], hi[ax] + 1)
                           for a in range(nd))
                if mask[sl].all():
                    hi[ax] += 1
                else:
                    break
        out.append((tuple(int(s) for s in start), tuple(hi)))
        mask[_slices(start, hi)] = False


def _volume(mask: np.ndarray, widths: list[np.ndarray]) -> float:
    acc = mask.astype(np.float64)
    for w in widths:
        acc = np.tensordot(w, acc, axes=(0, 0))
    return float(acc)


@dataclass(frozen=True)
class Face:
    """A piece of the boundary: a degenerate box lying in the plane x[axis] = lo[axis]."""

    axis: int
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]
    outer: bool  # lies on the boundary of the bounding box, next to the outside

    @property
    def area(self) -> Fraction:
        return math.prod((h - l for a, (l, h) in enumerate(zip(self.lo, self.hi)) if a != self.axis),
                         start=Fraction(1))


class RectilinearDomain:
    """Union of open boxes with disjoint interiors, minus closed boxes.

    With ``joined=True`` faces shared by two listed boxes are interior points
    (the domain is the interior of the closed union); this is how the
    complement inside the bounding box is represented.
    """

    def __init__(self, boxes, removed=(), joined: bool = False, n: int | None = None):
        boxes = tuple(b if isinstance(b, Box) else Box(**b) if isinstance(b, dict) else Box(*b)
                      for b in boxes)
        removed = tuple(b if isinstance(b, Box) else Box(**b) if isinstance(b, dict) else Box(*b)
                        for b in removed)
        if not boxes and n is None:
            raise ValueError("a domain needs at least one box")
        self.n = boxes[0].n if boxes else int(n)
        if self.n < 2:
            raise ValueError("rectilinear domains are supported for n >= 2")
        if any(b.n != self.n for b in boxes + removed):
            raise ValueError("all boxes must share one dimension")
        self.boxes = boxes
        self.removed = removed
        self.joined = joined
        if boxes:
            self._validate()

    @classmethod
    def empty(cls, n: int) -> "RectilinearDomain":
        return cls((), (), joined=True, n=n)

    @property
    def is_empty(self) -> bool:
        return not self.boxes

    def __repr__(self) -> str:
        return (f"RectilinearDomain(n={self.n}, boxes={len(self.boxes)}, "
                f"removed={len(self.removed)}, joined={self.joined})")

    # -- grid ---------------------------------------------------------------

    @cached_property
    def coords(self) -> list[list[Fraction]]:
        return [sorted({b.lo[a] for b in self.boxes + self.removed}
                       | {b.hi[a] for b in self.boxes + self.removed}) for a in range(self.n)]

    def _index(self, box: Box) -> tuple[tuple[int, ...], tuple[int, ...]]:
        lo = tuple(bisect_left(self.coords[a], box.lo[a]) for a in range(self.n))
        hi = tuple(bisect_left(self.coords[a], box.hi[a]) for a in range(self.n))
        return lo, hi

    @cached_property
    def labels(self) -> np.ndarray:
        shape = tuple(len(c) - 1 for c in self.coords)
        lab = np.zeros(shape, dtype=np.int32)
        for i, b in enumerate(self.boxes):
            lo, hi = self._index(b)
            lab[_slices(lo, hi)] = 1 if self.joined else i + 1
        for r in self.removed:
            lo, hi = self._index(r)
            lab[_slices(lo, hi)] = 0
        return lab

    @cached_property
    def widths(self) -> list[np.ndarray]:
        return [np.array([float(c[i + 1] - c[i]) for i in range(len(c) - 1)]) for c in self.coords]

    def _validate(self) -> None:
        count = np.zeros(tuple(len(c) - 1 for c in self.coords), dtype=np.int32)
        for b in self.boxes:
            lo, hi = self._index(b)
            count[_slices(lo, hi)] += 1
        if (count > 1).any():
            raise ValueError("boxes must have pairwise disjoint interiors")
        for r in self.removed:
            lo, hi = self._index(r)
            if (count[_slices(lo, hi)] == 0).any():
                raise ValueError("removed boxes must lie inside the union of boxes")
        if not (self.labels > 0).any():
            raise ValueError("removal leaves no volume")

    # -- basic measures -----------------------------------------------------

    @cached_property
    def volume(self) -> Fraction:
        if self.is_empty:
            return Fraction(0)
        total = Fraction(0)
        for idx in np.argwhere(self.labels > 0):
            total += math.prod((self.coords[a][i + 1] - self.coords[a][i] for a, i in enumerate(idx)),
                               start=Fraction(1))
        return total

    @cached_property
    def faces(self) -> list[Face]:
        """Boundary of the domain as a list of disjoint face rectangles."""
        if self.is_empty:
            return []
        out: list[Face] = []
        lab = self.labels
        for ax in range(self.n):
            pad = [(0, 0)] * self.n
            pad[ax] = (1, 1)
            p = np.pad(lab, pad)
            lo_side = np.take(p, range(0, p.shape[ax] - 1), axis=ax)
            hi_side = np.take(p, range(1, p.shape[ax]), axis=ax)
            diff = lo_side != hi_side
            outer = (lo_side == 0) | (hi_side == 0)
            others = [a for a in range(self.n) if a != ax]
            for k in range(diff.shape[ax]):
                plane = np.take(diff, k, axis=ax)
                if not plane.any():
                    continue
                touch_out = np.take(outer, k, axis=ax)
                c = self.coords[ax][k]
                for is_out in (True, False):
                    m = plane & (touch_out if is_out else ~touch_out)
                    for lo_i, hi_i in _cover(m):
                        lo = [None] * self.n
                        hi = [None] * self.n
                        lo[ax] = hi[ax] = c
                        for j, a in enumerate(others):
                            lo[a] = self.coords[a][lo_i[j]]
                            hi[a] = self.coords[a][hi_i[j]]
                        out.append(Face(ax, tuple(lo), tuple(hi), is_out))
        return out

    @cached_property
    def surface(self) -> Fraction:
        return sum((f.area for f in self.faces), Fraction(0))

    @cached_property
    def bounding_box(self) -> Box:
        if self.is_empty:
            raise ValueError("empty domain has no bounding box")
        lo = tuple(c[0] for c in self.coords)
        hi = tuple(c[-1] for c in self.coords)
        # a removal can only shrink the closure at its edges; recompute from cells
        idx = np.argwhere(self.labels > 0)
        lo = tuple(self.coords[a][int(idx[:, a].min())] for a in range(self.n))
        hi = tuple(self.coords[a][int(idx[:, a].max()) + 1] for a in range(self.n))
        return Box(tuple(h - l for l, h in zip(lo, hi)), lo)

    @cached_property
    def width(self) -> Fraction:
        return min(self.bounding_box.sides)

    @cached_property
    def mar_axes(self) -> tuple[int, ...]:
        """Axis order by nonincreasing bounding-box side, so the shortest side is last."""
        sides = self.bounding_box.sides
        return tuple(sorted(range(self.n), key=lambda a: -sides[a]))

    @cached_property
    def mar(self) -> Box:
        bb = self.bounding_box
        return Box(tuple(bb.sides[a] for a in self.mar_axes), tuple(bb.origin[a] for a in self.mar_axes))

    def _cells(self) -> tuple[np.ndarray, np.ndarray]:
        idx = np.argwhere(self.labels > 0)
        cf = [np.array([float(x) for x in c]) for c in self.coords]
        lo = np.stack([cf[a][idx[:, a]] for a in range(self.n)], axis=1)
        hi = np.stack([cf[a][idx[:, a] + 1] for a in range(self.n)], axis=1)
        return lo, hi

    @cached_property
    def diameter(self) -> float:
        if self.removed:
            lo, hi = self._cells()
        else:
            lo = np.array([[float(x) for x in b.lo] for b in self.boxes])
            hi = np.array([[float(x) for x in b.hi] for b in self.boxes])
        best = 0.0
        for s in range(0, len(lo), 512):
            a = np.maximum(hi[s:s + 512, None, :] - lo[None, :, :], hi[None, :, :] - lo[s:s + 512, None, :])
            best = max(best, float(np.max(np.sum(a * a, axis=2))))
        return math.sqrt(best)

    # -- components ---------------------------------------------------------

    @cached_property
    def _component_boxes(self) -> list[Box | None]:
        """Each connected component as a Box, or None when it is not a box."""
        out: list[Box | None] = []
        lab = self.labels
        for v in np.unique(lab[lab > 0]):
            comp, k = ndimage.label(lab == v)
            for c in range(1, k + 1):
                where = np.argwhere(comp == c)
                lo_i = where.min(axis=0)
                hi_i = where.max(axis=0) + 1
                if (comp[_slices(lo_i, hi_i)] == c).all():
                    lo = tuple(self.coords[a][lo_i[a]] for a in range(self.n))
                    hi = tuple(self.coords[a][hi_i[a]] for a in range(self.n))
                    out.append(Box(tuple(h - l for l, h in zip(lo, hi)), lo))
                else:
                    out.append(None)
        return out

    @property
    def has_exact_spectrum(self) -> bool:
        return not self.is_empty and all(b is not None for b in self._component_boxes)

    def spectral_components(self) -> list[Box]:
        if not self.has_exact_spectrum:
            raise NoExactSpectrum("a component of the domain is not a box")
        return list(self._component_boxes)

    @property
    def is_single_box(self) -> bool:
        return len(self._component_boxes) == 1 and self._component_boxes[0] is not None

    def is_separated(self) -> bool:
        """True when the closures of the components are pairwise disjoint."""
        comps = self._component_boxes
        if any(b is None for b in comps):
            return False
        for i in range(len(comps)):
            for j in range(i + 1, len(comps)):
                a, b = comps[i], comps[j]
                if all(a.lo[k] <= b.hi[k] and b.lo[k] <= a.hi[k] for k in range(self.n)):
                    return False
        return True

    # -- membership and distance -------------------------------------------

    def contains_point(self, x) -> bool:
        """Membership of a point that is not on the boundary (cell lookup)."""
        idx = []
        for a in range(self.n):
            c = self.coords[a]
            i = bisect_right(c, as_fraction(x[a])) - 1
            if i < 0 or i >= len(c) - 1:
                return False
            idx.append(i)
        return bool(self.labels[tuple(idx)] > 0)

    def distance_sq_to_boundary(self, lo, hi) -> Fraction:
        """Exact squared Euclidean distance from the closed box [lo, hi] to the boundary."""
        best = None
        for f in self.faces:
            d = Fraction(0)
            for a in range(self.n):
                g = max(Fraction(0), f.lo[a] - hi[a], lo[a] - f.hi[a])
                d += g * g
            if best is None or d < best:
                best = d
                if d == 0:
                    break
        return best if best is not None else Fraction(0)

    def __eq__(self, other):
        return (isinstance(other, RectilinearDomain) and self.n == other.n
                and self.boxes == other.boxes and self.removed == other.removed
                and self.joined == other.joined)

    def __hash__(self):
        return hash((self.n, self.boxes, self.removed, self.joined))


def as_domain(obj) -> RectilinearDomain:
    if isinstance(obj, RectilinearDomain):
        return obj
    if isinstance(obj, Box):
        return RectilinearDomain([obj])
    return RectilinearDomain(list(obj))


def box_to_complement_distance(cube: Box, domain, squared: bool = False):
    """Euclidean distance from the closed box ``cube`` to the complement of ``domain``."""
    dom = as_domain(domain)
    d2 = dom.distance_sq_to_boundary(cube.lo, cube.hi)
    if d2 > 0:
        centre = tuple(l + s / 2 for l, s in zip(cube.lo, cube.sides))
        if not dom.contains_point(centre):
            d2 = Fraction(0)
    return d2 if squared else math.sqrt(d2)


# -- tubes ------------------------------------------------------------------

def _tube(dom: RectilinearDomain, eps: Fraction, interior: bool) -> float:
    faces = dom.faces
    if not faces:
        return 0.0
    n = dom.n
    axes_coords = []
    for a in range(n):
        s = {f.lo[a] - eps for f in faces} | {f.hi[a] + eps for f in faces}
        if interior:
            s |= set(dom.coords[a])
        axes_coords.append(sorted(s))
    shape = tuple(len(c) - 1 for c in axes_coords)
    mask = np.zeros(shape, dtype=bool)
    pos = [{c: i for i, c in enumerate(cs)} for cs in axes_coords]
    for f in faces:
        mask[tuple(slice(pos[a][f.lo[a] - eps], pos[a][f.hi[a] + eps]) for a in range(n))] = True
    if interior:
        maps = []
        for a in range(n):
            dc = dom.coords[a]
            m = np.array([bisect_right(dc, c) - 1 for c in axes_coords[a][:-1]])
            m[(m < 0) | (m >= len(dc) - 1)] = -1
            maps.append(m)
        valid = [m >= 0 for m in maps]
        inside = dom.labels[np.ix_(*[np.where(v, m, 0) for v, m in zip(valid, maps)])] > 0
        for a, v in enumerate(valid):
            inside &= v.reshape([-1 if b == a else 1 for b in range(n)])
        mask &= inside
    widths = [np.array([float(cs[i + 1] - cs[i]) for i in range(len(cs) - 1)]) for cs in axes_coords]
    return _volume(mask, widths)


def tube_volume(domain, eps: Number, side: str = "interior", check: bool = True) -> float:
    """Volume of the max-norm eps-tube around the boundary.

    ``interior``: points of the domain within eps of the boundary;
    ``two_sided``: all points within eps of the boundary.
    """
    dom = as_domain(domain)
    e = as_fraction(eps)
    if check and not (0 < e < dom.width):
        raise ValueError(f"eps must lie in (0, width) = (0, {float(dom.width)})")
    if side not in ("interior", "two_sided"):
        raise ValueError("side must be 'interior' or 'two_sided'")
    if dom.is_single_box and not dom.removed:
        b = dom._component_boxes[0]
        inner = math.prod(max(float(L - 2 * e), 0.0) for L in b.sides)
        outer = math.prod(float(L) for L in b.sides) if side == "interior" \
            else math.prod(float(L + 2 * e) for L in b.sides)
        return outer - inner
    return _tube(dom, e, side == "interior")


def _two_sided(dom: RectilinearDomain, eps: float) -> float:
    return tube_volume(dom, Fraction(eps), "two_sided", check=False)


def c_lip(domain, grid: int = 256) -> float:
    """Least C with two-sided tube(eps) <= C eps |boundary| on (0, width), times the guard factor.

    The tube volume is a polynomial in eps between consecutive breakpoints
    (half-distances between parallel face coordinates).  Each piece is
    interpolated exactly and its ratio maximized; a dense grid is added as a
    second safeguard.
    """
    dom = as_domain(domain)
    surf = float(dom.surface)
    width = float(dom.width)
    n = dom.n
    br = {0.0, width}
    for a in range(n):
        vals = sorted({f.lo[a] for f in dom.faces} | {f.hi[a] for f in dom.faces})
        for i in range(len(vals)):
            for j in range(i + 1, len(vals)):
                e = float(vals[j] - vals[i]) / 2
                if 0 < e < width:
                    br.add(e)
    br = sorted(br)
    best = 0.0

    def ratio(e: float) -> float:
        return _two_sided(dom, e) / (e * surf)

    for a, b in zip(br[:-1], br[1:]):
        if b - a < 1e-15 * width:
            continue
        nodes = a + (b - a) * (0.5 - 0.5 * np.cos(np.pi * (np.arange(n + 1) + 0.5) / (n + 1)))
        vals = np.array([_two_sided(dom, float(e)) for e in nodes])
        coef = np.polyfit(nodes, vals, n)
        poly = np.poly1d(coef)
        # critical points of p(e)/e: e p'(e) - p(e) = 0
        crit = np.polysub(np.polymul([1, 0], np.polyder(coef)), coef)
        cands = [a + (b - a) * 1e-9, b - (b - a) * 1e-9]
        for r in np.roots(crit) if np.any(crit) else []:
            if abs(r.imag) < 1e-12 and a < r.real < b:
                cands.append(float(r.real))
        for e in cands:
            if e > 0:
                best = max(best, ratio(e), float(poly(e)) / (e * surf))
    for e in np.concatenate([np.geomspace(width * 1e-6, width, grid, endpoint=False),
                             np.linspace(width / grid, width, grid, endpoint=False)]):
        best = max(best, ratio(float(e)))
    return max(1.0, best) * C_LIP_GUARD


# -- metrics ------------------------------------------------------------------

@dataclass(frozen=True)
class DomainMetrics:
    """Scalars of a domain as consumed by the bound formulas.

    ``mar_sides`` lists the minimal admissible rectangle with its shortest
    side (the width) last.  ``r_in`` is exact when ``r_in_exact``; otherwise
    it is a lower bound and ``r_in_upper`` an upper bound.
    """

    n: int
    volume: float
    surface: float
    diameter: float
    width: float
    r_in: float
    c_lip: float
    mar_sides: tuple[float, ...]
    r_in_upper: float | None = None
    r_in_exact: bool = True
    convex: bool = False
    mar_boundary_off_domain: float | None = None
    exact_spectrum: bool = False
    empty: bool = False
    source: str = "scalar"

    def __post_init__(self):
        if self.empty:
            return
        tol = 1e-12
        if self.volume <= 0:
            raise ValueError("volume must be positive")
        if self.width > self.diameter * (1 + tol):
            raise ValueError("width exceeds diameter")
        if self.r_in > self.width / 2 * (1 + tol):
            raise ValueError("r_in exceeds width/2")
        if not math.isnan(self.c_lip) and self.c_lip < 1:
            raise ValueError("c_lip must be at least 1")
        if len(self.mar_sides) != self.n:
            raise ValueError("mar needs n sides")
        if abs(self.mar_sides[-1] - self.width) > tol * self.width:
            raise ValueError("the last mar side must equal the width")
        if self.volume > math.prod(self.mar_sides) * (1 + tol):
            raise ValueError("volume exceeds the mar volume")

    @property
    def mar_base_volume(self) -> float:
        """|R_{n-1}|: volume of the mar with its shortest side dropped."""
        return math.prod(self.mar_sides[:-1])

    @property
    def mar_surface(self) -> float:
        v = math.prod(self.mar_sides)
        return sum(2 * v / s for s in self.mar_sides)

    @property
    def r_in_conservative(self) -> float:
        """r_in for formulas that get weaker as r_in grows."""
        if self.r_in_exact:
            return self.r_in
        return self.r_in_upper if self.r_in_upper is not None else self.width / 2

    def as_dict(self) -> dict:
        return {"n": self.n, "volume": self.volume, "surface": self.surface,
                "diameter": self.diameter, "width": self.width, "r_in": self.r_in,
                "r_in_upper": self.r_in_upper, "r_in_exact": self.r_in_exact,
                "c_lip": self.c_lip, "mar_sides": list(self.mar_sides),
                "mar_base_volume": self.mar_base_volume if not self.empty else 0.0,
                "mar_boundary_off_domain": self.mar_boundary_off_domain,
                "convex": self.convex, "exact_spectrum": self.exact_spectrum,
                "empty": self.empty, "source": self.source}

    @classmethod
    def from_dict(cls, d: dict) -> "DomainMetrics":
        keys = {f for f in cls.__dataclass_fields__}
        kw = {k: v for k, v in d.items() if k in keys}
        kw["mar_sides"] = tuple(float(x) for x in kw["mar_sides"])
        return cls(**kw)


def _r_in(dom: RectilinearDomain) -> tuple[float, float, bool]:
    comps = dom._component_boxes
    if all(b is not None for b in comps):
        r = max(float(min(b.sides)) / 2 for b in comps)
        return r, r, True
    upper = float(dom.width) / 2
    lower = 0.0
    fam = whitney(dom, depth=6 if dom.n == 2 else 4)
    for lo, hi in zip(*fam.boxes_exact()):
        centre = tuple((l + h) / 2 for l, h in zip(lo, hi))
        lower = max(lower, math.sqrt(dom.distance_sq_to_boundary(centre, centre)))
    return lower, upper, False


def metrics(domain, with_c_lip: bool = True) -> DomainMetrics:
    dom = as_domain(domain)
    if dom.is_empty:
        return DomainMetrics(dom.n, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, (0.0,) * dom.n,
                             r_in_upper=0.0, empty=True, source="rectilinear")
    r, r_up, exact = _r_in(dom)
    off = 0.0
    if not dom.is_single_box:
        bb = dom.bounding_box
        off = sum(float(f.area) for f in complement_in_mar(dom).faces
                  if f.lo[f.axis] in (bb.lo[f.axis], bb.hi[f.axis]))
    return DomainMetrics(
        n=dom.n, volume=float(dom.volume), surface=float(dom.surface),
        diameter=dom.diameter, width=float(dom.width), r_in=r,
        c_lip=c_lip(dom) if with_c_lip else math.nan,
        mar_sides=tuple(float(s) for s in dom.mar.sides), r_in_upper=r_up, r_in_exact=exact,
        convex=dom.is_single_box and not dom.removed,
        mar_boundary_off_domain=off, exact_spectrum=dom.has_exact_spectrum,
        source="rectilinear")


def box_metrics(box: Box) -> DomainMetrics:
    return metrics(RectilinearDomain([box]))


def complement_in_mar(domain) -> RectilinearDomain:
    """mar minus the closure of the domain, decomposed into boxes (joined)."""
    dom = as_domain(domain)
    bb = dom.bounding_box
    coords = [[c for c in dom.coords[a] if bb.lo[a] <= c <= bb.hi[a]] for a in range(dom.n)]
    lo_i = [dom.coords[a].index(coords[a][0]) for a in range(dom.n)]
    sub = dom.labels[tuple(slice(lo_i[a], lo_i[a] + len(coords[a]) - 1) for a in range(dom.n))]
    boxes = []
    for lo, hi in _cover(sub == 0):
        l = tuple(coords[a][lo[a]] for a in range(dom.n))
        h = tuple(coords[a][hi[a]] for a in range(dom.n))
        boxes.append(Box(tuple(y - x for x, y in zip(l, h)), l))
    if not boxes:
        return RectilinearDomain.empty(dom.n)
    return RectilinearDomain(boxes, joined=True)


# -- Whitney decomposition ------------------------------------------------------

@dataclass
class WhitneyCube:
    cube: Box
    generation: int
    dist_to_complement: float


@dataclass
class WhitneyFamily:
    """Accepted dyadic cubes, stored as integer lattice data.

    Cube i has generation ``gen[i]`` and occupies
    ``origin + base * 2^-gen * (index[i] + [0,1]^n)``.  ``d2`` holds the
    squared distance to the complement in units of ``(base / K)^2``.
    """

    domain: RectilinearDomain
    origin: tuple[Fraction, ...]
    base: Fraction
    depth: int
    K: int
    gen: np.ndarray
    index: np.ndarray
    d2: np.ndarray
    truncated: bool = True
    stats: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return int(self.gen.size)

    def side(self, k) -> Fraction:
        return self.base / 2 ** int(k)

    @property
    def collar(self) -> float:
        """Uncovered points lie within this distance of the boundary."""
        return 5 * math.sqrt(self.domain.n) * float(self.side(self.depth))

    def sides(self) -> np.ndarray:
        return float(self.base) * 2.0 ** (-self.gen.astype(np.float64))

    def distances(self) -> np.ndarray:
        return np.sqrt(self.d2.astype(np.float64)) * float(self.base) / self.K

    def boxes_exact(self):
        los, his = [], []
        for k, j in zip(self.gen, self.index):
            s = self.side(k)
            lo = tuple(o + s * int(x) for o, x in zip(self.origin, j))
            los.append(lo)
            his.append(tuple(x + s for x in lo))
        return los, his

    def __iter__(self):
        dist = self.distances()
        for i, (k, j) in enumerate(zip(self.gen, self.index)):
            s = self.side(k)
            lo = tuple(o + s * int(x) for o, x in zip(self.origin, j))
            yield WhitneyCube(Box((s,) * self.domain.n, lo), int(k), float(dist[i]))

    def covered_volume(self) -> float:
        return float(np.sum(self.sides() ** self.domain.n))

    def largest_generation(self) -> int:
        return int(self.gen.min())


def _lcm(values) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out


def whitney(domain, depth: int = 8, lattice: tuple | None = None, chunk: int = 400_000) -> WhitneyFamily:
    """Maximal dyadic cubes Q with sqrt(n) l(Q) <= dist(Q, complement), down to ``depth``.

    The dyadic lattice is anchored at the bounding-box corner with base side
    equal to the longest bounding-box side, unless ``lattice = (origin, base)``
    is given.
    """
    dom = as_domain(domain)
    n = dom.n
    if lattice is None:
        bb = dom.bounding_box
        origin, base = bb.origin, max(bb.sides)
    else:
        origin = tuple(as_fraction(o) for o in lattice[0])
        base = as_fraction(lattice[1])
    faces = dom.faces
    rel = [[(c - origin[a]) / base for c in dom.coords[a]] for a in range(n)]
    den = _lcm(x.denominator for col in rel for x in col)
    K = 2 ** depth * den
    big = max(abs(int(x * K)) for col in rel for x in col) + K
    dtype = np.int64 if n * (4 * big) ** 2 < 2 ** 62 else object

    def scale(x: Fraction) -> int:
        v = (x - 0) * K
        assert v.denominator == 1
        return int(v)

    f_lo = np.array([[scale((f.lo[a] - origin[a]) / base) for a in range(n)] for f in faces], dtype=dtype)
    f_hi = np.array([[scale((f.hi[a] - origin[a]) / base) for a in range(n)] for f in faces], dtype=dtype)
    grid2 = [np.array([2 * scale(x) for x in rel[a]], dtype=dtype) for a in range(n)]
    ext_hi = [int(grid2[a][-1] // 2) for a in range(n)]
    ext_lo = [int(grid2[a][0] // 2) for a in range(n)]
    labels = dom.labels
    offsets = np.array(list(product((0, 1), repeat=n)), dtype=dtype)

    acc_gen, acc_idx, acc_d2 = [], [], []
    j = np.zeros((1, n), dtype=dtype)
    if lattice is not None:
        # start from all level-0 cells meeting the bounding box
        ranges = [range(ext_lo[a] // K - 1, ext_hi[a] // K + 1) for a in range(n)]
        j = np.array(list(product(*ranges)), dtype=dtype)
    evaluated = 0
    truncated = False
    for k in range(depth + 1):
        if j.shape[0] == 0:
            break
        step = K >> k
        qlo = j * step
        qhi = qlo + step
        keep = np.all((qhi > np.array(ext_lo, dtype=dtype)) & (qlo < np.array(ext_hi, dtype=dtype)), axis=1)
        j, qlo, qhi = j[keep], qlo[keep], qhi[keep]
        evaluated += j.shape[0]
        d2 = np.empty(j.shape[0], dtype=dtype)
        per = max(1, chunk // max(1, len(faces)))
        for s in range(0, j.shape[0], per):
            lo_c = qlo[s:s + per, None, :]
            hi_c = qhi[s:s + per, None, :]
            gap = np.maximum(np.maximum(f_lo[None] - hi_c, lo_c - f_hi[None]), 0)
            d2[s:s + per] = np.min(np.sum(gap * gap, axis=2), axis=1)
        centre2 = qlo * 2 + step
        cell = [np.searchsorted(grid2[a], centre2[:, a], side="right") - 1 for a in range(n)]
        inb = np.ones(j.shape[0], dtype=bool)
        for a in range(n):
            inb &= (cell[a] >= 0) & (cell[a] < len(grid2[a]) - 1)
        inside = np.zeros(j.shape[0], dtype=bool)
        if inb.any():
            inside[inb] = labels[tuple(cell[a][inb].astype(np.int64) for a in range(n))] > 0
        positive = d2 > 0
        ok = positive & inside & (d2 >= n * step * step)
        acc_gen.append(np.full(int(ok.sum()), k, dtype=np.int64))
        acc_idx.append(j[ok])
        acc_d2.append(d2[ok])
        split = ~ok & (~positive | inside)
        if k == depth:
            truncated = truncated or bool(split.any())
            break
        parents = j[split]
        j = (2 * parents[:, None, :] + offsets[None]).reshape(-1, n)
    fam = WhitneyFamily(
        domain=dom, origin=tuple(origin), base=base, depth=depth, K=K,
        gen=np.concatenate(acc_gen) if acc_gen else np.empty(0, np.int64),
        index=np.concatenate(acc_idx).astype(dtype) if acc_idx else np.empty((0, n), dtype),
        d2=np.concatenate(acc_d2) if acc_d2 else np.empty(0, dtype),
        truncated=truncated, stats={"evaluated": evaluated})
    return fam


def _keys(gen: np.ndarray, idx: np.ndarray, depth: int) -> np.ndarray:
    """Unique integer key per (generation, index) pair; indices shifted to be nonnegative."""
    width = 2 ** (depth + 2)
    key = gen.astype(object) if idx.dtype == object else gen.astype(np.int64)
    for a in range(idx.shape[1]):
        key = key * width + (idx[:, a] + 2 ** (depth + 1))
    return key


def check_whitney(fam: WhitneyFamily) -> dict:
    """Post-construction check of the four Whitney properties and the collar containment."""
    n = fam.domain.n
    step = (fam.K >> fam.gen.astype(np.int64)).astype(fam.d2.dtype) if fam.d2.dtype != object \
        else np.array([fam.K >> int(k) for k in fam.gen], dtype=object)
    l2 = step * step
    lower_ok = fam.d2 >= n * l2
    upper_ok = fam.d2 <= 16 * n * l2
    report = {"cubes": len(fam), "b_lower_violations": int((~lower_ok).sum()),
              "b_upper_violations": int((~upper_ok).sum())}

    # (a) no two cubes overlap: distinct keys and no cube is an ancestor of another
    keys = _keys(fam.gen, fam.index, fam.depth)
    uniq = np.unique(keys)
    overlaps = len(keys) - len(uniq)
    by_gen = {int(k): fam.index[fam.gen == k] for k in np.unique(fam.gen)}
    key_sets = {k: np.sort(_keys(np.full(v.shape[0], k), v, fam.depth)) for k, v in by_gen.items()}

    def member(k: int, idx: np.ndarray) -> np.ndarray:
        if k not in key_sets or idx.shape[0] == 0:
            return np.zeros(idx.shape[0], dtype=bool)
        kk = _keys(np.full(idx.shape[0], k), idx, fam.depth)
        return np.isin(kk, key_sets[k])

    neighbours = np.zeros(len(fam), dtype=np.int64)
    pos_of = {}
    for k, v in by_gen.items():
        where = np.flatnonzero(fam.gen == k)
        pos_of[k] = (np.sort(key_sets[k]), where[np.argsort(_keys(np.full(v.shape[0], k), v, fam.depth))])
    ratio_violations = 0
    deltas = [np.array(d) for d in product((-1, 0, 1), repeat=n) if any(d)]
    for kf, fine in by_gen.items():
        fine_pos = np.flatnonzero(fam.gen == kf)
        for kc in by_gen:
            if kc > kf:
                continue
            m = kf - kc
            anc = fine >> m if fine.dtype != object else np.array(
                [[int(x) >> m for x in row] for row in fine], dtype=object)
            if m > 0:
                overlaps += int(member(kc, anc).sum())
            lo_al = (fine % (2 ** m) == 0)
            hi_al = ((fine + 1) % (2 ** m) == 0)
            for d in deltas:
                ok = np.ones(fine.shape[0], dtype=bool)
                for a in range(n):
                    if d[a] == -1:
                        ok &= lo_al[:, a]
                    elif d[a] == 1:
                        ok &= hi_al[:, a]
                if not ok.any():
                    continue
                cand = anc[ok] + d.astype(anc.dtype)
                hit = member(kc, cand)
                if not hit.any():
                    continue
                if m > 2:
                    ratio_violations += int(hit.sum())
                # record adjacency for both cubes of each touching pair
                fp = fine_pos[ok][hit]
                neighbours[fp] += 1
                keys_c = _keys(np.full(int(hit.sum()), kc), cand[hit], fam.depth)
                sk, sp = pos_of[kc]
                cp = sp[np.searchsorted(sk, keys_c)]
                if m > 0:
                    np.add.at(neighbours, cp, 1)
    # same-generation pairs were counted once from each side already
    report["overlaps"] = int(overlaps)
    report["ratio_violations"] = int(ratio_violations)
    report["max_neighbours"] = int(neighbours.max()) if len(fam) else 0
    report["neighbour_violations"] = int((neighbours > 12 ** n).sum())
    collar = fam.collar
    vol = float(fam.domain.volume)
    tube = vol if collar >= float(fam.domain.width) else tube_volume(fam.domain, collar, "interior", check=False)
    report["covered_volume"] = fam.covered_volume()
    report["collar_tube"] = tube
    report["coverage_ok"] = bool(fam.covered_volume() + tube >= vol * (1 - 1e-12))
    report["ok"] = (report["b_lower_violations"] == 0 and report["b_upper_violations"] == 0
                    and report["overlaps"] == 0 and report["ratio_violations"] == 0
                    and report["neighbour_violations"] == 0 and report["coverage_ok"])
    return report


def _neighbourhood_cheb(dom: RectilinearDomain, eps: Fraction, within: Box) -> float:
    pieces = []
    for lo, hi in _cover(dom.labels > 0):
        pieces.append((tuple(dom.coords[a][lo[a]] - eps for a in range(dom.n)),
                       tuple(dom.coords[a][hi[a]] + eps for a in range(dom.n))))
    axes = []
    for a in range(dom.n):
        s = {within.lo[a], within.hi[a]}
        s |= {min(max(p[0][a], within.lo[a]), within.hi[a]) for p in pieces}
        s |= {min(max(p[1][a], within.lo[a]), within.hi[a]) for p in pieces}
        axes.append(sorted(s))
    pos = [{c: i for i, c in enumerate(cs)} for cs in axes]
    mask = np.zeros(tuple(len(c) - 1 for c in axes), dtype=bool)
    for lo, hi in pieces:
        sl = []
        for a in range(dom.n):
            l = min(max(lo[a], within.lo[a]), within.hi[a])
            h = min(max(hi[a], within.lo[a]), within.hi[a])
            sl.append(slice(pos[a][l], pos[a][h]))
        mask[tuple(sl)] = True
    widths = [np.array([float(cs[i + 1] - cs[i]) for i in range(len(cs) - 1)]) for cs in axes]
    return _volume(mask, widths)


def neighbourhood_volume(domain, eps: Number, within: Box) -> tuple[float, float]:
    """Bracket [lo, hi] for |{x in within : dist(x, domain) < eps}| (Euclidean distance).

    Exact (lo == hi) for a single box whose eps-neighbourhood stays inside
    ``within`` (Steiner formula); otherwise the max-norm neighbourhoods of
    radius eps/sqrt(n) and eps bracket the Euclidean one.
    """
    dom = as_domain(domain)
    e = as_fraction(eps)
    n = dom.n
    if dom.is_single_box and not dom.removed:
        b = dom._component_boxes[0]
        if all(b.lo[a] - e >= within.lo[a] and b.hi[a] + e <= within.hi[a] for a in range(n)):
            from .constants import unit_ball_volume
            sym = np.poly(-np.array([float(s) for s in b.sides]))  # sym[j] = e_j(sides)
            ef = float(e)
            v = sum(float(sym[j]) * (unit_ball_volume(n - j) if j < n else 1.0) * ef ** (n - j)
                    for j in range(n + 1))
            return v, v
    shrunk = Fraction(float(e) / math.sqrt(n) * (1 - 1e-15))
    return _neighbourhood_cheb(dom, shrunk, within), _neighbourhood_cheb(dom, e, within)
