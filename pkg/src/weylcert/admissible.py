"""Admissible families of disjoint cubes and the Polya checks that consume them.

A family is stored by levels ``(side, count)`` with exact rational sides,
optionally with an explicit layout of every cube.  Infinite families are a
finite prefix plus an analytic bound on the omitted part of S_Q; every check
uses ``s_q + tail_bound``.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ._rational import Number, as_fraction
from .certify import Certificate, Hypothesis
from .constants import beta, c2
from .spectra import Box

log = logging.getLogger(__name__)

REMARK_BOUND = 2 * (2 + math.sqrt(2))


@dataclass
class CubeFamily:
    n: int
    levels: list[tuple[Fraction, int]]
    cubes: list[Box] | None = None
    tail_bound: float = 0.0
    scale: Fraction = Fraction(1)
    container: Box | None = None
    notes: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.n < 2:
            raise ValueError("admissible families need n >= 2")
        self.levels = [(as_fraction(s), int(c)) for s, c in self.levels if int(c) > 0]
        if not self.levels:
            raise ValueError("empty family")
        if any(s <= 0 for s, _ in self.levels):
            raise ValueError("cube sides must be positive")
        top = max(s for s, _ in self.levels)
        if top != 1:
            # Polya's inequality is scale invariant: rescale to largest side 1
            f = 1 / top
            self.levels = [(s * f, c) for s, c in self.levels]
            if self.cubes is not None:
                self.cubes = [Box(tuple(x * f for x in b.sides), tuple(x * f for x in b.origin))
                              for b in self.cubes]
            if self.container is not None:
                b = self.container
                self.container = Box(tuple(x * f for x in b.sides), tuple(x * f for x in b.origin))
            self.tail_bound = float(self.tail_bound * f ** (self.n - 1))
            self.scale = self.scale * f
            msg = f"rescaled by {f} so that the largest side is 1"
            self.notes.append(msg)
            log.info(msg)
        if self.tail_bound < 0 or math.isinf(self.tail_bound):
            raise ValueError("tail bound must be finite and nonnegative")

    @classmethod
    def from_cubes(cls, cubes, container: Box | None = None) -> "CubeFamily":
        cubes = [c if isinstance(c, Box) else Box(*c) for c in cubes]
        if not cubes:
            raise ValueError("empty family")
        if any(not c.is_cube for c in cubes):
            raise ValueError("family members must be cubes")
        counts: dict[Fraction, int] = {}
        for c in cubes:
            counts[c.sides[0]] = counts.get(c.sides[0], 0) + 1
        fam = cls(cubes[0].n, sorted(counts.items(), reverse=True), cubes, container=container)
        check_disjoint(fam.cubes)
        return fam

    @property
    def s_q_exact(self) -> Fraction:
        return sum((c * s ** (self.n - 1) for s, c in self.levels), Fraction(0))

    @property
    def v_q_exact(self) -> Fraction:
        return sum((c * s ** self.n for s, c in self.levels), Fraction(0))

    @property
    def s_q(self) -> float:
        return float(self.s_q_exact)

    @property
    def v_q(self) -> float:
        return float(self.v_q_exact)

    @property
    def s_q_total(self) -> float:
        """s_q plus the tail bound: the value every check uses."""
        return self.s_q + self.tail_bound

    def union(self, other: "CubeFamily") -> "CubeFamily":
        if other.n != self.n:
            raise ValueError("dimension mismatch")
        counts: dict[Fraction, int] = {}
        for s, c in self.levels + other.levels:
            counts[s] = counts.get(s, 0) + c
        cubes = None
        if self.cubes is not None and other.cubes is not None:
            cubes = self.cubes + other.cubes
            check_disjoint(cubes)
        return CubeFamily(self.n, sorted(counts.items(), reverse=True), cubes,
                          self.tail_bound + other.tail_bound)

    def as_dict(self) -> dict:
        return {"n": self.n, "levels": [[str(s), c] for s, c in self.levels],
                "s_q": self.s_q, "v_q": self.v_q, "tail_bound": self.tail_bound,
                "s_q_total": self.s_q_total, "scale": str(self.scale), "notes": self.notes,
                "cubes": None if self.cubes is None else len(self.cubes)}


class OverlapError(ValueError):
    def __init__(self, i: int, j: int):
        super().__init__(f"cubes {i} and {j} overlap")
        self.pair = (i, j)


def check_disjoint(cubes: list[Box]) -> None:
    """Raise OverlapError for the first pair of cubes with intersecting interiors."""
    order = sorted(range(len(cubes)), key=lambda i: cubes[i].lo[0])
    active: list[int] = []
    for i in order:
        a = cubes[i]
        active = [j for j in active if cubes[j].hi[0] > a.lo[0]]
        for j in active:
            b = cubes[j]
            if all(a.lo[k] < b.hi[k] and b.lo[k] < a.hi[k] for k in range(a.n)):
                raise OverlapError(min(i, j), max(i, j))
        active.append(i)


def family_aggregates(f: CubeFamily) -> tuple[float, float]:
    """(s_q, v_q) over the listed cubes; the tail bound is in ``f.tail_bound``."""
    if f.cubes is not None:
        check_disjoint(f.cubes)
    return f.s_q, f.v_q


def _remark_tail(n: int, depth: int) -> float:
    # sum_{k > depth} 2^(k/2) 2^((1-k)(n-1)) = 2^(n-1) r^(depth+1) / (1 - r)
    r = 2.0 ** (0.5 - (n - 1))
    return 2.0 ** (n - 1) * r ** (depth + 1) / (1 - r)


LAYOUT_LIMIT = 200_000


def remark_family(n: int, depth: int, layout: bool | None = None) -> CubeFamily:
    """One unit cube plus 2^floor(k/2) cubes of side 2^(1-k) for 2 <= k <= depth.

    The layout puts the unit cube at [0,1]^n and the level-k cubes in a row
    along the second axis starting at first coordinate 1 + sum_{j<k} 2^(1-j),
    all inside the strip [0,2] x [0,1]^(n-1).
    """
    if depth < 2:
        raise ValueError("depth must be at least 2")
    levels = [(Fraction(1), 1)] + [(Fraction(1, 2 ** (k - 1)), 2 ** (k // 2)) for k in range(2, depth + 1)]
    total = sum(c for _, c in levels)
    if layout is None:
        layout = total <= LAYOUT_LIMIT
    cubes = None
    strip = Box((Fraction(2),) + (Fraction(1),) * (n - 1))
    if layout:
        cubes = [Box((Fraction(1),) * n)]
        x = Fraction(1)
        for side, count in levels[1:]:
            for j in range(count):
                origin = (x, side * j) + (Fraction(0),) * (n - 2)
                cubes.append(Box((side,) * n, origin))
            x += side
    return CubeFamily(n, levels, cubes, _remark_tail(n, depth), container=strip)


def _contained(f: CubeFamily, mar: Box | None) -> Hypothesis:
    name = "family contained in the rectangle"
    if mar is None or f.cubes is None:
        return Hypothesis(name, "assumed", "no coordinates to check")
    ok = all(all(mar.lo[k] <= c.lo[k] and c.hi[k] <= mar.hi[k] for k in range(f.n)) for c in f.cubes)
    return Hypothesis(name, "checked" if ok else "failed", f"{len(f.cubes)} cubes")


def _admissible_hyp(f: CubeFamily) -> Hypothesis:
    if f.cubes is not None:
        check_disjoint(f.cubes)
        return Hypothesis("pairwise disjoint cubes, largest side 1", "checked",
                          f"{len(f.cubes)} cubes, tail bound {f.tail_bound:.3e}")
    return Hypothesis("pairwise disjoint cubes, largest side 1", "assumed",
                      "level description without layout")


def _verdict(claim: str, hyps: list[Hypothesis], lhs: float, threshold: float,
             what: str, data: dict) -> Certificate:
    margin = lhs - threshold
    data = {**data, "lhs": lhs, "threshold": threshold, "margin": margin,
            "relative_margin": margin / threshold if threshold else math.inf}
    if any(h.status == "failed" for h in hyps):
        return Certificate(claim, "inconclusive", hyps, "a hypothesis failed", data=data)
    if margin >= 0:
        return Certificate(claim, "certified", hyps, what, data=data)
    return Certificate(claim, "inconclusive", hyps,
                       f"hypothesis fails: {what} needs {threshold:.12g}, got {lhs:.12g}", data=data)


def check_rectangle_minus_cubes(mar_base_volume: float, f: CubeFamily, n: int | None = None,
                                mar: Box | None = None) -> Certificate:
    """Polya for a rectangle minus the family when |R_(n-1)| >= C2(n-1) (s_q + tail)."""
    n = n or f.n
    if n != f.n:
        raise ValueError("dimension mismatch")
    hyps = [_admissible_hyp(f), _contained(f, mar)]
    thr = c2(n - 1) * f.s_q_total
    return _verdict("admissible_polya", hyps, float(mar_base_volume), thr, "|R_(n-1)| >= C2(n-1) S_Q",
                    {"s_q": f.s_q, "tail_bound": f.tail_bound, "c2": c2(n - 1), "n": n,
                     "check": "rectangle_minus_cubes"})


def check_tiled_minus_cubes(multiplicity: int, mar_base_volume: float, f: CubeFamily,
                            n: int | None = None) -> Certificate:
    """The same check for a domain that M-tiles the rectangle: threshold times M."""
    if isinstance(multiplicity, bool) or int(multiplicity) != multiplicity or multiplicity < 2:
        raise ValueError("M must be an integer >= 2")
    n = n or f.n
    hyps = [_admissible_hyp(f),
            Hypothesis(f"domain {int(multiplicity)}-tiles the rectangle", "assumed"),
            Hypothesis("family contained in the tiling domain", "assumed")]
    thr = c2(n - 1) * int(multiplicity) * f.s_q_total
    return _verdict("admissible_polya", hyps, float(mar_base_volume), thr,
                    "|R_(n-1)| >= C2(n-1) M S_Q",
                    {"s_q": f.s_q, "tail_bound": f.tail_bound, "M": int(multiplicity), "n": n,
                     "check": "tiled_minus_cubes"})


def product_length_threshold(vol_omega0: float, s_q: float, n: int) -> float:
    """Largest admissible length of the interval factor for (Omega_1 minus cubes) x interval."""
    if n < 2:
        raise ValueError("n must be at least 2")
    if s_q <= 0:
        return math.inf
    r = (247 / 256) ** ((n - 2) / 2)
    if n == 2:
        return vol_omega0 / (4 * math.sqrt(2) * math.pi * s_q)
    if n == 3:
        return vol_omega0 / (2 * 3 ** 2.5 * s_q) * r
    a = (n - 3) / 2
    return vol_omega0 / (3 * s_q) * r * beta(a, 2) / (2 * n ** 1.5 * beta(a, 2.5))


def check_product_minus_cubes(vol_omega0: float, s_q: float, len2: float, n: int) -> Certificate:
    """Polya for (Omega_1 minus cubes) x (0, len2) when len2 is below the threshold."""
    thr = product_length_threshold(vol_omega0, s_q, n)
    hyps = [Hypothesis("Omega_1 satisfies Polya's inequality", "assumed"),
            Hypothesis("removed cubes form an admissible family inside Omega_1", "assumed")]
    # certified iff len2 <= thr, i.e. thr - len2 >= 0
    cert = _verdict("admissible_polya", hyps, thr, float(len2), "len2 <= threshold",
                    {"s_q": s_q, "vol_omega0": vol_omega0, "n": n, "check": "product_minus_cubes"})
    cert.data["length_threshold"] = thr
    return cert


def margins(f: CubeFamily, mar_base_volume: float) -> dict:
    n = f.n
    thr = c2(n - 1) * f.s_q_total
    return {"s_q": f.s_q, "tail_bound": f.tail_bound, "s_q_total": f.s_q_total,
            "remark_bound": REMARK_BOUND if n == 2 else None,
            "remark_slack": REMARK_BOUND - f.s_q_total if n == 2 else None,
            "threshold": thr, "mar_base_volume": mar_base_volume,
            "margin": mar_base_volume - thr}
