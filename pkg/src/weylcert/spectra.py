"""Exact Dirichlet spectra of boxes and of disjoint unions of boxes.

The eigenvalues of a box with sides L_1..L_n are pi^2 * sum (a_i/L_i)^2 over
multi-indices a in N^n.  Counting them below lambda is a lattice-point count
in an ellipsoid.  We round lambda once, to t = lambda/pi^2 in double
precision, and from then on every comparison is done in integers: with
L_i = p_i/q_i the quantity sum (a_i/L_i)^2 equals S(a)/P where
S(a) = sum a_i^2 A_i and A_i, P are integers.
"""
from __future__ import annotations

import heapq
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import isqrt

import numpy as np

from ._rational import Number, as_fraction

PI2 = math.pi ** 2
# Callers that want to count "up to and including" a computed eigenvalue should
# pass lam * (1 + TIE_NUDGE) or use strict=False.
TIE_NUDGE = 2.0 ** -40


class NoExactSpectrum(ValueError):
    """The domain is not a disjoint union of boxes, so no exact spectrum exists here."""


class SpectrumTooLarge(RuntimeError):
    def __init__(self, message: str, partial: np.ndarray):
        super().__init__(message)
        self.partial = partial
        self.is_partial = True


@dataclass(frozen=True)
class Box:
    """Open axis-aligned box ``origin + (0, sides)``; coordinates are exact rationals."""

    sides: tuple[Fraction, ...]
    origin: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        sides = tuple(as_fraction(s) for s in self.sides)
        if not sides:
            raise ValueError("a box needs at least one side")
        if any(s <= 0 for s in sides):
            raise ValueError(f"box sides must be positive, got {self.sides}")
        origin = (tuple(Fraction(0) for _ in sides) if self.origin is None
                  else tuple(as_fraction(o) for o in self.origin))
        if len(origin) != len(sides):
            raise ValueError("origin and sides differ in dimension")
        object.__setattr__(self, "sides", sides)
        object.__setattr__(self, "origin", origin)

    @property
    def n(self) -> int:
        return len(self.sides)

    @property
    def lo(self) -> tuple[Fraction, ...]:
        return self.origin

    @property
    def hi(self) -> tuple[Fraction, ...]:
        return tuple(o + s for o, s in zip(self.origin, self.sides))

    @property
    def volume(self) -> Fraction:
        return math.prod(self.sides, start=Fraction(1))

    @property
    def surface(self) -> Fraction:
        v = self.volume
        return sum((2 * v / s for s in self.sides), Fraction(0))

    @property
    def is_cube(self) -> bool:
        return len(set(self.sides)) == 1

    def spectral_components(self) -> list["Box"]:
        return [self]


def interval(length: Number) -> Box:
    return Box((length,))


def cube(side: Number, n: int) -> Box:
    return Box((side,) * n)


@dataclass(frozen=True)
class SpectrumQuery:
    """A counting request; strict counts eigenvalues < lam, otherwise <= lam."""

    lam: float
    strict: bool = True

    def __post_init__(self):
        if not self.lam >= 0 or math.isinf(self.lam):
            raise ValueError(f"lambda must be finite and nonnegative, got {self.lam}")


def components(domain) -> list[Box]:
    """Boxes whose spectra make up the spectrum of ``domain``."""
    if isinstance(domain, Box):
        return [domain]
    if hasattr(domain, "spectral_components"):
        return list(domain.spectral_components())
    if isinstance(domain, Sequence) and domain and all(isinstance(b, Box) for b in domain):
        return list(domain)
    raise NoExactSpectrum(f"no exact spectrum for {type(domain).__name__}")


class BoxLattice:
    """Integer form of the quadratic form sum(a_i / L_i)^2 for one box.

    Axes are reordered so that the largest coefficient comes first; loops then
    run over the shortest sides.
    """

    def __init__(self, box: Box):
        p = [s.numerator for s in box.sides]
        q = [s.denominator for s in box.sides]
        big_p = math.prod(x * x for x in p)
        coeffs = [q[i] ** 2 * (big_p // (p[i] ** 2)) for i in range(len(p))]
        g = math.gcd(big_p, *coeffs)
        self.P = big_p // g
        self.A = sorted((c // g for c in coeffs), reverse=True)
        self.n = len(self.A)
        self.box = box

    def threshold(self, t: Fraction, strict: bool = True) -> int:
        """Largest M with: S <= M  iff  S/P < t (strict) or S/P <= t."""
        num = t.numerator * self.P
        if strict:
            return (num - 1) // t.denominator
        return num // t.denominator

    def count(self, t: Fraction, strict: bool = True) -> int:
        return _count_recursive(self.A, self.threshold(t, strict))

    def values_between(self, lo: Fraction, hi: Fraction) -> list[Fraction]:
        """Exact values S/P lying in [lo, hi), with multiplicity, unsorted."""
        m_lo = self.threshold(lo, strict=True)   # S <= m_lo  <=>  S/P < lo
        m_hi = self.threshold(hi, strict=True)
        out: list[int] = []
        _collect(self.A, m_lo, m_hi, 0, out)
        return [Fraction(s, self.P) for s in out]


def _count_recursive(A: Sequence[int], M: int) -> int:
    """Number of a in N^len(A), a_i >= 1, with sum a_i^2 A_i <= M."""
    if M < sum(A):
        return 0
    if len(A) == 1:
        return isqrt(M // A[0])
    if len(A) == 2:
        return _count_2d_numpy(A[0], A[1], M)
    head, rest = A[0], A[1:]
    floor_rest = sum(rest)
    total = 0
    a = 1
    while a * a * head + floor_rest <= M:
        total += _count_recursive(rest, M - a * a * head)
        a += 1
    return total


def _collect(A: Sequence[int], m_lo: int, m_hi: int, base: int, out: list[int]) -> None:
    """Append base + S(a) for every a with m_lo < base + S(a) <= m_hi."""
    if len(A) == 1:
        c = A[0]
        lo = isqrt(max(m_lo - base, 0) // c)
        while base + lo * lo * c <= m_lo:
            lo += 1
        lo = max(lo, 1)
        hi = isqrt(max(m_hi - base, 0) // c) if m_hi >= base else 0
        out.extend(base + b * b * c for b in range(lo, hi + 1))
        return
    head, rest = A[0], A[1:]
    floor_rest = sum(rest)
    a = 1
    while base + a * a * head + floor_rest <= m_hi:
        _collect(rest, m_lo, m_hi, base + a * a * head, out)
        a += 1


def lambda_to_t(lam: float) -> Fraction:
    """The normalized parameter t = lam/pi^2, rounded once and then kept exact."""
    return Fraction(float(lam) / PI2)


def box_eigenvalue(box: Box, index: Sequence[int]) -> float:
    if len(index) != box.n:
        raise ValueError("multi-index dimension mismatch")
    if any(int(a) != a or a < 1 for a in index):
        raise ValueError(f"multi-index entries must be positive integers, got {index}")
    s = sum(Fraction(int(a)) ** 2 / L ** 2 for a, L in zip(index, box.sides))
    return PI2 * float(s)


def _query(lam) -> SpectrumQuery:
    return lam if isinstance(lam, SpectrumQuery) else SpectrumQuery(float(lam))


def count_exact(domain, lam, strict: bool | None = None) -> int:
    """Number of Dirichlet eigenvalues below ``lam`` (multiplicity counted).

    ``lam`` may be a float or a :class:`SpectrumQuery`; ``strict=False`` counts
    eigenvalues <= lam instead.
    """
    q = _query(lam)
    if strict is None:
        strict = q.strict
    t = lambda_to_t(q.lam)
    return sum(BoxLattice(b).count(t, strict) for b in components(domain))


def count_t(domain, t: Fraction, strict: bool = True) -> int:
    """Same as count_exact but with the normalized parameter t = lam/pi^2 given exactly."""
    return sum(BoxLattice(b).count(t, strict) for b in components(domain))


_INT64_SAFE = 2 ** 60


def count_fast_2d(sides, lam, strict: bool = True) -> int:
    """Vectorized 2D count sum_a #{b >= 1: a^2/L1^2 + b^2/L2^2 < t}.

    ``sides`` is a square side or a pair of sides.  Uses numpy int64 column
    sums with an integer correction step; falls back to the exact recursion
    when the integer form does not fit into 63 bits.
    """
    if isinstance(sides, Box):
        box = sides
    elif np.ndim(sides) == 0:
        box = Box((sides, sides))
    else:
        box = Box(tuple(sides))
    if box.n != 2:
        raise ValueError("count_fast_2d needs a 2D box")
    lat = _lattice_2d(box)
    t = lambda_to_t(_query(lam).lam)
    return _count_2d_numpy(lat.A[0], lat.A[1], lat.threshold(t, strict))


@dataclass
class _Lat2:
    A: tuple[int, int]
    P: int

    def threshold(self, t: Fraction, strict: bool) -> int:
        num = t.numerator * self.P
        return (num - 1) // t.denominator if strict else num // t.denominator


def _lattice_2d(box: Box) -> _Lat2:
    lat = BoxLattice(box)
    return _Lat2((lat.A[0], lat.A[1]), lat.P)


def _count_2d_numpy(a0: int, a1: int, M: int) -> int:
    if M < a0 + a1:
        return 0
    amax = isqrt((M - a1) // a0)
    if M >= _INT64_SAFE or a0 >= 2 ** 28 or a1 >= 2 ** 28 or amax < 24:
        return _count_pairs(a0, a1, M, amax)
    a = np.arange(1, amax + 1, dtype=np.int64)
    rem = M - a * a * a0                      # >= a1 > 0
    x = rem // a1
    b = np.floor(np.sqrt(x.astype(np.float64))).astype(np.int64)
    # integer fix-up: largest b with b*b <= x
    b -= (b * b > x)
    b -= (b * b > x)
    b += ((b + 1) * (b + 1) <= x)
    b += ((b + 1) * (b + 1) <= x)
    return int(b.sum())


def _count_pairs(a0: int, a1: int, M: int, amax: int) -> int:
    return sum(isqrt((M - a * a * a0) // a1) for a in range(1, amax + 1))


def _values_sorted(domain, lo: Fraction, hi: Fraction) -> list[Fraction]:
    vals: list[Fraction] = []
    for b in components(domain):
        vals.extend(BoxLattice(b).values_between(lo, hi))
    vals.sort()
    return vals


def eigenvalues_t(domain, t_lo: Fraction, t_hi: Fraction) -> list[Fraction]:
    """Exact normalized eigenvalues lam/pi^2 in [t_lo, t_hi), sorted, with multiplicity."""
    return _values_sorted(domain, Fraction(t_lo), Fraction(t_hi))


def eigenvalues(domain, lam_max: float, max_count: int = 5_000_000) -> np.ndarray:
    """Sorted eigenvalues below ``lam_max`` as doubles.

    Raises :class:`SpectrumTooLarge` (with the smallest ``max_count`` values
    attached) if there are more than ``max_count`` of them.
    """
    total = count_exact(domain, lam_max)
    blocks = []
    got = 0
    for block in eigenvalue_stream(domain, lam_max):
        blocks.append(block)
        got += block.size
        if got > max_count:
            partial = np.concatenate(blocks)[:max_count]
            raise SpectrumTooLarge(
                f"{total} eigenvalues below {lam_max} exceed the cap {max_count}", partial)
    return np.concatenate(blocks) if blocks else np.empty(0)


@dataclass
class EigenvalueStream:
    """Blockwise generator of the sorted spectrum below ``lam_cap``.

    Each block covers a window of t = lam/pi^2 and holds about ``block_size``
    eigenvalues.
    """

    domain: object
    lam_cap: float
    block_size: int = 200_000
    _boxes: list[Box] = field(init=False, repr=False)

    def __post_init__(self):
        self._boxes = components(self.domain)

    @cached_property
    def _volume(self) -> float:
        return float(sum(b.volume for b in self._boxes))

    def __iter__(self) -> Iterator[np.ndarray]:
        n = self._boxes[0].n
        t_cap = lambda_to_t(self.lam_cap)
        from .constants import unit_ball_volume
        # Weyl density in t: N ~ vol * omega(n) t^(n/2) / 2^n
        dens = self._volume * unit_ball_volume(n) / 2 ** n
        t_lo = Fraction(0)
        while t_lo < t_cap:
            cur = float(t_lo)
            target = (max(dens * cur ** (n / 2), 0.0) + self.block_size) / dens
            t_hi = min(t_cap, Fraction(max(target ** (2 / n), cur * 1.0001 + 1e-9)))
            vals = _values_sorted(self._boxes, t_lo, t_hi)
            if vals:
                arr = np.fromiter((float(v) for v in vals), dtype=np.float64, count=len(vals))
                yield arr * PI2
            t_lo = t_hi


def eigenvalue_stream(domain, lam_cap: float, block_size: int = 200_000) -> Iterator[np.ndarray]:
    return iter(EigenvalueStream(domain, lam_cap, block_size))


def riesz_mean_exact(domain, lam: float, p: float) -> float:
    """sum over eigenvalues lam_k < lam of (lam - lam_k)^p; p = 0 gives the count."""
    if p < 0:
        raise ValueError("Riesz exponent must be nonnegative")
    if p == 0:
        return float(count_exact(domain, lam))
    t = lambda_to_t(lam)
    total = 0.0
    for b in components(domain):
        vals = BoxLattice(b).values_between(Fraction(0), t)
        if vals:
            arr = np.fromiter((float(v) for v in vals), dtype=np.float64, count=len(vals))
            total += float(np.sum((float(t) - arr) ** p)) * PI2 ** p
    return total


def first_eigenvalue(domain) -> float:
    return min(PI2 * float(sum(1 / L ** 2 for L in b.sides)) for b in components(domain))


def first_eigenvalue_t(domain) -> Fraction:
    return min(sum((1 / L ** 2 for L in b.sides), Fraction(0)) for b in components(domain))


def k_smallest_t(domain, k: int) -> list[Fraction]:
    """The k smallest normalized eigenvalues, exact (used for small-k checks)."""
    hi = first_eigenvalue_t(domain) * 2
    while count_t(domain, hi) < k:
        hi *= 2
    return heapq.nsmallest(k, _values_sorted(domain, Fraction(0), hi))
