"""Independent reference computations used to cross-check the fast code paths.

Nothing here shares code with the lattice counters: eigenvalues are
enumerated on a dense float grid and only near-ties are settled with
rationals.
"""
from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .spectra import PI2, Box

TIE_WINDOW = 1e-9


def _grid(box: Box, t_max: float):
    sides = [float(s) for s in box.sides]
    axes = [np.arange(1, int(math.floor(L * math.sqrt(t_max) * (1 + 1e-9))) + 2) for L in sides]
    parts = np.meshgrid(*[(a / L) ** 2 for a, L in zip(axes, sides)], indexing="ij", sparse=True)
    return axes, sum(parts)


def naive_box_values(box: Box, t_max: float) -> np.ndarray:
    """All values sum (a_i/L_i)^2 up to t_max, as floats (dense enumeration)."""
    _, total = _grid(box, t_max)
    return total[total <= t_max].ravel()


def naive_count(box: Box, lam: float, strict: bool = True) -> int:
    t = Fraction(float(lam) / PI2)
    tf = float(t)
    axes, total = _grid(box, tf)
    near = np.abs(total - tf) <= TIE_WINDOW * tf
    count = int(np.sum((total < tf) & ~near))
    for idx in zip(*np.nonzero(near)):
        v = sum(Fraction(int(axes[a][i])) ** 2 / box.sides[a] ** 2 for a, i in enumerate(idx))
        if v < t or (not strict and v == t):
            count += 1
    return count


def naive_count_union(boxes, lam: float, strict: bool = True) -> int:
    return sum(naive_count(b, lam, strict) for b in boxes)


def naive_eigenvalues(box: Box, lam_max: float) -> np.ndarray:
    return np.sort(naive_box_values(box, lam_max / PI2)) * PI2


def interval_riesz_mean(length: float, lam: float, p: float) -> float:
    """sum_k (lam - pi^2 k^2 / L^2)_+^p by direct summation."""
    k = np.arange(1, int(length * math.sqrt(lam) / math.pi) + 2)
    gaps = lam - (math.pi * k / length) ** 2
    gaps = gaps[gaps > 0]
    return float(np.sum(gaps ** p))


def bracketing_lower_count(pieces, lam: float) -> int:
    """Dirichlet bracketing: N of a domain is at least the sum of N over disjoint boxes inside it."""
    return sum(naive_count(b, lam) for b in pieces)


# -- random inputs ---------------------------------------------------------------

def random_side(rng: np.random.Generator, lo: float = 0.3, hi: float = 2.0, den: int = 16) -> Fraction:
    a = int(math.ceil(lo * den))
    b = int(math.floor(hi * den))
    return Fraction(int(rng.integers(a, b + 1)), den)


def random_box(rng: np.random.Generator, n: int, lo: float = 0.3, hi: float = 2.0) -> Box:
    return Box(tuple(random_side(rng, lo, hi) for _ in range(n)))


def random_box_union(rng: np.random.Generator, n: int, k: int, den: int = 8) -> list[Box]:
    """k boxes with disjoint interiors, placed on a coarse rational grid; may touch."""
    boxes: list[Box] = []
    attempts = 0
    while len(boxes) < k and attempts < 500:
        attempts += 1
        sides = tuple(Fraction(int(rng.integers(2, 2 * den + 1)), den) for _ in range(n))
        origin = tuple(Fraction(int(rng.integers(0, 3 * den)), den) for _ in range(n))
        cand = Box(sides, origin)
        if all(any(cand.hi[a] <= b.lo[a] or b.hi[a] <= cand.lo[a] for a in range(n)) for b in boxes):
            boxes.append(cand)
    return boxes


def random_rectilinear(rng: np.random.Generator, n: int, cells: int = 6, grid: int = 4):
    """A random connected polycube union of unit-grid cells scaled by 1/grid, as boxes."""
    from .geometry import RectilinearDomain
    occupied = {(0,) * n}
    while len(occupied) < cells:
        base = list(occupied)[int(rng.integers(len(occupied)))]
        ax = int(rng.integers(n))
        step = 1 if rng.random() < 0.5 else -1
        nb = tuple(c + (step if a == ax else 0) for a, c in enumerate(base))
        if all(0 <= c < grid for c in nb):
            occupied.add(nb)
    size = Fraction(1, grid) * Fraction(int(rng.integers(2, 5)), 2)
    boxes = [Box((size,) * n, tuple(size * c for c in cell)) for cell in sorted(occupied)]
    return RectilinearDomain(boxes, joined=True)
