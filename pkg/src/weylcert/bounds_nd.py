"""Multidimensional counting-function bounds.

Upper bounds for product domains Omega_1 x (interval), the k0 threshold up to
which the upper bound already implies Polya's inequality, lower bounds for
cubes and rectangles, and the Berezin-Li-Yau baselines.  All bounds refer to
the strict counting function N(lam) = #{k : lam_k < lam}.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .bounds1d import riesz_half_lower_interval
from .constants import c1, unit_ball_volume, weyl_constant
from .spectra import count_exact, interval

ALL_K = math.inf
"""Sentinel from k0_threshold: the inequality holds for every eigenvalue."""


@dataclass(frozen=True)
class BoundValue:
    """A bound on N(lam) together with where it comes from."""

    value: float
    direction: str
    theorem: str
    validity_lo: float = 0.0
    hypotheses: tuple[str, ...] = ()
    valid: bool = True
    note: str = ""
    extra: dict = field(default_factory=dict, compare=False)

    def __float__(self) -> float:
        return self.value

    def as_dict(self) -> dict:
        return {"value": self.value, "direction": self.direction, "theorem": self.theorem,
                "valid": self.valid, "validity_lo": self.validity_lo,
                "hypotheses": list(self.hypotheses), "note": self.note, **self.extra}


def _lam(lam: float) -> float:
    lam = float(lam)
    if not lam >= 0 or math.isinf(lam):
        raise ValueError(f"lambda must be finite and nonnegative, got {lam}")
    return lam


def _out(direction: str, tag: str, lo: float, why: str, hyp=()) -> BoundValue:
    return BoundValue(math.nan, direction, tag, lo, tuple(hyp), valid=False, note=why)


POLYA_FACTOR = "base factor satisfies Polya's inequality"


def product_count_upper(vol1: float, n1: int, len2: float, lam: float,
                        factor_polya: str = "assumed") -> BoundValue:
    """Upper bound on N for Omega_1 x (0, len2), Omega_1 of dimension n1 with volume vol1."""
    lam = _lam(lam)
    n = n1 + 1
    lead = vol1 * len2 * weyl_constant(n) * lam ** (n / 2)
    factor = max(1 - c1(n1) / (len2 * math.sqrt(lam)), 0.0) if lam > 0 else 0.0
    return BoundValue(lead * factor, "upper", "product_upper", 0.0,
                      (f"{POLYA_FACTOR} ({factor_polya})",))


def k0_threshold(vol_omega: float, vol1: float, n1: int, len2: float) -> float:
    """Index up to which Polya's inequality follows from the product upper bound.

    Omega sits inside Omega_1 x (0, len2).  Returns an int, or ALL_K when Omega
    fills the product.
    """
    full = vol1 * len2
    if vol_omega > full:
        raise ValueError("vol_omega cannot exceed vol1 * len2")
    if vol_omega <= 0:
        raise ValueError("vol_omega must be positive")
    if vol_omega == full:
        return ALL_K
    n = n1 + 1
    inner = c1(n1) / ((1 - vol_omega / full) * len2)
    val = vol_omega * weyl_constant(n) * inner ** n
    k = math.floor(val)
    if abs(val - round(val)) < 1e-9 * max(1.0, val):
        k = _floor_high_precision(vol_omega, vol1, n1, len2)
    return k


def _floor_high_precision(vol_omega, vol1, n1, len2) -> int:
    import mpmath
    with mpmath.workdps(60):
        n = n1 + 1
        om = mpmath.pi ** (mpmath.mpf(n) / 2) / mpmath.gamma(1 + mpmath.mpf(n) / 2)
        full = mpmath.mpf(vol1) * len2
        val = (mpmath.mpf(vol_omega) * om / (2 * mpmath.pi) ** n
               * (mpmath.mpf(c1(n1)) / ((1 - vol_omega / full) * len2)) ** n)
        return int(mpmath.floor(val))


def cube_count_lower(side: float, n: int, lam: float, with_constant: bool = False) -> BoundValue:
    """Lower bound on N for a cube of the given side in R^n, n >= 2."""
    lam = _lam(lam)
    if n < 2:
        raise ValueError("cube_count_lower needs n >= 2")
    root = math.sqrt(lam)
    if n == 2:
        value = side ** 2 / (4 * math.pi) * lam - math.sqrt(2) * side / 2 * root
        bonus, lo = math.pi / 2, 2 * math.pi ** 2 / side ** 2
    elif n == 3:
        value = side ** 3 / (6 * math.pi ** 2) * lam ** 1.5 - math.sqrt(3) * side ** 2 / (2 * math.pi) * lam
        bonus, lo = 1.0, 3 * math.pi ** 2 / side ** 2
    else:
        w = weyl_constant(n)
        value = (w * side ** n * lam ** (n / 2)
                 - w * n ** 1.5 * math.pi * side ** (n - 1) * lam ** ((n - 1) / 2))
        bonus, lo = 2 ** n * math.pi ** (n / 2), n ** 3 * math.pi ** 2 / side ** 2
    tag = f"cube_lower_{'const' if with_constant else 'plain'}"
    if not with_constant:
        return BoundValue(value, "lower", tag, 0.0)
    if lam <= lo:
        return _out("lower", tag, lo, "additive constant asserted only above its threshold")
    return BoundValue(value + bonus, "lower", tag, lo)


def rect_count_lower_2d(len1: float, len2: float, lam: float) -> BoundValue:
    """Lower bound on N for the rectangle (0, len1) x (0, len2)."""
    lam = _lam(lam)
    lo = math.pi ** 2 / len2 ** 2
    half = riesz_half_lower_interval(len2, lam)
    if not half.valid:
        return _out("lower", "rect_lower", lo, half.note)
    value = len1 / math.pi * half.value - count_exact(interval(len2), lam)
    return BoundValue(value, "lower", "rect_lower", lo)


def bly_count_upper(vol: float, n: int, lam: float) -> BoundValue:
    lam = _lam(lam)
    value = ((n + 2) / n) ** (n / 2) * vol * weyl_constant(n) * lam ** (n / 2)
    return BoundValue(value, "upper", "bly_upper", 0.0)


def bly_sum_lower(vol: float, n: int, k: int) -> float:
    """Lower bound for lam_1 + ... + lam_k."""
    if k < 1:
        raise ValueError("k must be at least 1")
    om = unit_ball_volume(n)
    return (2 * math.pi) ** 2 / (vol ** (2 / n) * om ** (2 / n)) * (n / (n + 2)) * k ** ((n + 2) / n)


IMPROVED_2D_LAMBDA = 33.0
# the 2D improvement needs len2 * sqrt(lam) >= 16 pi / 9 (automatic for len2 >= 1, lam > 33)
IMPROVED_2D_SCALE = 16 * math.pi / 9
IMPROVED_3D_LAMBDA = 61.0


def product_count_upper_2d_improved(vol1: float, len2: float, lam: float,
                                    factor_polya: str = "assumed") -> BoundValue:
    """Sharper upper bound for (interval of length vol1) x (0, len2)."""
    lam = _lam(lam)
    tag = "product_upper_2d"
    hyp = (f"{POLYA_FACTOR} ({factor_polya})",)
    if lam <= IMPROVED_2D_LAMBDA:
        return _out("upper", tag, IMPROVED_2D_LAMBDA, "asserted only for lambda > 33", hyp)
    if len2 * math.sqrt(lam) < IMPROVED_2D_SCALE:
        return _out("upper", tag, (IMPROVED_2D_SCALE / len2) ** 2,
                    "asserted only for len2*sqrt(lambda) >= 16*pi/9", hyp)
    value = vol1 * len2 / (4 * math.pi) * lam * (1 - 1 / (len2 * math.sqrt(lam)))
    return BoundValue(value, "upper", tag, IMPROVED_2D_LAMBDA, hyp)


def product_count_upper_3d_improved(vol1: float, len2: float, lam: float,
                                    factor_polya: str = "assumed") -> BoundValue:
    """Sharper upper bound for (planar domain of area vol1) x (0, len2)."""
    lam = _lam(lam)
    tag = "product_upper_3d"
    hyp = (f"{POLYA_FACTOR} ({factor_polya})", "len2 >= 1")
    if lam <= IMPROVED_3D_LAMBDA:
        return _out("upper", tag, IMPROVED_3D_LAMBDA, "asserted only for lambda > 61", hyp)
    if len2 < 1:
        return _out("upper", tag, IMPROVED_3D_LAMBDA, "asserted only for len2 >= 1", hyp)
    value = vol1 * len2 * weyl_constant(3) * lam ** 1.5 * (1 - math.pi / (3 * len2 * math.sqrt(lam)))
    return BoundValue(value, "upper", tag, IMPROVED_3D_LAMBDA, hyp)


def box_product_bounds(sides, lam: float) -> list[BoundValue]:
    """Every applicable upper bound for a box read as (n-1)-box x last side."""
    sides = [float(s) for s in sides]
    n = len(sides)
    vol1 = math.prod(sides[:-1])
    out = [product_count_upper(vol1, n - 1, sides[-1], lam, "checked: boxes tile"),
           bly_count_upper(math.prod(sides), n, lam)]
    if n == 2:
        out.append(product_count_upper_2d_improved(vol1, sides[-1], lam, "checked: boxes tile"))
    if n == 3:
        out.append(product_count_upper_3d_improved(vol1, sides[-1], lam, "checked: boxes tile"))
    return out
