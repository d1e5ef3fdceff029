"""Closed-form Riesz-mean bounds for the Dirichlet spectrum of an interval.

For an interval of length L the eigenvalues are pi^2 k^2 / L^2.  The
functions below bound sum_{lam_k < lam} (lam - lam_k)^p for p = 1, 1/2 and
p > 1.  Each returns a :class:`RieszBound1D`; outside a formula's validity
window the result has ``valid=False`` and ``value=nan`` unless the exact
answer is known to be 0 there.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import beta, c3

FLOOR_GUARD = 2.0 ** -40


@dataclass(frozen=True)
class RieszBound1D:
    value: float
    direction: str
    p: float
    validity_lo: float
    tag: str
    valid: bool = True
    note: str = ""

    def __float__(self) -> float:
        return self.value

    def as_dict(self) -> dict:
        return {"value": self.value, "direction": self.direction, "theorem": self.tag,
                "valid": self.valid, "p": self.p, "validity_lo": self.validity_lo,
                "note": self.note}


def _check(length: float, lam: float) -> None:
    if not length > 0:
        raise ValueError(f"interval length must be positive, got {length}")
    if not lam >= 0 or math.isinf(lam):
        raise ValueError(f"lambda must be finite and nonnegative, got {lam}")


def floor_candidates(x: float) -> tuple[int, ...]:
    """floor(x), or both neighbours when x is within 2^-40 of an integer."""
    m = round(x)
    if abs(x - m) <= FLOOR_GUARD * max(1.0, abs(x)):
        return (m - 1, m)
    return (math.floor(x),)


def _first(length: float) -> float:
    return math.pi ** 2 / length ** 2


def _invalid(p: float, direction: str, lo: float, tag: str, why: str) -> RieszBound1D:
    return RieszBound1D(math.nan, direction, p, lo, tag, valid=False, note=why)


def riesz1_upper(length: float, lam: float) -> RieszBound1D:
    """Upper bound for sum (lam - lam_k)."""
    _check(length, lam)
    lo = _first(length)
    tag = "riesz1_upper"
    if lam <= lo:
        return RieszBound1D(0.0, "upper", 1.0, 0.0, tag, note="no eigenvalues below lambda")
    root = math.sqrt(lam)
    x = length * root / math.pi
    lead = 2 * length / (3 * math.pi) * lam ** 1.5
    first = max(1 - 3 * math.pi / (16 * length * root), 0.0)
    # smaller k gives the larger (weaker) value
    k = min(floor_candidates(x))
    second = 1 - (k / x) ** 2 * (3 * math.pi / (4 * length * root))
    return RieszBound1D(lead * min(first, second), "upper", 1.0, 0.0, tag)


def riesz_half_upper(length: float, lam: float) -> RieszBound1D:
    """Upper bound for sum (lam - lam_k)^(1/2), the sharper middle expression."""
    _check(length, lam)
    lo = _first(length)
    tag = "riesz_half_upper"
    if lam <= lo:
        return _invalid(0.5, "upper", lo, tag, "asserted only above the first eigenvalue")
    root = math.sqrt(lam)
    k = max(floor_candidates(length * root / math.pi))
    value = length * lam / 4 - root / 2 + math.sqrt(6) * math.pi / (9 * length) * math.sqrt(k + 0.5)
    return RieszBound1D(value, "upper", 0.5, lo, tag)


def riesz_half_upper_envelope(length: float, lam: float) -> RieszBound1D:
    """The simpler form (L/4) lam (1 - 2/(3 L sqrt(lam))) of the same bound."""
    _check(length, lam)
    lo = _first(length)
    tag = "riesz_half_upper_envelope"
    if lam <= lo:
        return _invalid(0.5, "upper", lo, tag, "asserted only above the first eigenvalue")
    value = length * lam / 4 * (1 - 2 / (3 * length * math.sqrt(lam)))
    return RieszBound1D(value, "upper", 0.5, lo, tag)


def riesz_half_lower_interval(length: float, lam: float) -> RieszBound1D:
    """Lower bound for sum (lam - lam_k)^(1/2) on a connected interval."""
    _check(length, lam)
    lo = _first(length)
    tag = "riesz_half_lower"
    if lam <= lo:
        return _invalid(0.5, "lower", lo, tag, "asserted only above the first eigenvalue")
    # (L/4) lam (1 - 2 pi/(L sqrt lam) + pi^2/(L^2 lam)) = (L/4)(sqrt lam - pi/L)^2
    value = length / 4 * (math.sqrt(lam) - math.pi / length) ** 2
    return RieszBound1D(value, "lower", 0.5, lo, tag)


def riesz_p_upper(length: float, lam: float, p: float) -> RieszBound1D:
    """Upper bound for sum (lam - lam_k)^p with p > 1."""
    _check(length, lam)
    if not p > 1:
        raise ValueError(f"riesz_p_upper needs p > 1, got {p}")
    lo = _first(length)
    tag = "riesz_p_upper"
    if lam <= lo:
        return _invalid(p, "upper", lo, tag, "asserted only above the first eigenvalue")
    value = (2 * length / (3 * math.pi * beta(p - 1, 2)) * lam ** (p + 0.5) * beta(p - 1, 2.5)
             - c3(p) * lam ** p)
    return RieszBound1D(value, "upper", p, lo, tag)

