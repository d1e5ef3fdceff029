"""Dimensional constants used by the counting-function bounds.

Every constant is available as a double and, where a closed form exists,
as an :class:`Exact` value of the shape ``coeff * pi**a * sqrt(r)`` with
rational ``coeff``, ``a`` and ``r``.  Beta and Gamma values at integers and
half-integers go through the exact table; other arguments fall back to
``math.lgamma``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from ._rational import as_fraction, fraction_str


def _square_part(m: int) -> tuple[int, int]:
    """Split m = s*s*r with r squarefree (trial division, fine for our sizes)."""
    s, r, d = 1, 1, 2
    while d * d <= m:
        e = 0
        while m % d == 0:
            m //= d
            e += 1
        s *= d ** (e // 2)
        if e % 2:
            r *= d
        d += 1
    return s, r * m


@dataclass(frozen=True)
class Exact:
    """The real number ``coeff * pi**pi_pow * sqrt(radicand)``."""

    coeff: Fraction
    pi_pow: Fraction = Fraction(0)
    radicand: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coeff", Fraction(self.coeff))
        object.__setattr__(self, "pi_pow", Fraction(self.pi_pow))
        if self.radicand < 1:
            raise ValueError("radicand must be a positive integer")
        s, r = _square_part(int(self.radicand))
        object.__setattr__(self, "coeff", self.coeff * s)
        object.__setattr__(self, "radicand", r)

    @classmethod
    def sqrt(cls, q) -> "Exact":
        q = as_fraction(q)
        # sqrt(p/d) = sqrt(p*d)/d
        return cls(Fraction(1, q.denominator), 0, q.numerator * q.denominator)

    def __mul__(self, other):
        if not isinstance(other, Exact):
            other = Exact(as_fraction(other))
        return Exact(self.coeff * other.coeff, self.pi_pow + other.pi_pow,
                     self.radicand * other.radicand)

    __rmul__ = __mul__

    def inverse(self) -> "Exact":
        return Exact(1 / (self.coeff * self.radicand), -self.pi_pow, self.radicand)

    def __truediv__(self, other):
        if not isinstance(other, Exact):
            other = Exact(as_fraction(other))
        return self * other.inverse()

    def __rtruediv__(self, other):
        return Exact(as_fraction(other)) * self.inverse()

    def __pow__(self, k: int) -> "Exact":
        if not isinstance(k, int):
            raise TypeError("only integer powers are exact")
        if k < 0:
            return self.inverse() ** (-k)
        out = Exact(Fraction(1))
        for _ in range(k):
            out = out * self
        return out

    def __float__(self) -> float:
        return float(self.coeff) * math.pi ** float(self.pi_pow) * math.sqrt(self.radicand)

    def __str__(self) -> str:
        parts = [fraction_str(self.coeff)]
        if self.pi_pow:
            parts.append("pi" if self.pi_pow == 1 else f"pi^({fraction_str(self.pi_pow)})")
        if self.radicand != 1:
            parts.append(f"sqrt({self.radicand})")
        return "*".join(parts)


def _half_integer(x) -> Fraction | None:
    try:
        q = as_fraction(x)
    except (TypeError, ValueError):
        return None
    return q if q.denominator in (1, 2) else None


def gamma_exact(x) -> Exact:
    """Gamma at a positive integer or half-integer."""
    q = _half_integer(x)
    if q is None or q <= 0:
        raise ValueError(f"no closed form for Gamma({x})")
    if q.denominator == 1:
        return Exact(Fraction(math.factorial(int(q) - 1)))
    k = int(q - Fraction(1, 2))
    # Gamma(k + 1/2) = (2k)! / (4^k k!) sqrt(pi)
    return Exact(Fraction(math.factorial(2 * k), 4 ** k * math.factorial(k)), Fraction(1, 2))


def beta_exact(a, b) -> Exact:
    return gamma_exact(a) * gamma_exact(b) / gamma_exact(as_fraction(a) + as_fraction(b))


def gamma(x: float) -> float:
    if _half_integer(x) is not None and x > 0:
        return float(gamma_exact(x))
    return math.gamma(x)


def beta(a: float, b: float) -> float:
    """Euler Beta function for positive arguments."""
    if a <= 0 or b <= 0:
        raise ValueError("Beta needs positive arguments")
    if _half_integer(a) is not None and _half_integer(b) is not None:
        return float(beta_exact(a, b))
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


def _check_dim(n: int) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n!r}")
    return int(n)


@lru_cache(maxsize=None)
def unit_ball_volume_exact(n: int) -> Exact:
    n = _check_dim(n)
    return Exact(Fraction(1), Fraction(n, 2)) / gamma_exact(1 + Fraction(n, 2))


def unit_ball_volume(n: int) -> float:
    """omega(n) = pi^(n/2) / Gamma(1 + n/2)."""
    return float(unit_ball_volume_exact(n))


def weyl_constant(n: int) -> float:
    """omega(n) / (2 pi)^n, the coefficient of |Omega| lambda^(n/2) in Weyl's law."""
    return unit_ball_volume(n) / (2 * math.pi) ** n


_R = Fraction(247, 256)


def _ratio_power(half_exp: int, base: Fraction = _R) -> Exact:
    """base^(half_exp/2) as an exact value (half_exp may be negative)."""
    if half_exp < 0:
        return _ratio_power(-half_exp, base).inverse()
    out = Exact(base ** (half_exp // 2))
    if half_exp % 2:
        out = out * Exact.sqrt(base)
    return out


@lru_cache(maxsize=None)
def c1_exact(n: int) -> Exact:
    n = _check_dim(n)
    if n == 1:
        return Exact(Fraction(2, 3))
    if n == 2:
        return Exact(Fraction(3, 16), 1)
    a = Fraction(n, 2) - 1
    ratio = beta_exact(a, 2) / beta_exact(a, Fraction(5, 2))
    if n in (3, 4):
        return Exact(Fraction(1, 6), 1) * ratio
    return Exact(Fraction(3, 16), 1) * ratio * _ratio_power(n - 2)


def c1(n: int) -> float:
    """Second-term coefficient of the product-domain counting bound."""
    return float(c1_exact(n))


@lru_cache(maxsize=None)
def c2_exact(n: int) -> Exact:
    n = _check_dim(n)
    if n == 1:
        return Exact(Fraction(2), 1, 2)
    if n == 2:
        return Exact(Fraction(9), 0, 3)
    a = Fraction(n, 2) - 1
    ratio = beta_exact(a, Fraction(5, 2)) / beta_exact(a, 2)
    scale = Exact(Fraction(n + 1), 0, n + 1)  # (n+1)^(3/2)
    if n in (3, 4):
        return Exact(Fraction(6)) * scale * ratio
    return Exact(Fraction(16, 3)) * scale * ratio * _ratio_power(-(n - 2))


def c2(n: int) -> float:
    """Admissible-family threshold constant."""
    return float(c2_exact(n))


def c3(p: float) -> float:
    """Constant of the Riesz-p upper bound for p >= 1."""
    if p < 1:
        raise ValueError(f"c3 needs p >= 1, got {p}")
    if p == 1:
        return 1 / 8
    if p <= 2:
        return 1 / 9
    return (1 / 8) * (247 / 256) ** (p - 1)


def c3_exact(p) -> Exact:
    q = _half_integer(p)
    if q is None:
        raise ValueError("exact c3 needs an integer or half-integer p")
    if q < 1:
        raise ValueError(f"c3 needs p >= 1, got {p}")
    if q == 1:
        return Exact(Fraction(1, 8))
    if q <= 2:
        return Exact(Fraction(1, 9))
    return Exact(Fraction(1, 8)) * _ratio_power(int(2 * (q - 1)))


@dataclass(frozen=True)
class DimConstants:
    n: int
    omega: float
    c1: float
    c2: float
    c3_half_n: float | None

    def as_dict(self) -> dict:
        return {"n": self.n, "omega": self.omega, "c1": self.c1, "c2": self.c2,
                "c3_half_n": self.c3_half_n}


def dim_constants(n: int) -> DimConstants:
    n = _check_dim(n)
    return DimConstants(n, unit_ball_volume(n), c1(n), c2(n), c3(n / 2) if n >= 2 else None)
