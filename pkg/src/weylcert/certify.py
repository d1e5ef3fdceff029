"""Uniform Weyl-remainder bounds, the epsilon-loss threshold and the certifier.

The certifier reduces the epsilon-loss Polya inequality
``k <= (1+eps) |Omega| omega(n) / (2 pi)^n lambda_k^(n/2)`` to a finite
computation: above the threshold Lambda(eps, Omega) the inequality is a
theorem, and below it we compare exact lattice counts with the Weyl term on
adaptively chosen intervals.  All work happens in the normalized parameter
t = lambda / pi^2, in which the Weyl term reads |Omega| omega(n) t^(n/2) / 2^n.
"""
from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from ._rational import Number, as_fraction
from .bounds_nd import BoundValue, cube_count_lower
from .constants import c1, gamma, unit_ball_volume, weyl_constant
from .geometry import DomainMetrics, RectilinearDomain, as_domain, metrics, whitney
from .spectra import (Box, NoExactSpectrum, count_t, eigenvalues_t, first_eigenvalue_t)

PI2 = math.pi ** 2
LOG_SCALE = 10 / math.pi


def _positive(lam: float) -> float:
    lam = float(lam)
    if not lam > 0 or math.isinf(lam):
        raise ValueError(f"lambda must be positive and finite, got {lam}")
    return lam


@dataclass(frozen=True)
class RemainderBound:
    """Weyl main term plus a signed lower-order correction."""

    lam: float
    weyl_main: float
    correction: float
    direction: str
    theorem: str
    coefficient: float = 0.0
    hypotheses: tuple[str, ...] = ()

    @property
    def value(self) -> float:
        return self.weyl_main + self.correction

    def __float__(self) -> float:
        return self.value

    def as_dict(self) -> dict:
        return {"lambda": self.lam, "value": self.value, "weyl_main": self.weyl_main,
                "correction": self.correction, "coefficient": self.coefficient,
                "direction": self.direction, "theorem": self.theorem,
                "hypotheses": list(self.hypotheses)}


def weyl_main(volume: float, n: int, lam: float) -> float:
    return volume * weyl_constant(n) * lam ** (n / 2)


def _log_term(n: int, width: float, lam: float) -> float:
    arg = LOG_SCALE * width * math.sqrt(lam)
    if arg <= 1:
        raise ValueError("log argument <= 1: lambda is below the first eigenvalue of the mar")
    return 5 * n * n * math.pi * math.log2(arg)


def _ratio(r: float, width: float, mode: str) -> float:
    if mode == "half":
        return 0.5
    if mode != "actual":
        raise ValueError("ratio mode must be 'actual' or 'half'")
    return min(r / width, 0.5)


def remainder_upper_lipschitz(m: DomainMetrics, m_complement: DomainMetrics, lam: float,
                              ratio: str = "actual") -> RemainderBound:
    """Upper bound on N (equivalently on k at lam = lam_k) from the complement in the mar."""
    lam = _positive(lam)
    n = m.n
    base = c1(n - 1) * m.mar_base_volume
    if m_complement.empty or m_complement.surface == 0:
        coef = -base
    else:
        r = _ratio(m_complement.r_in_conservative, m.width, ratio)
        coef = m.c_lip * m_complement.surface * (math.pi * r + _log_term(n, m.width, lam)) - base
    return RemainderBound(lam, weyl_main(m.volume, n, lam),
                          coef * weyl_constant(n) * lam ** ((n - 1) / 2),
                          "upper", "uniform_upper_lipschitz", coef)


def remainder_lower_lipschitz(m: DomainMetrics, lam: float, ratio: str = "actual") -> RemainderBound:
    lam = _positive(lam)
    n = m.n
    r = _ratio(m.r_in_conservative, m.width, ratio)
    coef = m.c_lip * m.surface * (math.pi * r + _log_term(n, m.width, lam))
    return RemainderBound(lam, weyl_main(m.volume, n, lam),
                          -coef * weyl_constant(n) * lam ** ((n - 1) / 2),
                          "lower", "uniform_lower_lipschitz", -coef)


def remainder_bounds_convex(m: DomainMetrics, m_complement: DomainMetrics | None, lam: float,
                            ratio: str = "actual") -> tuple[RemainderBound, RemainderBound]:
    """Both bounds with the convex constants; convexity is a caller assertion."""
    lam = _positive(lam)
    n = m.n
    hyp = ("domain is convex (checked)" if m.convex else "domain is convex (assumed)",)
    off = m.mar_boundary_off_domain
    if off is None:
        off = m.mar_surface  # the whole mar boundary is a safe over-estimate
    base = c1(n - 1) * m.mar_base_volume
    if off == 0:
        up_coef = -base
    else:
        rc = 0.5 if m_complement is None or m_complement.empty else \
            _ratio(m_complement.r_in_conservative, m.width, ratio)
        up_coef = off * (math.pi * rc + _log_term(n, m.width, lam)) - base
    lo_coef = m.surface * (math.pi * _ratio(m.r_in_conservative, m.width, ratio)
                           + _log_term(n, m.width, lam))
    scale = weyl_constant(n) * lam ** ((n - 1) / 2)
    main = weyl_main(m.volume, n, lam)
    return (RemainderBound(lam, main, -lo_coef * scale, "lower", "uniform_lower_convex", -lo_coef, hyp),
            RemainderBound(lam, main, up_coef * scale, "upper", "uniform_upper_convex", up_coef, hyp))


# -- Whitney-assembled lower bounds ------------------------------------------

MAX_DEPTH = {2: 14, 3: 9}


def whitney_count_lower(domain, lam: float, eps: float | None = None,
                        m: DomainMetrics | None = None) -> tuple[BoundValue, BoundValue]:
    """(closed form, constructive) lower bounds on N(lam) from the Whitney cubes.

    The closed form uses only metrics; the constructive bound sums
    max(0, cube lower bound) over the actual cubes of side > 2^-k_eps.
    """
    dom = as_domain(domain)
    lam = _positive(lam)
    m = m or metrics(dom)
    n = m.n
    r_lo, r_up = m.r_in, m.r_in_conservative
    if eps is None:
        if lam <= PI2 / m.width ** 2:
            zero = BoundValue(0.0, "lower", "whitney_lower_closed", 0.0,
                              note="lambda below the first eigenvalue of the mar: N = 0")
            return zero, BoundValue(0.0, "lower", "whitney_lower_constructive", 0.0, note=zero.note)
        eps = math.pi * r_lo / (m.width * math.sqrt(lam))
    eps = float(eps)
    if not 0 < eps < r_lo:
        raise ValueError(f"eps must lie in (0, r_in) = (0, {r_lo})")
    scale = m.c_lip * m.surface * weyl_constant(n) * lam ** ((n - 1) / 2)
    closed = weyl_main(m.volume, n, lam) - scale * (
        eps * math.sqrt(lam) + 5 * n * n * math.pi * math.log2(10 * r_up / eps))
    closed_b = BoundValue(closed, "lower", "whitney_lower_closed", 0.0,
                          extra={"epsilon": eps})

    k_eps = math.ceil(math.log2(5 * math.sqrt(n) / eps))
    min_side = max(2.0 ** -k_eps, n ** 1.5 * math.pi / math.sqrt(lam))  # smaller cubes add 0
    base = float(max(dom.bounding_box.sides))
    depth = max(0, math.ceil(math.log2(base / min_side)))
    depth = min(depth, MAX_DEPTH.get(n, 6))
    fam = whitney(dom, depth=depth)
    total = 0.0
    sides = fam.sides()
    for k in np.unique(fam.gen):
        side = float(fam.side(int(k)))
        if side <= 2.0 ** -k_eps:
            continue
        per = cube_count_lower(side, n, lam).value
        if per > 0:
            total += per * int(np.sum(fam.gen == k))
    cons = BoundValue(total, "lower", "whitney_lower_constructive", 0.0,
                      extra={"epsilon": eps, "depth": depth, "cubes": int(sides.size)})
    return closed_b, cons


# -- epsilon-loss threshold ---------------------------------------------------

@dataclass(frozen=True)
class EpsilonLossSolution:
    epsilon: float
    capital_lambda: float
    residual: float
    convex_variant: bool
    iterations: int = 0
    status: str = "ok"
    note: str = ""

    def as_dict(self) -> dict:
        return {"epsilon": self.epsilon, "capital_lambda": self.capital_lambda,
                "residual": self.residual, "convex_variant": self.convex_variant,
                "iterations": self.iterations, "status": self.status, "note": self.note}


def epsilon_loss_function(m: DomainMetrics, cap: float, convex: bool = False) -> float:
    """Left-hand side f(Lambda) of the threshold equation f(Lambda) = eps."""
    n = m.n
    root = math.sqrt(cap)
    geo = 2 * n * m.diameter ** (n - 1)
    if not convex:
        geo = (geo + m.surface) * m.c_lip
    return geo / (m.volume * root) * (math.pi / 2 + 5 * n * n * math.pi
                                      * math.log2(LOG_SCALE * m.width * root))


def lambda_epsilon(m: DomainMetrics, eps: float, convex: bool = False,
                   rel_tol: float = 1e-12, max_iter: int = 200) -> EpsilonLossSolution:
    eps = float(eps)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    lo = m.width ** -2
    f_lo = epsilon_loss_function(m, lo, convex)
    if f_lo <= eps:
        return EpsilonLossSolution(eps, math.nan, math.nan, convex, 0, "inconclusive",
                                   f"f(width^-2) = {f_lo} <= eps; metrics look inconsistent")
    hi = 2 * lo
    it = 0
    while epsilon_loss_function(m, hi, convex) > eps:
        lo, hi = hi, 2 * hi
        it += 1
        if it > 2000:
            raise RuntimeError("bracket doubling did not terminate")
    while hi - lo > rel_tol * hi and it < max_iter + 2000:
        mid = 0.5 * (lo + hi)
        if epsilon_loss_function(m, mid, convex) > eps:
            lo = mid
        else:
            hi = mid
        it += 1
    # hi satisfies f(hi) <= eps: every eigenvalue at or above it is covered
    res = abs(epsilon_loss_function(m, hi, convex) - eps)
    return EpsilonLossSolution(eps, hi, res, convex, it)


# -- open sets and removed cubes ------------------------------------------------

def open_set_upper(cube_q: Box, vol_omega_eps: float, vol_q_minus_omega_eps: float,
                   eps: float, lam: float) -> BoundValue:
    """Upper bound on N for an open set inside the cube Q, from its eps-neighbourhood volumes."""
    if not cube_q.is_cube:
        raise ValueError("Q must be a cube")
    side = float(cube_q.sides[0])
    eps = float(eps)
    if not 0 < eps < side / 2:
        raise ValueError(f"eps must lie in (0, l(Q)/2) = (0, {side / 2})")
    lam = float(lam)
    if not lam >= 0:
        raise ValueError("lambda must be nonnegative")
    n = cube_q.n
    value = (vol_omega_eps * weyl_constant(n) * lam ** (n / 2)
             + weyl_constant(n) * lam ** ((n - 1) / 2)
             * (2 * n * n * math.pi * vol_q_minus_omega_eps / eps - c1(n - 1) * side ** (n - 1)))
    return BoundValue(value, "upper", "open_set_upper", 0.0, extra={"epsilon": eps})


def open_set_upper_domain(domain, cube_q: Box, eps: float, lam: float) -> BoundValue:
    """open_set_upper with the neighbourhood volume bracketed from the geometry.

    The bound is affine in |Omega_eps|, so the larger of the two endpoint
    values is a valid bound for any volume inside the bracket.
    """
    from .geometry import neighbourhood_volume
    lo, hi = neighbourhood_volume(domain, eps, cube_q)
    q = float(cube_q.volume)
    vals = [open_set_upper(cube_q, v, max(q - v, 0.0), eps, lam) for v in (lo, hi)]
    best = max(vals, key=lambda b: b.value)
    return BoundValue(best.value, "upper", "open_set_upper", 0.0,
                      extra={"epsilon": float(eps), "vol_omega_eps": [lo, hi]})


@dataclass(frozen=True)
class RemovedCubesCheck:
    k: int
    lam: float
    rhs: float
    branch: str
    holds: bool
    hypotheses: tuple[str, ...]

    def as_dict(self) -> dict:
        return {"k": self.k, "lambda": self.lam, "rhs": self.rhs, "branch": self.branch,
                "holds": self.holds, "hypotheses": list(self.hypotheses)}


def removed_cubes_rhs(vol_omega: float, s_q: float, n: int, lam: float, k: int = 3) -> float:
    main = vol_omega * weyl_constant(n) * lam ** (n / 2)
    if k <= 2:
        return main
    return main + weyl_constant(n) * n ** 1.5 * math.pi * s_q * lam ** ((n - 1) / 2)


def removed_cubes_upper(vol_omega: float, s_q: float, n: int, lam: float, k: int) -> RemovedCubesCheck:
    """Check k <= rhs(lam_k) for a domain with cubes removed from a Polya domain."""
    if k < 1:
        raise ValueError("k must be at least 1")
    rhs = removed_cubes_rhs(vol_omega, s_q, n, lam, k)
    if k <= 2:
        branch = "polya (Rayleigh-Faber-Krahn inequality, Krahn-Szego inequality)"
    else:
        branch = "removed_cubes_upper"
    return RemovedCubesCheck(k, float(lam), rhs, branch, k <= rhs,
                             ("the enclosing domain satisfies Polya's inequality (assumed)",))


def two_term_weyl(m: DomainMetrics, lam: float) -> float:
    """Conjectured two-term expansion, a diagnostic only.  The undeclared exponent d is read as n."""
    lam = float(lam)
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    n = m.n
    boundary = m.surface / (2 ** (n + 1) * math.pi ** ((n - 1) / 2) * gamma((n + 1) / 2))
    return weyl_main(m.volume, n, lam) - boundary * lam ** ((n - 1) / 2)


# -- certificates ---------------------------------------------------------------

@dataclass(frozen=True)
class Hypothesis:
    name: str
    status: str  # checked | assumed | failed
    witness: str = ""

    def as_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "witness": self.witness}


@dataclass
class Certificate:
    claim: str
    verdict: str  # certified | refuted | inconclusive
    hypotheses: list[Hypothesis] = field(default_factory=list)
    reason: str = ""
    counterexample: tuple[int, float] | None = None
    work_log: dict = field(default_factory=dict)
    data: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict == "certified" and any(h.status not in ("checked", "assumed")
                                                 for h in self.hypotheses):
            raise ValueError("a certified verdict needs every hypothesis checked or assumed")

    @property
    def assumed(self) -> list[Hypothesis]:
        return [h for h in self.hypotheses if h.status == "assumed"]

    def as_dict(self) -> dict:
        out = {"claim": self.claim, "verdict": self.verdict, "reason": self.reason,
               "hypotheses": [h.as_dict() for h in self.hypotheses],
               "work_log": self.work_log, "data": self.data}
        if self.counterexample is not None:
            out["counterexample"] = {"k": self.counterexample[0], "lambda_k": self.counterexample[1]}
        return out


def certify_polya_first_k0(vol_omega: float, vol1: float, n1: int, len2: float) -> Certificate:
    """Polya's inequality for the first k0 eigenvalues of a domain inside a product."""
    from .bounds_nd import ALL_K, k0_threshold
    k0 = k0_threshold(vol_omega, vol1, n1, len2)
    hyp = [Hypothesis("the base factor satisfies Polya's inequality", "assumed"),
           Hypothesis("domain lies inside base x (0, len2)", "assumed")]
    data = {"k0": None if k0 == ALL_K else int(k0), "all_k": k0 == ALL_K}
    return Certificate("polya_first_k0", "certified", hyp, f"first {k0} eigenvalues", data=data)


class _WeylT:
    """(1+eps) times the Weyl term as a function of t, with exact fallbacks near ties."""

    def __init__(self, volume: Fraction, n: int, eps: Fraction):
        self.volume, self.n, self.eps = volume, n, eps
        self.coef = float((1 + eps) * volume) * unit_ball_volume(n) / 2 ** n

    def value(self, t: Fraction) -> float:
        return self.coef * float(t) ** (self.n / 2)

    def _precise(self, t: Fraction):
        with mpmath.workdps(50):
            om = mpmath.pi ** (mpmath.mpf(self.n) / 2) / mpmath.gamma(1 + mpmath.mpf(self.n) / 2)
            v = (mpmath.mpf(self.eps.numerator) / self.eps.denominator + 1) \
                * mpmath.mpf(self.volume.numerator) / self.volume.denominator
            tt = mpmath.mpf(t.numerator) / t.denominator
            return v * om / 2 ** self.n * tt ** (mpmath.mpf(self.n) / 2)

    def allowed(self, t: Fraction) -> int:
        """Largest integer not exceeding (1+eps) W(t)."""
        w = self.value(t)
        f = math.floor(w)
        if abs(w - round(w)) > 1e-9 * max(1.0, w):
            return f
        with mpmath.workdps(50):
            return int(mpmath.floor(self._precise(t)))

    def satisfied(self, k: int, t: Fraction) -> bool:
        return k <= self.allowed(t)


def _walk(domain, bound: _WeylT, a: Fraction, b: Fraction, window: int, bisect_steps: int = 40) -> dict:
    """Verify k <= (1+eps) W(lambda_k) for every eigenvalue with t in [a, b]."""
    counts = intervals = pointwise = 0
    lo = a
    refuted = None

    def n_incl(t):
        nonlocal counts
        counts += 1
        return count_t(domain, t, strict=False)

    while lo < b:
        cap = bound.allowed(lo)
        if n_incl(b) <= cap:
            intervals += 1
            lo = b
            break
        good, bad = lo, b
        for _ in range(bisect_steps):
            mid = Fraction(math.sqrt(float(good) * float(bad))) if good > 0 else (good + bad) / 2
            if not good < mid < bad:
                break
            if n_incl(mid) <= cap:
                good = mid
            else:
                bad = mid
            if float(bad) - float(good) < 1e-9 * float(bad):
                break
        if good > lo:
            intervals += 1
            lo = good
            continue
        # stuck: check eigenvalues one by one above lo
        below = count_t(domain, lo, strict=True)
        counts += 1
        span = lo / 1024 or Fraction(1, 1024)
        vals = eigenvalues_t(domain, lo, min(b, lo + span))
        while len(vals) > window:
            span /= 4
            vals = eigenvalues_t(domain, lo, min(b, lo + span))
        end = min(b, lo + span)
        k = below
        for i, mu in enumerate(vals):
            k = below + i + 1
            last = i + 1 == len(vals) or vals[i + 1] != mu
            pointwise += 1
            if last and not bound.satisfied(k, mu):
                refuted = (k, float(mu * Fraction(PI2)))
                break
        if refuted:
            break
        if end == b:
            # eigenvalues exactly at b are not in [lo, b): check them directly
            c = count_t(domain, b, strict=False)
            counts += 1
            if c > k and not bound.satisfied(c, b):
                refuted = (c, float(b) * PI2)
                break
        lo = end
    return {"a": float(a), "b": float(b), "counts": counts, "intervals": intervals,
            "pointwise": pointwise, "refuted": refuted, "reached": float(lo)}


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("WEYL_CERTIFY_THREADS", "1")))
    except ValueError:
        return 1


def certify_epsilon_polya(domain, eps: Number, lambda_cap: float | None = None,
                          m: DomainMetrics | None = None, threads: int | None = None,
                          chunks: int = 8, window: int = 4096,
                          convex_variant: bool = False) -> Certificate:
    """Certify the epsilon-loss Polya inequality for every eigenvalue of the domain.

    The threshold Lambda uses the Lipschitz form; ``convex_variant=True``
    switches to the smaller convex threshold when the domain is a single box.
    """
    eps_f = float(eps)
    if not 0 < eps_f < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    started = time.perf_counter()
    claim = "epsilon_polya"
    if isinstance(domain, DomainMetrics):
        sol = lambda_epsilon(domain, eps_f, convex=convex_variant and domain.convex)
        hyp = [Hypothesis("eigenvalues below Lambda verified externally", "failed",
                          "no exact spectrum for a metrics-only input")]
        return Certificate(claim, "inconclusive", hyp,
                           f"no exact spectrum; verify eigenvalues below Lambda = "
                           f"{sol.capital_lambda:.6g} externally", data={"solver": sol.as_dict()})
    dom = as_domain(domain)
    if not dom.has_exact_spectrum:
        return Certificate(claim, "inconclusive", [], "no exact spectrum")
    m = m or metrics(dom)
    use_convex = convex_variant and m.convex
    sol = lambda_epsilon(m, eps_f, convex=use_convex)
    hyp = [Hypothesis("exact spectrum: disjoint union of boxes", "checked",
                      f"{len(dom.spectral_components())} box component(s)")]
    if sol.status != "ok":
        return Certificate(claim, "inconclusive", hyp, sol.note, data={"solver": sol.as_dict()})
    single = dom.is_single_box
    hyp.append(Hypothesis(
        "eigenvalues at or above Lambda: epsilon-loss theorem",
        "checked" if single else "assumed",
        "box domain" if single else
        "separated union of boxes, Lipschitz boundary" if dom.is_separated() else
        "boxes touch along slits, boundary is not Lipschitz"))
    hyp.append(Hypothesis("C_Lip from max-norm tube volumes", "checked",
                          f"c_lip = {m.c_lip:.9g} (includes guard factor)"))
    top = sol.capital_lambda if lambda_cap is None else min(sol.capital_lambda, float(lambda_cap))
    t_top = Fraction(top / PI2 * (1 + 1e-12))
    t1 = first_eigenvalue_t(dom)
    bound = _WeylT(dom.volume, dom.n, as_fraction(eps_f))
    # geometric chunks of [t1, t_top]; chunk walks are independent
    if t_top <= t1:
        edges = [t1, t1]
    else:
        ratio = (float(t_top) / float(t1)) ** (1 / chunks)
        edges = [t1] + [Fraction(float(t1) * ratio ** i) for i in range(1, chunks)] + [t_top]
    jobs = list(zip(edges[:-1], edges[1:]))
    threads = threads or _threads()
    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(lambda ab: _walk(dom, bound, ab[0], ab[1], window), jobs))
    else:
        results = [_walk(dom, bound, a, b, window) for a, b in jobs]
    results.sort(key=lambda r: r["a"])
    log = {"count_evaluations": sum(r["counts"] for r in results),
           "interval_checks": sum(r["intervals"] for r in results),
           "pointwise_checks": sum(r["pointwise"] for r in results),
           "chunks": len(results), "threads": threads,
           "seconds": round(time.perf_counter() - started, 3)}
    data = {"epsilon": eps_f, "capital_lambda": sol.capital_lambda, "solver": sol.as_dict(),
            "verified_up_to": top, "metrics": m.as_dict()}
    bad = [r["refuted"] for r in results if r["refuted"]]
    if bad:
        k, lam = min(bad, key=lambda x: x[1])
        return Certificate(claim, "refuted", hyp, f"k = {k} violates the inequality at lambda_k = {lam!r}",
                           (k, lam), log, data)
    if top < sol.capital_lambda:
        return Certificate(claim, "inconclusive", hyp,
                           f"partial: verified for eigenvalues up to {top:.6g} < Lambda = "
                           f"{sol.capital_lambda:.6g}", None, log, data)
    hyp.append(Hypothesis("eigenvalues below Lambda: exact lattice counts", "checked",
                          f"{log['count_evaluations']} count evaluations"))
    return Certificate(claim, "certified", hyp, "", None, log, data)
