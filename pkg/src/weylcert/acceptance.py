"""The acceptance campaign: ten criteria, each a function returning a CriterionResult.

Shared by the test-suite and the ``acceptance`` CLI command.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np

from . import bounds1d, bounds_nd, certify, constants, geometry, oracles
from .admissible import REMARK_BOUND, check_rectangle_minus_cubes, margins, remark_family
from .spectra import PI2, Box, count_exact, cube, eigenvalues

SEED = 20240517


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float
    data: dict = field(default_factory=dict)

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.number:>2} {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _timed(number: int, name: str):
    def wrap(fn):
        def run(*args, **kwargs) -> CriterionResult:
            t0 = time.perf_counter()
            passed, detail, data = fn(*args, **kwargs)
            return CriterionResult(number, name, passed, detail, time.perf_counter() - t0, data)
        run.__name__ = fn.__name__
        run.__doc__ = fn.__doc__
        return run
    return wrap


def _rng(stream: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(SEED, spawn_key=(stream,)))


@_timed(1, "k0 worked values")
def criterion_1():
    cases = {(95, 100, 2, 1): 2623, (99, 100, 2, 1): 341694, (80, 100, 2, 1): 34}
    got = {}
    reps = 200
    t0 = time.perf_counter()
    for _ in range(reps):
        for args in cases:
            got[args] = bounds_nd.k0_threshold(*args)
    per_call = (time.perf_counter() - t0) / (reps * len(cases))
    ok = all(got[a] == v and isinstance(got[a], int) for a, v in cases.items())
    return (ok and per_call < 1e-3,
            f"values {[got[a] for a in cases]}, {per_call * 1e6:.1f} us per call",
            {"values": [got[a] for a in cases], "seconds_per_call": per_call})


@_timed(2, "closed-form constants")
def criterion_2():
    pi, s2, s3 = math.pi, math.sqrt(2), math.sqrt(3)
    checks = [(constants.c1(1), 2 / 3), (constants.c1(2), 3 * pi / 16), (constants.c2(1), 2 * s2 * pi),
              (constants.c2(2), 9 * s3), (constants.c3(1), 1 / 8), (constants.c3(1.5), 1 / 9)]
    worst = max(abs(a - b) / abs(b) for a, b in checks)
    half = [Fraction(k, 2) for k in range(1, 21)]
    gb = 0.0
    with mpmath.workdps(40):
        for x in half:
            gb = max(gb, abs(constants.gamma(x) / float(mpmath.gamma(mpmath.mpf(x.numerator) / x.denominator)) - 1))
        for a in half[:8]:
            for b in half[:8]:
                ref = float(mpmath.beta(mpmath.mpf(a.numerator) / a.denominator,
                                        mpmath.mpf(b.numerator) / b.denominator))
                gb = max(gb, abs(constants.beta(a, b) / ref - 1))
    ok = worst <= 1e-12 and gb <= 1e-12
    return ok, f"max rel err constants {worst:.1e}, Beta/Gamma {gb:.1e}", {"constants": worst, "beta_gamma": gb}


@_timed(3, "lattice counters vs naive enumeration")
def criterion_3(boxes: int = 240):
    rng = _rng(3)
    mismatches = 0
    for i in range(boxes):
        n = (2, 3, 4)[i % 3]
        b = oracles.random_box(rng, n, 0.3, 1.6)
        lams = [float(rng.uniform(1, 5000))]
        # exact eigenvalues are the hard cases for strict/inclusive counting
        vals = oracles.naive_eigenvalues(b, 5000)
        if vals.size:
            lams.append(float(vals[int(rng.integers(vals.size))]))
        for lam in lams:
            for strict in (True, False):
                if oracles.naive_count(b, lam, strict) != count_exact(b, lam, strict):
                    mismatches += 1
    return mismatches == 0, f"{boxes} boxes, {mismatches} mismatches", {"mismatches": mismatches}


@_timed(4, "Riesz-mean sandwich on intervals")
def criterion_4(lengths: int = 100, lams: int = 50):
    rng = _rng(4)
    violations = 0
    checked = 0
    for _ in range(lengths):
        L = float(rng.uniform(0.2, 5.0))
        first = (math.pi / L) ** 2
        for lam in first * np.exp(rng.uniform(1e-6, math.log(2e4), lams)):
            lam = float(lam)
            half = oracles.interval_riesz_mean(L, lam, 0.5)
            one = oracles.interval_riesz_mean(L, lam, 1.0)
            checked += 1
            if bounds1d.riesz_half_lower_interval(L, lam).value > half * (1 + 1e-12):
                violations += 1
            if half > bounds1d.riesz_half_upper(L, lam).value * (1 + 1e-12):
                violations += 1
            if one > bounds1d.riesz1_upper(L, lam).value * (1 + 1e-12):
                violations += 1
            for p in (1.5, 2.0, 3.0):
                if oracles.interval_riesz_mean(L, lam, p) > bounds1d.riesz_p_upper(L, lam, p).value * (1 + 1e-12):
                    violations += 1
    return violations == 0, f"{checked} (L, lambda) pairs, {violations} violations", {"violations": violations}


@lru_cache(maxsize=None)
def _box_metrics(box: Box) -> geometry.DomainMetrics:
    return geometry.metrics(geometry.RectilinearDomain([box]))


def _product_checks(box: Box, lam: float) -> list[tuple[str, str, float]]:
    """(tag, direction, value) of every applicable bound for one box at lam."""
    n = box.n
    sides = [float(s) for s in box.sides]
    # write the box as base x (shortest side) so that len2 is the width
    order = sorted(range(n), key=lambda a: -sides[a])
    sides = [sides[a] for a in order]
    out = []
    for b in bounds_nd.box_product_bounds(sides, lam):
        if b.valid:
            out.append((b.theorem, "upper", b.value))
    dom = geometry.RectilinearDomain([box])
    m = _box_metrics(box)
    if box.is_cube:
        side = sides[0]
        q = Box(box.sides, box.origin)
        out.append(("open_set_upper[Q=Omega]", "upper",
                    certify.open_set_upper(q, float(q.volume), 0.0, side / 4, lam).value))
        for const in (False, True):
            b = bounds_nd.cube_count_lower(side, n, lam, const)
            if b.valid:
                out.append((b.theorem, "lower", b.value))
    else:
        big = max(sides) + 1
        q = Box((Fraction(big),) * n, tuple(Fraction(-1, 2) for _ in range(n)))
        out.append(("open_set_upper", "upper", certify.open_set_upper_domain(dom, q, 0.25, lam).value))
    if n == 2:
        b = bounds_nd.rect_count_lower_2d(sides[0], sides[1], lam)
        if b.valid:
            out.append((b.theorem, "lower", b.value))
    for b in certify.whitney_count_lower(dom, lam, m=m):
        out.append((b.theorem, "lower", b.value))
    return out


@_timed(5, "product and cube bound soundness sweep")
def criterion_5(products: int = 50, grid: int = 200):
    rng = _rng(5)
    domains = [cube(1, 2), cube(1, 3)]
    for i in range(products):
        domains.append(oracles.random_box(rng, 2 if i % 2 == 0 else 3, 0.5, 2.0))
    lams = np.linspace(1e4 / grid, 1e4, grid)
    violations = []
    checks = 0
    for box in domains:
        for lam in lams:
            lam = float(lam)
            exact = count_exact(box, lam)
            for tag, direction, value in _product_checks(box, lam):
                checks += 1
                if (direction == "upper" and value < exact) or (direction == "lower" and value > exact):
                    violations.append((str(box.sides), lam, tag, value, exact))
    return (not violations, f"{len(domains)} domains x {grid} lambdas, {checks} checks, "
            f"{len(violations)} violations", {"violations": violations[:20], "checks": checks})


def sandwich_domains(count: int = 20) -> list[geometry.RectilinearDomain]:
    rng = _rng(6)
    out = [geometry.RectilinearDomain([cube(1, 2)]), geometry.RectilinearDomain([cube(1, 3)])]
    while len(out) < count + 2:
        n = 2 if len(out) % 4 else 3
        boxes = oracles.random_box_union(rng, n, int(rng.integers(2, 4)), den=4 if n == 2 else 2)
        if len(boxes) >= 2:
            out.append(geometry.RectilinearDomain(boxes))
    return out


def sandwich_violations(dom: geometry.RectilinearDomain, lam_max: float = 1e4) -> tuple[int, int]:
    m = geometry.metrics(dom)
    mc = geometry.metrics(geometry.complement_in_mar(dom), with_c_lip=False)
    vals = eigenvalues(dom, lam_max)
    bad = 0
    for k, lam in enumerate(vals, start=1):
        lo = certify.remainder_lower_lipschitz(m, float(lam)).value
        hi = certify.remainder_upper_lipschitz(m, mc, float(lam)).value
        if not lo <= k <= hi:
            bad += 1
    return bad, len(vals)


@_timed(6, "uniform remainder sandwich at eigenvalues")
def criterion_6(unions: int = 20):
    total = bad = 0
    for dom in sandwich_domains(unions):
        b, k = sandwich_violations(dom)
        bad += b
        total += k
    return bad == 0, f"{unions + 2} domains, {total} eigenvalues, {bad} violations", {"violations": bad}


def whitney_domains(count: int = 50) -> list[geometry.RectilinearDomain]:
    rng = _rng(7)
    out = []
    for i in range(count):
        if i % 5 == 4:
            out.append(oracles.random_rectilinear(rng, 3, cells=int(rng.integers(2, 5)), grid=3))
        elif i % 5 == 3:
            boxes = oracles.random_box_union(rng, 2, 3)
            out.append(geometry.RectilinearDomain(boxes))
        else:
            out.append(oracles.random_rectilinear(rng, 2, cells=int(rng.integers(3, 9)), grid=4))
    return out


def largest_cube_ok(box: Box, depth: int = 8) -> bool:
    fam = geometry.whitney(geometry.RectilinearDomain([box]), depth)
    n = box.n
    r = float(min(box.sides)) / 2
    top = float(fam.side(fam.largest_generation()))
    return r / (5 * math.sqrt(n)) <= top <= r / math.sqrt(n)


@_timed(7, "Whitney decomposition properties")
def criterion_7(count: int = 50, depth: int = 8):
    failures = []
    for i, dom in enumerate(whitney_domains(count)):
        rep = geometry.check_whitney(geometry.whitney(dom, depth))
        if not rep["ok"]:
            failures.append((i, rep))
    rng = _rng(8)
    boxes = [cube(1, 2), cube(1, 3), Box((1, 2)), Box((2, 1, 1))] + \
        [oracles.random_box(rng, 2 + i % 2, 0.5, 2.0) for i in range(10)]
    bad_top = [str(b.sides) for b in boxes if not largest_cube_ok(b, 8 if b.n == 2 else 6)]
    ok = not failures and not bad_top
    return ok, (f"{count} domains at depth {depth}: {len(failures)} failing; "
                f"largest cube out of range on {len(bad_top)} of {len(boxes)} boxes"),\
        {"failures": failures[:5], "bad_top": bad_top}


def random_metrics(rng: np.random.Generator) -> geometry.DomainMetrics:
    n = int(rng.integers(2, 5))
    sides = sorted((float(rng.uniform(0.2, 3.0)) for _ in range(n)), reverse=True)
    fill = float(rng.uniform(0.3, 1.0))
    vol = math.prod(sides) * fill
    diam = math.sqrt(sum(s * s for s in sides))
    surf = 2 * sum(math.prod(sides) / s for s in sides) * float(rng.uniform(1.0, 3.0))
    return geometry.DomainMetrics(n, vol, surf, diam, sides[-1], sides[-1] / 2 * fill,
                                  float(rng.uniform(1.0, 3.0)), tuple(sides))


@_timed(8, "epsilon-loss threshold solver")
def criterion_8(sets: int = 20):
    rng = _rng(9)
    eps_grid = [i / 10 for i in range(1, 10)]
    worst = 0.0
    bad = 0
    for _ in range(sets):
        m = random_metrics(rng)
        for convex in (False, True):
            caps = []
            for e in eps_grid:
                s = certify.lambda_epsilon(m, e, convex)
                worst = max(worst, s.residual)
                if s.status != "ok" or s.capital_lambda < m.width ** -2 or s.residual > 1e-10:
                    bad += 1
                caps.append(s.capital_lambda)
            if not all(a > b for a, b in zip(caps, caps[1:])):
                bad += 1
    return bad == 0, f"{sets} metric sets, max residual {worst:.1e}, {bad} failures", {"max_residual": worst}


@_timed(9, "end-to-end epsilon-loss certification")
def criterion_9():
    sq = geometry.RectilinearDomain([cube(1, 2)])
    rect = geometry.RectilinearDomain([Box((1, 2))])
    a = certify.certify_epsilon_polya(sq, 0.5)
    b = certify.certify_epsilon_polya(rect, 0.25)
    t0 = time.perf_counter()
    part = certify.certify_epsilon_polya(sq, 0.5, lambda_cap=1e6)
    t_part = time.perf_counter() - t0
    ok = (a.verdict == "certified" and a.work_log["count_evaluations"] <= 10 ** 6
          and b.verdict == "certified" and part.verdict == "inconclusive"
          and part.reason.startswith("partial") and t_part < 30)
    detail = (f"square: {a.verdict} ({a.work_log['count_evaluations']} counts, Lambda="
              f"{a.data['capital_lambda']:.4g}); 1x2: {b.verdict}; capped: {part.verdict} in {t_part:.2f}s")
    return ok, detail, {"square": a.as_dict(), "rect": b.as_dict()}


@_timed(10, "admissible family checker")
def criterion_10():
    fam = remark_family(2, 40)
    base = 8 * (1 + math.sqrt(2)) * math.pi + 0.01
    cert = check_rectangle_minus_cubes(base, fam)
    mg = margins(fam, base)
    ok = cert.verdict == "certified" and fam.s_q_total <= REMARK_BOUND
    return ok, (f"{cert.verdict}, s_q+tail = {fam.s_q_total:.9f} <= {REMARK_BOUND:.6f}, "
                f"margin {mg['margin']:.4f}"), {"margins": mg}


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5,
            criterion_6, criterion_7, criterion_8, criterion_9, criterion_10]


def run_all(only: list[int] | None = None, stream=None) -> list[CriterionResult]:
    results = []
    for i, crit in enumerate(CRITERIA, start=1):
        if only and i not in only:
            continue
        res = crit()
        results.append(res)
        if stream is not None:
            print(res.line(), file=stream, flush=True)
    return results
