"""Command-line entry point, input validation and report writing.

Exit codes: 0 success or certified, 1 refuted or violated bound, 2 input
error or inconclusive certificate.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
import tempfile
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import jsonschema
import numpy as np

from . import bounds1d, bounds_nd, certify, constants, geometry
from ._rational import as_fraction, fraction_str
from .admissible import (CubeFamily, check_product_minus_cubes, check_rectangle_minus_cubes,
                         check_tiled_minus_cubes, margins, remark_family)
from .spectra import Box, NoExactSpectrum, SpectrumTooLarge, count_exact, eigenvalues

CSV_VERSION = "1"

RATIONAL = {"oneOf": [{"type": "number"},
                      {"type": "string", "pattern": r"^\s*-?\d+(\.\d*)?(/\d+)?\s*$"}]}
BOX = {"type": "object", "required": ["sides"], "additionalProperties": False,
       "properties": {"sides": {"type": "array", "items": RATIONAL, "minItems": 2},
                      "origin": {"type": "array", "items": RATIONAL, "minItems": 2}}}
DOMAIN_SCHEMA = {
    "type": "object", "required": ["boxes"],
    "properties": {"type": {"const": "rectilinear"}, "n": {"type": "integer", "minimum": 2},
                   "boxes": {"type": "array", "items": BOX, "minItems": 1},
                   "removed": {"type": "array", "items": BOX},
                   "joined": {"type": "boolean"}, "name": {"type": "string"}},
    "additionalProperties": False}
POS = {"type": "number", "exclusiveMinimum": 0}
METRICS_SCHEMA = {
    "type": "object",
    "required": ["n", "volume", "surface", "diameter", "width", "r_in", "c_lip", "mar_sides"],
    "properties": {"type": {"const": "metrics"}, "n": {"type": "integer", "minimum": 2},
                   "volume": POS, "surface": POS, "diameter": POS, "width": POS, "r_in": POS,
                   "c_lip": {"type": "number", "minimum": 1},
                   "mar_sides": {"type": "array", "items": POS, "minItems": 2},
                   "r_in_upper": POS, "r_in_exact": {"type": "boolean"},
                   "convex": {"type": "boolean"},
                   "mar_boundary_off_domain": {"type": "number", "minimum": 0},
                   "name": {"type": "string"}},
    "additionalProperties": False}
FAMILY_SCHEMA = {
    "type": "object", "required": ["n"],
    "properties": {"n": {"type": "integer", "minimum": 2},
                   "cubes": {"type": "array", "items": {
                       "type": "object", "required": ["side", "origin"], "additionalProperties": False,
                       "properties": {"side": RATIONAL, "origin": {"type": "array", "items": RATIONAL}}}},
                   "levels": {"type": "array", "items": {"type": "array", "minItems": 2, "maxItems": 2,
                                                          "prefixItems": [RATIONAL, {"type": "integer", "minimum": 1}]}},
                   "tail_bound": {"type": "number", "minimum": 0},
                   "remark_depth": {"type": "integer", "minimum": 2},
                   "container": BOX},
    "oneOf": [{"required": ["cubes"]}, {"required": ["levels"]}, {"required": ["remark_depth"]}],
    "additionalProperties": False}


class InputError(Exception):
    """Bad input; reported with a precise location and exit code 2."""


def _load_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc


def _validate(doc, schema: dict, path: str) -> None:
    err = jsonschema.exceptions.best_match(jsonschema.Draft202012Validator(schema).iter_errors(doc))
    if err is not None:
        pointer = "/" + "/".join(str(p) for p in err.absolute_path)
        raise InputError(f"{path}: schema violation at {pointer}: {err.message}")


def _box(d: dict) -> Box:
    sides = tuple(as_fraction(s) for s in d["sides"])
    origin = tuple(as_fraction(s) for s in d["origin"]) if "origin" in d else None
    return Box(sides, origin)


def parse_domain(doc: dict, path: str = "<domain>"):
    """A RectilinearDomain, or DomainMetrics for metrics-only documents."""
    if isinstance(doc, dict) and doc.get("type") == "metrics":
        _validate(doc, METRICS_SCHEMA, path)
        d = {k: v for k, v in doc.items() if k not in ("type", "name")}
        d["source"] = "user"
        d.setdefault("r_in_exact", True)
        try:
            return geometry.DomainMetrics.from_dict(d)
        except ValueError as exc:
            raise InputError(f"{path}: {exc}") from exc
    _validate(doc, DOMAIN_SCHEMA, path)
    try:
        boxes = [_box(b) for b in doc["boxes"]]
        removed = [_box(b) for b in doc.get("removed", [])]
        dom = geometry.RectilinearDomain(boxes, removed, joined=doc.get("joined", False))
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if "n" in doc and doc["n"] != dom.n:
        raise InputError(f"{path}: schema violation at /n: declared {doc['n']}, boxes have {dom.n}")
    return dom


def ingest_domain(path: str):
    return parse_domain(_load_json(path), path)


def ingest_metrics(path: str) -> geometry.DomainMetrics:
    doc = _load_json(path)
    if isinstance(doc, dict) and doc.get("type") != "metrics" and "boxes" in doc:
        return geometry.metrics(parse_domain(doc, path))
    if isinstance(doc, dict):
        doc = {"type": "metrics", **doc}
    return parse_domain(doc, path)


def ingest_family(path: str) -> CubeFamily:
    doc = _load_json(path)
    _validate(doc, FAMILY_SCHEMA, path)
    n = doc["n"]
    try:
        if "remark_depth" in doc:
            return remark_family(n, doc["remark_depth"])
        container = _box(doc["container"]) if "container" in doc else None
        if "cubes" in doc:
            cubes = [Box((as_fraction(c["side"]),) * n, tuple(as_fraction(x) for x in c["origin"]))
                     for c in doc["cubes"]]
            fam = CubeFamily.from_cubes(cubes, container)
            fam.tail_bound = float(doc.get("tail_bound", 0.0))
            return fam
        return CubeFamily(n, [(as_fraction(s), c) for s, c in doc["levels"]],
                          tail_bound=float(doc.get("tail_bound", 0.0)), container=container)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from exc


# -- output -------------------------------------------------------------------

def _clean(obj):
    """JSON-ready copy without timing fields, so artifacts are reproducible."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items() if k != "seconds"}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        obj = float(obj)
    if isinstance(obj, float) and not math.isfinite(obj):
        return str(obj)
    return obj


def write_atomic(path: str, text: str) -> None:
    folder = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".tmp-", suffix=os.path.basename(path))
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def emit(obj, out: str | None) -> None:
    text = json.dumps(_clean(obj), indent=2) + "\n"
    if out:
        write_atomic(out, text)
    else:
        sys.stdout.write(text)


# -- bound tables -------------------------------------------------------------------

@dataclass(frozen=True)
class BoundRow:
    tag: str
    direction: str
    value: float
    hypotheses: tuple[str, ...] = ()


class BoundSuite:
    """Every bound applicable to one rectilinear domain, with cached metrics."""

    def __init__(self, dom: geometry.RectilinearDomain, which: str = "all"):
        self.dom = dom
        self.which = which
        self.m = geometry.metrics(dom)
        self.mc = geometry.metrics(geometry.complement_in_mar(dom), with_c_lip=False)
        comps = dom._component_boxes
        self.box = comps[0] if dom.is_single_box and not dom.removed else None

    def rows(self, lam: float) -> list[BoundRow]:
        out: list[BoundRow] = []
        m, n = self.m, self.dom.n
        if lam > math.pi ** 2 / m.width ** 2:
            lo = certify.remainder_lower_lipschitz(m, lam)
            hi = certify.remainder_upper_lipschitz(m, self.mc, lam)
            out += [BoundRow(lo.theorem, "lower", lo.value), BoundRow(hi.theorem, "upper", hi.value)]
        out.append(BoundRow("bly_upper", "upper", bounds_nd.bly_count_upper(m.volume, n, lam).value))
        if self.box is not None:
            sides = sorted((float(s) for s in self.box.sides), reverse=True)
            for b in bounds_nd.box_product_bounds(sides, lam):
                if b.valid and b.theorem != "bly_upper":
                    out.append(BoundRow(b.theorem, "upper", b.value, b.hypotheses))
            if self.box.is_cube:
                for const in (False, True):
                    b = bounds_nd.cube_count_lower(sides[0], n, lam, const)
                    if b.valid:
                        out.append(BoundRow(b.theorem, "lower", b.value))
            if n == 2:
                b = bounds_nd.rect_count_lower_2d(sides[0], sides[1], lam)
                if b.valid:
                    out.append(BoundRow(b.theorem, "lower", b.value))
        if self.which == "all" and lam > 0:
            for b in certify.whitney_count_lower(self.dom, lam, m=m):
                out.append(BoundRow(b.theorem, "lower", b.value))
        return out


# -- commands -------------------------------------------------------------------------

def _threads(args) -> int:
    env = os.environ.get("WEYL_CERTIFY_THREADS")
    if getattr(args, "threads", None):
        return args.threads
    try:
        return max(1, int(env)) if env else 1
    except ValueError:
        return 1


def cmd_constants(args) -> int:
    emit(constants.dim_constants(args.n).as_dict() | {
        "c1_exact": str(constants.c1_exact(args.n)), "c2_exact": str(constants.c2_exact(args.n))}, args.json)
    return 0


def _exact_domain(args):
    dom = ingest_domain(args.domain)
    if isinstance(dom, geometry.DomainMetrics) or not dom.has_exact_spectrum:
        raise InputError(f"{args.domain}: no exact spectrum")
    return dom


def cmd_spectrum(args) -> int:
    dom = _exact_domain(args)
    try:
        vals = eigenvalues(dom, args.lambda_max, args.max_count)
        partial = False
    except SpectrumTooLarge as exc:
        vals, partial = exc.partial, True
    if args.csv:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["index", "eigenvalue"])
        w.writerows((k, repr(float(v))) for k, v in enumerate(vals, 1))
        write_atomic(args.csv, buf.getvalue())
    if args.json or not args.csv:
        emit({"lambda_max": args.lambda_max, "count": int(vals.size), "partial": partial,
              "eigenvalues": [float(v) for v in vals]}, args.json)
    return 0


def cmd_count(args) -> int:
    dom = _exact_domain(args)
    emit({"lambda": args.lam, "strict": not args.inclusive,
          "count": count_exact(dom, args.lam, strict=not args.inclusive)}, args.json)
    return 0


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n) is None]
    if missing:
        raise InputError(f"--family {args.family} requires {', '.join(missing)}")
    return [getattr(args, n) for n in names]


def formula_bound(args):
    """One closed-form bound selected by ``--family``."""
    f, lam = args.family, args.lam
    if f == "riesz1d":
        length, p = _need(args, "len", "p")
        if p == 1:
            return bounds1d.riesz1_upper(length, lam)
        if p == 0.5:
            return bounds1d.riesz_half_upper(length, lam)
        return bounds1d.riesz_p_upper(length, lam, p)
    if f == "riesz1d_lower":
        (length,) = _need(args, "len")
        return bounds1d.riesz_half_lower_interval(length, lam)
    if f == "product":
        vol1, n1, len2 = _need(args, "vol1", "n1", "len2")
        return bounds_nd.product_count_upper(vol1, n1, len2, lam)
    if f == "improved2d":
        vol1, len2 = _need(args, "vol1", "len2")
        return bounds_nd.product_count_upper_2d_improved(vol1, len2, lam)
    if f == "improved3d":
        vol1, len2 = _need(args, "vol1", "len2")
        return bounds_nd.product_count_upper_3d_improved(vol1, len2, lam)
    if f == "cube":
        side, n = _need(args, "side", "n")
        return bounds_nd.cube_count_lower(side, n, lam, args.with_constant)
    if f == "rect":
        len1, len2 = _need(args, "len1", "len2")
        return bounds_nd.rect_count_lower_2d(len1, len2, lam)
    vol, n = _need(args, "vol", "n")
    return bounds_nd.bly_count_upper(vol, n, lam)


def cmd_bounds(args) -> int:
    if args.family:
        emit(formula_bound(args).as_dict(), args.json)
        return 0
    if not args.domain:
        raise InputError("bounds needs --domain or --family")
    dom = ingest_domain(args.domain)
    if isinstance(dom, geometry.DomainMetrics):
        m = dom
        rows = [BoundRow("bly_upper", "upper", bounds_nd.bly_count_upper(m.volume, m.n, args.lam).value)]
        if m.convex:
            lo, hi = certify.remainder_bounds_convex(m, None, args.lam)
            rows += [BoundRow(lo.theorem, "lower", lo.value, lo.hypotheses),
                     BoundRow(hi.theorem, "upper", hi.value, hi.hypotheses)]
        exact = None
    else:
        rows = BoundSuite(dom).rows(args.lam)
        exact = count_exact(dom, args.lam) if dom.has_exact_spectrum else None
    emit({"lambda": args.lam, "count_exact": exact,
          "bounds": [{"theorem": r.tag, "direction": r.direction, "value": r.value,
                      "hypotheses": list(r.hypotheses)} for r in rows]}, args.json)
    return 0


def cmd_metrics(args) -> int:
    dom = ingest_domain(args.domain)
    m = dom if isinstance(dom, geometry.DomainMetrics) else geometry.metrics(dom)
    emit(m.as_dict(), args.json)
    return 0


def cmd_whitney(args) -> int:
    dom = ingest_domain(args.domain)
    if isinstance(dom, geometry.DomainMetrics):
        raise InputError("whitney needs a rectilinear domain")
    fam = geometry.whitney(dom, args.depth)
    rep = geometry.check_whitney(fam) if args.check else {"ok": True, "checked": False}
    gens, counts = np.unique(fam.gen, return_counts=True)
    out = {"depth": args.depth, "base_side": fraction_str(fam.base),
           "origin": [fraction_str(o) for o in fam.origin], "count": len(fam),
           "by_generation": {str(int(g)): int(c) for g, c in zip(gens, counts)}, "checks": rep}
    if args.list:
        out["cubes"] = [{"generation": int(k), "index": [int(x) for x in j]}
                        for k, j in zip(fam.gen, fam.index)]
    emit(out, args.json)
    return 0 if rep["ok"] else 1


def cmd_lambda_eps(args) -> int:
    m = ingest_metrics(args.metrics)
    sol = certify.lambda_epsilon(m, args.epsilon, convex=args.convex)
    emit(sol.as_dict(), args.json)
    return 0 if sol.status == "ok" else 2


VERDICT_EXIT = {"certified": 0, "refuted": 1, "inconclusive": 2}


def _print_assumed(cert) -> None:
    for h in cert.assumed:
        print(f"ASSUMED: {h.name}" + (f" ({h.witness})" if h.witness else ""), file=sys.stderr)


def cmd_certify(args) -> int:
    dom = ingest_domain(args.domain)
    cert = certify.certify_epsilon_polya(dom, args.epsilon, lambda_cap=args.lambda_cap,
                                         threads=_threads(args), convex_variant=args.convex)
    _print_assumed(cert)
    print(f"verdict: {cert.verdict}" + (f" ({cert.reason})" if cert.reason else ""), file=sys.stderr)
    emit(cert.as_dict(), args.json)
    return VERDICT_EXIT[cert.verdict]


def cmd_admissible(args) -> int:
    fam = ingest_family(args.family)
    p = args
    if args.check == "rectangle":
        if p.base_volume is None:
            raise InputError("--base-volume is required for the rectangle check")
        cert = check_rectangle_minus_cubes(p.base_volume, fam, mar=fam.container)
    elif args.check == "tiled":
        if p.base_volume is None or p.multiplicity is None:
            raise InputError("--base-volume and --multiplicity are required for the tiled check")
        cert = check_tiled_minus_cubes(p.multiplicity, p.base_volume, fam)
    else:
        if p.vol_omega0 is None or p.len2 is None:
            raise InputError("--vol-omega0 and --len2 are required for the product check")
        cert = check_product_minus_cubes(p.vol_omega0, fam.s_q_total, p.len2, fam.n)
    out = cert.as_dict()
    out["family"] = fam.as_dict()
    if p.base_volume is not None:
        out["margins"] = margins(fam, p.base_volume)
    _print_assumed(cert)
    emit(out, args.json)
    return VERDICT_EXIT[cert.verdict]


def sweep_table(dom: geometry.RectilinearDomain, lams, which: str = "all", threads: int = 1):
    suite = BoundSuite(dom, which)
    n = dom.n

    def row(lam):
        lam = float(lam)
        exact = count_exact(dom, lam)
        main = certify.weyl_main(suite.m.volume, n, lam)
        return lam, exact, main, suite.rows(lam)

    if threads > 1:
        with ThreadPoolExecutor(threads) as pool:
            rows = list(pool.map(row, lams))
    else:
        rows = [row(lam) for lam in lams]
    rows.sort(key=lambda r: r[0])
    tags: list[str] = []
    hyps: dict[str, list[str]] = {}
    for _, _, _, bs in rows:
        for b in bs:
            if b.tag not in tags:
                tags.append(b.tag)
                hyps[b.tag] = [b.direction, *b.hypotheses]
    summary = {t: {"direction": hyps[t][0], "violations": 0, "max_slack": None} for t in tags}
    table = []
    for lam, exact, main, bs in rows:
        vals = {b.tag: b for b in bs}
        line = [lam, exact, main, exact - main]
        for t in tags:
            b = vals.get(t)
            line.append(b.value if b else None)
            if b is None:
                continue
            slack = b.value - exact if b.direction == "upper" else exact - b.value
            s = summary[t]
            if slack < 0:
                s["violations"] += 1
            s["max_slack"] = slack if s["max_slack"] is None else max(s["max_slack"], slack)
        table.append(line)
    return tags, hyps, table, summary


def cmd_sweep(args) -> int:
    dom = _exact_domain(args)
    t0 = time.perf_counter()
    if args.random:
        gen = np.random.Generator(np.random.Philox(args.seed))
        lams = np.sort(gen.uniform(0, args.lambda_max, args.random))
    else:
        lams = np.linspace(args.lambda_max / args.points, args.lambda_max, args.points)
    tags, hyps, table, summary = sweep_table(dom, lams, args.bounds, _threads(args))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["lambda", "count_exact", "weyl_main", "r_omega", *tags])
    for line in table:
        w.writerow([repr(float(x)) if isinstance(x, float) else ("" if x is None else x) for x in line])
    meta = {"csv_version": CSV_VERSION, "domain": args.domain, "seed": args.seed,
            "columns": {t: {"direction": hyps[t][0], "hypotheses": hyps[t][1:]} for t in tags},
            "summary": summary}
    if args.csv:
        write_atomic(args.csv, buf.getvalue())
        write_atomic(args.csv + ".meta.json", json.dumps(_clean(meta), indent=2) + "\n")
    else:
        sys.stdout.write(buf.getvalue())
    bad = sum(s["violations"] for s in summary.values())
    print(f"{len(table)} rows, {bad} violations, {time.perf_counter() - t0:.2f}s", file=sys.stderr)
    return 1 if bad else 0


def cmd_acceptance(args) -> int:
    from .acceptance import run_all
    only = [int(x) for x in args.only.split(",")] if args.only else None
    results = run_all(only, stream=sys.stdout)
    if args.json:
        emit([{"number": r.number, "name": r.name, "passed": r.passed, "detail": r.detail}
              for r in results], args.json)
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="weylcert", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=fn)
        p.add_argument("--json", metavar="OUT", help="write the JSON result to OUT")
        return p

    p = add("constants", cmd_constants, "dimensional constants")
    p.add_argument("--n", type=int, required=True)
    p = add("spectrum", cmd_spectrum, "eigenvalues below a cap")
    p.add_argument("--domain", required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--max-count", type=int, default=1_000_000)
    p.add_argument("--csv", metavar="OUT", help="write index,eigenvalue rows to OUT")
    p = add("count", cmd_count, "exact counting function")
    p.add_argument("--domain", required=True)
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--inclusive", action="store_true", help="count eigenvalues <= lambda")
    p = add("bounds", cmd_bounds, "bounds at one lambda: every bound for a domain, or one formula")
    p.add_argument("--domain")
    p.add_argument("--family", choices=["riesz1d", "riesz1d_lower", "product", "improved2d",
                                        "improved3d", "cube", "rect", "bly"])
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    for name, typ in (("len", float), ("p", float), ("vol1", float), ("n1", int), ("len1", float),
                      ("len2", float), ("side", float), ("n", int), ("vol", float)):
        p.add_argument(f"--{name}", type=typ)
    p.add_argument("--with-constant", action="store_true")
    p = add("metrics", cmd_metrics, "geometric metrics of a domain")
    p.add_argument("--domain", required=True)
    p = add("whitney", cmd_whitney, "dyadic Whitney cubes and their checks")
    p.add_argument("--domain", required=True)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--check", action="store_true", help="verify the Whitney properties")
    p.add_argument("--list", action="store_true", help="include every cube in the output")
    p = add("lambda-eps", cmd_lambda_eps, "epsilon-loss threshold")
    p.add_argument("--metrics", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--convex", action="store_true")
    p = add("certify", cmd_certify, "epsilon-loss Polya certificate")
    p.add_argument("--domain", required=True)
    p.add_argument("--epsilon", type=float, required=True)
    p.add_argument("--lambda-cap", type=float)
    p.add_argument("--convex", action="store_true", help="use the convex threshold for a single box")
    p.add_argument("--threads", type=int)
    p = add("admissible", cmd_admissible, "admissible-family checks")
    p.add_argument("--family", required=True)
    p.add_argument("--check", choices=["rectangle", "tiled", "product"], required=True)
    p.add_argument("--base-volume", type=float)
    p.add_argument("--multiplicity", type=int)
    p.add_argument("--vol-omega0", type=float)
    p.add_argument("--len2", type=float)
    p = add("sweep", cmd_sweep, "bound-versus-count sweep as CSV")
    p.add_argument("--domain", required=True)
    p.add_argument("--lambda-max", type=float, required=True)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--random", type=int, default=0, help="use N random lambdas instead of a grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--bounds", choices=["all", "fast"], default="all")
    p.add_argument("--csv", metavar="OUT")
    p.add_argument("--threads", type=int)
    p = add("acceptance", cmd_acceptance, "run the acceptance criteria")
    p.add_argument("--only", help="comma-separated criterion numbers")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        return args.func(args)
    except (InputError, NoExactSpectrum) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
