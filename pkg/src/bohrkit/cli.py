"""Command-line front end.

Exit codes: 0 ok / CONFIRMS / PASS, 1 a FAIL verdict (verify, multidim) or
an inadmissible G (gpoly), 2 usage error, 3 CONTRADICTS, 4 INCONCLUSIVE or
unsupported hypothesis, 5 I/O error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction

import numpy as np

from . import functionals as fn
from .errors import BohrkitError, InvalidInputError
from .multidim import (CircularDomain, compose_linear, homothety_verify,
                       radius_of_nkind_domain)
from .radii import radius_table
from .series import DEFAULT_DIM, DEFAULT_ORDER, blaschke_series, schur_samples
from .sharpness import (CONFIRMS, CONTRADICTS, DEFAULT_B_GRID, DEFAULT_R_TOL, adjudicate_radius,
                        margin_curve)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_CONTRADICTS, EXIT_INCONCLUSIVE, EXIT_IO = 0, 1, 2, 3, 4, 5


class UsageError(Exception):
    pass


def _number(text: str) -> float:
    try:
        return float(Fraction(text.strip()))
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a number: {text!r}") from None


def _numbers(text: str) -> list[float]:
    return [_number(t) for t in text.split(",") if t.strip()]


def _kind(text: str) -> fn.FunctionalKind:
    try:
        return fn.parse_kind(text)
    except InvalidInputError as exc:
        raise UsageError(str(exc)) from None


def _emit_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def _emit_json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _flat_csv(obj: dict) -> str:
    keys = list(obj)
    vals = [json.dumps(obj[k]) if isinstance(obj[k], (dict, list)) else obj[k] for k in keys]
    return _emit_csv(keys, [vals])


def cmd_radii(args):
    rows = [(r.spec.tag, r.spec.params, repr(r.value), repr(r.residual)) for r in radius_table()]
    if args.format == "json":
        return EXIT_OK, _emit_json([dict(zip(("spec", "params", "radius", "residual"),
                                             (t, p, float(v), float(e)))) for t, p, v, e in rows])
    return EXIT_OK, _emit_csv(("spec", "params", "radius", "residual"), rows)


def cmd_verify(args):
    k = _kind(args.kind)
    nkind = args.r.strip().lower() == "nkind"
    r_fixed = None if nkind else _number(args.r)
    if r_fixed is not None and not (0.0 <= r_fixed < 1.0):
        raise UsageError("--r must lie in [0, 1)")
    series = list(schur_samples(args.seed, args.samples, args.dim, args.order, (args.a0_min, args.a0_max)))
    labels = [f"sample{i}" for i in range(len(series))]
    for b in _numbers(args.extremal) if args.extremal else []:
        series.append(blaschke_series(b, args.dim, args.order))
        labels.append(f"mobius{b!r}")
    counts = {fn.PASS: 0, fn.FAIL: 0, fn.INCONCLUSIVE: 0}
    rows, worst = [], None
    for label, s in zip(labels, series):
        r = 1.0 / (3.0 - s.a0) if nkind else r_fixed
        est = fn.functional_value(k, s, r)
        v = est.verdict()
        counts[v] += 1
        rows.append((label, s.a0, r, est.value, est.slack, v))
        if worst is None or est.value > worst[3]:
            worst = rows[-1]
    code = EXIT_FAIL if counts[fn.FAIL] else EXIT_OK
    if args.format == "csv":
        return code, _emit_csv(("sample", "a0", "r", "value", "slack", "verdict"), rows)
    report = {"kind": k.label, "params": k.params, "r": args.r, "samples": len(series), "seed": args.seed,
              "order": args.order, "dim": args.dim, "counts": counts,
              "worst": dict(zip(("sample", "a0", "r", "value", "slack", "verdict"), worst)) if worst else None}
    return code, _emit_json(report)


def cmd_adjudicate(args):
    k = _kind(args.kind)
    grid = _numbers(args.b_grid) if args.b_grid else DEFAULT_B_GRID
    rep = adjudicate_radius(k, grid, args.r_tol, seed=args.seed, samples=args.samples,
                            dim=args.dim, order=args.order)
    code = {CONFIRMS: EXIT_OK, CONTRADICTS: EXIT_CONTRADICTS}.get(rep.verdict, EXIT_INCONCLUSIVE)
    obj = rep.to_json()
    return code, _flat_csv(obj) if args.format == "csv" else _emit_json(obj)


def cmd_sharpness(args):
    k = _kind(args.kind)
    bs = _numbers(args.b) if args.b else DEFAULT_B_GRID
    rs = np.linspace(args.r_min, args.r_max, args.r_steps)
    rows = margin_curve(k, bs, rs)
    if args.format == "json":
        return EXIT_OK, _emit_json([{"b": b, "r": r, "margin": m} for b, r, m in rows])
    return EXIT_OK, _emit_csv(("b", "r", "margin"), [(repr(b), repr(r), repr(m)) for b, r, m in rows])


def cmd_multidim(args):
    k = _kind(args.kind)
    d = CircularDomain(args.domain, args.n)
    if args.inner_b is not None:
        inner = blaschke_series(args.inner_b, args.dim, args.order)
    else:
        inner = list(schur_samples(args.inner_seed, args.inner_index + 1, args.dim, args.order))[-1]
    if args.w:
        w = _numbers(args.w)
    else:
        w = [1.0 / args.n if args.domain == "polydisc" else args.n ** -0.5] * args.n
    m = compose_linear(inner, w, d)
    rho = radius_of_nkind_domain(m) if args.rho.strip().lower() == "nkind" else _number(args.rho)
    res = homothety_verify(m, k, rho, seed=args.seed, count=args.samples)
    code = {fn.PASS: EXIT_OK, fn.FAIL: EXIT_FAIL}.get(res.verdict, EXIT_INCONCLUSIVE)
    obj = {"domain": d.label, "kind": k.label, "inner_a0": inner.a0, "w": list(map(float, w)), **res.to_json()}
    return code, _flat_csv(obj) if args.format == "csv" else _emit_json(obj)


def cmd_gpoly(args):
    coeffs = _numbers(args.coeffs)
    if any(c < 0 for c in coeffs):
        raise UsageError("G coefficients must be nonnegative")
    res = fn.gpoly_admissible(fn.GPoly(tuple(coeffs)), args.variant)
    obj = {"variant": args.variant, "coeffs": coeffs, "admissible": res.admissible,
           "value": res.value, "bound": res.bound, "margin": res.margin}
    code = EXIT_OK if res.admissible else EXIT_FAIL
    return code, _flat_csv(obj) if args.format == "csv" else _emit_json(obj)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--order", type=int, default=DEFAULT_ORDER, help="truncation order M")
    common.add_argument("--dim", type=int, default=DEFAULT_DIM, help="matrix dimension d")
    common.add_argument("--format", choices=("csv", "json"), default=None)
    common.add_argument("--out", default=None, help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="bohrkit", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("radii", parents=[common], help="radius and threshold table")
    s.set_defaults(func=cmd_radii, default_format="csv", samples=0)

    s = sub.add_parser("verify", parents=[common], help="evaluate a functional on seeded Schur samples")
    s.add_argument("--kind", required=True)
    s.add_argument("--r", required=True, help="radius as float or fraction, or 'nkind' for 1/(3-a0)")
    s.add_argument("--samples", type=int, default=1000)
    s.add_argument("--a0-min", type=float, default=0.0)
    s.add_argument("--a0-max", type=float, default=1.0)
    s.add_argument("--extremal", default=None, help="comma-separated b values; adds the Moebius map with head b to the samples")
    s.set_defaults(func=cmd_verify, default_format="json")

    s = sub.add_parser("adjudicate", parents=[common], help="empirical sharp radius of a functional")
    s.add_argument("--kind", required=True)
    s.add_argument("--samples", type=int, default=64)
    s.add_argument("--r-tol", type=float, default=DEFAULT_R_TOL)
    s.add_argument("--b-grid", default=None)
    s.set_defaults(func=cmd_adjudicate, default_format="json")

    s = sub.add_parser("sharpness", parents=[common], help="extremal-family margin curves")
    s.add_argument("--kind", required=True)
    s.add_argument("--b", default=None, help="comma-separated b values")
    s.add_argument("--r-min", type=float, default=0.05)
    s.add_argument("--r-max", type=float, default=0.6)
    s.add_argument("--r-steps", type=int, default=56)
    s.add_argument("--samples", type=int, default=0)
    s.set_defaults(func=cmd_sharpness, default_format="csv")

    s = sub.add_parser("multidim", parents=[common], help="homothety check of a linear composite map")
    s.add_argument("--domain", choices=("polydisc", "ball"), required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--kind", required=True)
    s.add_argument("--rho", required=True, help="float, fraction or 'nkind'")
    s.add_argument("--samples", type=int, default=10_000)
    s.add_argument("--w", default=None, help="linear form coefficients (default: equal, dual norm 1)")
    s.add_argument("--inner-b", type=float, default=None, help="use the Moebius map with head b as the inner series")
    s.add_argument("--inner-seed", type=int, default=0)
    s.add_argument("--inner-index", type=int, default=0)
    s.set_defaults(func=cmd_multidim, default_format="json")

    s = sub.add_parser("gpoly", parents=[common], help="admissibility of a G polynomial")
    s.add_argument("--coeffs", required=True, help="comma-separated c_1, c_2, ...")
    s.add_argument("--variant", choices=fn.GPOLY_VARIANTS, required=True)
    s.add_argument("--samples", type=int, default=0)
    s.set_defaults(func=cmd_gpoly, default_format="json")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_OK
    if args.format is None:
        args.format = args.default_format
    if getattr(args, "samples", 0) < 0 or args.order < 1 or args.dim < 1:
        print("bohrkit: --samples must be >= 0, --order and --dim >= 1", file=sys.stderr)
        return EXIT_USAGE
    try:
        code, text = args.func(args)
    except (UsageError, BohrkitError, ValueError) as exc:
        print(f"bohrkit: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        if args.out:
            with open(args.out, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        else:
            sys.stdout.write(text)
    except OSError as exc:
        print(f"bohrkit: cannot write output: {exc}", file=sys.stderr)
        return EXIT_IO
    return code


if __name__ == "__main__":
    sys.exit(main())
