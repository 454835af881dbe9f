"""Command line front end for the certification suites.

Exit codes: 0 when every check passes, 1 when a check fails, 2 when the
arguments or a JSON payload cannot be parsed.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

import numpy as np

from . import certify
from . import fueter as fu
from . import hardy as hd
from . import jsonio
from .errors import HTError
from .hypercomplex import AdjointKind, HElem, NormKind, basis
from .series import series_distance

UNIT_NAMES = ("1", "i", "j", "k")


class UsageError(Exception):
    """Bad input detected after argument parsing; maps to exit code 2."""


# ---------------------------------------------------------------------------
# output


def _print_entries(entries, out) -> None:
    for e in entries:
        flag = "PASS" if e["pass"] else "FAIL"
        print(f"  {flag}  {e['name']:<34} observed={e['observed']:.3e}  tol={e['tolerance']:.1e}", file=out)


def _entry(args, name: str, observed: float, tolerance: float) -> dict:
    return certify.entry(name, observed, tolerance, certify.Config(tol_scale=args.tol_scale))


def _finish(payload: dict, passed: bool, json_path: str | None) -> int:
    payload["pass"] = passed
    if json_path:
        jsonio.dump(payload, json_path)
    return 0 if passed else 1


def _parse_elem(text: str) -> HElem:
    try:
        return HElem.from_json(json.loads(text))
    except (json.JSONDecodeError, HTError, ValueError) as exc:
        raise UsageError(f"cannot read element {text!r}: {exc}") from exc


def _parse_points(text: str) -> list[HElem]:
    try:
        data = json.loads(text)
        if not isinstance(data, list) or not data:
            raise ValueError("expected a non-empty JSON list of elements")
        return [HElem.from_json(d) for d in data]
    except (json.JSONDecodeError, HTError, ValueError) as exc:
        raise UsageError(f"cannot read points: {exc}") from exc


def _parse_multi_index(text: str) -> tuple[int, int, int]:
    try:
        parts = tuple(int(p) for p in text.split(","))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected three integers like 2,1,1, got {text!r}") from exc
    if len(parts) != 3 or min(parts) < 0:
        raise argparse.ArgumentTypeError(f"expected three non-negative integers, got {text!r}")
    return parts


# ---------------------------------------------------------------------------
# subcommands


def cmd_verify(args, out) -> int:
    scales = tuple(args.t) if args.t else certify.DEFAULT_SCALES
    cfg = certify.Config(samples=args.samples, trunc=args.trunc, tol_scale=args.tol_scale)
    reports = certify.run_suites(args.suite, scales, args.seed, cfg, jobs=args.jobs)
    for r in reports:
        print(f"{r.suite:<12} t={r.t:+g}  {'PASS' if r.passed else 'FAIL'}  ({r.wall_time:.2f}s)", file=out)
        if args.verbose or not r.passed:
            _print_entries(r.entries, out)
    passed = all(r.passed for r in reports)
    total = sum(r.wall_time for r in reports)
    print(f"{'all suites pass' if passed else 'FAILURES'}; suite time {total:.1f}s", file=out)
    payload = {"command": "verify", "seed": args.seed, "scales": list(scales),
               "reports": [r.to_json() for r in reports]}
    return _finish(payload, passed, args.json)


def cmd_table(args, out) -> int:
    t = args.t
    units = dict(zip(UNIT_NAMES, basis(t)))
    expected = certify.expected_cayley(t)
    print(f"Cayley table, t = {t:g}", file=out)
    print("      " + "".join(f"{v:>12}" for v in UNIT_NAMES), file=out)
    entries = []
    for u in UNIT_NAMES:
        cells = []
        for v in UNIT_NAMES:
            c, w = expected[(u, v)]
            gap = (units[u] * units[v] - units[w] * float(c)).norm()
            entries.append(_entry(args, f"{u}*{v}", gap, 1e-15))
            coef = "" if c == 1 else "-" if c == -1 else f"{c:g}"
            cells.append(f"{coef}{w}" if w != "1" or coef in ("", "-") else coef)
        print(f"{u:>6}" + "".join(f"{c:>12}" for c in cells), file=out)
    print("Adjoints of the units", file=out)
    for u in UNIT_NAMES:
        circ = units[u].adjoint(AdjointKind.CIRCLED).coords
        brac = units[u].adjoint(AdjointKind.BRACKET).coords
        print(f"{u:>6}  circled={tuple(round(x, 12) + 0.0 for x in circ)}  "
              f"bracket={tuple(round(x, 12) + 0.0 for x in brac)}", file=out)
    passed = all(e["pass"] for e in entries)
    print(f"{sum(e['pass'] for e in entries)}/16 products match", file=out)
    return _finish({"command": "table", "t": t, "entries": entries}, passed, args.json)


def cmd_norm(args, out) -> int:
    q = _parse_elem(args.elem)
    values = {kind.name: q.norm(kind) for kind in NormKind}
    entries = []
    for kind in NormKind:
        for adj in (AdjointKind.CIRCLED, AdjointKind.BRACKET):
            gap = abs(q.adjoint(adj).norm(kind) - values[kind.name])
            entries.append(_entry(args, f"{kind.name}_invariant_under_{adj.name.lower()}", gap,
                                         1e-12 * max(1.0, values[kind.name])))
    for name, v in values.items():
        print(f"{name:<7} {v:.17g}", file=out)
    print(f"det     {q.det():.17g}", file=out)
    _print_entries(entries, out)
    passed = all(e["pass"] for e in entries)
    payload = {"command": "norm", "element": q.to_json(), "norms": values, "det": q.det(), "entries": entries}
    return _finish(payload, passed, args.json)


def cmd_blaschke(args, out) -> int:
    alpha = _parse_elem(args.alpha)
    trunc = args.trunc or 256
    kind = AdjointKind.CIRCLED if args.adjoint == "circled" else AdjointKind.BRACKET
    try:
        if kind is AdjointKind.CIRCLED:
            s = hd.blaschke_circled(alpha, trunc)
            direct = hd.blaschke_circled_direct(alpha, 64)
            entries = [_entry(args, "expansion_vs_star_division", series_distance(s.with_trunc(64), direct), 1e-11)]
        else:
            s, data, _ = hd.bracket_blaschke(alpha, trunc)
            direct = hd.bracket_blaschke_direct(alpha, 64)
            entries = [_entry(args, "realization_vs_direct", series_distance(s.with_trunc(64), direct), 1e-11)]
            tols = {"stein": 1e-12, "gamma_series": 1e-12, "self_adjoint": 1e-12, "l_inverse": 1e-10,
                    "k_squared": 1e-11, "unitary_left": 1e-10, "unitary_right": 1e-10}
            entries += [_entry(args, k, v, tols[k]) for k, v in hd.bracket_certificates(data).items()]
    except HTError as exc:
        raise UsageError(str(exc)) from exc
    entries.append(_entry(args, "isometry_gram", hd.isometry_gram(s, kind, 8), 1e-9))
    entries.append(_entry(args, "vanishes_at_alpha", s(alpha).norm(), 1e-9))
    print(f"{args.adjoint} Blaschke factor at {alpha!r}, truncation {trunc}", file=out)
    _print_entries(entries, out)
    passed = all(e["pass"] for e in entries)
    payload = {"command": "blaschke", "adjoint": args.adjoint, "alpha": alpha.to_json(),
               "coefficients": s.with_trunc(8), "entries": entries}
    return _finish(payload, passed, args.json)


def cmd_interp(args, out) -> int:
    points = _parse_points(args.points)
    try:
        r, _ = hd.theta_interpolate(points, 8)
    except HTError as exc:
        raise UsageError(str(exc)) from exc
    c = hd.theta_certificates(points, r)
    entries = [
        _entry(args, "theta_vanishes_at_points", c.point_residual, 1e-9),
        _entry(args, "stein_gram", c.stein_gram, 1e-10),
        _entry(args, "stein_cross", c.stein_cross, 1e-10),
        _entry(args, "stein_unit", c.stein_unit, 1e-10),
        _entry(args, "inverse_stein", c.stein_inverse, 1e-10),
        _entry(args, "coefficient_orthonormality", c.orthonormality, 1e-10),
    ]
    print(f"interpolation through {len(points)} point(s), Gram condition {c.gram_condition:.3e}", file=out)
    _print_entries(entries, out)
    passed = all(e["pass"] for e in entries)
    payload = {"command": "interp", "points": points, "gram_condition": c.gram_condition,
               "realization": r, "entries": entries}
    return _finish(payload, passed, args.json)


def cmd_fueter(args, out) -> int:
    t = args.t
    alpha = args.alpha
    rng = np.random.default_rng(args.seed)
    pts = fu.sample_admissible(rng, t, args.samples)
    batch = tuple(pts.T)

    def zeta_n(x):
        return fu.zeta_pow(alpha, x, t)

    def worst(op):
        return float(np.max(fu.apply_operator(zeta_n, op, batch, t).op_norm()))

    rows = [
        ("V_t mu^alpha", fu.kernel_check_mu(alpha, pts, t)),
        ("nabla_t zeta^n", worst(fu.FueterOp.NABLA)),
        ("right nabla_t zeta^n", worst(fu.FueterOp.RIGHT_NABLA)),
        ("laplacian_t zeta^n", worst(fu.FueterOp.LAPLACE)),
    ]
    tol = 1e-8 * args.tol_scale
    report = [{"test": name, "t": t, "alpha_or_n": list(alpha), "max_residual": float(v), "pass": bool(v <= tol)}
              for name, v in rows]
    for row in report:
        print(f"{row['test']:<22} t={t:g} alpha={tuple(alpha)} max_residual={row['max_residual']:.3e} "
              f"{'PASS' if row['pass'] else 'FAIL'}", file=out)
    passed = all(r["pass"] for r in report)
    return _finish({"command": "fueter", "samples": args.samples, "seed": args.seed, "rows": report},
                   passed, args.json)


def cmd_realize(args, out) -> int:
    scales = tuple(args.t) if args.t else certify.DEFAULT_SCALES
    cfg = certify.Config(samples=args.samples, tol_scale=args.tol_scale)
    reports = certify.run_suites(["rational"], scales, args.seed, cfg)
    for r in reports:
        print(f"rational round trips t={r.t:+g}", file=out)
        _print_entries(r.entries, out)
    passed = all(r.passed for r in reports)
    payload = {"command": "realize", "seed": args.seed, "reports": [r.to_json() for r in reports]}
    return _finish(payload, passed, args.json)


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scaledquat", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, with_json=True):
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--tol-scale", type=float, default=1.0)
        if with_json:
            p.add_argument("--json", metavar="PATH", help="write the JSON report here")

    p = sub.add_parser("verify", help="run the certification suites")
    p.add_argument("--t", type=float, action="append", help="scale (repeatable); default is the standard sweep")
    p.add_argument("--suite", action="append", choices=list(certify.SUITES), help="suite to run (repeatable)")
    p.add_argument("--trunc", type=int)
    p.add_argument("--samples", type=int)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-v", "--verbose", action="store_true")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("table", help="print and check the unit products")
    p.add_argument("--t", type=float, required=True)
    common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("norm", help="norms of an element given as JSON")
    p.add_argument("--elem", required=True, help='e.g. {"t": -1, "a": [1, 0], "b": [0, 1]}')
    common(p)
    p.set_defaults(func=cmd_norm)

    p = sub.add_parser("blaschke", help="build and certify a Blaschke factor")
    p.add_argument("--adjoint", choices=("circled", "bracket"), default="circled")
    p.add_argument("--alpha", required=True, help="element JSON")
    p.add_argument("--trunc", type=int)
    common(p)
    p.set_defaults(func=cmd_blaschke)

    p = sub.add_parser("interp", help="interpolation through a list of points")
    p.add_argument("--points", required=True, help="JSON list of elements")
    common(p)
    p.set_defaults(func=cmd_interp)

    p = sub.add_parser("fueter", help="kernel residuals for one multi-index")
    p.add_argument("--alpha", type=_parse_multi_index, required=True, help="a1,a2,a3")
    p.add_argument("--t", type=float, required=True)
    p.add_argument("--samples", type=int, default=100)
    common(p)
    p.set_defaults(func=cmd_fueter)

    p = sub.add_parser("realize", help="rational function round trips")
    p.add_argument("--t", type=float, action="append")
    p.add_argument("--samples", type=int)
    common(p)
    p.set_defaults(func=cmd_realize)
    return parser


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = sys.stdout if out is None else out
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if getattr(args, "t", None) is not None:
            for t in args.t if isinstance(args.t, list) else [args.t]:
                if t == 0:
                    raise UsageError("the scale t must be nonzero")
        return args.func(args, out)
    except UsageError as exc:
        print(f"{parser.prog}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
