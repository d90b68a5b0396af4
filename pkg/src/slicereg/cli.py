"""Command-line harness: solve interpolation problems, run verification
suites, cross-check evaluation backends, and sample functions on a slice.

Problem JSON: {"nodes": [r1, ...], "values": [[w,x,y,z], ...], "h": ...}
Expression JSON: see moebius.expr_from_json (kinds const/identity/moebius/
star_mul/star_inv/conj/bullet/sum/series/blaschke).
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import qarray, series as se
from .errors import AmbiguousBoundary, SliceRegError
from .interpolation import (
    InterpolationProblem,
    build_q_table,
    build_solution,
    classify,
    pick_matrix,
    psd_check,
)
from .moebius import FunctionExpr, expr_from_json
from .quaternion import Quaternion
from .verify import SamplerConfig, run_suite

__all__ = ["main"]


def _dump(obj) -> str:
    return json.dumps(obj, sort_keys=True, separators=(",", ":"))


def _load_expr_arg(spec: str) -> FunctionExpr:
    """Expression from an inline JSON literal or from a file path."""
    text = spec
    try:
        data = json.loads(text)
    except ValueError:
        with open(spec, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    return expr_from_json(data)


def _parse_h(raw):
    if raw is None:
        return None
    if isinstance(raw, str):
        try:
            data = json.loads(raw)
        except ValueError:
            with open(raw, "r", encoding="utf-8") as fh:
                data = json.load(fh)
    else:
        data = raw
    if isinstance(data, (int, float)):
        return Quaternion(data)
    if isinstance(data, list):
        return Quaternion.from_iter(data)
    return expr_from_json(data)


def cmd_interpolate(args) -> int:
    try:
        with open(args.file, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        nodes = data["nodes"]
        values = [Quaternion.from_iter(v) for v in data["values"]]
        h = _parse_h(args.h if args.h is not None else data.get("h"))
        prob = InterpolationProblem(nodes, values)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"error: malformed problem input: {exc}", file=sys.stderr)
        return 1
    table = build_q_table(prob)
    pick = pick_matrix(list(prob.nodes), list(prob.values))
    _, min_eig = psd_check(pick)
    try:
        kind = classify(table)
    except AmbiguousBoundary as exc:
        print(_dump({"error": "ambiguous_boundary", "cell": list(exc.cell),
                     "table": table.to_json()}))
        return 3
    report = {
        "kind": kind.to_json(),
        "table": table.to_json(),
        "pickMinEig": min_eig,
        "solution": None,
        "residuals": None,
    }
    if kind.variant == "no_solution":
        print(_dump(report))
        return 2
    solution = build_solution(table, kind,
                              None if kind.variant == "singular" else h)
    residuals = [abs(solution.eval(Quaternion(r)) - s)
                 for r, s in zip(prob.nodes, prob.values)]
    report["solution"] = solution.to_json()
    report["residuals"] = residuals
    print(_dump(report))
    return 0


def cmd_verify(args) -> int:
    try:
        f = _load_expr_arg(args.f)
        cfg = SamplerConfig(seed=args.seed, count=args.count,
                            radius_cap=args.radius_cap)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        report = run_suite(args.suite, f, cfg)
    except SliceRegError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    print(_dump(report.to_json()))
    return 0 if report.passed else 4


def cmd_crosscheck(args) -> int:
    try:
        f = _load_expr_arg(args.f)
        cfg = SamplerConfig(seed=args.seed, count=args.count,
                            radius_cap=args.radius_cap)
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    from .verify import crosscheck
    report = crosscheck(f, cfg, order=args.order)
    print(_dump(report.to_json()))
    return 0 if report.passed else 4


def _parse_slice(spec: str) -> Quaternion:
    named = {"i": (1.0, 0.0, 0.0), "j": (0.0, 1.0, 0.0), "k": (0.0, 0.0, 1.0)}
    if spec in named:
        x, y, z = named[spec]
    else:
        x, y, z = (float(v) for v in json.loads(spec))
    n = math.sqrt(x * x + y * y + z * z)
    if n == 0.0:
        raise ValueError("slice axis must be nonzero")
    return Quaternion(0.0, x / n, y / n, z / n)


def cmd_grid(args) -> int:
    try:
        f = _load_expr_arg(args.f)
        axis = _parse_slice(args.slice)
        res = args.res
        if not 1 <= res <= 2048:
            raise ValueError("resolution must be in [1, 2048]")
    except (OSError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    # inscribed square of the radius-0.95 slice disk, row-major
    half = 0.95 / math.sqrt(2.0)
    coords = np.linspace(-half, half, res) if res > 1 else np.array([0.0])
    pts = np.zeros((res * res, 4))
    xs, ys = [], []
    for row in range(res):
        for col in range(res):
            x, y = coords[col], coords[row]
            xs.append(x)
            ys.append(y)
            pts[row * res + col, 0] = x
            pts[row * res + col, 1] = y * axis.x
            pts[row * res + col, 2] = y * axis.y
            pts[row * res + col, 3] = y * axis.z
    vals = f.eval_many(pts)
    mods = qarray.qnorm(vals)
    res_w = vals[:, 0]
    imag_along = vals[:, 1] * axis.x + vals[:, 2] * axis.y + vals[:, 3] * axis.z
    print("x,y,abs,re,arg")
    for m in range(res * res):
        arg = math.atan2(imag_along[m], res_w[m])
        print(",".join(f"{v:.17g}" for v in
                       (xs[m], ys[m], mods[m], res_w[m], arg)))
    return 0


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="slicereg",
        description="Interpolation and verification for slice regular "
                    "self-maps of the quaternionic unit ball.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_int = sub.add_parser("interpolate", help="solve a problem file")
    p_int.add_argument("file")
    p_int.add_argument("--h", default=None,
                       help="parameter h: JSON expr, quaternion, or file")
    p_int.set_defaults(func=cmd_interpolate)

    p_ver = sub.add_parser("verify", help="run a verification suite")
    p_ver.add_argument("--suite", required=True,
                       choices=["spl", "spl3", "multi", "dieudonne",
                                "goluzin", "balpha"])
    p_ver.add_argument("--f", required=True)
    p_ver.add_argument("--seed", type=int, default=0)
    p_ver.add_argument("--count", type=int, default=1000)
    p_ver.add_argument("--radius-cap", type=float, default=0.95)
    p_ver.set_defaults(func=cmd_verify)

    p_cc = sub.add_parser("crosscheck", help="exact vs series backends")
    p_cc.add_argument("--f", required=True)
    p_cc.add_argument("--order", type=int, default=None)
    p_cc.add_argument("--seed", type=int, default=0)
    p_cc.add_argument("--count", type=int, default=500)
    p_cc.add_argument("--radius-cap", type=float, default=0.95)
    p_cc.set_defaults(func=cmd_crosscheck)

    p_grid = sub.add_parser("grid", help="sample |f| on a slice as CSV")
    p_grid.add_argument("--f", required=True)
    p_grid.add_argument("--slice", default="i")
    p_grid.add_argument("--res", type=int, default=64)
    p_grid.set_defaults(func=cmd_grid)

    args = parser.parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
