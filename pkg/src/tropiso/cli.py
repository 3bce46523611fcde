"""Command-line interface.

Exit codes: 0 success or certified, 1 refuted, 2 invalid input, 3 inconclusive.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from typing import List, Optional

from .core import TropVector, ext, format_ext
from .io import FormatError, cell_to_json, read_kernel, read_vector, write_kernel
from .irreducible import archimedean_classes, essential_columns, essential_rows, fully_reduced
from .isophi import (
    NotFullyReducedError,
    SizeCapError,
    find_kernel_conjugacy,
    hilbert_profile,
    is_max_plus_iso,
    dual_value,
    primal_value,
)
from .kernel import (
    Kernel,
    conjugate,
    e_x_vector,
    separates_points,
    strict_trop_monotone,
    transpose_conjugate,
)
from .metrics import (
    from_metric,
    from_weak_metric,
    funk_weak_metric,
    inner_product_kernel,
    metric_from_graph,
    semiconvex_kernel,
)

EXIT_OK, EXIT_REFUTED, EXIT_INVALID, EXIT_INCONCLUSIVE = 0, 1, 2, 3


def _fmt(v) -> str:
    return format_ext(v)


def _vec(f: TropVector) -> str:
    return " ".join(_fmt(v) for v in f.values)


def _jsonable(v):
    if isinstance(v, TropVector):
        return {"points": list(v.points), "values": [cell_to_json(a) for a in v.values]}
    if isinstance(v, dict):
        return {str(k): _jsonable(a) for k, a in v.items()}
    if isinstance(v, (list, tuple)):
        return [_jsonable(a) for a in v]
    if isinstance(v, (bool, str)) or v is None:
        return v
    return cell_to_json(v)


class Reporter:
    """Collects ``key: value`` lines, or a JSON document with ``--json``."""

    def __init__(self, as_json: bool):
        self.as_json = as_json
        self.data = {}
        self.lines: List[str] = []

    def put(self, key: str, value, text: Optional[str] = None):
        self.data[key] = _jsonable(value)
        if text is None:
            if isinstance(value, bool):
                text = "true" if value else "false"
            elif isinstance(value, TropVector):
                text = _vec(value)
            elif isinstance(value, (list, tuple)):
                text = " ".join(str(a) if isinstance(a, str) else _fmt(a) for a in value)
            elif value is None:
                text = "n/a"
            else:
                text = str(value) if isinstance(value, str) else _fmt(value)
        self.lines.append(f"{key}: {text}".rstrip())

    def block(self, key: str, value, rows: List[str]):
        self.data[key] = _jsonable(value)
        self.lines.append(f"{key}:")
        self.lines.extend(f"  {r}" for r in rows)

    def emit(self):
        if self.as_json:
            print(json.dumps(self.data, indent=2))
        else:
            print("\n".join(self.lines))


def analysis_report(B: Kernel) -> dict:
    """Structured analysis of a kernel; the ``analyze`` command renders it."""
    samples = [TropVector.constant(B.y_points, 0)] + [B.row(x) for x in B.x_points]
    closure_ok = all(conjugate(B, transpose_conjugate(B, conjugate(B, f))) == conjugate(B, f)
                     for f in samples)
    cols, rows = essential_columns(B), essential_rows(B)
    strict = strict_trop_monotone(B) if B.is_square else None
    return {
        "shape": B.shape,
        "closure_ok": closure_ok,
        "essential_columns": cols.essential_columns,
        "redundant_columns": cols.redundant_columns,
        "duplicate_columns": cols.duplicates,
        "essential_rows": rows.essential_columns,
        "redundant_rows": rows.redundant_columns,
        "duplicate_rows": rows.duplicates,
        "fully_reduced": cols.is_reduced and rows.is_reduced,
        "strict_monotone": strict,
        "separation_ok": separates_points(B),
        "has_neg_inf": B.has_neg_inf(),
        "e_x_table": {x: e_x_vector(B, x) for x in B.x_points},
        "archimedean_classes": archimedean_classes(B),
    }


def cmd_analyze(args) -> int:
    B = read_kernel(args.kernel)
    rep = analysis_report(B)
    out = Reporter(args.json)
    out.put("kernel", f"{rep['shape'][0]}x{rep['shape'][1]}")
    out.put("closure_ok", rep["closure_ok"])
    out.put("essential_columns", list(rep["essential_columns"]))
    out.block("redundant_columns", rep["redundant_columns"],
              [f"{y} = sup {_coeffs(w)}" for y, w in rep["redundant_columns"].items()])
    out.put("duplicate_columns", list(rep["duplicate_columns"]))
    out.put("essential_rows", list(rep["essential_rows"]))
    out.block("redundant_rows", rep["redundant_rows"],
              [f"{x} = sup {_coeffs(w)}" for x, w in rep["redundant_rows"].items()])
    out.put("duplicate_rows", list(rep["duplicate_rows"]))
    out.put("fully_reduced", rep["fully_reduced"])
    out.put("strict_monotone", rep["strict_monotone"])
    out.put("separation_ok", rep["separation_ok"])
    out.put("has_neg_inf", rep["has_neg_inf"])
    out.block("e_x_table", rep["e_x_table"], [f"{x}: {_vec(e)}" for x, e in rep["e_x_table"].items()])
    classes = rep["archimedean_classes"]
    out.block("archimedean_classes",
              [{"members": list(c.members), "maximal": c.maximal} for c in classes],
              [" ".join(c.members) + (" (maximal)" if c.maximal else "") for c in classes])
    out.emit()
    return EXIT_OK


def _coeffs(w: TropVector) -> str:
    return ", ".join(f"{_fmt(v)} + col {y}" for y, v in w.items())


def _profile_or_none(B: Kernel):
    try:
        return hilbert_profile(B, full=True)
    except ValueError:
        return None


def cmd_isophi(args) -> int:
    F, G = read_kernel(args.kernel_f), read_kernel(args.kernel_g)
    out = Reporter(args.json)
    pf, pg = _profile_or_none(F), _profile_or_none(G)
    if pf is not None and pg is not None:
        out.put("profile_f", list(pf))
        out.put("profile_g", list(pg))
        if pf != pg:
            out.put("obstruction", True)
            out.put("verdict", "refuted")
            out.emit()
            return EXIT_REFUTED
        out.put("obstruction", False)
    else:
        out.put("obstruction", None, "n/a (infinite column entries)")
    finite = F.is_finite() and G.is_finite()
    reduced = fully_reduced(F) and fully_reduced(G)
    out.put("fully_reduced", reduced)
    cert = None
    try:
        if finite:
            cert = find_kernel_conjugacy(F, G, allow_large=args.allow_large,
                                         require_fully_reduced=False)
    except SizeCapError as exc:
        print(f"error: {exc}; pass --allow-large to search anyway", file=sys.stderr)
        return EXIT_INVALID
    if cert is not None and cert.verify(F, G) and is_max_plus_iso(F, G, cert.as_iso()):
        out.put("tau", cert.tau, " ".join(f"{a}->{b}" for a, b in cert.tau.items()))
        out.put("sigma", cert.sigma, " ".join(f"{a}->{b}" for a, b in cert.sigma.items()))
        out.put("psi", cert.psi)
        out.put("varphi", cert.varphi)
        J = cert.as_iso()
        out.put("g", J.g)
        out.put("phi", J.phi, " ".join(f"{a}->{b}" for a, b in J.phi.items()))
        out.put("verdict", "certified")
        out.emit()
        return EXIT_OK
    if finite and reduced:
        out.put("verdict", "refuted")
        out.emit()
        return EXIT_REFUTED
    out.put("verdict", "inconclusive")
    out.emit()
    return EXIT_INCONCLUSIVE


def cmd_dual(args) -> int:
    B = read_kernel(args.kernel)
    f, g = read_vector(args.f), read_vector(args.g)
    for name, v in (("f", f), ("g", g)):
        if set(v.points) != set(B.x_points):
            raise FormatError(f"{name} is indexed by {list(v.points)}, expected {list(B.x_points)}")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        dual = dual_value(B, f, g)
    for w in caught:
        print(f"warning: {w.message}", file=sys.stderr)
    primal = primal_value(f, g)
    out = Reporter(args.json)
    out.put("primal", primal)
    out.put("dual", dual)
    out.put("weak_duality", dual <= primal)
    out.emit()
    return EXIT_OK


def _points(raw: List[str]) -> list:
    return [tuple(ext(c) for c in p.split(",")) for p in raw]


def _labels(raw: Optional[str], n: int):
    if raw is None:
        return None
    labels = [s.strip() for s in raw.split(",")]
    if len(labels) != n:
        raise ValueError(f"{len(labels)} labels for {n} points")
    return labels


def cmd_make_kernel(args) -> int:
    meta = {"kind": args.kind}
    if args.kind == "metric":
        if not args.edge:
            raise ValueError("metric kernels need at least one --edge")
        d = metric_from_graph([(u, v, ext(w)) for u, v, w in args.edge])
        p = ext(args.power)
        B = from_metric(d, p)
        meta["power"] = cell_to_json(p)
    elif args.kind == "funk":
        pts = _points(args.point)
        delta = funk_weak_metric(pts, labels=_labels(args.labels, len(pts)),
                                 base=ext(args.base) if args.base else None)
        B = from_weak_metric(delta)
        meta["log_base"] = args.base if args.base else "e"
        meta["approximate"] = delta.approximate
    elif args.kind == "inner":
        pts = _points(args.point)
        dual = _points(args.dual_point) if args.dual_point else None
        B = inner_product_kernel(pts, dual, x_labels=_labels(args.labels, len(pts)))
    else:
        pts = _points(args.point)
        B = semiconvex_kernel(pts, ext(args.C), labels=_labels(args.labels, len(pts)))
        meta["C"] = args.C
    if not B.is_exact():
        meta["approximate"] = True
    write_kernel(B, args.output, meta)
    print(f"wrote {B.shape[0]}x{B.shape[1]} kernel to {args.output}")
    return EXIT_OK


def cmd_paper_examples(args) -> int:
    from .paper_examples import run_checks
    results = run_checks()
    if args.json:
        print(json.dumps([{"name": n, "ok": ok, "detail": d} for n, ok, d in results], indent=2))
    else:
        for name, ok, detail in results:
            print(f"PASS {name}" if ok else f"FAIL {name}: {detail}")
        failed = sum(not ok for _, ok, _ in results)
        print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if all(ok for _, ok, _ in results) else EXIT_REFUTED


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON document instead of text")
    parser = argparse.ArgumentParser(prog="tropiso", description="Max-plus kernel ranges and their isomorphisms.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="report on a kernel file")
    p.add_argument("kernel")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("isophi", parents=[common], help="look for a (max,+)-isomorphism between two ranges")
    p.add_argument("kernel_f")
    p.add_argument("kernel_g")
    p.add_argument("--allow-large", action="store_true", help="lift the size cap on the bijection search")
    p.set_defaults(func=cmd_isophi)

    p = sub.add_parser("dual", parents=[common], help="primal and dual values for f, g")
    p.add_argument("kernel")
    p.add_argument("f")
    p.add_argument("g")
    p.set_defaults(func=cmd_dual)

    p = sub.add_parser("make-kernel", parents=[common], help="write a kernel built by a factory")
    p.add_argument("kind", choices=["metric", "funk", "inner", "semiconvex"])
    p.add_argument("--edge", nargs=3, action="append", metavar=("U", "V", "W"),
                   help="metric: graph edge with weight W (repeatable)")
    p.add_argument("--power", default="1", help="metric: exponent p in (0, 1]")
    p.add_argument("--point", action="append", default=[], help="comma-separated coordinates (repeatable)")
    p.add_argument("--dual-point", action="append", help="inner: dual coordinates (repeatable)")
    p.add_argument("--base", help="funk: log base for exact values")
    p.add_argument("--C", default="1", help="semiconvex: curvature constant")
    p.add_argument("--labels", help="comma-separated point labels")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_make_kernel)

    p = sub.add_parser("paper-examples", parents=[common], help="run the built-in worked examples")
    p.set_defaults(func=cmd_paper_examples)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, NotFullyReducedError, ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
