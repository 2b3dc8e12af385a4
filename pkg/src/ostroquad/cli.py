"""Command-line interface.

Every command writes JSON to standard output, or CSV with ``--format csv``.
Floats are printed with 9 significant digits so identical invocations give
byte-identical output.

Exit status: 0 on success, 1 when ``--strict`` is given and a violation was
found, 2 on invalid input (message on standard error).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import List, Optional, Sequence

from . import bounds, funcspace, means, quadrature, verify
from .errors import OstroquadError, ToleranceNotMet

SIG_DIGITS = 9


def fmt_float(v: float):
    if not math.isfinite(v):
        return None
    return float(f"{v:.{SIG_DIGITS}g}")


def _round(obj):
    if isinstance(obj, bool) or obj is None:
        return obj
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, dict):
        return {k: _round(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return _round(obj.item())
    return obj


def to_json(obj) -> str:
    return json.dumps(_round(obj), indent=2)


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return f"{v:.{SIG_DIGITS}g}"
    return v


def to_csv(rows: Sequence[dict], columns: Optional[Sequence[str]] = None) -> str:
    rows = list(rows)
    if columns is None:
        columns = list(rows[0]) if rows else []
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({k: _csv_cell(row.get(k)) for k in columns})
    return buf.getvalue()


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


class _UsageError(Exception):
    pass


def _add_common(p, weight=True, x=False, mode=True):
    p.add_argument("--function", required=True, help="function id, see `list`")
    p.add_argument("--p", type=float, default=None, help="parameter for pow_p_half")
    if weight:
        p.add_argument("--weight", default="unit", help="weight id, see `list`")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    if x:
        p.add_argument("--x", type=float, default=None)
    if mode:
        p.add_argument("--mode", choices=bounds.MODES, default="paper")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ostroquad", description=__doc__.splitlines()[0])
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("list", help="registered functions and weights")

    p = sub.add_parser("check", help="evaluate one inequality")
    p.add_argument("--ineq", required=True, help='e.g. "2.6" or UNWEIGHTED_2_6')
    _add_common(p, x=True)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("integrate", help="composite rule with a-priori bound")
    _add_common(p)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=int)
    g.add_argument("--tol", type=float)
    p.add_argument("--xi", choices=quadrature.XI_KINDS, default="midpoint")
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("converge", help="error and bound over uniform partitions")
    _add_common(p)
    p.add_argument("--ns", required=True, help="comma separated, e.g. 1,2,4,8")

    p = sub.add_parser("audit", help="audit the equalities used in the proof")
    _add_common(p, x=True, mode=False)

    p = sub.add_parser("verify", help="randomised inequality suite")
    p.add_argument("--suite", choices=sorted(verify.SUITES), required=True)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--strict", action="store_true")

    p = sub.add_parser("means", help="closed-form special-means case")
    p.add_argument("--case", required=True, choices=means.CASES)
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--x", type=float, default=None)
    p.add_argument("--p", type=float, default=None)
    p.add_argument("--strict", action="store_true")
    return parser


def _emit(out, args, payload, rows=None, columns=None):
    if args.format == "csv":
        if rows is None:
            rows = payload if isinstance(payload, list) else [payload]
        out.write(to_csv(rows, columns))
    else:
        out.write(to_json(payload) + "\n")


def _function(args):
    return funcspace.get_function(args.function, args.p)


def _cmd_list(args, out):
    reg = funcspace.list_registry()
    rows = [{"kind": "function", "id": i} for i in reg["functions"]]
    rows += [{"kind": "weight", "id": i} for i in reg["weights"]]
    _emit(out, args, reg, rows)
    return 0


def _cmd_check(args, out):
    report = bounds.evaluate_bound(
        args.ineq, _function(args), funcspace.get_weight(args.weight),
        (args.a, args.b), args.x, args.mode,
    )
    _emit(out, args, report.to_dict())
    return 1 if args.strict and not report.holds else 0


def _cmd_integrate(args, out, err):
    f, w = _function(args), funcspace.get_weight(args.weight)
    if args.n is not None:
        part = quadrature.Partition.uniform(args.a, args.b, args.n)
        xi = quadrature.intermediate_points(part, args.xi, args.seed)
        result = quadrature.integrate_partition(f, w, part, xi, args.mode)
    else:
        if args.xi != "midpoint":
            raise _UsageError("--tol uses midpoint intermediate points only")
        try:
            result = quadrature.adaptive_integrate(f, w, (args.a, args.b), args.tol, args.mode)
        except ToleranceNotMet as exc:
            err.write(f"error: {exc}\n")
            _emit(out, args, exc.result.to_dict(), [exc.result.csv_row()], quadrature.CSV_COLUMNS)
            return 2
    _emit(out, args, result.to_dict(), [result.csv_row()], quadrature.CSV_COLUMNS)
    return 0


def _cmd_converge(args, out):
    try:
        ns = [int(tok) for tok in args.ns.split(",") if tok.strip()]
    except ValueError:
        raise _UsageError(f"--ns must be comma separated integers, got {args.ns!r}") from None
    rows = quadrature.convergence_table(
        _function(args), funcspace.get_weight(args.weight), (args.a, args.b), ns, args.mode
    )
    payload = [r.csv_row() for r in rows]
    _emit(out, args, payload, payload, quadrature.CSV_COLUMNS)
    return 0


def _cmd_audit(args, out):
    if args.x is None:
        raise _UsageError("audit needs --x")
    steps = verify.audit_proof_steps(
        _function(args), funcspace.get_weight(args.weight), (args.a, args.b), args.x
    )
    _emit(out, args, [s.to_dict() for s in steps])
    return 0


def _cmd_verify(args, out):
    report = verify.run_suite(args.suite, args.samples, args.seed, args.workers)
    rows = report.rows()
    columns = ["sample", *bounds.REPORT_KEYS]
    _emit(out, args, report.to_dict(), rows, columns)
    return 1 if args.strict and report.violations else 0


def _cmd_means(args, out):
    report = means.case_report(means.MeansCase(args.case, args.a, args.b, args.x, args.p))
    _emit(out, args, report.to_dict())
    return 1 if args.strict and not report.holds else 0


def run_command(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    """Run one command; returns the exit status."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
        cmd = args.command
        if cmd == "list":
            return _cmd_list(args, out)
        if cmd == "check":
            return _cmd_check(args, out)
        if cmd == "integrate":
            return _cmd_integrate(args, out, err)
        if cmd == "converge":
            return _cmd_converge(args, out)
        if cmd == "audit":
            return _cmd_audit(args, out)
        if cmd == "verify":
            return _cmd_verify(args, out)
        return _cmd_means(args, out)
    except _UsageError as exc:
        err.write(f"usage error: {exc}\n")
        return 2
    except (OstroquadError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 2


def main() -> None:
    try:
        code = run_command()
        sys.stdout.flush()
    except BrokenPipeError:
        # output piped into e.g. `head`; silence the flush at interpreter exit
        os.dup2(os.open(os.devnull, os.O_WRONLY), sys.stdout.fileno())
        code = 0
    sys.exit(code)


if __name__ == "__main__":
    main()
