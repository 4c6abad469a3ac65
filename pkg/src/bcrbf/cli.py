"""Command-line interface.

    bcrbf solve --example ex1 --n 32 --eps 0.03125 --shape 0.18 \
        --method constrained --precision mp:100 --out run.csv
    bcrbf sweep --example ex3 --n 10x6 --shape-min 0.01 --shape-max 2 \
        --steps 30 --method both --jobs 4 --format csv
    bcrbf list

Grid configs are N, NxM or NxMxK.  Precision is ``float64``, ``mp`` or
``mp:D``; the BCRBF_PRECISION environment variable overrides the default
(mp:100).  Exit codes: 0 success, 2 bad arguments, 3 numerical failure.

Boundary conditions print in the plain-text functional grammar, e.g.
``robin 1 -0.03125 @0 = 1`` or ``multipoint @0 : 0.25 @0.6, 0.5 @1.2,
0.25 @1.8``; see ``functionals.parse_functional`` for the inverse.
"""

from __future__ import annotations

import argparse
import os
import sys

from .benchmarks import EXAMPLES, get_example
from .functionals import format_functional
from .numerics import FLOAT64, Precision
from .reporting import emit, grid_label, parse_counts, run_example, run_sweep


def _precision_arg(text):
    try:
        return Precision.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _counts_arg(text):
    try:
        return parse_counts(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _example_arg(text):
    try:
        get_example(text)
    except KeyError as exc:
        raise argparse.ArgumentTypeError(str(exc.args[0]))
    return text


def _default_precision():
    return os.environ.get("BCRBF_PRECISION", "mp:100")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="bcrbf",
        description="Boundary-condition-constrained RBF pseudospectral solver",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--example", required=True, type=_example_arg)
        p.add_argument("--n", required=True, type=_counts_arg, metavar="NxM")
        p.add_argument("--eps", type=float, default=None,
                       help="perturbation parameter (ex1 only)")
        p.add_argument("--precision", type=_precision_arg,
                       default=None, metavar="float64|mp:D")
        p.add_argument("--mode", choices=("direct", "ps"), default="direct",
                       help="constrained solver route")
        p.add_argument("--scheme",
                       choices=("uniform-interior", "chebyshev-interior"),
                       default="uniform-interior",
                       help="interior node placement (constrained method)")
        p.add_argument("--out", default=None, help="write table to this file")
        p.add_argument("--format", choices=("csv", "markdown"), default="csv")

    ps = sub.add_parser("solve", help="run one benchmark configuration")
    add_common(ps)
    ps.add_argument("--shape", type=float, required=True)
    ps.add_argument("--method", choices=("constrained", "kansa", "both"),
                    default="constrained")

    pw = sub.add_parser("sweep", help="sweep the shape parameter")
    add_common(pw)
    pw.add_argument("--shape-min", type=float, required=True)
    pw.add_argument("--shape-max", type=float, required=True)
    pw.add_argument("--steps", type=int, default=20)
    pw.add_argument("--method", choices=("constrained", "kansa", "both"),
                    default="both")
    pw.add_argument("--jobs", type=int, default=1)

    sub.add_parser("list", help="print the example registry")
    return parser


def _do_list():
    lines = []
    for ident in sorted(EXAMPLES):
        rec = EXAMPLES[ident]
        lines.append(f"{ident}: {rec.title}")
        lines.append(
            f"  default shape c = {rec.default_shape:g} "
            f"(baseline c = {rec.kansa_shape:g}), error metric: {rec.metric}"
        )
        problem = rec.make(FLOAT64)
        for d, pair in enumerate(problem.bcs):
            for bc in pair:
                lines.append(f"  bc[{d}]: {format_functional(bc.functional)}")
        for row in rec.table:
            eps = f" eps={row.eps:g}" if row.eps is not None else ""
            lines.append(
                f"  table {grid_label(row.counts)}{eps}: "
                f"constrained {row.constrained:.6g}, baseline {row.kansa:.6g}"
            )
    return "\n".join(lines) + "\n"


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)

    if args.command == "list":
        sys.stdout.write(_do_list())
        return 0

    precision = args.precision or Precision.parse(_default_precision())
    record = get_example(args.example)
    if len(args.n) != record.dim:
        parser.error(
            f"{args.example} is {record.dim}-dimensional; --n {grid_label(args.n)} is not"
        )
    if args.eps is not None and not record.has_eps:
        parser.error(f"{args.example} takes no --eps parameter")

    if args.command == "solve":
        methods = (
            ("constrained", "kansa") if args.method == "both" else (args.method,)
        )
        reports = [
            run_example(
                args.example, m, args.n, args.shape, precision,
                eps=args.eps, mode=args.mode, scheme=args.scheme,
            )
            for m in methods
        ]
    else:
        if args.shape_min <= 0 or args.shape_max < args.shape_min:
            parser.error("need 0 < --shape-min <= --shape-max")
        reports = run_sweep(
            args.example, args.method, args.n, args.shape_min, args.shape_max,
            args.steps, precision, eps=args.eps, mode=args.mode,
            scheme=args.scheme, jobs=args.jobs,
        )

    text = emit(reports, args.format)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)

    failed = [r for r in reports if r.status != "ok"]
    for r in failed:
        sys.stderr.write(
            f"bcrbf: {r.example} {r.method} {r.grid} c={r.shape:g}: {r.message}\n"
        )
    return 3 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
