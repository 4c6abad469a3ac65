"""Benchmark runs, error metrics, and machine-readable tables.

Error conventions: the maximum absolute error is taken over an inclusive
uniform evaluation grid (201 points in 1D, 51x51 in 2D, 21x21x21 in 3D);
the relative error divides it by the maximum absolute exact value on the
same grid.  Reports are plain data (picklable), so sweep points can run in
worker processes; rows come back in input order regardless of job count.
"""

from __future__ import annotations

import concurrent.futures
import time
from dataclasses import dataclass

import mpmath

from .benchmarks import get_example, self_check
from .errors import BcrbfError
from .kansa import kansa_solve
from .numerics import FLOAT64, Precision
from .pseudospectral import solve

CSV_COLUMNS = (
    "example",
    "method",
    "grid",
    "shape",
    "precision_digits",
    "max_abs_err",
    "rel_err",
    "cond_A",
    "cond_AL",
    "seconds",
)

_EVAL_POINTS = {1: 201, 2: 51, 3: 21}

_checked = set()


@dataclass
class RunReport:
    example: str
    method: str
    grid: str
    shape: float
    precision_digits: int
    max_abs_err: float = float("nan")
    rel_err: float = float("nan")
    cond_A: str = "nan"
    cond_AL: str = "nan"
    seconds: float = 0.0
    status: str = "ok"
    message: str = ""
    eps: float = None

    def row(self):
        return (
            self.example,
            self.method,
            self.grid,
            f"{self.shape:.6g}",
            str(self.precision_digits),
            _sci(self.max_abs_err),
            _sci(self.rel_err),
            self.cond_A,
            self.cond_AL,
            f"{self.seconds:.3f}",
        )


def _sci(x):
    """Scientific notation, six significant digits."""
    try:
        return f"{float(x):.5e}"
    except (OverflowError, ValueError):
        return mpmath.nstr(x, 6)


def _fmt_cond(v):
    if v is None:
        return "nan"
    try:
        return f"{float(v):.5e}"
    except (OverflowError, ValueError):
        return mpmath.nstr(v, 6)  # beyond binary64 range


def grid_label(counts):
    return "x".join(str(c) for c in counts)


def parse_counts(text):
    try:
        counts = tuple(int(part) for part in text.lower().split("x"))
    except ValueError:
        raise ValueError(f"malformed grid config {text!r} (want N, NxM or NxMxK)")
    if not 1 <= len(counts) <= 3 or any(c < 2 for c in counts):
        raise ValueError(f"malformed grid config {text!r}")
    return counts


def evaluation_axes(domain, ctx):
    """Inclusive uniform error-metric grid for a box domain."""
    n = _EVAL_POINTS[len(domain)]
    axes = []
    for a, b in domain:
        a, b = ctx.num(a), ctx.num(b)
        axes.append(tuple(a + (b - a) * j / (n - 1) for j in range(n)))
    return axes


def error_metrics(solution, exact, ctx):
    """(max abs error, relative error) over the evaluation grid."""
    axes = evaluation_axes(solution.grid.domain, ctx)
    with ctx.workprec():
        approx = solution.evaluate_axes(axes)
        counts = [len(a) for a in axes]
        max_err = ctx.zero
        max_exact = ctx.zero
        idx = [0] * len(counts)
        for flat in range(len(approx)):
            rem = flat
            for d in range(len(counts) - 1, -1, -1):
                idx[d] = rem % counts[d]
                rem //= counts[d]
            p = tuple(axes[d][idx[d]] for d in range(len(counts)))
            ue = exact.value(p)
            max_err = max(max_err, abs(approx[flat] - ue))
            max_exact = max(max_exact, abs(ue))
        rel = max_err / max_exact if max_exact > 0 else max_err
    return max_err, rel


def ensure_self_checked(ident, tol=1e-8):
    """Run the exact-solution residual self-check once per example."""
    if ident in _checked:
        return
    record = get_example(ident)
    pde, bc = self_check(record, FLOAT64)
    if not (pde <= tol and bc <= tol):
        raise BcrbfError(
            f"{ident}: exact-solution self-check failed "
            f"(pde residual {pde:.3e}, bc residual {bc:.3e})"
        )
    _checked.add(ident)


def run_example(
    ident,
    method,
    counts,
    shape,
    precision,
    eps=None,
    mode="direct",
    scheme="uniform-interior",
):
    """Solve one benchmark configuration and fill a RunReport.

    Numerical failures (singular systems, degenerate constraints) come back
    as a failed-run record rather than an exception; argument errors raise.
    """
    record = get_example(ident)
    if method not in ("constrained", "kansa"):
        raise ValueError(f"unknown method {method!r}")
    if len(counts) != record.dim:
        raise ValueError(
            f"{ident} is {record.dim}-dimensional; grid {grid_label(counts)} is not"
        )
    ensure_self_checked(ident)
    ctx = precision
    report = RunReport(
        example=ident,
        method=method,
        grid=grid_label(counts),
        shape=float(shape),
        precision_digits=ctx.digits,
        eps=float(eps) if eps is not None else None,
    )
    start = time.perf_counter()
    try:
        problem = record.make(ctx, eps) if record.has_eps else record.make(ctx)
        if method == "constrained":
            sol = solve(problem, counts, shape, ctx, mode=mode, scheme=scheme)
        else:
            sol = kansa_solve(problem, counts, shape, ctx)
        max_err, rel = error_metrics(sol, problem.exact, ctx)
        report.max_abs_err = float(max_err)
        report.rel_err = float(rel)
        report.cond_A = _fmt_cond(sol.diagnostics.get("cond_A"))
        report.cond_AL = _fmt_cond(sol.diagnostics.get("cond_AL"))
    except BcrbfError as exc:
        report.status = "failed"
        report.message = f"{type(exc).__name__}: {exc}"
    report.seconds = time.perf_counter() - start
    return report


def _sweep_worker(args):
    ident, method, counts, shape, prec_spec, eps, mode, scheme = args
    return run_example(
        ident, method, counts, shape, Precision.parse(prec_spec),
        eps=eps, mode=mode, scheme=scheme,
    )


def sweep_shapes(c_min, c_max, steps):
    """Logarithmically spaced shape parameters, ascending."""
    if not (0 < c_min <= c_max):
        raise ValueError("shape range must be positive and ascending")
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if steps == 1:
        return [float(c_min)]
    ratio = (c_max / c_min) ** (1.0 / (steps - 1))
    return [float(c_min) * ratio**k for k in range(steps)]


def run_sweep(
    ident,
    method,
    counts,
    c_min,
    c_max,
    steps,
    precision,
    eps=None,
    mode="direct",
    scheme="uniform-interior",
    jobs=1,
):
    """One RunReport per (shape, method); failures are recorded inline and
    the sweep continues.  ``method`` may be 'constrained', 'kansa' or
    'both'."""
    methods = ("constrained", "kansa") if method == "both" else (method,)
    shapes = sweep_shapes(c_min, c_max, steps)
    spec = "float64" if precision.mode == "float64" else f"mp:{precision.dps}"
    tasks = [
        (ident, m, tuple(counts), c, spec, eps, mode, scheme)
        for c in shapes
        for m in methods
    ]
    if jobs <= 1:
        return [_sweep_worker(t) for t in tasks]
    with concurrent.futures.ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_sweep_worker, tasks))


def emit(reports, fmt="csv"):
    """Render reports as CSV or a markdown table (same numbers either way)."""
    rows = [r.row() for r in reports]
    if fmt == "csv":
        lines = [",".join(CSV_COLUMNS)]
        lines.extend(",".join(r) for r in rows)
        return "\n".join(lines) + "\n"
    if fmt == "markdown":
        lines = ["| " + " | ".join(CSV_COLUMNS) + " |"]
        lines.append("|" + "|".join(" --- " for _ in CSV_COLUMNS) + "|")
        lines.extend("| " + " | ".join(r) + " |" for r in rows)
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")
