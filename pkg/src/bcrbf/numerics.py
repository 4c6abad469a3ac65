"""Precision-parameterized scalar arithmetic and dense linear algebra.

Two precision modes are supported and never silently mixed:

* ``float64`` -- plain Python floats (binary64, ~16 significant digits);
* ``mp``     -- mpmath big floats, correctly rounded to ``dps`` decimal
  digits (default 100).

Matrices are row-major lists of lists of scalars of the active mode.  All
values are immutable after construction and safe to share across threads;
factorizations and solves are single-threaded per call.  Elimination order
is deterministic, so results are bit-reproducible per precision mode.
"""

from __future__ import annotations

import contextlib
import math

import mpmath
from mpmath import mp

from .errors import NotSymmetric, SingularMatrix


class Precision:
    """Numeric context: precision mode plus the elementary functions for it.

    ``digits`` is the effective number of significant decimal digits (16 for
    binary64).  Thresholds such as the LU pivot tolerance scale with it:
    Gaussian Gram matrices are near-singular by design, so the singularity
    cutoff must track the working precision rather than sit at a fixed
    magnitude.
    """

    __slots__ = ("mode", "dps")

    def __init__(self, mode="float64", dps=100):
        if mode not in ("float64", "mp"):
            raise ValueError("precision mode must be 'float64' or 'mp'")
        if mode == "mp" and dps < 5:
            raise ValueError("mp mode needs at least 5 digits")
        self.mode = mode
        self.dps = int(dps)

    @classmethod
    def parse(cls, text):
        """Parse ``'float64'``, ``'mp'`` or ``'mp:D'`` (D decimal digits)."""
        text = text.strip().lower()
        if text == "float64":
            return cls("float64")
        if text == "mp":
            return cls("mp")
        if text.startswith("mp:"):
            return cls("mp", int(text[3:]))
        raise ValueError(f"unrecognized precision spec {text!r}")

    @property
    def digits(self):
        return 16 if self.mode == "float64" else self.dps

    def workprec(self):
        """Context manager activating this precision for mp arithmetic."""
        if self.mode == "mp":
            return mp.workdps(self.dps)
        return contextlib.nullcontext()

    def tol(self, offset):
        """10**(offset - digits), the working-precision tolerance ladder."""
        return 10.0 ** (offset - self.digits)

    def pivot_tol(self, scale=1.0):
        """LU singularity cutoff: 10**(-2*digits) times the matrix scale.

        Flat-kernel collocation matrices are solved legitimately through
        pivots at the rounding floor (the function-space error cancels);
        only pivots far below it -- structural zeros -- are refused.
        """
        s = max(1.0, float(scale))
        if self.mode == "mp":
            with mp.workdps(self.dps):
                return mpmath.mpf(10) ** (-2 * self.digits) * s
        return 10.0 ** (-2 * self.digits) * s

    # -- scalar construction and elementary functions ----------------------

    def num(self, x):
        """Coerce ``x`` (number or decimal string) into this mode's scalar."""
        if self.mode == "float64":
            return float(x)
        with mp.workdps(self.dps):
            return mpmath.mpf(x)

    def exp(self, x):
        return math.exp(x) if self.mode == "float64" else mpmath.exp(x)

    def sin(self, x):
        return math.sin(x) if self.mode == "float64" else mpmath.sin(x)

    def cos(self, x):
        return math.cos(x) if self.mode == "float64" else mpmath.cos(x)

    def sqrt(self, x):
        return math.sqrt(x) if self.mode == "float64" else mpmath.sqrt(x)

    def power(self, x, y):
        if self.mode == "float64":
            return float(x) ** float(y)
        return mpmath.power(x, y)

    @property
    def pi(self):
        if self.mode == "float64":
            return math.pi
        with mp.workdps(self.dps):
            return +mpmath.pi

    @property
    def zero(self):
        return self.num(0)

    @property
    def one(self):
        return self.num(1)

    def __repr__(self):
        if self.mode == "float64":
            return "Precision('float64')"
        return f"Precision('mp', dps={self.dps})"

    def __eq__(self, other):
        return (
            isinstance(other, Precision)
            and self.mode == other.mode
            and self.digits == other.digits
        )

    def __hash__(self):
        return hash((self.mode, self.digits))


FLOAT64 = Precision("float64")


def is_finite(x):
    return mpmath.isfinite(x)


# -- basic dense helpers ----------------------------------------------------


def zeros(ctx, rows, cols):
    z = ctx.zero
    return [[z] * cols for _ in range(rows)]


def identity(ctx, n):
    a = zeros(ctx, n, n)
    one = ctx.one
    for i in range(n):
        a[i][i] = one
    return a


def transpose(a):
    return [list(col) for col in zip(*a)]


def mat_vec(a, x):
    return [sum(row[j] * x[j] for j in range(len(x))) for row in a]


def mat_mul(a, b):
    bt = transpose(b)
    return [[sum(ra[k] * cb[k] for k in range(len(ra))) for cb in bt] for ra in a]


def max_abs(a):
    return max(abs(v) for row in a for v in row)


def norm_inf(a):
    """Max row sum; for a vector given as list of scalars, max abs entry."""
    if a and isinstance(a[0], list):
        return max(sum(abs(v) for v in row) for row in a)
    return max(abs(v) for v in a)


def norm_1(a):
    return max(sum(abs(row[j]) for row in a) for j in range(len(a[0])))


def check_finite(a, what="matrix"):
    for row in a:
        for v in row:
            if not is_finite(v):
                raise ValueError(f"non-finite entry in {what}")


# -- LU factorization with partial pivoting ---------------------------------


class LUFactorization:
    """In-place LU factors of P*A = L*U with row partial pivoting.

    Row pivoting only: at desk scale (n <= ~500) full pivoting buys nothing.
    The elimination sweep is strictly sequential so repeated runs are
    bit-identical per precision mode.
    """

    def __init__(self, ctx, a):
        n = len(a)
        if n == 0 or any(len(row) != n for row in a):
            raise ValueError("LU requires a nonempty square matrix")
        check_finite(a, "LU input")
        self.ctx = ctx
        self.n = n
        self.norm1_a = norm_1(a)
        lu = [list(row) for row in a]
        swaps = []
        tol_pivot = ctx.pivot_tol(max_abs(a))
        with ctx.workprec():
            for k in range(n):
                p = max(range(k, n), key=lambda i: abs(lu[i][k]))
                if abs(lu[p][k]) <= tol_pivot:
                    raise SingularMatrix(
                        f"pivot {k} below tolerance "
                        f"{mpmath.nstr(tol_pivot, 3)} "
                        f"(|pivot| = {mpmath.nstr(abs(lu[p][k]) + 0.0, 3)})",
                        pivot_index=k,
                    )
                if p != k:
                    lu[k], lu[p] = lu[p], lu[k]
                swaps.append(p)
                row_k = lu[k]
                piv = row_k[k]
                for i in range(k + 1, n):
                    row_i = lu[i]
                    m = row_i[k] / piv
                    row_i[k] = m
                    if m:
                        for j in range(k + 1, n):
                            row_i[j] -= m * row_k[j]
        self.lu = lu
        self.swaps = swaps

    def solve_vec(self, b):
        """Solve A x = b for one right-hand side."""
        n, lu = self.n, self.lu
        x = list(b)
        with self.ctx.workprec():
            for k, p in enumerate(self.swaps):
                if p != k:
                    x[k], x[p] = x[p], x[k]
            for i in range(1, n):
                row = lu[i]
                s = x[i]
                for j in range(i):
                    s -= row[j] * x[j]
                x[i] = s
            for i in range(n - 1, -1, -1):
                row = lu[i]
                s = x[i]
                for j in range(i + 1, n):
                    s -= row[j] * x[j]
                x[i] = s / row[i]
        return x

    def solve_transpose_vec(self, b):
        """Solve A^T x = b (used by the 1-norm condition estimator)."""
        n, lu = self.n, self.lu
        x = list(b)
        with self.ctx.workprec():
            for i in range(n):
                row_ii = lu[i][i]
                s = x[i]
                for j in range(i):
                    s -= lu[j][i] * x[j]
                x[i] = s / row_ii
            for i in range(n - 1, -1, -1):
                s = x[i]
                for j in range(i + 1, n):
                    s -= lu[j][i] * x[j]
                x[i] = s
            for k in range(n - 1, -1, -1):
                p = self.swaps[k]
                if p != k:
                    x[k], x[p] = x[p], x[k]
        return x

    def solve(self, b):
        """Solve A X = B where B is n x k (list of rows)."""
        cols = transpose(b)
        xs = [self.solve_vec(c) for c in cols]
        return transpose(xs)

    def cond1_estimate(self):
        """Hager-style 1-norm condition estimate ||A||_1 * est(||A^-1||_1)."""
        ctx, n = self.ctx, self.n
        with ctx.workprec():
            x = [ctx.num(1) / n] * n
            inv_norm = ctx.zero
            for _ in range(5):
                y = self.solve_vec(x)
                inv_norm = sum(abs(v) for v in y)
                xi = [ctx.one if v >= 0 else -ctx.one for v in y]
                z = self.solve_transpose_vec(xi)
                j = max(range(n), key=lambda i: abs(z[i]))
                if abs(z[j]) <= sum(z[i] * x[i] for i in range(n)):
                    break
                x = [ctx.zero] * n
                x[j] = ctx.one
            return self.norm1_a * inv_norm


def lu_factor(ctx, a):
    return LUFactorization(ctx, a)


def lu_solve(ctx, a, b):
    """Solve A X = B (B given as an n x k matrix) via partially pivoted LU."""
    return lu_factor(ctx, a).solve(b)


def lu_solve_vec(ctx, a, b):
    return lu_factor(ctx, a).solve_vec(b)


# -- Cholesky ----------------------------------------------------------------


def cholesky(ctx, a):
    """Lower-triangular G with G*G^T ~= A, or None when A is not numerically
    positive definite (a flag, not an exception: callers use this as a PD
    test).  Raises NotSymmetric when A deviates from symmetry beyond
    tolerance."""
    n = len(a)
    if n == 0 or any(len(row) != n for row in a):
        raise ValueError("cholesky requires a nonempty square matrix")
    check_finite(a, "cholesky input")
    scale = max_abs(a)
    tol_sym = ctx.tol(5) * max(1.0, scale)
    asym = max(
        abs(a[i][j] - a[j][i]) for i in range(n) for j in range(i + 1, n)
    ) if n > 1 else 0.0
    if asym > tol_sym:
        raise NotSymmetric(f"asymmetry {float(asym):.3e} exceeds {float(tol_sym):.3e}")
    # fail when a diagonal residual dips below minus a noise-level margin
    tol_pivot = ctx.tol(2) * max(1.0, float(scale))
    g = zeros(ctx, n, n)
    with ctx.workprec():
        for j in range(n):
            d = a[j][j]
            for k in range(j):
                d -= g[j][k] * g[j][k]
            if d <= -tol_pivot:
                return None
            if d <= 0:
                # numerically semidefinite: zero pivot, zero column
                continue
            gjj = ctx.sqrt(d)
            g[j][j] = gjj
            for i in range(j + 1, n):
                s = a[i][j]
                for k in range(j):
                    s -= g[i][k] * g[j][k]
                g[i][j] = s / gjj
    return g
