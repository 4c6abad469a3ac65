"""Unsymmetric RBF collocation baseline (unmodified kernels, appended BC rows).

The comparison method for every benchmark table: plain Gaussian product
kernels centered at all nodes of an inclusive tensor grid, PDE equations at
interior nodes, boundary-functional equations at boundary nodes.  The grid
count convention matches the tables: N per direction counts the full
inclusive grid, whose outermost layer supplies the BC rows (whereas the
constrained method counts interior nodes only, keeping system sizes
comparable).

Boundary conditions hold exactly at the collocation boundary nodes --
they are equations of the solved system -- but generically not between
them; that contrast with the constrained-kernel method is the point of
the comparison.
"""

from __future__ import annotations

from .errors import SingularMatrix
from .kernels import GaussianKernel
from .numerics import lu_factor
from .pseudospectral import Grid, Solution


def _inclusive_axes(domain, counts, ctx):
    axes = []
    for (a, b), n in zip(domain, counts):
        if n < 2:
            raise ValueError("need at least 2 nodes per direction")
        a, b = ctx.num(a), ctx.num(b)
        axes.append(tuple(a + (b - a) * j / (n - 1) for j in range(n)))
    return axes


def _face_of(ii, counts):
    """First (dimension, side) whose coordinate index sits on an endpoint."""
    for d, (i, c) in enumerate(zip(ii, counts)):
        if i == 0:
            return d, 0
        if i == c - 1:
            return d, 1
    return None


def kansa_solve(problem, counts, shape, ctx, estimate_conditioning=True):
    """Solve by unsymmetric collocation; returns a Solution (without any
    homogenization map: the expansion carries the data itself)."""
    dim = problem.dim
    if len(counts) != dim:
        raise ValueError("counts must match the problem dimension")
    with ctx.workprec():
        shape = ctx.num(shape)
        axes = _inclusive_axes(problem.domain, counts, ctx)
        grid = Grid(
            tuple(tuple(ctx.num(v) for v in ab) for ab in problem.domain),
            tuple(axes),
        )
        kernels = [GaussianKernel(shape, ctx) for _ in range(dim)]

        orders = [set((0,)) for _ in range(dim)]
        for t in problem.operator.terms:
            for d, m in enumerate(t.orders):
                orders[d].add(m)
        tables = [
            {
                m: [[k.mixed_partial(m, 0, xi, xj) for xj in ax] for xi in ax]
                for m in sorted(os)
            }
            for k, ax, os in zip(kernels, axes, orders)
        ]
        # per-face functional rows in the normal direction, one value per center
        face_vectors = {}
        for d in range(dim):
            for side in (0, 1):
                functional = problem.bcs[d][side].functional
                k = kernels[d]
                face_vectors[(d, side)] = [
                    sum(
                        t.coeff * k.mixed_partial(t.order, 0, t.location, xj)
                        for t in functional.terms
                    )
                    for xj in axes[d]
                ]

        n = grid.size
        idx = [grid.unravel(i) for i in range(n)]
        pts = [grid.point(i) for i in range(n)]
        rows = []
        rhs = []
        for i in range(n):
            face = _face_of(idx[i], grid.counts)
            row = []
            if face is None:
                coeffs = [t.coeff_at(pts[i]) for t in problem.operator.terms]
                for j in range(n):
                    v = 0
                    for t, c in zip(problem.operator.terms, coeffs):
                        prod = c
                        for tab, m, a_i, a_j in zip(tables, t.orders, idx[i], idx[j]):
                            prod = prod * tab[m][a_i][a_j]
                        v += prod
                    row.append(v)
                rhs.append(ctx.num(problem.rhs(pts[i])))
            else:
                d, side = face
                fvec = face_vectors[(d, side)]
                for j in range(n):
                    prod = fvec[idx[j][d]]
                    for e in range(dim):
                        if e != d:
                            prod = prod * tables[e][0][idx[i][e]][idx[j][e]]
                    row.append(prod)
                data = problem.data_for(d, side)
                tpoint = tuple(x for e, x in enumerate(pts[i]) if e != d)
                rhs.append(ctx.num(data.value(tpoint)))
            rows.append(row)

        try:
            fact = lu_factor(ctx, rows)
        except SingularMatrix as exc:
            raise SingularMatrix(
                f"Kansa collocation matrix singular at pivot {exc.pivot_index}; "
                f"remedies: larger shape parameter, fewer nodes, or higher "
                f"precision",
                pivot_index=exc.pivot_index,
            ) from None
        lam = fact.solve_vec(rhs)
        diagnostics = {"mode": "kansa", "shape": shape, "counts": tuple(counts)}
        if estimate_conditioning:
            diagnostics["cond_AL"] = fact.cond1_estimate()
        return Solution(ctx, grid, kernels, lam, None, None, diagnostics)
