"""Tensor-grid assembly and solution of linear BVPs with constrained kernels.

Pipeline: homogenize the boundary data (u = v + M), impose each direction's
homogeneous functionals on a per-direction Gaussian kernel, collocate the
PDE at interior tensor nodes, and solve either

* ``direct``: A_L lambda = F, or
* ``ps``:     the operational-matrix route L = A_L A^{-1}, L v = F for the
  nodal values, then A lambda = v (A is never inverted explicitly; the
  matrix equation L A = A_L is solved instead).

Boundary nodes are excluded by construction: with boundary-condition-
satisfying kernels the basis functions vanish under every boundary
functional, so boundary collocation rows would be identically zero.

Assembly rows are independent (safe to parallelize in principle); the
solves are sequential; a Solution is immutable and shareable.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .constrained import impose_sequence
from .errors import NodeCollision, SingularMatrix
from .fields import apply_functional, as_data
from .homogenize import homogenize_nd
from .kernels import GaussianKernel
from .numerics import lu_factor, transpose

_COLLISION_RTOL = 1e-9


# -- problem description -------------------------------------------------------


@dataclass(frozen=True)
class OperatorTerm:
    """One term coeff(x) * d^orders u; ``coeff`` is a scalar or callable."""

    orders: tuple
    coeff: object

    def coeff_at(self, p):
        return self.coeff(p) if callable(self.coeff) else self.coeff


@dataclass(frozen=True)
class OperatorSpec:
    terms: tuple

    def __post_init__(self):
        if not self.terms:
            raise ValueError("operator needs at least one term")
        for t in self.terms:
            if sum(t.orders) > 2:
                raise ValueError("operator terms are limited to total order 2")

    @property
    def dim(self):
        return len(self.terms[0].orders)

    def apply(self, fieldlike, p):
        return sum(
            t.coeff_at(p) * fieldlike.partial(t.orders, p) for t in self.terms
        )


def laplacian(dim, scale=1):
    terms = []
    for d in range(dim):
        orders = [0] * dim
        orders[d] = 2
        terms.append(OperatorTerm(tuple(orders), scale))
    return OperatorSpec(tuple(terms))


def identity_operator(dim):
    return OperatorSpec((OperatorTerm((0,) * dim, 1),))


@dataclass(frozen=True)
class BoundaryCondition:
    """A boundary functional plus its data.

    ``data`` may be None (constant ``functional.rhs``), a scalar, an Fn1,
    or a BoundaryData over the tangential coordinates.
    """

    functional: object
    data: object = None


@dataclass(frozen=True)
class ProblemSpec:
    """A linear BVP on a box: operator, per-direction BC pairs, rhs.

    Boundary-condition pairs are ordered (low side, high side): the first
    functional of each pair is anchored at the interval's left endpoint.
    """

    domain: tuple
    operator: OperatorSpec
    bcs: tuple
    rhs: object
    exact: object = None
    name: str = ""

    def __post_init__(self):
        dim = len(self.domain)
        if self.operator.dim != dim or len(self.bcs) != dim:
            raise ValueError("inconsistent dimensions in problem spec")
        for d, ((a, b), pair) in enumerate(zip(self.domain, self.bcs)):
            for bc in pair:
                for loc in bc.functional.support_locations():
                    if not (a <= loc <= b):
                        raise ValueError(
                            f"functional location {float(loc)} outside "
                            f"direction-{d} interval"
                        )

    @property
    def dim(self):
        return len(self.domain)

    def support_locations(self):
        out = []
        for d, pair in enumerate(self.bcs):
            for bc in pair:
                out.extend((d, loc) for loc in bc.functional.support_locations())
        return out

    def data_for(self, d, side):
        bc = self.bcs[d][side]
        return as_data(bc.data, bc.functional, self.dim - 1)


# -- grids ----------------------------------------------------------------------


@dataclass(frozen=True)
class Grid:
    domain: tuple
    axes: tuple
    counts: tuple = field(init=False, default=None)

    def __post_init__(self):
        object.__setattr__(self, "counts", tuple(len(ax) for ax in self.axes))

    @property
    def dim(self):
        return len(self.axes)

    @property
    def size(self):
        n = 1
        for c in self.counts:
            n *= c
        return n

    def unravel(self, flat):
        """Lexicographic flat index -> per-dimension indices."""
        idx = []
        for c in reversed(self.counts):
            idx.append(flat % c)
            flat //= c
        return tuple(reversed(idx))

    def point(self, flat):
        return tuple(ax[i] for ax, i in zip(self.axes, self.unravel(flat)))

    def points(self):
        return [self.point(i) for i in range(self.size)]


def build_grid(domain, counts, scheme="uniform-interior", ctx=None, avoid=()):
    """Interior tensor grid; nodes never touch functional support locations.

    ``uniform-interior`` places a + (b-a) j/(N+1), j = 1..N.
    ``chebyshev-interior`` maps Chebyshev points of the first kind into
    (a, b), ascending.
    """
    axes = []
    for d, ((a, b), n) in enumerate(zip(domain, counts)):
        if n < 2:
            raise ValueError("need at least 2 nodes per direction")
        a = ctx.num(a)
        b = ctx.num(b)
        span = b - a
        if scheme == "uniform-interior":
            ax = [a + span * j / (n + 1) for j in range(1, n + 1)]
        elif scheme == "chebyshev-interior":
            pi = ctx.pi
            ts = [ctx.cos((2 * k - 1) * pi / (2 * n)) for k in range(n, 0, -1)]
            ax = [a + span * (t + 1) / 2 for t in ts]
        else:
            raise ValueError(f"unknown grid scheme {scheme!r}")
        tol = _COLLISION_RTOL * abs(span)
        for dd, loc in avoid:
            if dd != d:
                continue
            for x in ax:
                if abs(x - loc) <= tol:
                    raise NodeCollision(
                        f"node {float(x)} collides with functional support "
                        f"{float(loc)} in direction {d}; perturb the count "
                        f"or switch grid scheme"
                    )
        axes.append(tuple(ax))
    return Grid(tuple(tuple(ctx.num(v) for v in ab) for ab in domain), tuple(axes))


# -- product kernels and matrix assembly ----------------------------------------


def product_kernel_eval(kernels, xs, ys):
    out = 1
    for k, x, y in zip(kernels, xs, ys):
        out *= k.eval(x, y)
    return out


def product_kernel_partial(kernels, orders, xs, ys):
    """prod_d d^{m_d}/dx_d^{m_d} k_d(x_d, y_d) (derivatives in the first slot)."""
    out = 1
    for k, m, x, y in zip(kernels, orders, xs, ys):
        out *= k.mixed_partial(m, 0, x, y)
    return out


def _axis_tables(kernel, nodes, orders):
    """Per-axis matrices T[m][i][j] = d^m kernel(node_i, node_j)."""
    return {
        m: [[kernel.mixed_partial(m, 0, xi, xj) for xj in nodes] for xi in nodes]
        for m in orders
    }


def _all_tables(kernels, grid, operator):
    orders = [set((0,)) for _ in range(grid.dim)]
    if operator is not None:
        for t in operator.terms:
            for d, m in enumerate(t.orders):
                orders[d].add(m)
    return [
        _axis_tables(k, ax, sorted(os))
        for k, ax, os in zip(kernels, grid.axes, orders)
    ]


def _product_from_tables(tables, orders, ii, jj):
    out = 1
    for t, m, i, j in zip(tables, orders, ii, jj):
        out *= t[m][i][j]
    return out


def build_evaluation_matrix(grid, kernels, tables=None):
    """A[i][j] = prod_d kernel_d(node_i_d, node_j_d); symmetric by construction."""
    if tables is None:
        tables = _all_tables(kernels, grid, None)
    n = grid.size
    zero_orders = (0,) * grid.dim
    idx = [grid.unravel(i) for i in range(n)]
    return [
        [_product_from_tables(tables, zero_orders, idx[i], idx[j]) for j in range(n)]
        for i in range(n)
    ]


def build_operator_matrix(grid, kernels, operator, tables=None):
    """A_L[i][j] = sum_terms coeff(node_i) * prod_d d^{m_d} kernel_d(...)."""
    if tables is None:
        tables = _all_tables(kernels, grid, operator)
    n = grid.size
    idx = [grid.unravel(i) for i in range(n)]
    pts = [grid.point(i) for i in range(n)]
    rows = []
    for i in range(n):
        coeffs = [t.coeff_at(pts[i]) for t in operator.terms]
        row = []
        for j in range(n):
            v = 0
            for t, c in zip(operator.terms, coeffs):
                v += c * _product_from_tables(tables, t.orders, idx[i], idx[j])
            row.append(v)
        rows.append(row)
    return rows


def operational_matrix(a, a_l, ctx):
    """L with L A = A_L, computed by solving the transposed matrix equation
    (A is never inverted explicitly)."""
    try:
        fact = lu_factor(ctx, transpose(a))
    except SingularMatrix as exc:
        raise SingularMatrix(
            f"evaluation matrix numerically singular at pivot "
            f"{exc.pivot_index}; remedies: larger shape parameter, fewer "
            f"nodes, or higher precision",
            pivot_index=exc.pivot_index,
        ) from None
    return transpose(fact.solve(transpose(a_l)))


# -- solution -------------------------------------------------------------------


class Solution:
    """Coefficient vector + per-direction kernels + homogenization map.

    ``partial(orders, p)`` differentiates the expansion analytically, so
    boundary functionals apply to a Solution exactly like to any field.
    """

    def __init__(self, ctx, grid, kernels, lam, hom, nodal=None, diagnostics=None):
        self.ctx = ctx
        self.grid = grid
        self.kernels = tuple(kernels)
        self.lam = tuple(lam)
        self.hom = hom
        self.nodal = tuple(nodal) if nodal is not None else None
        self.diagnostics = dict(diagnostics or {})

    @property
    def dim(self):
        return self.grid.dim

    @property
    def _center_indices(self):
        cached = getattr(self, "_centers", None)
        if cached is None:
            cached = [self.grid.unravel(j) for j in range(self.grid.size)]
            self._centers = cached
        return cached

    def partial(self, orders, p):
        vecs = [
            [k.mixed_partial(m, 0, x, node) for node in ax]
            for k, m, x, ax in zip(self.kernels, orders, p, self.grid.axes)
        ]
        total = self.ctx.zero
        for lam_j, jj in zip(self.lam, self._center_indices):
            prod = lam_j
            for v, i in zip(vecs, jj):
                prod = prod * v[i]
            total += prod
        if self.hom is not None:
            total += self.hom.partial(tuple(orders), p)
        return total

    def evaluate(self, p):
        return self.partial((0,) * self.dim, p)

    def evaluate_axes(self, axes):
        """Values on a tensor grid of points, flattened lexicographically."""
        with self.ctx.workprec():
            mats = [
                [[k.mixed_partial(0, 0, x, node) for node in ax] for x in pts]
                for k, pts, ax in zip(self.kernels, axes, self.grid.axes)
            ]
            counts = [len(a) for a in axes]
            total = 1
            for c in counts:
                total *= c
            centers = self._center_indices
            out = []
            for flat in range(total):
                rem, ii = flat, []
                for c in reversed(counts):
                    ii.append(rem % c)
                    rem //= c
                ii.reverse()
                rows = [m[i] for m, i in zip(mats, ii)]
                acc = self.ctx.zero
                for lam_j, jj in zip(self.lam, centers):
                    prod = lam_j
                    for r, i in zip(rows, jj):
                        prod = prod * r[i]
                    acc += prod
                if self.hom is not None:
                    p = tuple(a[i] for a, i in zip(axes, ii))
                    acc += self.hom.value(p)
                out.append(acc)
            return out

    def boundary_residual(self, d, side, problem, tpoint=()):
        bc = problem.bcs[d][side]
        data = problem.data_for(d, side)
        return apply_functional(bc.functional, d, self, tpoint) - data.value(tpoint)


# -- the solver -------------------------------------------------------------------


def solve(
    problem,
    counts,
    shape,
    ctx,
    mode="direct",
    scheme="uniform-interior",
    estimate_conditioning=True,
):
    """Solve a ProblemSpec on an interior tensor grid.

    Returns a Solution whose expansion satisfies every boundary condition
    exactly (the kernels annihilate the homogeneous functionals; M carries
    the data).
    """
    if mode not in ("direct", "ps"):
        raise ValueError("mode must be 'direct' or 'ps'")
    dim = problem.dim
    if len(counts) != dim:
        raise ValueError("counts must match the problem dimension")
    with ctx.workprec():
        shape = ctx.num(shape)
        pairs = []
        for d in range(dim):
            low, high = problem.bcs[d]
            pairs.append(
                (
                    (low.functional, problem.data_for(d, 0)),
                    (high.functional, problem.data_for(d, 1)),
                )
            )
        hom = homogenize_nd(pairs, ctx)

        kernels = []
        for d in range(dim):
            base = GaussianKernel(shape, ctx)
            funcs = [bc.functional.homogeneous() for bc in problem.bcs[d]]
            kernels.append(impose_sequence(base, funcs))

        grid = build_grid(
            problem.domain, counts, scheme, ctx, avoid=problem.support_locations()
        )

        tables = _all_tables(kernels, grid, problem.operator)
        a = build_evaluation_matrix(grid, kernels, tables)
        a_l = build_operator_matrix(grid, kernels, problem.operator, tables)
        pts = [grid.point(i) for i in range(grid.size)]
        f = [
            ctx.num(problem.rhs(p)) - problem.operator.apply(hom, p)
            for p in pts
        ]

        diagnostics = {"mode": mode, "shape": shape, "counts": tuple(counts)}
        mvals = [hom.value(p) for p in pts]
        if mode == "direct":
            fact_l = lu_factor(ctx, a_l)
            lam = fact_l.solve_vec(f)
            nodal = [
                sum(a[i][j] * lam[j] for j in range(grid.size)) + mvals[i]
                for i in range(grid.size)
            ]
            if estimate_conditioning:
                diagnostics["cond_AL"] = fact_l.cond1_estimate()
                try:
                    diagnostics["cond_A"] = lu_factor(ctx, a).cond1_estimate()
                except SingularMatrix:
                    diagnostics["cond_A"] = None
        else:
            lmat = operational_matrix(a, a_l, ctx)
            fact_lmat = lu_factor(ctx, lmat)
            v_nodal = fact_lmat.solve_vec(f)
            fact_a = lu_factor(ctx, a)
            lam = fact_a.solve_vec(v_nodal)
            nodal = [v + m for v, m in zip(v_nodal, mvals)]
            if estimate_conditioning:
                diagnostics["cond_A"] = fact_a.cond1_estimate()
                try:
                    diagnostics["cond_AL"] = lu_factor(ctx, a_l).cond1_estimate()
                except SingularMatrix:
                    diagnostics["cond_AL"] = None

        return Solution(ctx, grid, kernels, lam, hom, nodal, diagnostics)
