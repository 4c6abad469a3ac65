"""Construction of the boundary-data homogenization map.

The map M matches all nonhomogeneous boundary data, reducing a problem to
one with homogeneous boundary conditions via u = v + M and a modified
right-hand side F = f - (L M).  Construction sweeps the directions in
order: in each direction the two boundary functionals are matched by a
minimal-degree polynomial whose coefficients are (linear combinations of)
the residual data left over from earlier sweeps.  For Dirichlet data this
reproduces the classic two-stage blending formula; for other functionals
it is the natural generalization, obtained by solving the same small
linear system.

The polynomial ansatz starts at degree 1 and escalates to 2, then 3, when
the functional pair is singular on the lower-degree space (e.g. a pair of
Neumann conditions annihilates all linear polynomials' second coefficient
mismatch).  Corner-incompatible data is not rejected: the final sweep's
directions are matched exactly and earlier ones self-correct only when the
data are compatible, which is documented behavior.

Maps are immutable after construction and safe to evaluate concurrently.
"""

from __future__ import annotations

from .errors import NoHomogenizer
from .fields import ConstantData, apply_functional, as_data, embed_point
from .functionals import make_dirichlet

_MAX_ANSATZ_DEGREE = 3


# -- expression nodes ---------------------------------------------------------
#
# A tiny closed algebra of fields, each exposing eval(p, orders) = the mixed
# partial of the node at p.  Products only ever combine factors depending on
# disjoint coordinate sets, which keeps the Leibniz rule trivial.


class _Const:
    __slots__ = ("c", "dims")

    def __init__(self, c):
        self.c = c
        self.dims = frozenset()

    def eval(self, p, orders):
        if any(orders):
            return 0 * self.c
        return self.c


class _Monomial:
    """x_d ** power"""

    __slots__ = ("d", "power", "dims")

    def __init__(self, d, power):
        self.d = d
        self.power = power
        self.dims = frozenset((d,))

    def eval(self, p, orders):
        o = orders[self.d]
        if any(v for i, v in enumerate(orders) if i != self.d):
            return 0
        k = self.power
        if o > k:
            return 0
        coeff = 1
        for j in range(o):
            coeff *= k - j
        return coeff * p[self.d] ** (k - o) if k - o else coeff


class _Data:
    """Boundary data as a field over its tangential coordinates."""

    __slots__ = ("data", "gdims", "dims")

    def __init__(self, data, gdims):
        self.data = data
        self.gdims = tuple(gdims)
        self.dims = frozenset(gdims)

    def eval(self, p, orders):
        if any(o for i, o in enumerate(orders) if i not in self.dims):
            return 0
        torders = tuple(orders[g] for g in self.gdims)
        tpoint = tuple(p[g] for g in self.gdims)
        return self.data.partial_multi(torders, tpoint)


class _Sum:
    __slots__ = ("parts", "dims")

    def __init__(self, parts):
        self.parts = tuple(parts)
        self.dims = frozenset().union(*(q.dims for q in self.parts))

    def eval(self, p, orders):
        return sum(q.eval(p, orders) for q in self.parts)


class _Scaled:
    __slots__ = ("c", "inner", "dims")

    def __init__(self, c, inner):
        self.c = c
        self.inner = inner
        self.dims = inner.dims

    def eval(self, p, orders):
        return self.c * self.inner.eval(p, orders)


class _Product:
    """Product of fields over disjoint coordinate sets."""

    __slots__ = ("a", "b", "dims")

    def __init__(self, a, b):
        if a.dims & b.dims:
            raise ValueError("product factors must depend on disjoint dims")
        self.a = a
        self.b = b
        self.dims = a.dims | b.dims

    def eval(self, p, orders):
        if any(o for i, o in enumerate(orders) if o and i not in self.dims):
            return 0
        oa = tuple(o if i in self.a.dims else 0 for i, o in enumerate(orders))
        ob = tuple(o if i in self.b.dims else 0 for i, o in enumerate(orders))
        va = self.a.eval(p, oa)
        if va == 0:
            return va
        return va * self.b.eval(p, ob)


class _Frozen:
    """inner differentiated ``order`` times along d, then frozen at x_d = loc."""

    __slots__ = ("inner", "d", "order", "loc", "dims")

    def __init__(self, inner, d, order, loc):
        self.inner = inner
        self.d = d
        self.order = order
        self.loc = loc
        self.dims = inner.dims - {d}

    def eval(self, p, orders):
        if orders[self.d]:
            return 0
        q = list(p)
        q[self.d] = self.loc
        o = list(orders)
        o[self.d] = self.order
        return self.inner.eval(tuple(q), tuple(o))


def _frozen_functional(expr, functional, d):
    """L applied along direction d to an expression: a field of the rest."""
    return _Sum(
        [_Scaled(t.coeff, _Frozen(expr, d, t.order, t.location)) for t in functional.terms]
    )


# -- the map ------------------------------------------------------------------


class HomogenizationMap:
    """Smooth function matching all supplied (functional, data) pairs."""

    def __init__(self, dim, expr, assignments):
        self.dim = dim
        self._expr = expr
        self.assignments = tuple(assignments)  # (direction, functional, data)

    def value(self, p):
        return self._expr.eval(tuple(p), (0,) * self.dim)

    def partial(self, orders, p):
        return self._expr.eval(tuple(p), tuple(orders))

    def boundary_residual(self, d, functional, data, tpoint=()):
        """L(M) - data at one tangential point; ~0 by construction."""
        return apply_functional(functional, d, self, tpoint) - data.value(tpoint)

    @classmethod
    def zero(cls, dim, ctx):
        return cls(dim, _Const(ctx.zero), ())


def _functional_on_monomial(functional, k, ctx):
    """L applied to x**k."""
    total = ctx.zero
    for t in functional.terms:
        if t.order == 0:
            total += t.coeff * (t.location**k if k else ctx.one)
        else:
            if k >= 1:
                total += t.coeff * k * (t.location ** (k - 1) if k > 1 else ctx.one)
    return total


def _ansatz_weights(l1, l2, ctx):
    """Pick monomial powers (k1, k2) and the 2x2 inverse mapping data to
    coefficients, escalating the degree while the system stays singular."""
    with ctx.workprec():
        for degree in range(1, _MAX_ANSATZ_DEGREE + 1):
            rows = [
                [_functional_on_monomial(l, k, ctx) for k in range(degree + 1)]
                for l in (l1, l2)
            ]
            best = None
            for k1 in range(degree + 1):
                for k2 in range(k1 + 1, degree + 1):
                    det = rows[0][k1] * rows[1][k2] - rows[0][k2] * rows[1][k1]
                    scale = max(
                        abs(rows[0][k1]) + abs(rows[1][k1]), ctx.one
                    ) * max(abs(rows[0][k2]) + abs(rows[1][k2]), ctx.one)
                    if best is None or abs(det) / scale > best[0]:
                        best = (abs(det) / scale, k1, k2, det)
            rel, k1, k2, det = best
            if rel > ctx.tol(5):
                s11, s12 = rows[0][k1], rows[0][k2]
                s21, s22 = rows[1][k1], rows[1][k2]
                w = (
                    (s22 / det, -s12 / det),
                    (-s21 / det, s11 / det),
                )
                return (k1, k2), w
    raise NoHomogenizer(
        f"no polynomial ansatz up to degree {_MAX_ANSATZ_DEGREE} matches "
        f"{l1!r} and {l2!r}"
    )


def homogenize_nd(pairs_per_dim, ctx):
    """Build M from per-direction ((L1, data1), (L2, data2)) assignments.

    Entries of ``pairs_per_dim`` may be None to skip a direction.  Data
    items may be None (use the functional's rhs), scalars, Fn1, or
    BoundaryData over the tangential coordinates.
    """
    dim = len(pairs_per_dim)
    expr = _Const(ctx.zero)
    assignments = []
    with ctx.workprec():
        for d, pair in enumerate(pairs_per_dim):
            if pair is None:
                continue
            (l1, data1), (l2, data2) = pair
            gdims = tuple(e for e in range(dim) if e != d)
            data1 = as_data(data1, l1, dim - 1)
            data2 = as_data(data2, l2, dim - 1)
            (k1, k2), w = _ansatz_weights(l1, l2, ctx)
            resid = [
                _Sum([_Data(data1, gdims), _Scaled(-ctx.one, _frozen_functional(expr, l1, d))]),
                _Sum([_Data(data2, gdims), _Scaled(-ctx.one, _frozen_functional(expr, l2, d))]),
            ]
            contribution = []
            for row, k in zip(w, (k1, k2)):
                coeff_field = _Sum(
                    [_Scaled(row[0], resid[0]), _Scaled(row[1], resid[1])]
                )
                contribution.append(_Product(_Monomial(d, k), coeff_field))
            expr = _Sum([expr, *contribution])
            assignments.append((d, l1, data1))
            assignments.append((d, l2, data2))
    return HomogenizationMap(dim, expr, assignments)


def homogenize_1d(l1, l2, ctx):
    """Minimal-degree polynomial p with L1 p = rhs1, L2 p = rhs2."""
    return homogenize_nd([((l1, None), (l2, None))], ctx)


def homogenize_2d_dirichlet(g1, g2, h1, h2, rect, ctx):
    """Dirichlet data on the four edges of [a,b] x [c,d].

    g1, g2 are data on x = a and x = b (functions of y); h1, h2 on y = c
    and y = d (functions of x).  This is the x-blend / y-blend two-stage
    construction, expressed through the general directional sweep.
    """
    (a, b), (c, d) = rect
    pairs = [
        (
            (make_dirichlet(a, 0, ctx), g1),
            (make_dirichlet(b, 0, ctx), g2),
        ),
        (
            (make_dirichlet(c, 0, ctx), h1),
            (make_dirichlet(d, 0, ctx), h2),
        ),
    ]
    return homogenize_nd(pairs, ctx)
