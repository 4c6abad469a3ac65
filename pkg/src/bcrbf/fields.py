"""Smooth functions with derivative access: boundary data and exact solutions.

Everything downstream speaks one protocol: a *field* has a ``dim`` and a
``partial(orders, p)`` method returning the mixed partial derivative of the
given multi-order at point ``p`` (``value`` is the all-zero order).  Exact
solutions, homogenization maps and solver solutions all implement it, so
boundary functionals and differential operators apply to any of them
through the same helpers.

Boundary *data* lives on a face: a function of the tangential coordinates
with per-direction derivative access (order <= 2, what the PDE operator
needs after homogenization).
"""

from __future__ import annotations


def embed_point(tpoint, d, loc):
    """Insert coordinate ``loc`` at position ``d`` of a tangential point."""
    return tuple(tpoint[:d]) + (loc,) + tuple(tpoint[d:])


def apply_functional(functional, d, field, tpoint=()):
    """Apply a boundary functional acting in direction ``d`` to a field.

    ``tpoint`` fixes the tangential coordinates (empty in 1D).  Returns
    sum_k c_k * (d^{o_k}/dx_d^{o_k} field)(..., loc_k, ...).
    """
    dim = field.dim
    total = 0
    for t in functional.terms:
        orders = [0] * dim
        orders[d] = t.order
        p = embed_point(tpoint, d, t.location)
        total += t.coeff * field.partial(tuple(orders), p)
    return total


class Fn1:
    """Univariate function bundled with derivative closures.

    ``Fn1(f, df, d2f, ...)``; ``deriv(t, k)`` dispatches to the k-th entry.
    Evaluations are memoized per (order, argument): tensor-grid pipelines
    revisit the same few axis coordinates constantly, and the closures are
    assumed pure.
    """

    __slots__ = ("_derivs", "_cache")

    def __init__(self, *derivs):
        if not derivs:
            raise ValueError("Fn1 needs at least the value function")
        self._derivs = derivs
        self._cache = {}

    def __call__(self, t):
        return self.deriv(t, 0)

    def deriv(self, t, order):
        if order >= len(self._derivs):
            raise ValueError(f"Fn1 carries derivatives up to order {len(self._derivs) - 1}")
        key = (order, t)
        val = self._cache.get(key)
        if val is None:
            val = self._derivs[order](t)
            self._cache[key] = val
        return val

    @property
    def depth(self):
        return len(self._derivs) - 1


def fn_constant(c):
    return Fn1(lambda t: c, lambda t: 0 * c, lambda t: 0 * c)


def fn_sin(ctx, freq, amp=1):
    """amp * sin(freq * t) with derivatives up to order 2."""
    freq = ctx.num(freq)
    amp = ctx.num(amp)
    return Fn1(
        lambda t: amp * ctx.sin(freq * t),
        lambda t: amp * freq * ctx.cos(freq * t),
        lambda t: -amp * freq * freq * ctx.sin(freq * t),
    )


def fn_cos(ctx, freq, amp=1):
    freq = ctx.num(freq)
    amp = ctx.num(amp)
    return Fn1(
        lambda t: amp * ctx.cos(freq * t),
        lambda t: -amp * freq * ctx.sin(freq * t),
        lambda t: -amp * freq * freq * ctx.cos(freq * t),
    )


def fn_exp(ctx, rate, amp=1):
    """amp * exp(rate * t)."""
    rate = ctx.num(rate)
    amp = ctx.num(amp)
    return Fn1(
        lambda t: amp * ctx.exp(rate * t),
        lambda t: amp * rate * ctx.exp(rate * t),
        lambda t: amp * rate * rate * ctx.exp(rate * t),
    )


def fn_product(f, g):
    """Product of two Fn1 with derivatives up to order 2 (Leibniz)."""
    return Fn1(
        lambda t: f(t) * g(t),
        lambda t: f.deriv(t, 1) * g(t) + f(t) * g.deriv(t, 1),
        lambda t: f.deriv(t, 2) * g(t)
        + 2 * f.deriv(t, 1) * g.deriv(t, 1)
        + f(t) * g.deriv(t, 2),
    )


def fn_sum(*fns):
    return Fn1(
        lambda t: sum(f(t) for f in fns),
        lambda t: sum(f.deriv(t, 1) for f in fns),
        lambda t: sum(f.deriv(t, 2) for f in fns),
    )


def fn_scale(c, f):
    return Fn1(
        lambda t: c * f(t),
        lambda t: c * f.deriv(t, 1),
        lambda t: c * f.deriv(t, 2),
    )


# -- scalar fields ------------------------------------------------------------


class ScalarField:
    """Base: d-variate function with mixed-partial access."""

    dim = None

    def value(self, p):
        return self.partial((0,) * self.dim, p)

    def partial(self, orders, p):
        raise NotImplementedError


class ProductField(ScalarField):
    """Separable field prod_d f_d(x_d); mixed partials factor per direction."""

    def __init__(self, fns):
        self.fns = tuple(fns)
        self.dim = len(self.fns)

    def partial(self, orders, p):
        out = 1
        for f, o, x in zip(self.fns, orders, p):
            out *= f.deriv(x, o)
        return out


class SumField(ScalarField):
    def __init__(self, fields):
        fields = tuple(fields)
        self.fields = fields
        self.dim = fields[0].dim

    def partial(self, orders, p):
        return sum(f.partial(orders, p) for f in self.fields)


class LambdaField(ScalarField):
    """Field from an explicit (orders, p) -> value handler."""

    def __init__(self, dim, handler):
        self.dim = dim
        self._handler = handler

    def partial(self, orders, p):
        return self._handler(orders, p)


# -- boundary data ------------------------------------------------------------


class BoundaryData:
    """Data on a face: function of ``arity`` tangential coordinates."""

    arity = None

    def value(self, tpoint=()):
        raise NotImplementedError

    def partial(self, i, order, tpoint):
        """Single-direction tangential derivative."""
        raise NotImplementedError

    def partial_multi(self, orders, tpoint):
        nz = [i for i, o in enumerate(orders) if o]
        if not nz:
            return self.value(tpoint)
        if len(nz) == 1:
            return self.partial(nz[0], orders[nz[0]], tpoint)
        raise NotImplementedError(
            f"{type(self).__name__} does not supply mixed tangential partials"
        )


class ConstantData(BoundaryData):
    def __init__(self, c, arity=0):
        self.c = c
        self.arity = arity

    def value(self, tpoint=()):
        return self.c

    def partial(self, i, order, tpoint):
        return 0 * self.c


class Fn1Data(BoundaryData):
    """Univariate tangential data (the 2D case)."""

    arity = 1

    def __init__(self, fn):
        self.fn = fn

    def value(self, tpoint=()):
        return self.fn(tpoint[0])

    def partial(self, i, order, tpoint):
        return self.fn.deriv(tpoint[0], order)


class FieldTraceData(BoundaryData):
    """Boundary data induced by applying a functional to a known field.

    For a functional L acting in direction ``d`` on field u, the data is
    t -> L(u)(t) over the tangential coordinates; tangential derivatives
    fall through to the field's mixed partials.  Building data this way
    guarantees consistency between an exact solution and its boundary
    values.
    """

    def __init__(self, field, d, functional):
        self.field = field
        self.d = d
        self.terms = functional.terms
        self.arity = field.dim - 1

    def _combine(self, extra_orders, tpoint):
        total = 0
        for t in self.terms:
            orders = list(extra_orders)
            orders[self.d] += t.order
            p = embed_point(tpoint, self.d, t.location)
            total += t.coeff * self.field.partial(tuple(orders), p)
        return total

    def _lift(self, torders):
        out = [0] * self.field.dim
        tang = [e for e in range(self.field.dim) if e != self.d]
        for i, o in zip(tang, torders):
            out[i] = o
        return out

    def value(self, tpoint=()):
        return self._combine([0] * self.field.dim, tpoint)

    def partial(self, i, order, tpoint):
        torders = [0] * self.arity
        torders[i] = order
        return self._combine(self._lift(torders), tpoint)

    def partial_multi(self, orders, tpoint):
        return self._combine(self._lift(orders), tpoint)


def as_data(data, functional, arity):
    """Normalize user data: None -> the functional's rhs as a constant."""
    if data is None:
        return ConstantData(functional.rhs, arity)
    if isinstance(data, BoundaryData):
        if data.arity != arity:
            raise ValueError(f"data arity {data.arity} != expected {arity}")
        return data
    if isinstance(data, Fn1):
        if arity != 1:
            raise ValueError("Fn1 data only fits one tangential coordinate")
        return Fn1Data(data)
    return ConstantData(data, arity)
