"""Boundary conditions as linear functionals.

A boundary functional is a finite combination of derivative point
evaluations, L(u) = sum_k coeff_k * u^(order_k)(location_k), with orders
restricted to {0, 1}: every boundary condition in scope involves at most
u'.  Higher orders are rejected, not truncated.  The nonhomogeneous value
is carried on the functional itself (``rhs``) so homogenization can consume
(functional, value) pairs uniformly.

Functionals are immutable value objects and thread-safe.
"""

from __future__ import annotations

from dataclasses import dataclass

import mpmath

from .errors import InvalidFunctional
from .numerics import FLOAT64


@dataclass(frozen=True)
class FunctionalTerm:
    coeff: object
    order: int
    location: object


class BoundaryFunctional:
    """L(u) = sum coeff * u^(order)(location), plus a right-hand value."""

    __slots__ = ("kind", "terms", "rhs")

    def __init__(self, kind, terms, rhs=0):
        if not terms:
            raise InvalidFunctional("a functional needs at least one term")
        for t in terms:
            if t.order not in (0, 1):
                raise InvalidFunctional(
                    f"derivative order {t.order} not supported (only 0 or 1)"
                )
        self.kind = kind
        self.terms = tuple(terms)
        self.rhs = rhs

    def max_order(self):
        return max(t.order for t in self.terms)

    def support_locations(self):
        return tuple(t.location for t in self.terms)

    def homogeneous(self):
        """Copy of this functional with rhs = 0."""
        if self.rhs == 0:
            return self
        return BoundaryFunctional(self.kind, self.terms, 0)

    def __repr__(self):
        return f"<{format_functional(self)}>"


def make_dirichlet(a, rhs=0, ctx=FLOAT64):
    a = ctx.num(a)
    return BoundaryFunctional(
        "dirichlet", [FunctionalTerm(ctx.one, 0, a)], ctx.num(rhs)
    )


def make_neumann(a, rhs=0, ctx=FLOAT64):
    a = ctx.num(a)
    return BoundaryFunctional(
        "neumann", [FunctionalTerm(ctx.one, 1, a)], ctx.num(rhs)
    )


def make_robin(alpha, beta, a, rhs=0, ctx=FLOAT64):
    alpha, beta, a = ctx.num(alpha), ctx.num(beta), ctx.num(a)
    if alpha == 0 and beta == 0:
        raise InvalidFunctional("robin requires (alpha, beta) != (0, 0)")
    # zero coefficients are dropped, so robin(1, 0, a) carries exactly the
    # dirichlet term list
    terms = [
        FunctionalTerm(coeff, order, a)
        for coeff, order in ((alpha, 0), (beta, 1))
        if coeff != 0
    ]
    return BoundaryFunctional("robin", terms, ctx.num(rhs))


def make_multipoint(a, weights, psi=0, ctx=FLOAT64):
    """u(a) - sum_j alpha_j u(xi_j) = psi with a < xi_1 < ... < xi_J.

    ``weights`` is a sequence of (alpha_j, xi_j) pairs.
    """
    a = ctx.num(a)
    if not weights:
        raise InvalidFunctional("multipoint requires at least one (alpha, xi) pair")
    terms = [FunctionalTerm(ctx.one, 0, a)]
    prev = a
    for alpha_j, xi_j in weights:
        xi_j = ctx.num(xi_j)
        if not xi_j > prev:
            raise InvalidFunctional(
                "multipoint locations must satisfy a < xi_1 < ... < xi_J"
            )
        terms.append(FunctionalTerm(-ctx.num(alpha_j), 0, xi_j))
        prev = xi_j
    return BoundaryFunctional("multipoint", terms, ctx.num(psi))


# -- application -------------------------------------------------------------


def apply_to_function(functional, f, df=None):
    """Apply L to a univariate function.

    ``f`` is a callable; first-derivative terms need either ``df`` or an
    ``f.deriv(t, order)`` method (kernel traces provide the latter).
    """
    total = 0
    for t in functional.terms:
        if t.order == 0:
            total += t.coeff * f(t.location)
        elif df is not None:
            total += t.coeff * df(t.location)
        elif hasattr(f, "deriv"):
            total += t.coeff * f.deriv(t.location, t.order)
        else:
            raise TypeError(
                "functional has derivative terms but no derivative access given"
            )
    return total


class KernelTrace:
    """One kernel slot contracted against a functional; a function of the
    remaining variable with derivative access.

    slot='first' fixes the x slot: value(t) = sum_k c_k * d_x^{o_k} R(loc_k, t).
    slot='second' fixes the y slot: value(t) = sum_k c_k * d_y^{o_k} R(t, loc_k).

    Evaluations are memoized per (order, point): matrix assembly hits each
    trace at every grid node many times.
    """

    __slots__ = ("kernel", "terms", "slot", "_cache")

    def __init__(self, kernel, functional, slot):
        if slot not in ("first", "second"):
            raise ValueError("slot must be 'first' or 'second'")
        self.kernel = kernel
        self.terms = functional.terms
        self.slot = slot
        self._cache = {}

    def deriv(self, t, order):
        key = (order, t)
        val = self._cache.get(key)
        if val is None:
            k = self.kernel
            if self.slot == "first":
                val = sum(
                    tm.coeff * k.mixed_partial(tm.order, order, tm.location, t)
                    for tm in self.terms
                )
            else:
                val = sum(
                    tm.coeff * k.mixed_partial(order, tm.order, t, tm.location)
                    for tm in self.terms
                )
            self._cache[key] = val
        return val

    def __call__(self, t):
        return self.deriv(t, 0)


def apply_to_kernel_slot(functional, kernel, slot):
    return KernelTrace(kernel, functional, slot)


def bilinear(l1, l2, kernel):
    """L1 applied to the first slot, L2 to the second:
    sum_ij c1_i c2_j d_x^{o1_i} d_y^{o2_j} R(loc1_i, loc2_j)."""
    total = 0
    for t1 in l1.terms:
        for t2 in l2.terms:
            total += t1.coeff * t2.coeff * kernel.mixed_partial(
                t1.order, t2.order, t1.location, t2.location
            )
    return total


# -- plain-text form ----------------------------------------------------------

# Grammar (one functional per line, '#' comments allowed around it):
#   dirichlet @LOC [= RHS]
#   neumann @LOC [= RHS]
#   robin ALPHA BETA @LOC [= RHS]
#   multipoint @A : ALPHA1 @XI1, ALPHA2 @XI2, ... [= PSI]
# Numbers are plain decimals, parsed at the active precision.


def _fmt_num(x):
    try:
        if x == int(x):
            return str(int(x))
    except (OverflowError, ValueError):
        pass
    if isinstance(x, float):
        return repr(x)
    return mpmath.nstr(x, 17, strip_zeros=True)


def format_functional(functional):
    k = functional.kind
    terms = functional.terms
    rhs = functional.rhs
    tail = "" if rhs == 0 else f" = {_fmt_num(rhs)}"
    if k == "dirichlet":
        return f"dirichlet @{_fmt_num(terms[0].location)}{tail}"
    if k == "neumann":
        return f"neumann @{_fmt_num(terms[0].location)}{tail}"
    if k == "robin":
        alpha = sum(t.coeff for t in terms if t.order == 0)
        beta = sum(t.coeff for t in terms if t.order == 1)
        return (
            f"robin {_fmt_num(alpha)} {_fmt_num(beta)} "
            f"@{_fmt_num(terms[0].location)}{tail}"
        )
    if k == "multipoint":
        pairs = ", ".join(
            f"{_fmt_num(-t.coeff)} @{_fmt_num(t.location)}" for t in terms[1:]
        )
        return f"multipoint @{_fmt_num(terms[0].location)} : {pairs}{tail}"
    raise ValueError(f"cannot format functional kind {k!r}")


def parse_functional(text, ctx=FLOAT64):
    """Inverse of :func:`format_functional`."""
    body, _, rhs_part = text.partition("=")
    rhs = ctx.num(rhs_part.strip()) if rhs_part.strip() else ctx.zero
    toks = body.split()
    if not toks:
        raise InvalidFunctional("empty functional text")
    kind = toks[0].lower()

    def loc(tok):
        if not tok.startswith("@"):
            raise InvalidFunctional(f"expected @location, got {tok!r}")
        return ctx.num(tok[1:])

    if kind == "dirichlet" and len(toks) == 2:
        return make_dirichlet(loc(toks[1]), rhs, ctx)
    if kind == "neumann" and len(toks) == 2:
        return make_neumann(loc(toks[1]), rhs, ctx)
    if kind == "robin" and len(toks) == 4:
        return make_robin(ctx.num(toks[1]), ctx.num(toks[2]), loc(toks[3]), rhs, ctx)
    if kind == "multipoint":
        head, _, rest = body.partition(":")
        htoks = head.split()
        if len(htoks) != 2:
            raise InvalidFunctional(f"malformed multipoint head {head!r}")
        a = loc(htoks[1])
        weights = []
        for chunk in rest.split(","):
            w = chunk.split()
            if len(w) != 2:
                raise InvalidFunctional(f"malformed multipoint pair {chunk!r}")
            weights.append((ctx.num(w[0]), loc(w[1])))
        return make_multipoint(a, weights, rhs, ctx)
    raise InvalidFunctional(f"cannot parse functional {text!r}")
