"""Kernels constrained to annihilate boundary functionals exactly.

Given a kernel R and a functional L with L_x L_y R != 0, the corrected
kernel

    R1(x, y) = R(x, y) - (L_y R)(x) * (L_x R)(y) / (L_x L_y R)

satisfies L R1 = 0 in either slot, exactly, for every value of the other
variable.  Imposing a second functional on R1 the same way preserves the
first annihilation, so a sequence of impositions yields a kernel that
satisfies all its boundary functionals at once.  Corrections are stored,
never expanded symbolically: evaluation costs O(1 + #corrections) per
point, and every correction trace carries analytic derivative access
(differentiating the underlying kernel's mixed partials, never numeric
differentiation).

A ConstrainedKernel is immutable after construction; concurrent evaluation
is safe.
"""

from __future__ import annotations

from .errors import DegenerateConstraint
from .functionals import apply_to_kernel_slot, bilinear


class RankOneCorrection:
    """One subtracted term phi(x) * psi(y) / gamma."""

    __slots__ = ("phi", "psi", "gamma")

    def __init__(self, phi, psi, gamma):
        self.phi = phi
        self.psi = psi
        self.gamma = gamma


class ConstrainedKernel:
    """Base kernel minus accumulated rank-one corrections.

    Public derivative access is meant for total order m + n <= 2 (what the
    PDE pipeline consumes); deeper requests are forwarded and fail inside
    the base kernel once its total-order budget is exceeded.
    """

    __slots__ = ("base", "corrections", "imposed", "ctx")

    def __init__(self, base, corrections, imposed):
        self.base = base
        self.corrections = tuple(corrections)
        self.imposed = tuple(imposed)
        self.ctx = base.ctx

    def eval(self, x, y):
        return self.mixed_partial(0, 0, x, y)

    def mixed_partial(self, m, n, x, y):
        val = self.base.mixed_partial(m, n, x, y)
        for corr in self.corrections:
            val -= corr.phi.deriv(x, m) * corr.psi.deriv(y, n) / corr.gamma
        return val

    def __repr__(self):
        names = ",".join(f.kind for f in self.imposed)
        return f"ConstrainedKernel({self.base!r}; imposed=[{names}])"


def impose(kernel, functional):
    """Append one rank-one correction annihilating ``functional``.

    ``kernel`` may be a base kernel or an already-constrained one.  Raises
    DegenerateConstraint when |L_x L_y R| falls below the working-precision
    threshold: a vanishing denominator makes the correction numerically
    meaningless before it is exactly zero.
    """
    ctx = kernel.ctx
    with ctx.workprec():
        gamma = bilinear(functional, functional, kernel)
        if abs(gamma) <= ctx.tol(5):
            raise DegenerateConstraint(
                f"bilinear denominator {float(gamma):.3e} is numerically zero "
                f"for {functional!r}",
                gamma=gamma,
            )
        phi = apply_to_kernel_slot(functional, kernel, "second")  # function of x
        psi = apply_to_kernel_slot(functional, kernel, "first")  # function of y
        corr = RankOneCorrection(phi, psi, gamma)
    if isinstance(kernel, ConstrainedKernel):
        return ConstrainedKernel(
            kernel.base,
            kernel.corrections + (corr,),
            kernel.imposed + (functional,),
        )
    return ConstrainedKernel(kernel, (corr,), (functional,))


def impose_sequence(kernel, functionals):
    """Fold ``impose`` left to right; empty input returns the kernel as is."""
    out = kernel
    for i, functional in enumerate(functionals):
        try:
            out = impose(out, functional)
        except DegenerateConstraint as exc:
            raise DegenerateConstraint(
                f"functional {i} of {len(functionals)}: {exc}",
                gamma=exc.gamma,
                index=i,
            ) from None
    return out
