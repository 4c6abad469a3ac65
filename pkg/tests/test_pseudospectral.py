import math
import random

import mpmath
import pytest

from bcrbf.constrained import impose, impose_sequence
from bcrbf.errors import NodeCollision, SingularMatrix
from bcrbf.fields import apply_functional
from bcrbf.functionals import make_dirichlet, make_multipoint, make_neumann, make_robin
from bcrbf.kernels import GaussianKernel
from bcrbf.numerics import FLOAT64, Precision, identity, norm_inf
from bcrbf.pseudospectral import (
    BoundaryCondition,
    OperatorSpec,
    OperatorTerm,
    ProblemSpec,
    build_evaluation_matrix,
    build_grid,
    build_operator_matrix,
    build_grid as _bg,
    laplacian,
    operational_matrix,
    product_kernel_eval,
    product_kernel_partial,
    solve,
)

from oracles import fd_mixed_partial_f64

MP40 = Precision("mp", 40)


def test_build_grid_uniform():
    g = build_grid(((0.0, 1.0),), (3,), "uniform-interior", FLOAT64)
    assert g.axes[0] == (0.25, 0.5, 0.75)


def test_build_grid_lexicographic_2d():
    g = build_grid(((0.0, 1.0), (0.0, 1.0)), (2, 2), "uniform-interior", FLOAT64)
    third = 1.0 / 3.0
    assert g.size == 4
    pts = g.points()
    assert pts[0] == (third, third)
    assert pts[1] == (third, 2 * third)
    assert pts[2] == (2 * third, third)
    assert pts[3] == (2 * third, 2 * third)


def test_build_grid_chebyshev():
    g = build_grid(((0.0, 1.0),), (4,), "chebyshev-interior", FLOAT64)
    expect = sorted((math.cos((2 * k - 1) * math.pi / 8) + 1) / 2 for k in range(1, 5))
    assert list(g.axes[0]) == pytest.approx(expect)


def test_build_grid_node_collision():
    # 9 interior nodes on [0, 2] place one exactly at 0.6
    with pytest.raises(NodeCollision):
        build_grid(((0.0, 2.0),), (9,), "uniform-interior", FLOAT64, avoid=[(0, 0.6)])


def test_build_grid_validates():
    with pytest.raises(ValueError):
        build_grid(((0.0, 1.0),), (1,), "uniform-interior", FLOAT64)
    with pytest.raises(ValueError):
        build_grid(((0.0, 1.0),), (3,), "legendre", FLOAT64)


def test_product_kernel_eval_and_partial():
    ks = [GaussianKernel(1.0), GaussianKernel(2.0)]
    xs, ys = (0.2, 0.4), (0.7, 0.1)
    assert product_kernel_eval(ks, xs, ys) == pytest.approx(
        ks[0].eval(0.2, 0.7) * ks[1].eval(0.4, 0.1)
    )
    # 3D at identical points, unconstrained
    k3 = [GaussianKernel(0.5)] * 3
    assert product_kernel_eval(k3, (1, 2, 3), (1, 2, 3)) == 1.0
    got = product_kernel_partial(ks, (2, 0), xs, ys)
    assert got == pytest.approx(ks[0].mixed_partial(2, 0, 0.2, 0.7) * ks[1].eval(0.4, 0.1))


def test_product_laplacian_matches_2d_finite_differences():
    k1 = impose(GaussianKernel(1.0), make_dirichlet(0.0))
    k2 = impose(GaussianKernel(1.0), make_dirichlet(1.0))

    def f(x, y):
        return k1.eval(x, 0.4) * k2.eval(y, 0.6)

    x, y = 0.3, 0.7
    got = product_kernel_partial([k1, k2], (2, 0), (x, y), (0.4, 0.6)) + \
        product_kernel_partial([k1, k2], (0, 2), (x, y), (0.4, 0.6))
    ref = fd_mixed_partial_f64(f, 2, 0, x, y) + fd_mixed_partial_f64(f, 0, 2, x, y)
    assert got == pytest.approx(ref, rel=1e-4)


def test_evaluation_matrix_basics():
    g1 = build_grid(((0.0, 1.0),), (2,), "uniform-interior", FLOAT64)
    a = build_evaluation_matrix(g1, [GaussianKernel(1.0)])
    # nodes {1/3, 2/3}: off-diagonal exp(-1/9)
    assert a[0][0] == 1.0
    assert a[0][1] == pytest.approx(math.exp(-1.0 / 9))

    # spec's 2-node example nodes {0.25, 0.75}: off-diagonal exp(-0.25)
    class FakeGrid:
        pass

    from bcrbf.pseudospectral import Grid

    g2 = Grid(((0.0, 1.0),), ((0.25, 0.75),))
    a2 = build_evaluation_matrix(g2, [GaussianKernel(1.0)])
    assert a2[1][0] == pytest.approx(math.exp(-0.25))
    assert a2[1][0] == pytest.approx(0.77880078, rel=1e-7)


def test_single_node_matrix_is_one():
    from bcrbf.pseudospectral import Grid

    g = Grid(((0.0, 1.0),), ((0.5,),))
    a = build_evaluation_matrix(g, [GaussianKernel(1.0)])
    assert a == [[1.0]]


def test_constrained_evaluation_matrix_symmetric():
    ck = impose_sequence(
        GaussianKernel(1.0), [make_dirichlet(0.0), make_neumann(1.0)]
    )
    g = build_grid(((0.0, 1.0),), (5,), "uniform-interior", FLOAT64)
    a = build_evaluation_matrix(g, [ck])
    asym = max(abs(a[i][j] - a[j][i]) for i in range(5) for j in range(5))
    assert asym < 1e-14


def test_operator_matrix_identity_operator():
    ck = impose(GaussianKernel(1.0), make_dirichlet(0.0))
    g = build_grid(((0.0, 1.0),), (4,), "uniform-interior", FLOAT64)
    op = OperatorSpec((OperatorTerm((0,), 1),))
    a = build_evaluation_matrix(g, [ck])
    al = build_operator_matrix(g, [ck], op)
    assert al == a


def test_operator_matrix_second_derivative_single_node():
    from bcrbf.pseudospectral import Grid

    g = Grid(((0.0, 1.0),), ((0.5,),))
    op = OperatorSpec((OperatorTerm((2,), 1),))
    al = build_operator_matrix(g, [GaussianKernel(1.0)], op)
    assert al[0][0] == pytest.approx(-2.0)


def test_operator_matrix_variable_coefficient_rows():
    eps = 0.5
    ck = impose_sequence(
        GaussianKernel(1.0),
        [make_robin(1, -eps, 0.0), make_robin(1, 1, 1.0)],
    )
    op = OperatorSpec(
        (OperatorTerm((2,), eps), OperatorTerm((1,), lambda p: 1 / (1 + p[0])))
    )
    g = build_grid(((0.0, 1.0),), (4,), "uniform-interior", FLOAT64)
    al = build_operator_matrix(g, [ck], op)
    for i in (0, 2):
        xi = g.axes[0][i]
        for j in (1, 3):
            xj = g.axes[0][j]
            expect = eps * ck.mixed_partial(2, 0, xi, xj) + ck.mixed_partial(
                1, 0, xi, xj
            ) / (1 + xi)
            assert al[i][j] == pytest.approx(expect, rel=1e-13)
            ref = eps * fd_mixed_partial_f64(ck.eval, 2, 0, xi, xj) + \
                fd_mixed_partial_f64(ck.eval, 1, 0, xi, xj) / (1 + xi)
            assert al[i][j] == pytest.approx(ref, rel=1e-3, abs=1e-6)


def test_operational_matrix_identity_and_scalar():
    al = [[3.0, 1.0], [0.0, 2.0]]
    lmat = operational_matrix(identity(FLOAT64, 2), al, FLOAT64)
    assert lmat[0] == pytest.approx(al[0]) and lmat[1] == pytest.approx(al[1])
    assert operational_matrix([[4.0]], [[2.0]], FLOAT64)[0][0] == pytest.approx(0.5)


def test_operational_matrix_residual_mp():
    ctx = Precision("mp", 60)
    with ctx.workprec():
        eps = ctx.num(2) ** -5
        ck = impose_sequence(
            GaussianKernel(ctx.num("0.5"), ctx),
            [make_robin(1, -eps, 0, 0, ctx), make_robin(1, 1, 1, 0, ctx)],
        )
        op = OperatorSpec(
            (OperatorTerm((2,), eps), OperatorTerm((1,), lambda p: 1 / (1 + p[0])))
        )
        g = build_grid(((ctx.zero, ctx.one),), (16,), "uniform-interior", ctx)
        a = build_evaluation_matrix(g, [ck])
        al = build_operator_matrix(g, [ck], op)
        lmat = operational_matrix(a, al, ctx)
        from bcrbf.numerics import mat_mul

        resid = mat_mul(lmat, a)
        n = 16
        err = max(abs(resid[i][j] - al[i][j]) for i in range(n) for j in range(n))
        assert err <= 10.0 ** (12 - 60) * float(norm_inf(al))


def _trivial_problem(ctx):
    return ProblemSpec(
        domain=((ctx.zero, ctx.one),),
        operator=OperatorSpec((OperatorTerm((2,), 1),)),
        bcs=(
            (
                BoundaryCondition(make_dirichlet(0, 0, ctx)),
                BoundaryCondition(make_dirichlet(1, 1, ctx)),
            ),
        ),
        rhs=lambda p: ctx.zero,
    )


def test_solve_trivial_laplace():
    ctx = MP40
    sol = solve(_trivial_problem(ctx), (5,), 1.0, ctx)
    with ctx.workprec():
        got = sol.evaluate((ctx.num("0.5"),))
        assert abs(got - ctx.num("0.5")) < mpmath.mpf(10) ** -30


def test_solution_reproduces_nodal_values():
    ctx = MP40
    sol = solve(_trivial_problem(ctx), (5,), 1.0, ctx)
    with ctx.workprec():
        for i in range(sol.grid.size):
            p = sol.grid.point(i)
            assert abs(sol.evaluate(p) - sol.nodal[i]) < mpmath.mpf(10) ** (12 - 40)


def test_boundary_evaluation_equals_homogenization_map():
    # Dirichlet basis functions vanish at the boundary, so u_N there is M
    ctx = MP40
    sol = solve(_trivial_problem(ctx), (5,), 1.0, ctx)
    with ctx.workprec():
        left = sol.evaluate((ctx.zero,))
        right = sol.evaluate((ctx.one,))
        assert abs(left - sol.hom.value((ctx.zero,))) < mpmath.mpf(10) ** -35
        assert abs(right - sol.hom.value((ctx.one,))) < mpmath.mpf(10) ** -35
        assert abs(left) < mpmath.mpf(10) ** -35
        assert abs(right - 1) < mpmath.mpf(10) ** -35


def test_solution_bc_exactness_robin():
    """The solved expansion satisfies the boundary functionals exactly
    (to working precision), including between collocation nodes."""
    ctx = Precision("mp", 60)
    eps = 0.5
    problem = ProblemSpec(
        domain=((ctx.zero, ctx.one),),
        operator=OperatorSpec(
            (OperatorTerm((2,), ctx.num(eps)), OperatorTerm((1,), lambda p: 1 / (1 + p[0])))
        ),
        bcs=(
            (
                BoundaryCondition(make_robin(1, -eps, 0, 1, ctx)),
                BoundaryCondition(make_robin(1, 1, 1, 1, ctx)),
            ),
        ),
        rhs=lambda p: p[0] + 1,
    )
    sol = solve(problem, (12,), 0.8, ctx)
    with ctx.workprec():
        # the residual floor scales with the coefficient magnitudes the
        # ill-conditioned solve produces
        lam_scale = max(abs(v) for v in sol.lam)
        tol = mpmath.mpf(10) ** (10 - 60) * max(lam_scale, 1)
        for d in range(1):
            for side in (0, 1):
                r = sol.boundary_residual(d, side, problem)
                assert abs(r) < tol


def test_span_reproduction():
    """If the exact solution is one constrained basis function plus M, the
    solver recovers it to near working precision."""
    ctx = Precision("mp", 50)
    with ctx.workprec():
        problem = _trivial_problem(ctx)
        sol = solve(problem, (5,), 1.0, ctx)
        ck = sol.kernels[0]
        star = sol.grid.axes[0][2]
        hom = sol.hom

        rhs = lambda p: ck.mixed_partial(2, 0, p[0], star) + hom.partial((2,), p)
        target = ProblemSpec(
            domain=problem.domain,
            operator=problem.operator,
            bcs=problem.bcs,
            rhs=rhs,
        )
        sol2 = solve(target, (5,), 1.0, ctx)
        rng = random.Random(23)
        for _ in range(10):
            x = ctx.num(rng.random())
            expect = ck.eval(x, star) + hom.value((x,))
            assert abs(sol2.evaluate((x,)) - expect) < mpmath.mpf(10) ** -35


def test_mode_equivalence_well_conditioned():
    ctx = Precision("mp", 40)
    problem = _trivial_problem(ctx)
    s_ps = solve(problem, (6,), 1.0, ctx, mode="ps")
    s_direct = solve(problem, (6,), 1.0, ctx, mode="direct")
    with ctx.workprec():
        diff = max(abs(a - b) for a, b in zip(s_ps.nodal, s_direct.nodal))
        scale = max(abs(a) for a in s_direct.nodal)
        assert diff <= mpmath.mpf(10) ** (8 - 40) * scale


def test_solve_validates_arguments():
    ctx = FLOAT64
    with pytest.raises(ValueError):
        solve(_trivial_problem(ctx), (5, 5), 1.0, ctx)
    with pytest.raises(ValueError):
        solve(_trivial_problem(ctx), (5,), 1.0, ctx, mode="iterative")


def test_problemspec_validates_locations():
    ctx = FLOAT64
    with pytest.raises(ValueError):
        ProblemSpec(
            domain=((0.0, 1.0),),
            operator=OperatorSpec((OperatorTerm((2,), 1),)),
            bcs=(
                (
                    BoundaryCondition(make_dirichlet(-0.5, 0, ctx)),
                    BoundaryCondition(make_dirichlet(1, 0, ctx)),
                ),
            ),
            rhs=lambda p: 0.0,
        )


def test_operator_spec_validation():
    with pytest.raises(ValueError):
        OperatorSpec(())
    with pytest.raises(ValueError):
        OperatorSpec((OperatorTerm((3,), 1),))
