import math

import pytest

from bcrbf.benchmarks import EXAMPLES, get_example, self_check
from bcrbf.numerics import FLOAT64, Precision


@pytest.mark.parametrize("ident", sorted(EXAMPLES))
def test_exact_solutions_satisfy_pde_and_bcs(ident):
    pde, bc = self_check(get_example(ident), FLOAT64)
    assert pde <= 1e-8
    assert bc <= 1e-8


def test_registry_contents():
    assert set(EXAMPLES) == {f"ex{i}" for i in range(1, 8)}
    for rec in EXAMPLES.values():
        assert rec.metric in ("abs", "rel")
        assert rec.table
        for row in rec.table:
            assert len(row.counts) == rec.dim
            assert row.kansa > 0 and row.constrained > 0


def test_get_example_unknown():
    with pytest.raises(KeyError):
        get_example("ex99")


def test_ex1_eps_parameter():
    rec = get_example("ex1")
    assert rec.has_eps
    for eps in (0.5, 2.0**-5):
        problem = rec.make(FLOAT64, eps)
        # robin data: u(0) - eps u'(0) = 1
        f = problem.bcs[0][0].functional
        assert f.terms[1].coeff == -eps
        assert f.rhs == 1.0
        u0 = problem.exact.value((0.0,))
        du0 = problem.exact.partial((1,), (0.0,))
        assert u0 - eps * du0 == pytest.approx(1.0, abs=1e-12)
        u1 = problem.exact.value((1.0,))
        du1 = problem.exact.partial((1,), (1.0,))
        assert u1 + du1 == pytest.approx(1.0, abs=1e-12)


def test_ex5_multipoint_weights():
    rec = get_example("ex6")
    problem = rec.make(FLOAT64)
    mp_func = problem.bcs[1][0].functional
    assert mp_func.kind == "multipoint"
    # weights 1/4, 1/2, 1/4 at 3/5, 6/5, 9/5
    weights = [(-t.coeff, t.location) for t in mp_func.terms[1:]]
    assert weights == [(0.25, 0.6), (0.5, 1.2), (0.25, 1.8)]


def test_ex7_exact_closed_form():
    rec = get_example("ex7")
    problem = rec.make(FLOAT64)
    p = (0.1, -0.2, 0.3)
    s = 4 + sum(p)
    assert problem.exact.value(p) == pytest.approx(1 / s)
    assert problem.exact.partial((2, 0, 0), p) == pytest.approx(2 / s**3)
    assert problem.rhs(p) == pytest.approx(6 / s**3)


def test_exact_constants_derived_not_transcribed():
    """The published closed form for the perturbed problem misprints the
    trailing constant's sign; the registry must solve the boundary system
    instead.  With the printed '+20/(3(2 eps + 1))' the left Robin value
    would be off by 2*20a."""
    rec = get_example("ex1")
    eps = 0.5
    problem = rec.make(FLOAT64, eps)
    a = 1 / (3 * (2 * eps + 1))
    q = 1 - 1 / eps
    # reconstruct the printed closed form
    d_const = (19 + 3 * eps) / (3 * (2 * eps + 1)) / (
        (1 - 2 ** (1 - 1 / eps)) / (eps - 1) - 2 ** (-1 / eps) / eps - 1
    )
    def u_printed(x):
        return (
            (x + 1) ** 3 * a
            + d_const * ((x + 1) ** q / (eps - 1)
                         - (2 ** (1 - 1 / eps) / (eps - 1) + 2 ** (-1 / eps) / eps))
            + 1 + 20 * a
        )
    # the printed form violates the right boundary condition ...
    h = 1e-6
    du1 = (u_printed(1 + h) - u_printed(1 - h)) / (2 * h)
    assert abs(u_printed(1.0) + du1 - 1.0) > 1e-2
    # ... the registry's exact solution satisfies it
    u1 = problem.exact.value((1.0,))
    du1 = problem.exact.partial((1,), (1.0,))
    assert u1 + du1 == pytest.approx(1.0, abs=1e-12)


def test_self_check_mp():
    ctx = Precision("mp", 40)
    pde, bc = self_check(get_example("ex3"), ctx)
    assert float(pde) < 1e-30
    assert float(bc) < 1e-30
