import pytest

from linode.candidate import determining_system, verify_transformation
from linode.diffdec import SimpleSystem, thomas_decompose
from linode.heuristics import (
    HeuristicBudget, NotApplicable, _Solver, integrate_binomial, solve_simple_system,
)
from linode.jetode import parse_ode
from linode.symcore import Rat
from linode.symcore.symbols import F_TAG, G_TAG

from dpoly import PRINTED_EQUATIONS, PRINTED_INEQUATIONS, A0, d, x, y


@pytest.fixture(scope="module")
def fourth_order(fixture_text):
    return parse_ode(fixture_text("linearizable_order4.ode"))


def test_solves_fourth_order_example(fourth_order):
    res = thomas_decompose(determining_system(fourth_order))
    out = solve_simple_system(res.systems[0], fourth_order)
    assert out is not None
    pt, target = out
    assert pt.f == Rat(x ** 2 * y ** 2)
    assert pt.g == Rat(x)
    assert target.A == (Rat(1), Rat(0))
    assert str(target) == "D(u,4) + u = 0"
    assert verify_transformation(fourth_order, pt, target)


def test_solves_printed_system(fourth_order):
    S = SimpleSystem(PRINTED_EQUATIONS, PRINTED_INEQUATIONS)
    pt, target = solve_simple_system(S, fourth_order)
    assert (pt.f, pt.g, target.A) == (Rat(x ** 2 * y ** 2), Rat(x), (Rat(1), Rat(0)))


def test_transformation_subsystem_normalization(fourth_order):
    S = SimpleSystem([d("g", "y"), A0 * d("g", "x") ** 4 - 1, d("A0", "x"), d("A0", "y")], [A0])
    solver = _Solver(S, fourth_order, HeuristicBudget())
    g = next(v for v, _ in solver.candidates(G_TAG, {}) if not v.is_const())
    assert g == Rat(x)
    a0, texpr = next(solver.candidates(0, {G_TAG: g}))
    assert a0 == Rat(1) and texpr == Rat(1)


def test_euler_equation_ansatz(fourth_order):
    k = integrate_binomial(y * d("f", "yy") - d("f", "y"))
    assert k.tag == F_TAG
    assert [j for j in range(6) if k.allows(0, j)] == [0, 2]
    S = SimpleSystem([y * d("f", "yy") - d("f", "y")], [])
    solver = _Solver(S, fourth_order, HeuristicBudget())
    for f, _ in solver.candidates(F_TAG, {}):
        assert f.num.degree(2) in (0, 2)
        assert solver.consistent({F_TAG: f})


def test_vanishing_derivative_kernel():
    k = integrate_binomial(d("g", "y"))
    assert k.allows(3, 0) and not k.allows(0, 1)


def test_mixed_fourth_derivative_kernel():
    k = integrate_binomial(d("f", "xxxy"))
    assert all(k.allows(i, j) for i in range(3) for j in range(4))
    assert k.allows(5, 0)
    assert not k.allows(3, 1)


@pytest.mark.parametrize("eq", [
    d("f", "x") + d("f", "y") + d("f"),
    d("f", "x") * d("f", "y"),
    d("f", "x") - d("g", "y"),
    d("f", "x") + y * d("f", "y") ** 1 * x * x,
])
def test_not_applicable(eq):
    with pytest.raises(NotApplicable):
        integrate_binomial(eq)


def test_no_solution_returns_none(fourth_order):
    # an inconsistent-looking ansatz: f_x = f has no Laurent solution
    S = SimpleSystem([d("f", "x") - d("f"), d("g", "y"), A0 * d("g", "x") ** 4 - 1, d("A0", "x"),
                      d("A0", "y"), d("A1")],
                     [A0])
    assert solve_simple_system(S, fourth_order) is None


def test_unknown_coefficients_skip(fixture_text):
    ode = parse_ode(fixture_text("unknown_coefficient_order4.ode"))
    assert solve_simple_system(SimpleSystem([d("g", "y")], []), ode) is None


def test_deterministic(fourth_order):
    S = SimpleSystem(PRINTED_EQUATIONS, PRINTED_INEQUATIONS)
    a = solve_simple_system(S, fourth_order)
    b = solve_simple_system(S, fourth_order)
    assert (a[0], a[1]) == (b[0], b[1])


def test_second_order_solution_verified():
    ode = parse_ode("y'' - y'/x = 0")
    res = thomas_decompose(determining_system(ode))
    found = [solve_simple_system(s, ode) for s in res.systems]
    found = [o for o in found if o is not None]
    assert found
    for pt, target in found:
        assert verify_transformation(ode, pt, target)
