import random

import pytest

from linode.errors import UnknownsPresent
from linode.jetode import CubicForm2, parse_expr, parse_ode
from linode.lie2 import LINEARIZABLE, NOT_LINEARIZABLE, lie_linearizable_2nd, lie_residuals
from linode.symcore import Rat, normalize


def R(text):
    return normalize(parse_expr(text))


def cubic(*texts):
    return CubicForm2(*(R(t) for t in texts))


@pytest.mark.parametrize("coeffs, expected", [
    (("0", "0", "0", "0"), ("0", "0")),
    (("0", "0", "0", "y^2"), ("0", "2")),
    (("0", "0", "-1/x", "0"), ("0", "0")),
])
def test_residuals(coeffs, expected):
    assert lie_residuals(cubic(*coeffs)) == tuple(R(e) for e in expected)


def test_quadratic_nonlinearity_rejected():
    res = lie_linearizable_2nd(parse_ode("D(y,2) + y^2 = 0"))
    assert res.verdict == NOT_LINEARIZABLE
    assert res.residuals[1] == Rat(2)


def test_free_particle_accepted():
    res = lie_linearizable_2nd(parse_ode("D(y,2) = 0"))
    assert res.verdict == LINEARIZABLE
    assert all(r.is_zero() for r in res.residuals)


def test_quartic_slope_is_not_a_candidate():
    res = lie_linearizable_2nd(parse_ode("y'' + y'^4 = 0"))
    assert res.verdict == NOT_LINEARIZABLE
    assert res.residuals is None
    assert res.reason.startswith("NotCandidateForm")


@pytest.mark.parametrize("text", [
    "y'' + y'^3 = 0",            # x <-> y swap of y''=0
    "y'' + y'^2/y = 0",          # u = y^2
    "y'' - 2*y'^2/y = 0",        # u = 1/y
    "y'' + 3*y*y' + y^3 = 0",    # modified Emden
])
def test_known_linearizable_nonlinear(text):
    assert lie_linearizable_2nd(parse_ode(text)).linearizable


@pytest.mark.parametrize("text", ["y'' + y*y' = 0", "y'' + y^3 = 0", "y'' + x*y^2 = 0"])
def test_known_nonlinearizable(text):
    assert not lie_linearizable_2nd(parse_ode(text)).linearizable


def test_unknown_coefficients_refused():
    with pytest.raises(UnknownsPresent):
        lie_linearizable_2nd(parse_ode("unknown H(x,y); y'' + H(x,y)*y = 0"))


def test_wrong_order_refused():
    with pytest.raises(ValueError):
        lie_linearizable_2nd(parse_ode("y''' = 0"))


def _random_rational(rng):
    def poly():
        return " + ".join(f"({rng.randint(-4, 4)})*x^{k}" for k in range(rng.randint(1, 3)))
    num = poly()
    return f"({num})" if rng.random() < 0.5 else f"({num})/(1 + ({poly()})^2)"


@pytest.mark.parametrize("seed", range(15))
def test_random_linear_equations_pass(seed):
    rng = random.Random(seed)
    a, b, c = (_random_rational(rng) for _ in range(3))
    ode = parse_ode(f"y'' + {a}*y' + {b}*y + {c} = 0")
    res = lie_linearizable_2nd(ode)
    assert res.verdict == LINEARIZABLE
    assert all(r.is_zero() for r in res.residuals)
