import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linode.diffdec import Budget
from linode.diffdec.core import COMPLETE, INCONCLUSIVE
from linode.diffdec.linear import Frac, complete_linear, linear_row, row_poly
from linode.jetode import parse_ode
from linode.symcore import Poly, Rat
from linode.symcore.calculus import diff_x, diff_y
from linode.symcore.symbols import XI_TAG, fn, fn_parts
from linode.symmetry import parametric_derivatives, prolong_and_determine

from strategies import polys

x, y = Poly.var(1), Poly.var(2)
XI, ETA = fn("xi").code, fn("eta").code

# generators of sl(3), the point symmetries of y'' = 0
PROJECTIVE = [
    (Poly.const(1), Poly()), (Poly(), Poly.const(1)), (x, Poly()), (y, Poly()),
    (Poly(), x), (Poly(), y), (x * x, x * y), (x * y, y * y),
]


def _derivative(p: Poly, a: int, b: int) -> Poly:
    for _ in range(a):
        p = diff_x(p)
    for _ in range(b):
        p = diff_y(p)
    return p


def _apply(row: dict, xi: Poly, eta: Poly) -> Rat:
    acc = Rat(0)
    for code, c in row.items():
        tag, a, b = fn_parts(code)
        acc = acc + c * Rat(_derivative(xi if tag == XI_TAG else eta, a, b))
    return acc


def _completion(text):
    return complete_linear(prolong_and_determine(parse_ode(text)).equations)


xy_polys = polys(nvars=2, max_deg=4, max_terms=4)
nonzero_xy = xy_polys.filter(lambda p: not p.is_zero())


@settings(max_examples=150, deadline=None)
@given(xy_polys, nonzero_xy, xy_polys, nonzero_xy)
def test_frac_field_matches_rat(a, b, c, d):
    r, s = Rat(a, b), Rat(c, d)
    fr, fs = Frac.from_rat(r), Frac.from_rat(s)
    assert (fr + fs).to_rat() == r + s
    assert (fr - fs).to_rat() == r - s
    assert (fr * fs).to_rat() == r * s
    assert fr.diff(0).to_rat() == r.diff_x()
    assert fr.diff(1).to_rat() == r.diff_y()
    if not s.is_zero():
        assert (fr / fs).to_rat() == r / s


def test_frac_round_trip_is_canonical():
    r = Rat(x * x - y * y, 3 * x + 3 * y)
    assert Frac.from_rat(r).to_rat() == Rat(x - y, Poly.const(3))


def test_free_particle_rows_vanish_on_projective_generators():
    done = _completion("D(y,2) = 0")
    assert done.status == COMPLETE
    assert len(parametric_derivatives(done.leaders)) == 8
    for xi, eta in PROJECTIVE:
        for row in done.equations:
            assert _apply(row, xi, eta).is_zero()


def test_rows_are_monic_in_their_leaders():
    done = _completion("D(y,2) - D(y,1)/x = 0")
    for lead, row in zip(done.leaders, done.equations):
        assert row[lead] == Rat(1)


@pytest.mark.parametrize("text, dim", [
    ("D(y,3) = 0", 7),
    ("D(y,4) = 0", 8),
    ("D(y,2) + y^2 = 0", 2),
    ("D(y,2) + 3*y*D(y,1) + y^3 = 0", 8),
])
def test_dimension_counts(text, dim):
    assert len(parametric_derivatives(_completion(text).leaders)) == dim


def test_row_poly_clears_denominators():
    row = {XI: Rat(Poly.const(1), x), ETA: Rat(y)}
    p = row_poly(row)
    assert linear_row(p) == {XI: Rat(1), ETA: Rat(x * y)}


def test_nonlinear_input_rejected():
    with pytest.raises(ValueError):
        linear_row(Poly.var(XI) * Poly.var(ETA))
    with pytest.raises(ValueError):
        complete_linear([Poly.var(XI) * Poly.var(fn("f").code)])


def test_size_budget_gives_inconclusive():
    eqs = prolong_and_determine(parse_ode("D(y,2) + x*y*D(y,1)^3 + y^2 = 0")).equations
    done = complete_linear(eqs, Budget(max_size=40))
    assert done.status == INCONCLUSIVE
    assert "max_size" in done.reason


@settings(max_examples=30, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_linear_odes_keep_full_algebra(a, b):
    # y'' + a y' + b y = 0 is linear with constant coefficients
    text = f"D(y,2) + ({a})*D(y,1) + ({b})*y = 0"
    assert len(parametric_derivatives(_completion(text).leaders)) == 8
