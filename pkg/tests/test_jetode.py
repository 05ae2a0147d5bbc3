import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linode.errors import JetOrderError, NotCubicForm, NotSolvedForHighest, ParseError
from linode.jetode import extract_cubic_form, parse_expr, parse_ode, pretty_print, reassemble
from linode.symcore import Rat, normalize
from linode.symcore.symbols import H_TAG, fn_parts, is_fn


def R(text):
    return normalize(parse_expr(text, unknowns=("H",)))


def test_simple_second_order():
    ode = parse_ode("D(y,2) + y^2 = 0")
    assert ode.order == 2
    assert Rat(ode.M) == R("y^2")
    assert Rat(ode.N) == Rat(1)


def test_fourth_order_is_made_monic(fixture_text):
    ode = parse_ode(fixture_text("linearizable_order4.ode"))
    assert ode.order == 4
    M = R("x^2*y^2 + 8*x^2*D(y,1)*D(y,3) + 16*x*y*D(y,3) + 6*x^2*D(y,2)^2"
          " + 48*x*D(y,1)*D(y,2) + 24*y*D(y,2) + 24*D(y,1)^2")
    assert ode.ratio == M / R("2*x^2*y")
    assert Rat(ode.leading) == R("2*x^2*y")


def test_declared_unknown_function(fixture_text):
    ode = parse_ode(fixture_text("unknown_coefficient_order4.ode"))
    assert ode.order == 4
    assert ode.unknowns == ("H",)
    assert not ode.explicit()
    tags = {fn_parts(v)[0] for v in ode.M.variables() if is_fn(v)}
    assert tags == {H_TAG}


def test_prime_aliases_match_d_notation():
    a = parse_ode("y''' + x*y'*y'' - y = 0")
    b = parse_ode("D(y,3) + x*D(y,1)*D(y,2) - y = 0")
    assert a == b


def test_right_hand_side_moves_over():
    assert parse_ode("y'' = -y") == parse_ode("y'' + y = 0")


def test_division_by_jet_free_leading_coefficient():
    ode = parse_ode("x*y'' + y' = 0")
    assert ode.ratio == R("D(y,1)/x")


@pytest.mark.parametrize("text, err", [
    ("D(y,2) + = 0", ParseError),
    ("D(y,2) + z = 0", ParseError),
    ("D(y,2) + H(x,y) = 0", ParseError),
    ("D(y,2)^2 + y = 0", NotSolvedForHighest),
    ("y/D(y,2) + 1 = 0", NotSolvedForHighest),
    ("y' + y = 0", JetOrderError),
    ("y'' - y'' + y = 0", JetOrderError),
])
def test_rejects_bad_input(text, err):
    with pytest.raises(err):
        parse_ode(text)


def test_syntax_error_is_a_syntax_error():
    assert issubclass(ParseError, SyntaxError)


@pytest.mark.parametrize("name", ["linearizable_order4.ode", "unknown_coefficient_order4.ode",
                                  "order15_one_symmetry.ode"])
def test_pretty_print_round_trip_fixtures(fixture_text, name):
    ode = parse_ode(fixture_text(name))
    again = parse_ode(pretty_print(ode))
    assert again == ode


@pytest.mark.parametrize("text", ["D(y,2) = 0", "y'' + y'^3/(x+y) = 0", "x*y*y''' - 3*y'*y'' + x = 0"])
def test_pretty_print_round_trip(text):
    ode = parse_ode(text)
    assert parse_ode(pretty_print(ode)) == ode


@pytest.mark.parametrize("text, coeffs", [
    ("y'' + y^2 = 0", ("0", "0", "0", "y^2")),
    ("y'' + 3*y*y' + y^3 = 0", ("0", "0", "3*y", "y^3")),
    ("y'' - y'/x = 0", ("0", "0", "-1/x", "0")),
    ("x*y'' + y'^3 + y*y'^2 = 0", ("1/x", "y/x", "0", "0")),
])
def test_cubic_form(text, coeffs):
    c = extract_cubic_form(parse_ode(text))
    assert c.as_tuple() == tuple(R(s) for s in coeffs)


@pytest.mark.parametrize("text", ["y'' + y'^4 = 0", "y'' + 1/y' = 0", "y'' + y/(1 + y'^2) = 0"])
def test_not_cubic_form(text):
    with pytest.raises(NotCubicForm):
        extract_cubic_form(parse_ode(text))


coef = st.sampled_from(["0", "1", "x", "y", "x*y", "x^2", "y/x", "(x+y)^2", "1/(1+y^2)"])


@settings(max_examples=60, deadline=None)
@given(st.tuples(coef, coef, coef, coef))
def test_cubic_form_reassembles(cs):
    F3, F2, F1, F = cs
    ode = parse_ode(f"y'' + ({F3})*y'^3 + ({F2})*y'^2 + ({F1})*y' + ({F}) = 0")
    assert reassemble(extract_cubic_form(ode)) == ode.ratio
    assert parse_ode(pretty_print(ode)) == ode
