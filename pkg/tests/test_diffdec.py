import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from linode.candidate import LinearTarget, PointTransformation, determining_system, substitute_solution
from linode.diffdec import (
    COMPLETE, DEFAULT_RANKING, INCONCLUSIVE, INCONSISTENT, Budget, JanetIndex, initial, multiplicative,
    is_unit, prem, separant, thomas_decompose,
)
from linode.diffdec.core import integrability_conditions, pseudo_reduce, verify_certificate
from linode.jetode import parse_ode
from linode.symcore import Rat, fn
from linode.symcore.bridge import factor
from linode.symcore.symbols import fn_code

from dpoly import PRINTED_EQUATIONS, PRINTED_INEQUATIONS, A0, d, f, x, y

FOURTH_SOLUTION = (PointTransformation(Rat(x ** 2 * y ** 2), Rat(x)), LinearTarget(4, (Rat(1), Rat(0))))


@pytest.fixture(scope="module")
def fourth_order(fixture_text):
    return parse_ode(fixture_text("linearizable_order4.ode"))


@pytest.fixture(scope="module")
def fourth_order_result(fourth_order):
    return thomas_decompose(determining_system(fourth_order))


@pytest.fixture(scope="module")
def unknown_coefficient_result(fixture_text):
    ode = parse_ode(fixture_text("unknown_coefficient_order4.ode"))
    return thomas_decompose(determining_system(ode))


def holds(solution, system):
    pt, target = solution
    return (all(substitute_solution(p, pt, target).is_zero() for p in system.equations)
            and all(not substitute_solution(q, pt, target).is_zero() for q in system.inequations))


# ranking

def test_ranking_is_orderly_and_x_heavy():
    key = DEFAULT_RANKING.key
    assert key(fn("f", 0, 1).code) < key(fn("f", 2, 0).code)
    assert key(fn("f", 0, 2).code) < key(fn("f", 1, 1).code) < key(fn("f", 2, 0).code)
    order = [fn_code(0, 1, 0), fn_code(1, 1, 0), fn("H", 1, 0).code, fn("g", 1, 0).code, fn("f", 1, 0).code]
    assert sorted(order, key=key) == order


def test_ranking_compatible_with_differentiation():
    codes = [fn(n, a, b).code for n in ("f", "g") for a in range(3) for b in range(3)]
    key = DEFAULT_RANKING.key
    for u in codes:
        for v in codes:
            if key(u) < key(v):
                tu, tv = u + (1 << 12), v + (1 << 12)  # one more x-derivative
                assert key(tu) < key(tv)


def test_leader_initial_separant():
    p = A0 * d("g", "x") ** 4 - 1
    v = DEFAULT_RANKING.leader(p)
    assert v == fn("g", 1, 0).code
    assert initial(p, v) == A0
    assert separant(p, v) == 4 * A0 * d("g", "x") ** 3


def test_prem_identity():
    p = d("f", "x") ** 2 * y + x
    r = x * d("f", "x") - y
    v = fn("f", 1, 0).code
    rem = prem(p, r, v)
    assert rem.degree(v) < 1
    assert rem == y ** 3 + x ** 3


# janet

def test_multiplicative_variables():
    flags = multiplicative([(2, 0), (1, 1), (0, 2)])
    assert flags == {(2, 0): (True, False), (1, 1): (True, False), (0, 2): (True, True)}


def test_janet_divisor_lookup():
    idx = JanetIndex({1: fn("f", 1, 0).code, 2: fn("f", 0, 1).code})
    assert idx.nonmultiplicative(1) == ["y"]
    assert idx.nonmultiplicative(2) == []
    assert idx.divisor(fn("f", 3, 0).code) == (1, (2, 0))
    assert idx.divisor(fn("f", 2, 2).code) == (2, (2, 1))
    assert idx.divisor(fn("g", 1, 0).code) is None


# pseudo-reduction

def test_reduce_by_mixed_equation():
    p = Rat(d("f", "xy")) - Rat(2 * d("f", "y"), x)
    eq = x * d("f", "xy") - 2 * d("f", "y")
    assert pseudo_reduce(p.num, [eq]).is_zero()


def test_reduced_polynomial_is_fixed():
    p = y * d("f", "yy") - d("f", "y")
    assert pseudo_reduce(p, [d("g", "y")]) == p


def test_prolongation_of_vanishing_derivative():
    assert pseudo_reduce(d("g", "yy"), [d("g", "y")]).is_zero()


# splitting

def test_split_on_initial_kills_zero_branch():
    lines = []
    res = thomas_decompose([A0 * d("g", "x") ** 4 - 1], trace=lines.append)
    assert res.status == COMPLETE
    assert len(res.systems) == 1
    assert A0 in res.systems[0].inequations
    assert any(line.startswith("SPLIT A0") for line in lines)
    assert any(line.startswith("CLOSE") for line in lines)
    assert all(verify_certificate(c) for c in res.certificates)


def test_unit_initial_does_not_split():
    lines = []
    res = thomas_decompose([d("f", "x") - y], trace=lines.append)
    assert res.status == COMPLETE and res.stats["splits"] == 0
    assert not any(line.startswith("SPLIT") for line in lines)


def test_unit_after_reduction_is_inconsistent():
    res = thomas_decompose([d("f", "x") - y, d("f", "x") - y + 3])
    assert res.status == INCONSISTENT
    assert [c.kind for c in res.certificates] == ["unit"]


# decomposition

@pytest.mark.parametrize("eqs", [
    [d("f", "x"), d("f", "x") - 1],
    [d("f", "x") - y, d("f", "y")],
])
def test_trivial_inconsistencies(eqs):
    res = thomas_decompose(eqs)
    assert res.status == INCONSISTENT
    assert res.certificates and all(verify_certificate(c) for c in res.certificates)


def test_single_equation_is_simple():
    res = thomas_decompose([d("g", "y")])
    assert res.status == COMPLETE
    assert [s.equations for s in res.systems] == [[d("g", "y")]]


def test_inequation_reducing_to_zero_closes_branch():
    res = thomas_decompose(_System([d("f", "y")], [d("f", "xy")]))
    assert res.status == INCONSISTENT
    assert res.certificates[0].kind == "inequation"


class _System:
    def __init__(self, equations, inequations):
        self.equations, self.inequations = equations, inequations


def test_fourth_order_example_consistent(fourth_order_result):
    res = fourth_order_result
    assert res.status == COMPLETE
    assert any(holds(FOURTH_SOLUTION, s) for s in res.systems)
    assert all(verify_certificate(c) for c in res.certificates)


def test_fourth_order_simple_system_is_passive(fourth_order_result):
    for s in fourth_order_result.systems:
        assert integrability_conditions(s.equations, s.inequations) == []
        leaders = s.leaders()
        assert len(set(leaders)) == len(leaders)
        for p, v in zip(s.equations, leaders):
            init = initial(p, v)
            assert not pseudo_reduce(init, s.equations, s.inequations).is_zero()


def test_printed_system_matches_ours(fourth_order_result):
    ours = fourth_order_result.systems[0]
    # every equation we keep follows from the printed system
    for p in ours.equations:
        assert pseudo_reduce(p, PRINTED_EQUATIONS, PRINTED_INEQUATIONS).is_zero()
    # and adding the printed (A0)_x = 0 recovers all ten printed equations
    extra = ours.equations + [d("A0", "x")]
    for p in PRINTED_EQUATIONS:
        assert pseudo_reduce(p, extra, ours.inequations).is_zero()


def test_printed_system_is_involutive():
    assert integrability_conditions(PRINTED_EQUATIONS, PRINTED_INEQUATIONS) == []
    assert all(substitute_solution(p, *FOURTH_SOLUTION).is_zero() for p in PRINTED_EQUATIONS)


def test_curl_obstruction_detected():
    conds = integrability_conditions([d("f", "x") - y, d("f", "y")])
    assert conds and all(c.is_const() and not c.is_zero() for c in conds)


def test_single_equation_has_no_conditions():
    assert integrability_conditions([d("g", "y")]) == []


def test_unknown_coefficient_example_empty(unknown_coefficient_result):
    res = unknown_coefficient_result
    assert res.status == INCONSISTENT
    assert res.systems == []
    assert res.certificates
    assert all(verify_certificate(c) for c in res.certificates)


def _nonunit_factors(h):
    _, fs = factor(h)
    return [q.primitive() for q, _ in fs if not is_unit(q)]


def test_initials_and_separants_are_inequations(fourth_order_result):
    for s in fourth_order_result.systems:
        known = {q.primitive() for q in s.inequations} | {(-q).primitive() for q in s.inequations}
        for p, v in zip(s.equations, s.leaders()):
            for h in (initial(p, v), separant(p, v)):
                assert set(_nonunit_factors(h)) <= known


def test_free_particle_systems_are_disjoint():
    res = thomas_decompose(determining_system(parse_ode("D(y,2) = 0")))
    assert res.status == COMPLETE and len(res.systems) >= 2
    for i, a in enumerate(res.systems):
        for b in res.systems[i + 1:]:
            ca, cb = set(a.conditions), set(b.conditions)
            assert any(("==", p) in cb for op, p in ca if op == "!=") or \
                any(("!=", p) in cb for op, p in ca if op == "==")
    identity = (PointTransformation(Rat(y), Rat(x)), LinearTarget(2))
    assert any(holds(identity, s) for s in res.systems)


def test_deterministic(fourth_order):
    sys = determining_system(fourth_order)
    a, b = thomas_decompose(sys), thomas_decompose(sys)
    assert [s.equations for s in a.systems] == [s.equations for s in b.systems]
    assert [s.inequations for s in a.systems] == [s.inequations for s in b.systems]
    assert [c.reduced for c in a.certificates] == [c.reduced for c in b.certificates]
    la, lb = [], []
    thomas_decompose(sys, trace=la.append)
    thomas_decompose(sys, trace=lb.append)
    assert la == lb


def test_budget_exhaustion_is_inconclusive(fourth_order):
    res = thomas_decompose(determining_system(fourth_order), Budget(max_splits=1))
    assert res.status == INCONCLUSIVE
    assert res.frontier


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(-3, 3))
def test_random_linear_systems_keep_polynomial_solution(a, b, c):
    # f = x^a y^b + c x is a solution of the derived system
    sol = Rat(x ** a * y ** b + c * x)
    eqs = [y * d("f", "y") - b * (f - c * x), x * d("f", "x") - a * f + (a - 1) * c * x]
    res = thomas_decompose(eqs)
    assert res.status == COMPLETE
    pt = PointTransformation(sol, Rat(x + y))
    assert any(all(substitute_solution(p, pt, LinearTarget(2)).is_zero() for p in s.equations)
               for s in res.systems)
