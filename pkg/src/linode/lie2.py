"""Closed-form linearizability test for second-order equations
``y'' + F3 y'^3 + F2 y'^2 + F1 y' + F = 0``."""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import mpq

from .errors import NotCubicForm, UnknownsPresent
from .jetode import CubicForm2, RationalODE, extract_cubic_form
from .symcore.rational import Rat
from .symcore.symbols import is_fn

LINEARIZABLE = "Linearizable"
NOT_LINEARIZABLE = "NotLinearizable"
INCONCLUSIVE = "Inconclusive"


def lie_residuals(c: CubicForm2) -> tuple[Rat, Rat]:
    """Both residuals of Lie's conditions (zero iff linearizable)."""
    F3, F2, F1, F = (Rat.coerce(v) for v in c.as_tuple())
    dx = lambda r: r.diff_x()  # noqa: E731
    dy = lambda r: r.diff_y()  # noqa: E731

    # classical conditions carry 3*(F3)_xx and 3*F_yy; dividing by 3 keeps
    # those two terms monic without changing when a residual vanishes
    lhs1 = 3 * dx(dx(F3)) - 2 * dx(dy(F2)) + dy(dy(F1))
    rhs1 = dx(3 * F1 * F3 - F2 ** 2) - 3 * dy(F * F3) - 3 * F3 * dy(F) + F2 * dy(F1)
    lhs2 = 3 * dy(dy(F)) - 2 * dx(dy(F1)) + dx(dx(F2))
    rhs2 = 3 * dx(F * F3) + dy(F1 ** 2 - 3 * F * F2) + 3 * F * dx(F3) - F1 * dx(F2)
    third = Rat(mpq(1, 3))
    return (lhs1 - rhs1) * third, (lhs2 - rhs2) * third


@dataclass(frozen=True)
class Lie2Result:
    verdict: str
    residuals: tuple | None = None
    reason: str = ""

    @property
    def linearizable(self) -> bool:
        return self.verdict == LINEARIZABLE


def lie_linearizable_2nd(ode: RationalODE) -> Lie2Result:
    if ode.order != 2:
        raise ValueError("criterion applies to second-order equations only")
    try:
        c = extract_cubic_form(ode)
    except NotCubicForm as exc:
        return Lie2Result(NOT_LINEARIZABLE, None, f"NotCandidateForm: {exc}")
    if any(is_fn(v) for F in c.as_tuple() for v in F.variables()):
        raise UnknownsPresent("cubic-form coefficients contain unknown functions")
    r1, r2 = lie_residuals(c)
    if r1.is_zero() and r2.is_zero():
        return Lie2Result(LINEARIZABLE, (r1, r2), "both residuals vanish")
    return Lie2Result(NOT_LINEARIZABLE, (r1, r2), "nonzero residual")
