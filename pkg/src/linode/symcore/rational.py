"""Canonical rational functions: coprime numerator/denominator pairs."""

from __future__ import annotations

from typing import Callable

from ..errors import DivisionByZero
from . import bridge
from .calculus import diff_x, diff_y, pdiff, total_diff_x
from .poly import ONE, Poly


class Rat:
    """Canonical form num/den.

    The denominator is never zero, shares no factor with the numerator and
    has leading coefficient 1 in graded reverse lexicographic order.  Two
    Rats are equal as rational functions iff their fields are equal.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=None, *, _canonical: bool = False):
        num = Poly.coerce(num)
        den = ONE if den is None else Poly.coerce(den)
        if not _canonical:
            num, den = _canonicalize(num, den)
        self.num = num
        self.den = den

    @classmethod
    def coerce(cls, other) -> "Rat":
        return other if isinstance(other, Rat) else cls(other)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_poly(self) -> bool:
        return self.den.is_const()

    def is_const(self) -> bool:
        return self.num.is_const() and self.den.is_const()

    def variables(self) -> set:
        return self.num.variables() | self.den.variables()

    def __add__(self, other) -> "Rat":
        other = Rat.coerce(other)
        if self.den == other.den:
            return Rat(self.num + other.num, self.den)
        if self.den.is_const() or other.den.is_const():
            return Rat(self.num * other.den + other.num * self.den, self.den * other.den)
        # only the shared part g of the denominators can cancel
        g, b1, d1 = bridge.cofactors(self.den, other.den)
        num = self.num * d1 + other.num * b1
        if num.is_zero():
            return Rat(num, ONE, _canonical=True)
        if not g.is_const():
            h, num, g = bridge.cofactors(num, g)
        return _monic_den(num, b1 * d1 * g)

    __radd__ = __add__

    def __neg__(self) -> "Rat":
        return Rat(-self.num, self.den, _canonical=True)

    def __sub__(self, other) -> "Rat":
        return self + (-Rat.coerce(other))

    def __rsub__(self, other) -> "Rat":
        return Rat.coerce(other) - self

    def __mul__(self, other) -> "Rat":
        other = Rat.coerce(other)
        if self.is_zero() or other.is_zero():
            return Rat(Poly(), ONE, _canonical=True)
        a, b, c, d = self.num, self.den, other.num, other.den
        if not d.is_const():
            _, a, d = bridge.cofactors(a, d)
        if not b.is_const():
            _, c, b = bridge.cofactors(c, b)
        return _monic_den(a * c, b * d)

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Rat":
        other = Rat.coerce(other)
        if other.is_zero():
            raise DivisionByZero("division by a rational function that is identically zero")
        return Rat(self.num * other.den, self.den * other.num)

    def __rtruediv__(self, other) -> "Rat":
        return Rat.coerce(other) / self

    def __pow__(self, n: int) -> "Rat":
        if n >= 0:
            return Rat(self.num ** n, self.den ** n, _canonical=True)
        if self.is_zero():
            raise DivisionByZero("negative power of zero")
        return Rat(self.den ** -n, self.num ** -n)

    def __eq__(self, other) -> bool:
        try:
            other = Rat.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def derive(self, D: Callable[[Poly], Poly]) -> "Rat":
        """Apply a derivation given as a function on polynomials."""
        if self.den.is_const():
            return Rat(D(self.num), self.den, _canonical=True)
        return Rat(D(self.num) * self.den - self.num * D(self.den), self.den * self.den)

    def diff(self, code: int) -> "Rat":
        return self.derive(lambda p: pdiff(p, code))

    def diff_x(self) -> "Rat":
        return self.derive(diff_x)

    def diff_y(self) -> "Rat":
        return self.derive(diff_y)

    def total_diff_x(self, jet_cutoff: int | None = None) -> "Rat":
        return self.derive(lambda p: total_diff_x(p, jet_cutoff))

    def subs(self, mapping: dict) -> "Rat":
        """Substitute Rats (or Polys) for variables."""
        if not mapping:
            return self
        return _subs_poly(self.num, mapping) / _subs_poly(self.den, mapping)

    def __str__(self) -> str:
        if self.den == ONE:
            return str(self.num)
        n = str(self.num)
        if len(self.num) > 1 or "/" in n:
            n = f"({n})"
        d = str(self.den)
        if len(self.den) > 1 or not self.den.is_monomial() or "*" in d:
            d = f"({d})"
        return f"{n}/{d}"

    def __repr__(self) -> str:
        return f"Rat({self})"


def _subs_poly(p: Poly, mapping: dict) -> Rat:
    rats = {v: Rat.coerce(r) for v, r in mapping.items()}
    if all(r.is_poly() for r in rats.values()):
        return Rat(p.subs({v: r.num.scale(1 / r.den.const_value()) for v, r in rats.items()}))
    acc = Rat(0)
    for m, c in p.terms.items():
        t = Rat(Poly({tuple(q for q in m if q[0] not in rats): c}))
        for v, e in m:
            if v in rats:
                t = t * rats[v] ** e
        acc = acc + t
    return acc


def _monic_den(num: Poly, den: Poly) -> "Rat":
    """Scale an already coprime pair so the denominator has leading coefficient 1."""
    lc = den.const_value() if den.is_const() else den.leading_coeff()
    if lc != 1:
        num, den = num.scale(1 / lc), den.scale(1 / lc)
    return Rat(num, den, _canonical=True)


def _canonicalize(num: Poly, den: Poly) -> tuple[Poly, Poly]:
    if den.is_zero():
        raise DivisionByZero("denominator is identically zero")
    if num.is_zero():
        return num, ONE
    if den.is_const():
        c = den.const_value()
        return (num if c == 1 else num.scale(1 / c)), ONE
    mono = num.monomial_content()
    if mono:
        common = tuple((v, min(e, dict(den.monomial_content()).get(v, 0))) for v, e in mono)
        common = tuple(p for p in common if p[1])
        if common:
            num = num.div_mono(common)
            den = den.div_mono(common)
    if not den.is_monomial():
        _, num, den = bridge.cofactors(num, den)
    if den.is_const():
        c = den.const_value()
        return num.scale(1 / c), ONE
    lc = den.leading_coeff()
    if lc != 1:
        num = num.scale(1 / lc)
        den = den.scale(1 / lc)
    return num, den


def rat(x) -> Rat:
    return Rat.coerce(x)


def substitute_functions(p, solution: dict) -> Rat:
    """Replace every derivative of an unknown function by the matching
    derivative of an explicit function of (x, y).

    ``solution`` maps a function tag (see :mod:`symbols`) to a Rat in x, y.
    Tags not in ``solution`` are left alone.
    """
    from .symbols import fn_parts, is_fn

    p = Rat.coerce(p)
    cache: dict = {}

    def deriv(tag: int, dx: int, dy: int) -> Rat:
        key = (tag, dx, dy)
        r = cache.get(key)
        if r is None:
            if dx:
                r = deriv(tag, dx - 1, dy).diff_x()
            elif dy:
                r = deriv(tag, dx, dy - 1).diff_y()
            else:
                r = Rat.coerce(solution[tag])
            cache[key] = r
        return r

    mapping = {}
    for v in p.variables():
        if is_fn(v):
            tag, dx, dy = fn_parts(v)
            if tag in solution:
                mapping[v] = deriv(tag, dx, dy)
    return p.subs(mapping)
