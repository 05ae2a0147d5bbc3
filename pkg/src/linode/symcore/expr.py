"""Expression trees and their reduction to canonical rational form.

Trees are what the parser produces and what callers build by hand; all
heavy arithmetic happens on :class:`~linode.symcore.rational.Rat` after
:func:`normalize`.
"""

from __future__ import annotations

from fractions import Fraction

from gmpy2 import mpq

from ..errors import CutoffExceeded
from .poly import Poly
from .rational import Rat
from .symbols import Symbol, jet, symbol_name


class Expr:
    __slots__ = ()

    def __add__(self, other):
        return Add((self, as_tree(other)))

    def __radd__(self, other):
        return Add((as_tree(other), self))

    def __sub__(self, other):
        return Add((self, Mul((Num(-1), as_tree(other)))))

    def __rsub__(self, other):
        return Add((as_tree(other), Mul((Num(-1), self))))

    def __neg__(self):
        return Mul((Num(-1), self))

    def __mul__(self, other):
        return Mul((self, as_tree(other)))

    def __rmul__(self, other):
        return Mul((as_tree(other), self))

    def __truediv__(self, other):
        return Div(self, as_tree(other))

    def __rtruediv__(self, other):
        return Div(as_tree(other), self)

    def __pow__(self, n: int):
        return Pow(self, n)


class Num(Expr):
    __slots__ = ("value",)

    def __init__(self, value):
        if isinstance(value, Fraction):
            value = mpq(value.numerator, value.denominator)
        self.value = mpq(value)

    def __repr__(self):
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"({v.numerator}/{v.denominator})"


class Sym(Expr):
    __slots__ = ("symbol",)

    def __init__(self, symbol: Symbol):
        self.symbol = symbol

    def __repr__(self):
        return symbol_name(self.symbol.code)


class Add(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)

    def __repr__(self):
        return "(" + " + ".join(map(repr, self.args)) + ")"


class Mul(Expr):
    __slots__ = ("args",)

    def __init__(self, args):
        self.args = tuple(args)

    def __repr__(self):
        return "*".join(map(repr, self.args))


class Pow(Expr):
    __slots__ = ("base", "exp")

    def __init__(self, base: Expr, exp: int):
        if not isinstance(exp, int):
            raise TypeError("only integer exponents are supported")
        self.base = base
        self.exp = exp

    def __repr__(self):
        return f"({self.base!r})^{self.exp}"


class Div(Expr):
    __slots__ = ("num", "den")

    def __init__(self, num: Expr, den: Expr):
        self.num = num
        self.den = den

    def __repr__(self):
        return f"({self.num!r})/({self.den!r})"


def as_tree(x) -> Expr:
    if isinstance(x, Expr):
        return x
    if isinstance(x, Symbol):
        return Sym(x)
    if isinstance(x, (Rat, Poly)):
        return as_expr(x)
    return Num(x)


def normalize(e) -> Rat:
    """Canonical rational form of an expression tree."""
    if isinstance(e, Rat):
        return e
    if isinstance(e, Poly):
        return Rat(e)
    e = as_tree(e)
    if isinstance(e, Num):
        return Rat(Poly.const(e.value))
    if isinstance(e, Sym):
        return Rat(Poly.sym(e.symbol), _canonical=True)
    if isinstance(e, Add):
        acc = Rat(0)
        for a in e.args:
            acc = acc + normalize(a)
        return acc
    if isinstance(e, Mul):
        acc = Rat(1)
        for a in e.args:
            acc = acc * normalize(a)
        return acc
    if isinstance(e, Pow):
        return normalize(e.base) ** e.exp
    if isinstance(e, Div):
        return normalize(e.num) / normalize(e.den)
    raise TypeError(f"not an expression: {e!r}")


def as_expr(r) -> Expr:
    """Rebuild a tree (sum of products over a product denominator)."""
    if isinstance(r, Poly):
        r = Rat(r)
    num = _poly_tree(r.num)
    if r.den.is_const() and r.den.const_value() == 1:
        return num
    return Div(num, _poly_tree(r.den))


def _poly_tree(p: Poly) -> Expr:
    from .symbols import from_code

    terms = []
    for m, c in p.sorted_terms():
        factors = [Num(c)] if c != 1 or not m else []
        for v, k in m:
            s = Sym(from_code(v))
            factors.append(s if k == 1 else Pow(s, k))
        terms.append(factors[0] if len(factors) == 1 else Mul(factors))
    if not terms:
        return Num(0)
    return terms[0] if len(terms) == 1 else Add(terms)


def diff(e, s: Symbol) -> Expr:
    """Structural partial derivative.

    Function symbols F_(a,b) differentiate to F_(a+1,b) / F_(a,b+1) with
    respect to x / y and to zero with respect to jets.
    """
    e = as_tree(e)
    if s.kind not in ("x", "y", "jet"):
        raise ValueError("can only differentiate with respect to x, y or a jet")
    return _d(e, lambda sym: _partial_image(sym, s))


def _partial_image(sym: Symbol, s: Symbol) -> Expr | None:
    if sym == s:
        return Num(1)
    if sym.kind == "fn" and s.kind in ("x", "y"):
        return Sym(sym.derivative(1, 0) if s.kind == "x" else sym.derivative(0, 1))
    return None


def total_diff_x(e, jet_cutoff: int) -> Expr:
    """Total derivative D_x on the jet space, applied to a tree."""
    e = as_tree(e)
    top = _max_jet(e)
    if top >= jet_cutoff:
        raise CutoffExceeded(f"expression contains jet order {top} >= cutoff {jet_cutoff}")
    return _d(e, _total_image)


def _total_image(sym: Symbol) -> Expr | None:
    if sym.kind == "x":
        return Num(1)
    if sym.kind == "y":
        return Sym(jet(1))
    if sym.kind == "jet":
        return Sym(jet(sym.order + 1))
    if sym.kind == "fn":
        return Add((Sym(sym.derivative(1, 0)), Mul((Sym(jet(1)), Sym(sym.derivative(0, 1))))))
    raise ValueError("the target variable t has no total x-derivative")


def _max_jet(e: Expr) -> int:
    if isinstance(e, Sym):
        return e.symbol.order if e.symbol.kind == "jet" else 0
    if isinstance(e, (Add, Mul)):
        return max((_max_jet(a) for a in e.args), default=0)
    if isinstance(e, Pow):
        return _max_jet(e.base)
    if isinstance(e, Div):
        return max(_max_jet(e.num), _max_jet(e.den))
    return 0


def _d(e: Expr, image) -> Expr:
    if isinstance(e, Num):
        return Num(0)
    if isinstance(e, Sym):
        r = image(e.symbol)
        return Num(0) if r is None else r
    if isinstance(e, Add):
        return Add(tuple(_d(a, image) for a in e.args))
    if isinstance(e, Mul):
        out = []
        for i, a in enumerate(e.args):
            rest = e.args[:i] + e.args[i + 1:]
            out.append(Mul(rest + (_d(a, image),)))
        return Add(out)
    if isinstance(e, Pow):
        if e.exp == 0:
            return Num(0)
        return Mul((Num(e.exp), Pow(e.base, e.exp - 1), _d(e.base, image)))
    if isinstance(e, Div):
        return Div(Add((Mul((_d(e.num, image), e.den)), Mul((Num(-1), e.num, _d(e.den, image))))),
                   Pow(e.den, 2))
    raise TypeError(f"not an expression: {e!r}")
