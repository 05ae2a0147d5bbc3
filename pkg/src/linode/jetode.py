"""ODE data model and input parser.

Grammar (whitespace-insensitive)::

    program  := decl* equation
    decl     := "unknown" NAME "(" "x" "," "y" ")" ";"
    equation := expr [ "=" expr ]
    expr     := ["+"|"-"] term (("+"|"-") term)*
    term     := factor (("*"|"/") factor)*
    factor   := atom ["^" ["-"] INT]
    atom     := INT | "x" | "y" | "y'" | "y''" | "y'''" | "D(y," INT ")"
              | NAME "(x,y)" | "(" expr ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from .errors import JetOrderError, NotCubicForm, NotSolvedForHighest, ParseError
from .symcore import bridge
from .symcore.expr import Expr, Num, Sym, normalize
from .symcore.poly import ONE, Poly, rational_content
from .symcore.rational import Rat
from .symcore.symbols import T, X, Y, fn, is_fn, jet, jet_code, symbol_name
from .symcore.calculus import max_jet_order

DECLARABLE = ("H",)

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|('+)|(.))")


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            break
        num, name, primes, op = m.groups()
        if num is not None:
            tokens.append(("int", int(num), m.start(1)))
        elif name is not None:
            tokens.append(("name", name, m.start(2)))
        elif primes is not None:
            tokens.append(("primes", len(primes), m.start(3)))
        elif op is not None and not op.isspace():
            tokens.append(("op", op, m.start(4)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, allow_t: bool = False):
        self.tokens = _tokenize(text)
        self.i = 0
        self.unknowns: list[str] = []
        self.allow_t = allow_t

    def peek(self, kind=None, value=None) -> bool:
        k, v, _ = self.tokens[self.i]
        return (kind is None or k == kind) and (value is None or v == value)

    def take(self, kind=None, value=None):
        k, v, pos = self.tokens[self.i]
        if (kind is not None and k != kind) or (value is not None and v != value):
            want = value if value is not None else kind
            got = v if v is not None else "end of input"
            raise ParseError(f"expected {want!r} at offset {pos}, got {got!r}")
        self.i += 1
        return v

    def program(self) -> tuple[Expr, Expr | None]:
        while self.peek("name", "unknown"):
            self.take()
            name = self.take("name")
            if name not in DECLARABLE:
                raise ParseError(f"cannot declare unknown function {name!r}; allowed: {', '.join(DECLARABLE)}")
            self._args()
            self.take("op", ";")
            if name not in self.unknowns:
                self.unknowns.append(name)
        lhs = self.expr()
        rhs = None
        if self.peek("op", "="):
            self.take()
            rhs = self.expr()
        if self.peek("op", ";"):
            self.take()
        self.take("end")
        return lhs, rhs

    def _args(self):
        self.take("op", "(")
        self.take("name", "x")
        self.take("op", ",")
        self.take("name", "y")
        self.take("op", ")")

    def expr(self) -> Expr:
        sign = 1
        if self.peek("op", "-") or self.peek("op", "+"):
            sign = -1 if self.take() == "-" else 1
        first = self.term()
        terms = [first if sign > 0 else -first]
        while self.peek("op", "+") or self.peek("op", "-"):
            op = self.take()
            t = self.term()
            terms.append(t if op == "+" else -t)
        if len(terms) == 1:
            return terms[0]
        acc = terms[0]
        for t in terms[1:]:
            acc = acc + t
        return acc

    def term(self) -> Expr:
        acc = self.factor()
        while self.peek("op", "*") or self.peek("op", "/"):
            op = self.take()
            rhs = self.factor()
            acc = acc * rhs if op == "*" else acc / rhs
        return acc

    def factor(self) -> Expr:
        base = self.atom()
        if self.peek("op", "^"):
            self.take()
            neg = False
            if self.peek("op", "-"):
                self.take()
                neg = True
            if self.peek("op", "("):
                self.take()
                if self.peek("op", "-"):
                    self.take()
                    neg = not neg
                n = self.take("int")
                self.take("op", ")")
            else:
                n = self.take("int")
            return base ** (-n if neg else n)
        return base

    def atom(self) -> Expr:
        if self.peek("int"):
            return Num(self.take())
        if self.peek("op", "("):
            self.take()
            e = self.expr()
            self.take("op", ")")
            return e
        if self.peek("name"):
            _, name, pos = self.tokens[self.i]
            self.take()
            if name == "x":
                return Sym(X)
            if name == "t" and self.allow_t:
                return Sym(T)
            if name == "y":
                if self.peek("primes"):
                    k = self.take()
                    if k > 3:
                        raise ParseError("use D(y,k) for derivatives above the third")
                    return Sym(jet(k))
                return Sym(Y)
            if name == "D":
                self.take("op", "(")
                self.take("name", "y")
                self.take("op", ",")
                k = self.take("int")
                self.take("op", ")")
                if k < 1:
                    raise ParseError("derivative order must be at least 1")
                return Sym(jet(k))
            if name in self.unknowns:
                self._args()
                return Sym(fn(name))
            raise ParseError(f"unknown symbol {name!r} at offset {pos}")
        _, v, pos = self.tokens[self.i]
        raise ParseError(f"unexpected {v if v is not None else 'end of input'!r} at offset {pos}")


def parse_expr(text: str, unknowns: tuple = (), allow_t: bool = False) -> Expr:
    """Parse a bare expression (no declarations, no ``=``)."""
    p = _Parser(text, allow_t=allow_t)
    p.unknowns = list(unknowns)
    e = p.expr()
    p.take("end")
    return e


@dataclass(frozen=True)
class RationalODE:
    """The equation ``D(y,n) + M/N = 0``.

    ``M`` and ``N`` are polynomials in x, y, jets below order n and declared
    unknown functions.  ``leading`` is the coefficient of the highest
    derivative before dividing it out; the equation is considered on the
    open set where it does not vanish.
    """

    order: int
    M: Poly
    N: Poly
    unknowns: tuple = ()
    source: str = field(default="", compare=False)
    leading: Poly = field(default=ONE, compare=False)

    def __post_init__(self):
        if self.order < 2:
            raise JetOrderError("order must be at least 2")
        if self.N.is_zero():
            raise NotSolvedForHighest("denominator vanishes identically")
        top = max(max_jet_order(self.M), max_jet_order(self.N))
        if top >= self.order:
            raise JetOrderError(f"jets of order {top} >= {self.order} in M/N")

    @property
    def ratio(self) -> Rat:
        return Rat(self.M, self.N)

    def explicit(self) -> bool:
        """True when no unknown function symbols occur."""
        return not any(is_fn(v) for v in self.M.variables() | self.N.variables())


def _namer(code: int) -> str:
    if is_fn(code):
        return f"{symbol_name(code)}(x,y)"
    return symbol_name(code)


def format_poly(p: Poly) -> str:
    return p.format(_namer)


def pretty_print(ode: RationalODE) -> str:
    """Render in the input grammar; the output reparses to the same ODE."""
    decls = "".join(f"unknown {u}(x,y); " for u in ode.unknowns)
    m = format_poly(ode.M)
    if ode.M.is_zero():
        body = f"D(y,{ode.order})"
    elif ode.N == ONE:
        body = f"D(y,{ode.order}) + ({m})"
    else:
        body = f"D(y,{ode.order}) + ({m})/({format_poly(ode.N)})"
    return f"{decls}{body} = 0"


def ode_from_expr(e, unknowns: tuple = (), source: str = "") -> RationalODE:
    """Solve the equation ``e = 0`` for its highest derivative."""
    E = normalize(e)
    n = max(max_jet_order(E.num), max_jet_order(E.den))
    if n < 2:
        raise JetOrderError(f"equation has order {n}; order >= 2 required")
    top = jet_code(n)
    if top in E.den.variables():
        raise NotSolvedForHighest(f"D(y,{n}) appears in a denominator")
    parts = E.num.coeffs_in(top)
    if max(parts) != 1:
        raise NotSolvedForHighest(f"D(y,{n}) appears with degree {max(parts)}")
    c = parts.get(1, Poly())
    if c.is_zero():
        raise NotSolvedForHighest("coefficient of the highest derivative vanishes")
    r = parts.get(0, Poly())
    M, N = r, c
    if M.is_zero():
        N = ONE
    elif not N.is_const():
        g = bridge.gcd(M, N)
        if not g.is_const():
            g = g.primitive()
            M, N = bridge.exact_div(M, g), bridge.exact_div(N, g)
    if N.is_const():
        M, N = M.scale(1 / N.const_value()), ONE
    else:
        # jointly primitive integer coefficients, positive leading coefficient of N
        s = rational_content(list(M.terms.values()) + list(N.terms.values()))
        if N.leading_coeff() < 0:
            s = -s
        M, N = M.scale(1 / s), N.scale(1 / s)
    return RationalODE(order=n, M=M, N=N, unknowns=tuple(unknowns), source=source, leading=c)


def parse_ode(text: str) -> RationalODE:
    """Parse an ODE in the input grammar and normalize it to monic form."""
    p = _Parser(text)
    lhs, rhs = p.program()
    e = lhs if rhs is None else lhs - rhs
    return ode_from_expr(e, tuple(p.unknowns), source=text.strip())


@dataclass(frozen=True)
class CubicForm2:
    """Coefficients of ``y'' + F3 y'^3 + F2 y'^2 + F1 y' + F = 0``."""

    F3: Rat
    F2: Rat
    F1: Rat
    F: Rat

    def as_tuple(self) -> tuple:
        return self.F3, self.F2, self.F1, self.F


def extract_cubic_form(ode: RationalODE) -> CubicForm2:
    if ode.order != 2:
        raise ValueError("cubic form only exists for second-order equations")
    q = ode.ratio
    y1 = jet_code(1)
    if y1 in q.den.variables():
        raise NotCubicForm("M/N is not polynomial in y'")
    parts = q.num.coeffs_in(y1)
    if max(parts, default=0) > 3:
        raise NotCubicForm(f"M/N has degree {max(parts)} > 3 in y'")
    F = [Rat(parts.get(k, Poly()), q.den) for k in range(4)]
    return CubicForm2(F3=F[3], F2=F[2], F1=F[1], F=F[0])


def reassemble(c: CubicForm2) -> Rat:
    y1 = Rat(Poly.var(jet_code(1)))
    return c.F3 * y1 ** 3 + c.F2 * y1 ** 2 + c.F1 * y1 + c.F
