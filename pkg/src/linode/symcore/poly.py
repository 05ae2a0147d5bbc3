"""Sparse multivariate polynomials with exact rational coefficients.

A monomial is a tuple of ``(code, exponent)`` pairs sorted by symbol code;
a polynomial maps monomials to nonzero ``gmpy2.mpq`` coefficients.
"""

from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key, reduce
from typing import Callable, Iterable

import gmpy2
from gmpy2 import mpq, mpz

from .symbols import Symbol, symbol_name

Mono = tuple  # tuple[tuple[int, int], ...]

ONE_MONO: Mono = ()


def to_mpq(c) -> mpq:
    if isinstance(c, Fraction):
        return mpq(c.numerator, c.denominator)
    return mpq(c)


def mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items()))


def mono_div(a: Mono, b: Mono) -> Mono | None:
    """Return a/b if b divides a, else None."""
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        r = d.get(v, 0) - e
        if r < 0:
            return None
        if r:
            d[v] = r
        else:
            del d[v]
    return tuple(sorted(d.items()))


def mono_gcd(a: Mono, b: Mono) -> Mono:
    db = dict(b)
    return tuple((v, min(e, db[v])) for v, e in a if v in db)


def mono_degree(m: Mono) -> int:
    return sum(e for _, e in m)


def degrevlex_cmp(a: Mono, b: Mono) -> int:
    """Graded reverse lexicographic comparison; larger codes are the
    least significant variables."""
    da, db = mono_degree(a), mono_degree(b)
    if da != db:
        return 1 if da > db else -1
    ea, eb = dict(a), dict(b)
    for v in sorted(set(ea) | set(eb), reverse=True):
        x, y = ea.get(v, 0), eb.get(v, 0)
        if x != y:
            return 1 if x < y else -1
    return 0


degrevlex_key = cmp_to_key(degrevlex_cmp)


def rational_content(values: Iterable) -> mpq:
    """Positive c with all values/c coprime integers (1 for no values)."""
    values = list(values)
    if not values:
        return mpq(1)
    g = reduce(gmpy2.gcd, (c.numerator for c in values), mpz(0))
    l = reduce(gmpy2.lcm, (c.denominator for c in values), mpz(1))
    return mpq(g, l)


class Poly:
    """Immutable sparse polynomial.  Do not mutate ``terms`` after
    construction."""

    __slots__ = ("terms", "_hash")

    def __init__(self, terms: dict | None = None):
        self.terms: dict = terms if terms is not None else {}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, c) -> "Poly":
        c = to_mpq(c)
        return cls({(): c}) if c else cls()

    @classmethod
    def var(cls, code: int, exp: int = 1) -> "Poly":
        return cls({((code, exp),): mpq(1)}) if exp else cls.const(1)

    @classmethod
    def sym(cls, s: Symbol, exp: int = 1) -> "Poly":
        return cls.var(s.code, exp)

    @classmethod
    def coerce(cls, other) -> "Poly":
        if isinstance(other, Poly):
            return other
        if isinstance(other, Symbol):
            return cls.sym(other)
        return cls.const(other)

    # predicates ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def is_const(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and () in self.terms)

    def const_value(self) -> mpq:
        return self.terms.get((), mpq(0)) if self.is_const() else None

    def is_monomial(self) -> bool:
        return len(self.terms) == 1

    def __len__(self) -> int:
        return len(self.terms)

    # arithmetic ---------------------------------------------------------
    def __add__(self, other) -> "Poly":
        other = Poly.coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        if len(other.terms) > len(self.terms):
            self, other = other, self
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            if s is None:
                t[m] = c
            else:
                s = s + c
                if s:
                    t[m] = s
                else:
                    del t[m]
        return Poly(t)

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other) -> "Poly":
        other = Poly.coerce(other)
        if not other.terms:
            return self
        t = dict(self.terms)
        for m, c in other.terms.items():
            s = t.get(m)
            if s is None:
                t[m] = -c
            else:
                s = s - c
                if s:
                    t[m] = s
                else:
                    del t[m]
        return Poly(t)

    def __rsub__(self, other) -> "Poly":
        return Poly.coerce(other) - self

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            if isinstance(other, Symbol):
                other = Poly.sym(other)
            else:
                return self.scale(other)
        if not self.terms or not other.terms:
            return Poly()
        if len(other.terms) == 1:
            (m, c), = other.terms.items()
            return self.mul_term(m, c)
        if len(self.terms) == 1:
            (m, c), = self.terms.items()
            return other.mul_term(m, c)
        if len(other.terms) > len(self.terms):
            self, other = other, self
        t: dict = {}
        get = t.get
        for m2, c2 in other.terms.items():
            for m1, c1 in self.terms.items():
                m = mono_mul(m1, m2)
                s = get(m)
                t[m] = c1 * c2 if s is None else s + c1 * c2
        return Poly({m: c for m, c in t.items() if c})

    __rmul__ = __mul__

    def scale(self, c) -> "Poly":
        c = to_mpq(c)
        if not c:
            return Poly()
        if c == 1:
            return self
        return Poly({m: v * c for m, v in self.terms.items()})

    def mul_term(self, mono: Mono, c) -> "Poly":
        if not c:
            return Poly()
        if not mono:
            return self.scale(c)
        return Poly({mono_mul(m, mono): v * c for m, v in self.terms.items()})

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Poly.const(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __truediv__(self, c) -> "Poly":
        if isinstance(c, Poly):
            q = c.const_value()
            if q is None:
                raise TypeError("use exact_div for polynomial division")
            c = q
        return self.scale(1 / to_mpq(c))

    # comparison ---------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, Poly):
            try:
                other = Poly.coerce(other)
            except TypeError:
                return NotImplemented
        return self.terms == other.terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # structure ----------------------------------------------------------
    def variables(self) -> set:
        out = set()
        for m in self.terms:
            for v, _ in m:
                out.add(v)
        return out

    def has(self, pred: Callable[[int], bool]) -> bool:
        return any(pred(v) for m in self.terms for v, _ in m)

    def degree(self, v: int) -> int:
        d = 0
        for m in self.terms:
            for w, e in m:
                if w == v and e > d:
                    d = e
        return d

    def total_degree(self) -> int:
        return max((mono_degree(m) for m in self.terms), default=0)

    def coeffs_in(self, v: int) -> dict:
        """Split into ``{exponent: coefficient}`` with respect to ``v``."""
        parts: dict = {}
        for m, c in self.terms.items():
            e = 0
            rest = m
            for i, (w, k) in enumerate(m):
                if w == v:
                    e = k
                    rest = m[:i] + m[i + 1:]
                    break
            parts.setdefault(e, {})[rest] = c
        return {e: Poly(t) for e, t in parts.items()}

    def coeff(self, v: int, e: int) -> "Poly":
        return self.coeffs_in(v).get(e, Poly())

    def collect(self, pred: Callable[[int], bool]) -> dict:
        """Group by the sub-monomial in variables satisfying ``pred``.

        Returns ``{sub_monomial: coefficient_poly}``."""
        parts: dict = {}
        for m, c in self.terms.items():
            key = tuple(p for p in m if pred(p[0]))
            rest = tuple(p for p in m if not pred(p[0])) if key else m
            parts.setdefault(key, {})[rest] = c
        return {k: Poly(t) for k, t in parts.items()}

    def diff(self, v: int) -> "Poly":
        t: dict = {}
        for m, c in self.terms.items():
            for i, (w, e) in enumerate(m):
                if w == v:
                    nm = m[:i] + ((w, e - 1),) + m[i + 1:] if e > 1 else m[:i] + m[i + 1:]
                    t[nm] = t.get(nm, 0) + c * e
                    break
        return Poly({m: c for m, c in t.items() if c})

    def subs(self, mapping: dict) -> "Poly":
        """Substitute polynomials for variables (simultaneously)."""
        if not mapping:
            return self
        powers: dict = {}

        def power(v, e):
            key = (v, e)
            r = powers.get(key)
            if r is None:
                r = mapping[v] ** e
                powers[key] = r
            return r

        acc: dict = {}
        out = Poly()
        for m, c in self.terms.items():
            kept = tuple(p for p in m if p[0] not in mapping)
            replaced = tuple(p for p in m if p[0] in mapping)
            if not replaced:
                acc[kept] = acc.get(kept, 0) + c
                continue
            term = Poly({kept: c})
            for v, e in replaced:
                term = term * power(v, e)
            out = out + term
        return out + Poly({m: c for m, c in acc.items() if c})

    def rename(self, fmap: Callable[[int], int]) -> "Poly":
        """Apply an injective variable renaming."""
        return Poly({tuple(sorted((fmap(v), e) for v, e in m)): c for m, c in self.terms.items()})

    # content ------------------------------------------------------------
    def numeric_content(self) -> mpq:
        """Positive rational c such that self/c has coprime integer
        coefficients."""
        return rational_content(self.terms.values())

    def monomial_content(self, pred: Callable[[int], bool] | None = None) -> Mono:
        it = iter(self.terms)
        try:
            g = next(it)
        except StopIteration:
            return ()
        if pred is not None:
            g = tuple(p for p in g if pred(p[0]))
        for m in it:
            if not g:
                break
            g = mono_gcd(g, m)
        return g

    def div_mono(self, mono: Mono) -> "Poly":
        if not mono:
            return self
        return Poly({mono_div(m, mono): c for m, c in self.terms.items()})

    def leading_monomial(self) -> Mono:
        return max(self.terms, key=degrevlex_key)

    def leading_coeff(self) -> mpq:
        return self.terms[self.leading_monomial()]

    def primitive(self) -> "Poly":
        """Integer-coprime scaling with positive leading coefficient."""
        if not self.terms:
            return self
        c = self.numeric_content()
        if self.leading_coeff() < 0:
            c = -c
        return self.scale(1 / c)

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: degrevlex_key(mc[0]), reverse=True)

    # printing -----------------------------------------------------------
    def __str__(self) -> str:
        return self.format()

    def format(self, namer: Callable[[int], str] = symbol_name) -> str:
        if not self.terms:
            return "0"
        parts = []
        for m, c in self.sorted_terms():
            factors = [namer(v) if e == 1 else f"{namer(v)}^{e}" for v, e in m]
            neg = c < 0
            a = -c if neg else c
            if not factors:
                body = _fmt_coeff(a)
            elif a == 1:
                body = "*".join(factors)
            else:
                body = "*".join([_fmt_coeff(a, True)] + factors)
            parts.append(("- " if neg else "+ ") + body)
        s = " ".join(parts)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]

    def __repr__(self) -> str:
        return f"Poly({self})"


def _fmt_coeff(c: mpq, as_factor: bool = False) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    s = f"{c.numerator}/{c.denominator}"
    return f"({s})" if as_factor else s


ZERO = Poly()
ONE = Poly.const(1)


def psum(items: Iterable[Poly]) -> Poly:
    t: dict = {}
    for p in items:
        for m, c in p.terms.items():
            t[m] = t.get(m, 0) + c
    return Poly({m: c for m, c in t.items() if c})
