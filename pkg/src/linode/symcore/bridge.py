"""Hand-off to FLINT's multivariate polynomials for gcd, exact division,
resultants and factorization.  Everything else stays in :mod:`poly`."""

from __future__ import annotations

from functools import lru_cache

import flint
from flint.utils.flint_exceptions import DomainError
from gmpy2 import mpq

from .poly import Poly


@lru_cache(maxsize=512)
def _ctx(codes: tuple):
    return flint.fmpq_mpoly_ctx.get(tuple(f"v{c}" for c in codes), "lex")


def _codes(*polys: Poly) -> tuple:
    s: set = set()
    for p in polys:
        s |= p.variables()
    return tuple(sorted(s))


def to_flint(p: Poly, codes: tuple):
    idx = {c: i for i, c in enumerate(codes)}
    n = len(codes)
    d = {}
    for m, c in p.terms.items():
        e = [0] * n
        for v, k in m:
            e[idx[v]] = k
        d[tuple(e)] = flint.fmpq(int(c.numerator), int(c.denominator))
    return _ctx(codes).from_dict(d)


def from_flint(el, codes: tuple) -> Poly:
    t = {}
    for e, c in el.terms():
        t[tuple((codes[i], int(k)) for i, k in enumerate(e) if k)] = _mpq(c)
    return Poly(t)


def _mpq(c) -> mpq:
    return mpq(int(c.p), int(c.q))


def cofactors(p: Poly, q: Poly) -> tuple[Poly, Poly, Poly]:
    """Return ``(g, p/g, q/g)`` with ``g = gcd(p, q)``."""
    codes = _codes(p, q)
    if not codes:
        return Poly.const(1), p, q
    a, b = to_flint(p, codes), to_flint(q, codes)
    g = a.gcd(b)
    if g.is_zero():
        return Poly(), p, q
    return from_flint(g, codes), from_flint(a / g, codes), from_flint(b / g, codes)


def gcd(p: Poly, q: Poly) -> Poly:
    return cofactors(p, q)[0]


def exact_div(p: Poly, q: Poly) -> Poly | None:
    """Return p/q if q divides p exactly, else None."""
    if q.is_const():
        c = q.const_value()
        return p.scale(1 / c) if c else None
    codes = _codes(p, q)
    try:
        quo = to_flint(p, codes) / to_flint(q, codes)
    except DomainError:
        return None
    return from_flint(quo, codes)


def resultant(p: Poly, q: Poly, v: int) -> Poly:
    codes = _codes(p, q)
    if v not in codes:
        raise ValueError("resultant variable occurs in neither polynomial")
    r = to_flint(p, codes).resultant(to_flint(q, codes), f"v{v}")
    return from_flint(r, codes)


def factor(p: Poly) -> tuple:
    """Return ``(constant, [(factor, multiplicity), ...])``."""
    codes = _codes(p)
    if not codes:
        return p.const_value(), []
    c, fl = to_flint(p, codes).factor()
    return _mpq(c), [(from_flint(f, codes), k) for f, k in fl]
