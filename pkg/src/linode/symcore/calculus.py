"""Derivations on polynomials: partial derivatives that know about function
symbols, and the total x-derivative on the jet space."""

from __future__ import annotations

from typing import Callable

from ..errors import CutoffExceeded
from .poly import Poly, mono_mul
from .symbols import X_CODE, Y_CODE, fn_shift, is_fn, is_jet, jet_code, jet_order, T_CODE


def apply_derivation(p: Poly, image: Callable[[int], Poly | None]) -> Poly:
    """Apply the derivation determined by ``image(v) = D(v)``."""
    cache: dict = {}
    acc: dict = {}
    for m, c in p.terms.items():
        for i, (v, e) in enumerate(m):
            img = cache.get(v, 0)
            if img == 0:
                img = image(v)
                cache[v] = img
            if not img:
                continue
            base = m[:i] + ((v, e - 1),) + m[i + 1:] if e > 1 else m[:i] + m[i + 1:]
            k = c * e
            for m2, c2 in img.terms.items():
                mm = mono_mul(base, m2)
                acc[mm] = acc.get(mm, 0) + k * c2
    return Poly({m: c for m, c in acc.items() if c})


_ONE = Poly.const(1)


def _px(v: int):
    if v == X_CODE:
        return _ONE
    if is_fn(v):
        return Poly.var(fn_shift(v, 1, 0))
    return None


def _py(v: int):
    if v == Y_CODE:
        return _ONE
    if is_fn(v):
        return Poly.var(fn_shift(v, 0, 1))
    return None


def diff_x(p: Poly) -> Poly:
    """Partial x-derivative; function symbols F_(a,b) map to F_(a+1,b)."""
    return apply_derivation(p, _px)


def diff_y(p: Poly) -> Poly:
    return apply_derivation(p, _py)


def pdiff(p: Poly, code: int) -> Poly:
    """Partial derivative with respect to ``x``, ``y`` or a jet variable."""
    if code == X_CODE:
        return diff_x(p)
    if code == Y_CODE:
        return diff_y(p)
    if is_fn(code):
        raise ValueError("cannot differentiate with respect to a function symbol")
    return p.diff(code)


def max_jet_order(p: Poly) -> int:
    return max((jet_order(v) for v in p.variables() if is_jet(v)), default=0)


def total_diff_x(p: Poly, jet_cutoff: int | None = None) -> Poly:
    """D_x = d/dx + y' d/dy + y'' d/dy' + ...; F(x,y) maps to F_x + y' F_y."""
    if jet_cutoff is not None and max_jet_order(p) >= jet_cutoff:
        raise CutoffExceeded(f"input already contains jets of order >= {jet_cutoff}")
    y1 = Poly.var(jet_code(1))

    def image(v: int):
        if v == X_CODE:
            return _ONE
        if v == Y_CODE:
            return y1
        if is_jet(v):
            return Poly.var(v + 1)
        if is_fn(v):
            return Poly.var(fn_shift(v, 1, 0)) + y1 * Poly.var(fn_shift(v, 0, 1))
        if v == T_CODE:
            raise ValueError("the target variable t has no total x-derivative")
        return None

    return apply_derivation(p, image)
