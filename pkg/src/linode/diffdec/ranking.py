"""Orderly ranking on derivatives of the unknown functions and the helpers
that read leaders, initials and separants off a differential polynomial."""

from __future__ import annotations

from ..symcore.poly import Poly
from ..symcore.symbols import fn_parts, is_fn


class Ranking:
    """Orderly ranking: total order first, then the x-order (x-derivatives
    heavier), then the unknown.  Unknowns are compared by tag, which gives
    A_0 < A_1 < ... < H < g < f (and xi < eta)."""

    def __init__(self, tag_rank: dict | None = None):
        self.tag_rank = tag_rank or {}
        self._keys: dict = {}

    def key(self, code: int) -> tuple:
        k = self._keys.get(code)
        if k is None:
            tag, a, b = fn_parts(code)
            k = (a + b, a, self.tag_rank.get(tag, tag))
            self._keys[code] = k
        return k

    def leader(self, p: Poly) -> int | None:
        best = None
        bk = None
        for m in p.terms:
            for v, _ in m:
                if is_fn(v):
                    k = self.key(v)
                    if bk is None or k > bk:
                        best, bk = v, k
        return best

    def sort_key(self, p: Poly) -> tuple:
        """Key for choosing what to process next: low leaders, small sizes."""
        v = self.leader(p)
        return (self.key(v) if v is not None else (-1,), p.degree(v) if v is not None else 0, len(p))


DEFAULT_RANKING = Ranking()


def order_of(code: int) -> int:
    _, a, b = fn_parts(code)
    return a + b


def initial(p: Poly, v: int) -> Poly:
    return p.coeff(v, p.degree(v))


def separant(p: Poly, v: int) -> Poly:
    return p.diff(v)


def reductum(p: Poly, v: int) -> Poly:
    d = p.degree(v)
    return Poly({m: c for m, c in p.terms.items() if (v, d) not in m})


def is_unit(p: Poly) -> bool:
    """Nonzero and free of unknown functions: invertible in Q(x, y)."""
    return bool(p.terms) and not p.has(is_fn)
