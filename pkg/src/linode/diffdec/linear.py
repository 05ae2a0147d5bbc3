"""Janet completion of linear homogeneous PDE systems over Q(x, y).

Equations are kept monic in their leaders with canonical rational-function
coefficients, so reduction is plain subtraction and coefficient growth stays
bounded by genuine cancellation instead of fraction-free pseudo-division.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import flint
from gmpy2 import mpq

from ..symcore import bridge
from ..symcore.poly import ONE, Poly
from ..symcore.rational import Rat
from ..symcore.symbols import X_CODE, Y_CODE, fn_code, fn_parts, is_fn
from .core import COMPLETE, INCONCLUSIVE, Budget, BudgetExceeded
from .janet import JanetIndex
from .ranking import DEFAULT_RANKING, Ranking, order_of

_CTX = flint.fmpq_mpoly_ctx.get(("x", "y"), "degrevlex")
_SLOT = {X_CODE: 0, Y_CODE: 1}


class Frac:
    """Element of Q(x, y) as a coprime pair with monic denominator, backed
    by FLINT polynomials; the hot loop of the completion lives here."""

    __slots__ = ("num", "den")

    def __init__(self, num, den):
        self.num = num
        self.den = den

    @classmethod
    def make(cls, num, den) -> "Frac":
        if num.is_zero():
            return cls(num, _CTX.from_dict({(0, 0): 1}))
        g = num.gcd(den)
        if not g.is_one():
            num, den = num / g, den / g
        return cls._monic(num, den)

    @classmethod
    def _monic(cls, num, den) -> "Frac":
        lc = den.leading_coefficient()
        if lc != 1:
            num, den = num / lc, den / lc
        return cls(num, den)

    @classmethod
    def from_rat(cls, r: Rat) -> "Frac":
        return cls._monic(_to_flint(r.num), _to_flint(r.den))

    def to_rat(self) -> Rat:
        return Rat(_from_flint(self.num), _from_flint(self.den), _canonical=True)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def size(self) -> int:
        return len(self.num) + len(self.den)

    def __neg__(self) -> "Frac":
        return Frac(-self.num, self.den)

    def __add__(self, other: "Frac") -> "Frac":
        b, d = self.den, other.den
        if b == d:
            return Frac.make(self.num + other.num, b)
        g = b.gcd(d)
        if g.is_one():
            return Frac._monic(self.num * d + other.num * b, b * d)
        b1, d1 = b / g, d / g
        num = self.num * d1 + other.num * b1
        # only the shared part g can cancel
        h = num.gcd(g)
        if not h.is_one():
            num, g = num / h, g / h
        return Frac._monic(num, b1 * d1 * g)

    def __sub__(self, other: "Frac") -> "Frac":
        return self + (-other)

    def __mul__(self, other: "Frac") -> "Frac":
        a, b, c, d = self.num, self.den, other.num, other.den
        g = a.gcd(d)
        if not g.is_one():
            a, d = a / g, d / g
        g = c.gcd(b)
        if not g.is_one():
            c, b = c / g, b / g
        return Frac._monic(a * c, b * d)

    def __truediv__(self, other: "Frac") -> "Frac":
        if other.is_zero():
            raise ZeroDivisionError("division by zero in Q(x, y)")
        return self * Frac._monic(other.den, other.num)

    def diff(self, i: int) -> "Frac":
        n, d = self.num, self.den
        if d.is_constant():
            return Frac(n.derivative(i), d)
        return Frac.make(n.derivative(i) * d - n * d.derivative(i), d * d)


def _to_flint(p: Poly):
    terms = {}
    for mono, c in p.terms.items():
        e = [0, 0]
        for v, k in mono:
            if v not in _SLOT:
                raise ValueError("coefficients must be rational functions of x and y")
            e[_SLOT[v]] = k
        terms[tuple(e)] = flint.fmpq(int(c.numerator), int(c.denominator))
    return _CTX.from_dict(terms)


def _from_flint(p) -> Poly:
    terms = {}
    for (i, j), c in p.terms():
        mono = tuple(m for m in ((X_CODE, int(i)), (Y_CODE, int(j))) if m[1])
        terms[mono] = mpq(int(c.p), int(c.q))
    return Poly(terms)


def linear_row(p: Poly) -> dict:
    """Split a linear homogeneous differential polynomial into
    ``{derivative code: coefficient}``."""
    row = {}
    for mono, c in p.collect(is_fn).items():
        if len(mono) != 1 or mono[0][1] != 1:
            raise ValueError("equation is not linear homogeneous in the unknowns")
        row[mono[0][0]] = Rat(c)
    return row


def row_poly(row: dict) -> Poly:
    """Clear denominators: a polynomial multiple of the row."""
    den = ONE
    for c in row.values():
        if not c.den.is_const():
            g = bridge.gcd(den, c.den)
            den = den * bridge.exact_div(c.den, g)
    out = Poly()
    for v, c in row.items():
        out = out + (c * Rat(den)).num * Poly.var(v)
    return out.primitive()


def _shift(code: int, z: int) -> int:
    tag, a, b = fn_parts(code)
    return fn_code(tag, a + 1, b) if z == 0 else fn_code(tag, a, b + 1)


def _prolong_row(row: dict, z: int) -> dict:
    out: dict = {}
    for v, c in row.items():
        dc = c.diff(z)
        if not dc.is_zero():
            out[v] = out[v] + dc if v in out else dc
        w = _shift(v, z)
        out[w] = out[w] + c if w in out else c
    return {v: c for v, c in out.items() if not c.is_zero()}


@dataclass
class LinearCompletion:
    status: str
    equations: list = field(default_factory=list)  # monic rows, by leader rank
    leaders: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)
    reason: str = ""

    def polynomials(self) -> list:
        return [row_poly(r) for r in self.equations]


class _Completer:
    def __init__(self, budget: Budget, ranking: Ranking):
        self.budget = budget
        self.ranking = ranking
        self.T: dict = {}  # eid -> (leader, row)
        self.next_eid = 0
        self.cache: dict = {}
        self.janet: JanetIndex | None = None
        self.reductions = 0
        self.start = time.monotonic()

    def _tick(self):
        if time.monotonic() - self.start > self.budget.timeout:
            raise BudgetExceeded(f"timeout after {self.budget.timeout}s")

    def _check(self, row: dict):
        self._tick()
        size = sum(c.size() for c in row.values())
        if size > self.budget.max_size:
            raise BudgetExceeded(f"row with {size} terms exceeds max_size")

    def leader(self, row: dict) -> int:
        return max(row, key=self.ranking.key)

    def prolong(self, eid: int, da: int, db: int) -> dict:
        if da == 0 and db == 0:
            return self.T[eid][1]
        key = (eid, da, db)
        hit = self.cache.get(key)
        if hit is None:
            self._tick()
            hit = _prolong_row(self.prolong(eid, da - 1, db), 0) if da else \
                _prolong_row(self.prolong(eid, da, db - 1), 1)
            self.cache[key] = hit
        return hit

    def _index(self):
        if self.janet is None:
            self.janet = JanetIndex({eid: lead for eid, (lead, _) in self.T.items()})

    def reduce(self, row: dict) -> dict:
        """Involutive normal form of row modulo T."""
        row = dict(row)
        key = self.ranking.key
        while row:
            for v in sorted(row, key=key, reverse=True):
                hit = self.janet.divisor(v)
                if hit is None:
                    continue
                eid, (da, db) = hit
                c = row[v]
                for w, cw in self.prolong(eid, da, db).items():
                    self._tick()
                    nv = row[w] - c * cw if w in row else -(c * cw)
                    if nv.is_zero():
                        row.pop(w, None)
                    else:
                        row[w] = nv
                self.reductions += 1
                self._check(row)
                break
            else:
                return row
        return row

    def insert(self, row: dict, queue: list):
        lead = self.leader(row)
        if order_of(lead) > self.budget.max_order:
            raise BudgetExceeded(f"derivative order above {self.budget.max_order}")
        lc = row[lead]
        row = {v: c / lc for v, c in row.items()}
        tag, a, b = fn_parts(lead)
        # leaders that are derivatives of the new one go back to the queue
        for eid, (other, orow) in list(self.T.items()):
            t, oa, ob = fn_parts(other)
            if t == tag and oa >= a and ob >= b:
                del self.T[eid]
                queue.append(orow)
        self.T[self.next_eid] = (lead, row)
        self.next_eid += 1
        self.janet = None
        self._index()
        self._reduce_tails(lead)
        self.cache = {k: v for k, v in self.cache.items() if k[0] in self.T}

    def _reduce_tails(self, new_lead: int):
        # a fresh low leader usually kills large tail terms elsewhere
        tag, a, b = fn_parts(new_lead)
        for eid, (lead, row) in list(self.T.items()):
            if lead == new_lead:
                continue
            hit = False
            for v in row:
                t, va, vb = fn_parts(v)
                if v != lead and t == tag and va >= a and vb >= b:
                    hit = True
                    break
            if not hit:
                continue
            tail = self.reduce({v: c for v, c in row.items() if v != lead})
            tail[lead] = row[lead]
            self.T[eid] = (lead, tail)
            self.cache = {k: v for k, v in self.cache.items() if k[0] != eid}

    def run(self, rows: list) -> list:
        queue = [r for r in rows if r]
        key = self.ranking.key
        while True:
            while queue:
                i = min(range(len(queue)), key=lambda j: key(self.leader(queue[j])))
                self._index()
                r = self.reduce(queue.pop(i))
                if r:
                    self.insert(r, queue)
            self._index()
            pending = None
            for eid in sorted(self.T, key=lambda e: key(self.T[e][0])):
                for z in self.janet.nonmultiplicative(eid):
                    q = self.prolong(eid, 1, 0) if z == "x" else self.prolong(eid, 0, 1)
                    r = self.reduce(q)
                    if r:
                        pending = r
                        break
                if pending is not None:
                    break
            if pending is None:
                return sorted(self.T.values(), key=lambda lr: key(lr[0]))
            queue.append(pending)


def complete_linear(equations, budget: Budget = Budget(), ranking: Ranking = DEFAULT_RANKING) -> LinearCompletion:
    """Janet-complete a linear homogeneous system; Inconclusive on budget."""
    rows = [{v: Frac.from_rat(c) for v, c in linear_row(Poly.coerce(p)).items()} for p in equations]
    c = _Completer(budget, ranking)
    try:
        done = c.run(rows)
    except BudgetExceeded as exc:
        return LinearCompletion(INCONCLUSIVE, stats=_stats(c), reason=str(exc))
    rows = [{v: f.to_rat() for v, f in r.items()} for _, r in done]
    return LinearCompletion(COMPLETE, rows, [lead for lead, _ in done], _stats(c))


def _stats(c: _Completer) -> dict:
    return {"equations": len(c.T), "reductions": c.reductions,
            "seconds": round(time.monotonic() - c.start, 4)}
