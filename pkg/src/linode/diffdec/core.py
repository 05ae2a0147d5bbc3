"""Bounded Thomas-style decomposition of polynomial PDE systems in unknown
functions of (x, y).

Each branch keeps a triangular set T (distinct leaders, Janet-divisible), a
queue Q of pending equations and a list of inequations.  Equations are
Janet-reduced by T, factored to drop known-nonzero factors, and inserted
after the initial and separant are known not to vanish; otherwise the branch
splits.  When Q is empty the nonmultiplicative prolongations of T are fed
back until none is left (passivity).
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from gmpy2 import mpq

from ..symcore import bridge
from ..symcore.calculus import diff_x, diff_y
from ..symcore.poly import Poly
from ..symcore.symbols import fn_parts, is_fn
from .janet import JanetIndex
from .ranking import DEFAULT_RANKING, Ranking, initial, is_unit, order_of, reductum, separant

COMPLETE = "Complete"
INCONSISTENT = "Inconsistent"
INCONCLUSIVE = "Inconclusive"

FACTOR_TERM_LIMIT = 400


@dataclass(frozen=True)
class Budget:
    max_splits: int = 64
    max_order: int = 12
    max_size: int = 200000
    timeout: float = 600.0


class BudgetExceeded(Exception):
    pass


@dataclass
class Certificate:
    """Why a branch is empty.

    ``kind`` is ``"unit"`` (``poly`` reduces to a nonzero element of
    Q(x, y) modulo ``equations``), ``"nonzero-factors"`` (every factor of the
    reduced ``poly`` is a unit or an inequation) or ``"inequation"`` (the
    inequation ``poly`` reduces to zero).
    """

    branch: int
    kind: str
    poly: Poly
    reduced: Poly
    equations: list
    inequations: list
    conditions: list

    def describe(self) -> str:
        return f"branch {self.branch}: {self.kind} ({self.reduced.format()[:80]})"


@dataclass
class SimpleSystem:
    equations: list
    inequations: list
    conditions: list = field(default_factory=list)
    branch: int = 0

    def leaders(self, ranking: Ranking = DEFAULT_RANKING) -> list:
        return [ranking.leader(p) for p in self.equations]

    def __len__(self) -> int:
        return len(self.equations)


@dataclass
class DecompositionResult:
    status: str
    systems: list
    certificates: list
    frontier: list = field(default_factory=list)
    stats: dict = field(default_factory=dict)

    @property
    def consistent(self) -> bool:
        return bool(self.systems)


@dataclass(frozen=True)
class _Elem:
    eid: int
    poly: Poly
    leader: int
    deg: int


def _derives(code: int, v: int) -> bool:
    """``code`` is a (possibly trivial) derivative of ``v``."""
    t1, a1, b1 = fn_parts(code)
    t2, a2, b2 = fn_parts(v)
    return t1 == t2 and a1 >= a2 and b1 >= b2


def _is_linear(p: Poly) -> bool:
    """Every monomial has at most one unknown-function factor, to the first power."""
    for m in p.terms:
        seen = 0
        for v, e in m:
            if is_fn(v):
                seen += e
        if seen > 1:
            return False
    return True


def _strip_xy_content(p: Poly) -> Poly:
    """Divide out the gcd of the Q[x, y] coefficients of p."""
    groups = p.collect(is_fn)
    if len(groups) == 1:
        (mono,) = groups
        return Poly({mono: mpq(1)})
    if any(c.is_monomial() for c in groups.values()):
        return p.primitive()
    g = None
    for c in groups.values():
        g = c if g is None else bridge.gcd(g, c)
        if g.is_const():
            return p.primitive()
    return bridge.exact_div(p, g).primitive()


def prem(p: Poly, r: Poly, w: int) -> Poly:
    """Pseudo-remainder of p by r with respect to the variable w."""
    d = r.degree(w)
    parts = r.coeffs_in(w)
    I = parts[d]
    tail = Poly({m: c for m, c in r.terms.items() if (w, d) not in m})
    while True:
        k = p.degree(w)
        if k < d or p.is_zero():
            return p
        c = p.coeff(w, k)
        rest = Poly({m: cc for m, cc in p.terms.items() if (w, k) not in m})
        # I*p - c*w^(k-d)*r, with the w^k terms cancelling exactly
        p = I * rest - c * Poly.var(w, k - d) * tail


class _Branch:
    __slots__ = ("bid", "T", "Q", "ineqs", "conditions", "prolonged", "parent", "index")

    def __init__(self, bid, T, Q, ineqs, conditions, prolonged, parent=None):
        self.bid = bid
        self.T = T
        self.Q = Q
        self.ineqs = ineqs
        self.conditions = conditions
        self.prolonged = prolonged
        self.parent = parent
        self.index = None

    def fork(self, bid):
        b = _Branch(bid, dict(self.T), list(self.Q), list(self.ineqs), list(self.conditions),
                    set(self.prolonged), parent=self.bid)
        b.index = self.index
        return b


class _Closed(Exception):
    def __init__(self, cert):
        self.cert = cert


class Decomposer:
    """One decomposition run; holds caches shared by all branches."""

    def __init__(self, budget: Budget = Budget(), ranking: Ranking = DEFAULT_RANKING, trace=None,
                 first_only: bool = False):
        self.budget = budget
        self.ranking = ranking
        self.trace = trace
        self.first_only = first_only
        self._next_eid = 0
        self._next_bid = 0
        self._prolong_cache: dict = {}
        self._factor_cache: dict = {}
        self.splits = 0
        self.max_order_seen = 0
        self.max_size_seen = 0
        self.reductions = 0
        self.deadline = None
        self._dead_children: list = []

    # bookkeeping ---------------------------------------------------------
    def log(self, line: str):
        if self.trace is not None:
            self.trace(line)

    def _check_time(self):
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise BudgetExceeded(f"timeout after {self.budget.timeout:g}s")

    def _check_size(self, p: Poly):
        n = len(p)
        if n > self.max_size_seen:
            self.max_size_seen = n
        if n > self.budget.max_size:
            raise BudgetExceeded(f"polynomial with {n} terms exceeds max size {self.budget.max_size}")

    def _new_elem(self, p: Poly, v: int) -> _Elem:
        self._next_eid += 1
        return _Elem(self._next_eid, p, v, p.degree(v))

    def _new_bid(self) -> int:
        self._next_bid += 1
        return self._next_bid

    # algebra -------------------------------------------------------------
    def prolong(self, e: _Elem, da: int, db: int) -> Poly:
        if da == 0 and db == 0:
            return e.poly
        key = (e.eid, da, db)
        r = self._prolong_cache.get(key)
        if r is None:
            if da:
                r = diff_x(self.prolong(e, da - 1, db))
            else:
                r = diff_y(self.prolong(e, da, db - 1))
            self._prolong_cache[key] = r
        return r

    def factors(self, p: Poly) -> list | None:
        """Distinct primitive non-unit factors of p, or None if too large."""
        if len(p) > FACTOR_TERM_LIMIT:
            return None
        hit = self._factor_cache.get(p)
        if hit is None and _is_linear(p):
            hit = [_strip_xy_content(p)]
            self._factor_cache[p] = hit
        if hit is None:
            _, fl = bridge.factor(p)
            hit = [f.primitive() for f, _ in fl if f.has(is_fn)]
            self._factor_cache[p] = hit
        return hit

    def tidy(self, p: Poly, br: _Branch) -> Poly:
        """Drop numeric content and monomial factors free of unknowns or
        known to be nonzero."""
        if p.is_zero():
            return p
        known = self._nonzero_vars(br)
        mc = p.monomial_content(lambda v: not is_fn(v) or v in known)
        if mc:
            p = p.div_mono(mc)
        return p.primitive()

    def _nonzero_vars(self, br: _Branch) -> set:
        return {next(iter(h.terms))[0][0] for h in br.ineqs if len(h) == 1 and len(next(iter(h.terms))) == 1}

    def reduce(self, p: Poly, br: _Branch, janet: JanetIndex | None = None) -> Poly:
        """Janet pseudo-reduction of p modulo the triangular set of br."""
        if janet is None:
            janet = self._janet(br)
        key = self.ranking.key
        p = self.tidy(p, br)
        while True:
            self._check_time()
            if p.is_zero():
                return p
            fvars = sorted((v for v in p.variables() if is_fn(v)), key=key, reverse=True)
            for w in fvars:
                hit = janet.divisor(w)
                if hit is None:
                    continue
                eid, (da, db) = hit
                e = br.T[eid]
                if da == 0 and db == 0 and p.degree(w) < e.deg:
                    continue
                r = self.prolong(e, da, db)
                before = p
                p = self.tidy(prem(p, r, w), br)
                self.reductions += 1
                self._check_size(p)
                if self.trace is not None and p.is_zero():
                    self.log(f"REDUCE {before.format()} -> 0")
                break
            else:
                return p

    def _janet(self, br: _Branch) -> JanetIndex:
        if br.index is None:
            br.index = JanetIndex({eid: e.leader for eid, e in br.T.items()})
        return br.index

    def is_known_nonzero(self, h: Poly, br: _Branch) -> bool:
        """h is already reduced."""
        if h.is_zero():
            return False
        if is_unit(h):
            return True
        h = self.tidy(h, br)
        if is_unit(h):
            return True
        known = set(br.ineqs)
        if h in known:
            return True
        fs = self.factors(h)
        if fs is None:
            return False
        return all(f in known for f in fs)

    def add_inequation(self, h: Poly, br: _Branch, source: Poly | None = None):
        """Adjoin h != 0 (h reduced); raises _Closed if h vanishes."""
        if h.is_zero():
            raise _Closed(self._cert(br, "inequation", source if source is not None else h, h))
        h = self.tidy(h, br)
        if is_unit(h):
            return
        fs = self.factors(h)
        for f in (fs if fs is not None else [h]):
            if f not in br.ineqs:
                br.ineqs.append(f)

    def _cert(self, br: _Branch, kind: str, poly: Poly, reduced: Poly) -> Certificate:
        eqs = [e.poly for e in self._sorted_T(br)]
        return Certificate(br.bid, kind, poly, reduced, eqs, list(br.ineqs), list(br.conditions))

    def _sorted_T(self, br: _Branch) -> list:
        return sorted(br.T.values(), key=lambda e: self.ranking.key(e.leader))

    # main loop -----------------------------------------------------------
    def run(self, equations, inequations=()) -> DecompositionResult:
        start = time.monotonic()
        self.deadline = start + self.budget.timeout
        root = _Branch(self._new_bid(), {}, [], [], [], set())
        systems, certs, frontier = [], [], []
        try:
            for h in inequations:
                self.add_inequation(self.tidy(Poly.coerce(h), root), root, h)
            root.Q = [Poly.coerce(p) for p in equations if not Poly.coerce(p).is_zero()]
            stack = [root]
        except _Closed as c:
            certs.append(c.cert)
            stack = []
        while stack:
            br = stack.pop()
            self._dead_children = []
            try:
                out = self._loop(br)
            except _Closed as c:
                certs.append(c.cert)
                self.log(f"CLOSE {br.bid} {c.cert.kind}")
                continue
            except BudgetExceeded as exc:
                frontier.append({"branch": br.bid, "reason": str(exc), "conditions": len(br.conditions)})
                self.log(f"CLOSE {br.bid} budget: {exc}")
                if str(exc).startswith("timeout"):
                    frontier.extend({"branch": b.bid, "reason": "not explored (timeout)",
                                     "conditions": len(b.conditions)} for b in stack)
                    break
                continue
            if isinstance(out, SimpleSystem):
                systems.append(out)
                self.log(f"CLOSE {br.bid} simple system with {len(out)} equations")
                if self.first_only:
                    frontier.extend({"branch": b.bid, "reason": "not explored (first system found)",
                                     "conditions": len(b.conditions)} for b in stack)
                    break
            else:
                certs.extend(self._dead_children)
                # children in reverse so the first (nonzero) branch is explored first
                stack.extend(reversed(out))
        if frontier:
            status = INCONCLUSIVE
        elif systems:
            status = COMPLETE
        else:
            status = INCONSISTENT
        stats = {
            "splits": self.splits,
            "branches": self._next_bid,
            "reductions": self.reductions,
            "max_order": self.max_order_seen,
            "max_size": self.max_size_seen,
            "seconds": round(time.monotonic() - start, 3),
        }
        return DecompositionResult(status, systems, certs, frontier, stats)

    def _split(self, br: _Branch, cond: Poly, nonzero_first, zero_first):
        """Branch on cond: returns [nonzero-branch, zero-branch]."""
        self.splits += 1
        if self.splits > self.budget.max_splits:
            raise BudgetExceeded(f"more than {self.budget.max_splits} splits")
        self.log(f"SPLIT {cond.format()}")
        a = br.fork(self._new_bid())
        b = br.fork(self._new_bid())
        a.conditions.append(("!=", cond))
        b.conditions.append(("==", cond))
        try:
            self.add_inequation(cond, a)
            a.Q.extend(nonzero_first)
            kids = [a]
        except _Closed as c:
            kids = []
            self.log(f"CLOSE {a.bid} {c.cert.kind}")
            self._dead_children.append(c.cert)
        b.Q.extend(zero_first)
        b.Q.append(cond)
        kids.append(b)
        return kids

    def _loop(self, br: _Branch):
        rk = self.ranking
        while True:
            self._check_time()
            if not br.Q:
                nxt = self._next_prolongation(br)
                if nxt is None:
                    return self._finish(br)
                br.Q.append(nxt)
            i = min(range(len(br.Q)), key=lambda j: rk.sort_key(br.Q[j]))
            raw = br.Q.pop(i)
            janet = self._janet(br)
            p = self.reduce(raw, br, janet)
            if p.is_zero():
                continue
            if self.trace is not None and p != raw:
                self.log(f"REDUCE {raw.format()} -> {p.format()}")
            if is_unit(p):
                raise _Closed(self._cert(br, "unit", raw, p))
            # factors: drop known-nonzero ones, split on the rest
            fs = self.factors(p)
            if fs is not None:
                known = set(br.ineqs)
                live = [f for f in fs if f not in known]
                if not live:
                    raise _Closed(self._cert(br, "nonzero-factors", raw, p))
                if len(live) > 1:
                    live.sort(key=rk.sort_key)
                    first = live[0]
                    rest = Poly.const(1)
                    for f in live[1:]:
                        rest = rest * f
                    return self._split(br, first, [rest], [])
                p = live[0]
            v = rk.leader(p)
            order = order_of(v)
            self.max_order_seen = max(self.max_order_seen, order)
            if order > self.budget.max_order:
                raise BudgetExceeded(f"derivative order {order} exceeds max order {self.budget.max_order}")
            init = self.reduce(initial(p, v), br, janet)
            if init.is_zero():
                br.Q.append(reductum(p, v))
                continue
            if not self.is_known_nonzero(init, br):
                return self._split(br, init, [p], [reductum(p, v)])
            if p.degree(v) > 1:
                sep = self.reduce(separant(p, v), br, janet)
                if not self.is_known_nonzero(sep, br):
                    res = self.reduce(bridge.resultant(p, separant(p, v), v), br, janet)
                    if self.is_known_nonzero(res, br):
                        self.add_inequation(sep, br)
                    else:
                        return self._split(br, sep, [p], [p])
            self._insert(br, p, v)

    def _insert(self, br: _Branch, p: Poly, v: int):
        # anything mentioning a derivative of v is no longer reduced
        moved = [e for e in br.T.values() if any(is_fn(w) and _derives(w, v) for w in e.poly.variables())]
        for e in moved:
            del br.T[e.eid]
            br.Q.append(e.poly)
        if moved:
            gone = {e.eid for e in moved}
            br.prolonged = {k for k in br.prolonged if k[0] not in gone}
        e = self._new_elem(p, v)
        br.T[e.eid] = e
        br.index = None
        janet = self._janet(br)
        old = br.ineqs
        br.ineqs = []
        for h in old:
            hr = self.reduce(h, br, janet)
            self.add_inequation(hr, br, h)

    def _next_prolongation(self, br: _Branch):
        janet = self._janet(br)
        for e in self._sorted_T(br):
            for z in janet.nonmultiplicative(e.eid):
                key = (e.eid, z)
                if key in br.prolonged:
                    continue
                br.prolonged.add(key)
                return self.prolong(e, 1, 0) if z == "x" else self.prolong(e, 0, 1)
        return None

    def _finish(self, br: _Branch) -> SimpleSystem:
        self._reduce_tails(br)
        janet = self._janet(br)
        eqs = []
        ineqs = list(br.ineqs)
        for e in self._sorted_T(br):
            for h in (initial(e.poly, e.leader), separant(e.poly, e.leader)):
                h = self.tidy(self.reduce(h, br, janet), br)
                if not is_unit(h) and h not in ineqs:
                    ineqs.append(h)
            eqs.append(e.poly)
        return SimpleSystem(eqs, ineqs, list(br.conditions), br.bid)

    def _reduce_tails(self, br: _Branch):
        """Reduce every equation by the others, keeping leader and degree."""
        for e in self._sorted_T(br):
            others = br.fork(br.bid)
            del others.T[e.eid]
            others.index = None
            q = self.reduce(e.poly, others)
            if q == e.poly or self.ranking.leader(q) != e.leader or q.degree(e.leader) != e.deg:
                continue
            if not self.is_known_nonzero(self.reduce(initial(q, e.leader), br), br):
                continue
            del br.T[e.eid]
            fresh = self._new_elem(q, e.leader)
            br.T[fresh.eid] = fresh
        br.index = None


def thomas_decompose(sys, budget: Budget = Budget(), trace=None, ranking: Ranking = DEFAULT_RANKING,
                     first_only: bool = False) -> DecompositionResult:
    """Decompose ``sys`` (anything with ``equations`` and ``inequations``)
    into disjoint simple systems."""
    eqs = getattr(sys, "equations", sys)
    ineqs = getattr(sys, "inequations", ())
    d = Decomposer(budget, ranking, trace, first_only)
    res = d.run(eqs, ineqs)
    return res


def _branch_from(d: Decomposer, equations, inequations) -> _Branch:
    br = _Branch(0, {}, [], [], [], set())
    for h in inequations:
        h = Poly.coerce(h)
        if not is_unit(h):
            br.ineqs.append(h.primitive())
    for p in equations:
        p = Poly.coerce(p)
        v = d.ranking.leader(p)
        if v is None:
            raise ValueError("equation free of unknown functions")
        e = d._new_elem(p, v)
        br.T[e.eid] = e
    return br


def pseudo_reduce(p, equations, inequations=(), ranking: Ranking = DEFAULT_RANKING) -> Poly:
    """Janet pseudo-reduction of p modulo a triangular list of equations.

    The result equals p times a product of initials and separants of the
    equations, modulo the differential ideal they generate, up to factors
    that are units or listed inequations.
    """
    d = Decomposer(ranking=ranking)
    br = _branch_from(d, equations, inequations)
    return d.reduce(Poly.coerce(p), br)


def integrability_conditions(equations, inequations=(), ranking: Ranking = DEFAULT_RANKING) -> list:
    """Reduced prolongations by nonmultiplicative variables that do not
    vanish; empty iff the system is passive."""
    d = Decomposer(ranking=ranking)
    br = _branch_from(d, equations, inequations)
    janet = d._janet(br)
    out = []
    for e in d._sorted_T(br):
        for z in janet.nonmultiplicative(e.eid):
            q = d.prolong(e, 1, 0) if z == "x" else d.prolong(e, 0, 1)
            r = d.reduce(q, br, janet)
            if not r.is_zero():
                out.append(r)
    return out


def verify_certificate(cert: Certificate, ranking: Ranking = DEFAULT_RANKING) -> bool:
    """Replay the reduction recorded in a contradiction certificate."""
    d = Decomposer(ranking=ranking)
    br = _branch_from(d, cert.equations, cert.inequations)
    r = d.reduce(cert.poly, br)
    if cert.kind == "unit":
        return is_unit(r)
    if cert.kind == "inequation":
        return r.is_zero()
    if cert.kind == "nonzero-factors":
        if r.is_zero():
            return False
        fs = d.factors(r)
        return fs is not None and all(f in br.ineqs for f in fs)
    return False
