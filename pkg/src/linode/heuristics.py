"""Best-effort explicit solutions of simple systems.

Unknowns are fixed one at a time (g, then the A_i, then f).  Each is given
an ansatz with undetermined coefficients: a Laurent polynomial in x times a
polynomial in y for f and g, and a Laurent polynomial in t = g(x, y) for
A_i.  Equations that act diagonally on monomials (monomial and binomial
equations with matching shifts) prune the ansatz before anything is solved.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import sympy
from gmpy2 import mpq

from .candidate import LinearTarget, PointTransformation, verify_transformation
from .diffdec.core import SimpleSystem
from .errors import DegenerateTransformation, LinodeError
from .jetode import RationalODE
from .symcore.poly import ONE, Poly
from .symcore.rational import Rat, substitute_functions
from .symcore.symbols import F_TAG, G_TAG, H_TAG, T_CODE, X_CODE, Y_CODE, fn_parts, is_fn

PARAM_BASE = 1000


class NotApplicable(LinodeError):
    pass


def _falling(n: int, k: int) -> int:
    out = 1
    for i in range(k):
        out *= n - i
    return out


@dataclass(frozen=True)
class MonomialKernel:
    """Ansatz restriction from an equation ``sum_k c_k x^p y^q u_(a_k, b_k) = 0``
    whose terms all shift monomials by the same offset: the monomial
    ``x^i y^j`` may appear in u only if it is annihilated."""

    tag: int
    terms: tuple  # ((coeff, a, b), ...)

    def allows(self, i: int, j: int) -> bool:
        return sum(c * _falling(i, a) * _falling(j, b) for c, a, b in self.terms) == 0

    def __str__(self) -> str:
        return " + ".join(f"{c}*D{a},{b}" for c, a, b in self.terms) + " kernel"


def integrate_binomial(eq: Poly) -> MonomialKernel:
    """Turn a monomial or binomial equation into an ansatz restriction.

    ``g_y = 0`` keeps only y-free monomials of g; ``y f_yy - f_y = 0`` keeps
    y-degrees 0 and 2.  Raises NotApplicable unless ``eq`` has at most two
    terms, each linear in one derivative of the same unknown with a monomial
    coefficient in x, y, and both terms shift exponents equally.
    """
    if len(eq) > 2 or eq.is_zero():
        raise NotApplicable("more than two terms")
    tag = None
    offset = None
    terms = []
    for m, c in eq.terms.items():
        fns = [(v, e) for v, e in m if is_fn(v)]
        if len(fns) != 1 or fns[0][1] != 1:
            raise NotApplicable("term is not linear in a single derivative")
        t, a, b = fn_parts(fns[0][0])
        if tag is not None and t != tag:
            raise NotApplicable("terms involve different unknowns")
        tag = t
        rest = dict((v, e) for v, e in m if not is_fn(v))
        if set(rest) - {X_CODE, Y_CODE}:
            raise NotApplicable("coefficient is not a monomial in x, y")
        off = (rest.get(X_CODE, 0) - a, rest.get(Y_CODE, 0) - b)
        if offset is not None and off != offset:
            raise NotApplicable("terms shift monomials differently")
        offset = off
        terms.append((int(c), a, b) if c.denominator == 1 else (c, a, b))
    return MonomialKernel(tag, tuple(terms))


def _unknown_tags(p) -> set:
    vs = p.variables()
    return {fn_parts(v)[0] for v in vs if is_fn(v)}


# --- linear algebra over Q ---------------------------------------------------

def _solve_linear(rows: list, nparams: int):
    """Solve rows of ``(coeffs: dict k -> mpq, rhs: mpq)`` meaning
    sum coeffs[k]*c_k = rhs.  Returns ``(particular, basis)`` of the affine
    solution space (lists of length nparams) or None if inconsistent."""
    pivots: dict = {}  # pivot column -> (row dict, rhs)
    for coeffs, rhs in rows:
        row = {k: v for k, v in coeffs.items() if v}
        # eliminate existing pivots
        for col in sorted(set(row) & set(pivots)):
            if col not in row:
                continue
            prow, prhs = pivots[col]
            f = row[col]
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    row[k] = nv
                else:
                    row.pop(k, None)
            rhs = rhs - f * prhs
        row = {k: v for k, v in row.items() if v}
        if not row:
            if rhs:
                return None
            continue
        col = min(row)
        f = row[col]
        row = {k: v / f for k, v in row.items()}
        rhs = rhs / f
        # back-substitute into existing pivots
        for pc, (prow, prhs) in list(pivots.items()):
            g = prow.get(col)
            if g:
                for k, v in row.items():
                    nv = prow.get(k, 0) - g * v
                    if nv:
                        prow[k] = nv
                    else:
                        prow.pop(k, None)
                pivots[pc] = (prow, prhs - g * rhs)
        pivots[col] = (row, rhs)
    free = [k for k in range(nparams) if k not in pivots]
    part = [mpq(0)] * nparams
    for col, (row, rhs) in pivots.items():
        part[col] = rhs
    basis = []
    for fk in free:
        v = [mpq(0)] * nparams
        v[fk] = mpq(1)
        for col, (row, rhs) in pivots.items():
            v[col] = -row.get(fk, 0)
        basis.append(v)
    return part, basis, free


def _coefficient_rows(exprs: list, params: list):
    """Equate every x, y coefficient of each numerator to zero."""
    pset = set(params)
    pindex = {p: k for k, p in enumerate(params)}
    rows = []
    linear = True
    polys = []
    for r in exprs:
        num = r.num if isinstance(r, Rat) else r
        for _, c in num.collect(lambda v: v not in pset).items():
            polys.append(c)
            coeffs, rhs = {}, mpq(0)
            for m, val in c.terms.items():
                if not m:
                    rhs -= val
                elif len(m) == 1 and m[0][1] == 1:
                    coeffs[pindex[m[0][0]]] = coeffs.get(pindex[m[0][0]], 0) + val
                else:
                    linear = False
            rows.append((coeffs, rhs))
    return rows, linear, polys


# --- ansatz ------------------------------------------------------------------

def _xy_monomials(d: int, kernels: list) -> list:
    out = []
    for j in range(d + 1):
        for i in range(-(d - j), d - j + 1):
            if all(k.allows(i, j) for k in kernels):
                out.append((i, j))
    out.sort(key=lambda ij: (abs(ij[0]) + ij[1], ij[1], abs(ij[0]), -ij[0]))
    return out


def _xy_ansatz(monos: list, params: list) -> Rat:
    shift = max([0] + [-i for i, _ in monos])
    terms = {}
    for (i, j), p in zip(monos, params):
        m = [(p, 1)]
        if i + shift:
            m.append((X_CODE, i + shift))
        if j:
            m.append((Y_CODE, j))
        terms[tuple(sorted(m))] = mpq(1)
    den = Poly.var(X_CODE, shift) if shift else ONE
    return Rat(Poly(terms), den)


def _t_ansatz(powers: list, params: list, g: Rat) -> Rat:
    acc = Rat(0)
    for k, p in zip(powers, params):
        acc = acc + Rat(Poly.var(p)) * g ** k
    return acc


def _t_expr(powers: list, values: list) -> Rat:
    t = Rat(Poly.var(T_CODE))
    acc = Rat(0)
    for k, v in zip(powers, values):
        if v:
            acc = acc + Rat(Poly.const(v)) * t ** k
    return acc


@dataclass
class HeuristicBudget:
    max_degree: int = 4
    max_candidates: int = 24
    max_nonlinear_params: int = 8


class _Solver:
    def __init__(self, S: SimpleSystem, ode: RationalODE, budget: HeuristicBudget):
        self.S = S
        self.ode = ode
        self.n = ode.order
        self.budget = budget
        self.eq_tags = [_unknown_tags(p) for p in S.equations]
        self.ineq_tags = [_unknown_tags(p) for p in S.inequations]
        self.kernels: dict = {}
        for p in S.equations:
            try:
                k = integrate_binomial(p)
            except NotApplicable:
                continue
            self.kernels.setdefault(k.tag, []).append(k)

    # checks ------------------------------------------------------------------
    def consistent(self, sol: dict) -> bool:
        known = set(sol)
        for p, tags in zip(self.S.equations, self.eq_tags):
            if tags <= known and not substitute_functions(p, sol).is_zero():
                return False
        for p, tags in zip(self.S.inequations, self.ineq_tags):
            if tags <= known and substitute_functions(p, sol).is_zero():
                return False
        return True

    def _relevant(self, tag: int, known: set) -> list:
        return [p for p, tags in zip(self.S.equations, self.eq_tags) if tag in tags and tags <= known | {tag}]

    # candidate generation ------------------------------------------------------
    def candidates(self, tag: int, sol: dict):
        """Explicit functions for ``tag`` that satisfy every equation whose
        other unknowns are already in ``sol``; yields ``(Rat, t_expr)``."""
        eqs = self._relevant(tag, set(sol))
        seen = set()
        is_a = tag < H_TAG
        count = 0
        for d in range(self.budget.max_degree + 1):
            if is_a:
                basis = sorted(range(-d, d + 1), key=lambda k: (abs(k), -k))
            else:
                basis = _xy_monomials(d, self.kernels.get(tag, []))
            if not basis:
                continue
            params = [PARAM_BASE + k for k in range(len(basis))]
            if is_a:
                ansatz = _t_ansatz(basis, params, sol[G_TAG])
            else:
                ansatz = _xy_ansatz(basis, params)
            trial = dict(sol)
            trial[tag] = ansatz
            exprs = [substitute_functions(p, trial) for p in eqs]
            for values in self._parameter_values(exprs, params, basis, is_a):
                key = tuple(values)
                if key in seen:
                    continue
                seen.add(key)
                subs = {p: Rat(Poly.const(v)) for p, v in zip(params, values)}
                val = ansatz.subs(subs)
                texpr = _t_expr(basis, values) if is_a else None
                yield val, texpr
                count += 1
                if count >= self.budget.max_candidates:
                    return

    def _parameter_values(self, exprs, params, basis, is_a):
        rows, linear, polys = _coefficient_rows(exprs, params)
        n = len(params)
        if linear:
            solved = _solve_linear(rows, n)
            if solved is None:
                return
            part, vecs, free = solved
            for choice in self._normal_choices(free, basis, is_a):
                yield [part[k] + sum(choice.get(f, 0) * v[k] for f, v in zip(free, vecs)) for k in range(n)]
            return
        if n > self.budget.max_nonlinear_params:
            return
        syms = sympy.symbols(f"c0:{n}")
        smap = {p: s for p, s in zip(params, syms)}
        eqs = set()
        for c in polys:
            e = sympy.Integer(0)
            for m, val in c.terms.items():
                term = sympy.Rational(int(val.numerator), int(val.denominator))
                for v, k in m:
                    term *= smap[v] ** k
                e += term
            if e != 0:
                eqs.add(e)
        try:
            sols = sympy.solve(sorted(eqs, key=sympy.default_sort_key), syms, dict=True)
        except (NotImplementedError, ValueError):
            return
        for s in sols:
            exprs_k = [s.get(sym, sym) for sym in syms]
            free_syms = sorted(set().union(*(sympy.sympify(e).free_symbols for e in exprs_k)), key=str)
            free = [syms.index(f) for f in free_syms]
            for choice in self._normal_choices(free, basis, is_a):
                env = {syms[f]: choice.get(f, 0) for f in free}
                vals = [sympy.nsimplify(sympy.sympify(e).subs(env)) for e in exprs_k]
                if all(v.is_Rational for v in vals):
                    yield [mpq(int(v.p), int(v.q)) for v in vals]

    @staticmethod
    def _normal_choices(free: list, basis: list, is_a: bool):
        """Free constants: additive ones 0, the first multiplicative one 1."""
        def additive(k):
            return basis[k] == 0 if is_a else basis[k] == (0, 0)

        mult = [k for k in free if not additive(k)]
        add = [k for k in free if additive(k)]
        yield {}
        for k in mult:
            yield {k: 1}
        for k in add:
            yield {k: 1}
        for a, b in itertools.combinations(mult, 2):
            yield {a: 1, b: 1}

    # search ------------------------------------------------------------------
    def run(self):
        a_tags = list(range(self.n - 2))
        order = [G_TAG] + a_tags + [F_TAG]
        return self._search(order, {}, {})

    def _search(self, order, sol, texprs):
        if not order:
            return self._finish(sol, texprs)
        tag, rest = order[0], order[1:]
        for val, texpr in self.candidates(tag, sol):
            trial = dict(sol)
            trial[tag] = val
            if tag == G_TAG and val.is_const():
                continue
            if not self.consistent(trial):
                continue
            tx = dict(texprs)
            if texpr is not None:
                tx[tag] = texpr
            out = self._search(rest, trial, tx)
            if out is not None:
                return out
        return None

    def _finish(self, sol, texprs):
        try:
            pt = PointTransformation(sol[F_TAG], sol[G_TAG])
            if pt.jacobian().is_zero():
                return None
            target = LinearTarget(self.n, tuple(texprs[i] for i in range(self.n - 2)))
            if verify_transformation(self.ode, pt, target):
                return pt, target
        except DegenerateTransformation:
            return None
        return None


def solve_simple_system(S: SimpleSystem, ode: RationalODE, budget: HeuristicBudget | None = None):
    """Return ``(PointTransformation, LinearTarget)`` solving S and
    linearizing ``ode``, or None when the ansatz family is exhausted."""
    if not ode.explicit():
        return None
    tags = set().union(*(_unknown_tags(p) for p in S.equations)) if S.equations else set()
    if any(t >= H_TAG and t not in (G_TAG, F_TAG) for t in tags):
        return None
    return _Solver(S, ode, budget or HeuristicBudget()).run()
