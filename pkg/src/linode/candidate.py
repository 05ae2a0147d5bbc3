"""Pull back Laguerre-form linear equations through point transformations
and build the determining system for a given ODE."""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DegenerateTransformation
from .jetode import RationalODE
from .symcore.calculus import total_diff_x
from .symcore.poly import ONE, Poly
from .symcore.rational import Rat, substitute_functions
from .symcore.symbols import A, F_TAG, G_TAG, T_CODE, X_CODE, Y_CODE, fn, is_jet, jet_code, tag_name

F = fn("f").code
G = fn("g").code
F_X, F_Y = fn("f", 1, 0).code, fn("f", 0, 1).code
G_X, G_Y = fn("g", 1, 0).code, fn("g", 0, 1).code


@dataclass(frozen=True)
class PointTransformation:
    """u = f(x, y), t = g(x, y) with explicit f and g."""

    f: Rat
    g: Rat

    def __post_init__(self):
        object.__setattr__(self, "f", Rat.coerce(self.f))
        object.__setattr__(self, "g", Rat.coerce(self.g))
        for r in (self.f, self.g):
            if r.variables() - {X_CODE, Y_CODE}:
                raise ValueError("transformation must be explicit in x and y")

    def jacobian(self) -> Rat:
        return self.f.diff_x() * self.g.diff_y() - self.f.diff_y() * self.g.diff_x()

    def as_solution(self) -> dict:
        return {F_TAG: self.f, G_TAG: self.g}


@dataclass(frozen=True)
class LinearTarget:
    """``u^(n) + sum_{i<=n-3} A_i u^(i) = 0``.

    Each entry of ``A`` is an explicit Rat in ``t`` or ``None`` for the
    unknown function A_i(x, y).
    """

    n: int
    A: tuple = ()

    def __post_init__(self):
        if len(self.A) != max(self.n - 2, 0):
            raise ValueError(f"order {self.n} needs {max(self.n - 2, 0)} coefficients, got {len(self.A)}")
        object.__setattr__(self, "A", tuple(None if a is None else Rat.coerce(a) for a in self.A))

    @classmethod
    def symbolic(cls, n: int) -> "LinearTarget":
        return cls(n, (None,) * max(n - 2, 0))

    def explicit(self) -> bool:
        return all(a is not None for a in self.A)

    def __str__(self) -> str:
        parts = [f"D(u,{self.n})"]
        for i, a in enumerate(self.A):
            if a is None:
                parts.append(f"A{i}(t)*D(u,{i})")
            elif not a.is_zero():
                name = "u" if i == 0 else f"D(u,{i})"
                parts.append(name if a == Rat(1) else f"({a})*{name}")
        return " + ".join(parts) + " = 0"


@dataclass(frozen=True)
class CandidateForm:
    """``y^(n) + P/D = 0`` with ``D = J (g_x + g_y y')^(n-2)``."""

    n: int
    P: Rat
    D: Rat

    def ratio(self) -> Rat:
        return self.P / self.D

    def as_ode(self) -> RationalODE:
        q = self.ratio()
        return RationalODE(order=self.n, M=q.num, N=q.den, source="pullback")


@dataclass
class PDESystem:
    equations: list
    inequations: list
    unknowns: tuple
    labels: list = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.equations)


def _symbolic_parts():
    f, g = Poly.var(F), Poly.var(G)
    J = Poly.var(F_X) * Poly.var(G_Y) - Poly.var(F_Y) * Poly.var(G_X)
    return f, g, J


def pullback_linear(n: int, target: LinearTarget, pt: PointTransformation | None = None) -> CandidateForm:
    """Pull the linear target back through u = f(x,y), t = g(x,y).

    With ``pt=None`` f and g are the unknown function symbols.
    """
    if n < 2:
        raise ValueError("order must be at least 2")
    if target.n != n:
        raise ValueError("target order mismatch")
    if pt is not None and (pt.f.den != ONE or pt.g.den != ONE):
        return _pullback_rational(n, target, pt)
    if pt is None:
        f, g, J = _symbolic_parts()
    else:
        f, g = pt.f.num, pt.g.num
        J = pt.jacobian().num
        if J.is_zero():
            raise DegenerateTransformation("Jacobian vanishes identically")
    lam = total_diff_x(g)
    dlam = total_diff_x(lam)
    # u^(k) = num[k] / lam^(2k-1) for k >= 1
    nums = [f]
    num = f
    m = 0
    for k in range(1, n + 1):
        num = lam * total_diff_x(num) - dlam.scale(m) * num if m else total_diff_x(num)
        m = 2 * k - 1
        nums.append(num)
    top = 2 * n - 1
    coefs = []
    for i, a in enumerate(target.A):
        if a is None:
            coefs.append((Poly.sym(A(i)), ONE))
        else:
            r = a.subs({T_CODE: Rat(g)})
            coefs.append((r.num, r.den))
    K = ONE
    for _, d in coefs:
        K = K * d
    Q = nums[n] * K
    for i, (a_num, a_den) in enumerate(coefs):
        if a_num.is_zero():
            continue
        others = ONE
        for j, (_, d) in enumerate(coefs):
            if j != i:
                others = others * d
        shift = top - (2 * i - 1 if i else 0)
        Q = Q + a_num * others * nums[i] * lam ** shift
    return _finish(n, Q, K, J, lam)


def _finish(n: int, Q: Poly, K: Poly, J: Poly, lam: Poly) -> CandidateForm:
    top = jet_code(n)
    parts = Q.coeffs_in(top)
    if set(parts) - {0, 1}:
        raise AssertionError("pullback is not linear in the highest derivative")
    c = parts.get(1, Poly())
    if c.is_zero():
        raise DegenerateTransformation("coefficient of the highest derivative vanishes")
    D = J * lam ** (n - 2)
    if c != -(D * K):
        raise AssertionError("pullback does not have the expected J*(g_x+g_y*y')^(n-2) denominator")
    rest = parts.get(0, Poly())
    P = Rat(-rest) if K == ONE else Rat(-rest) / Rat(K)
    return CandidateForm(n=n, P=P, D=Rat(D))


def _pullback_rational(n: int, target: LinearTarget, pt: PointTransformation) -> CandidateForm:
    J = pt.jacobian()
    if J.is_zero():
        raise DegenerateTransformation("Jacobian vanishes identically")
    lam = pt.g.total_diff_x()
    us = [pt.f]
    for _ in range(n):
        us.append(us[-1].total_diff_x() / lam)
    total = us[n]
    for i, a in enumerate(target.A):
        total = total + a.subs({T_CODE: pt.g}) * us[i]
    top = jet_code(n)
    c = total.diff(top)
    if c.is_zero():
        raise DegenerateTransformation("coefficient of the highest derivative vanishes")
    rest = (total - c * Rat(Poly.var(top)))
    ratio = rest / c
    D = J * lam ** (n - 2)
    return CandidateForm(n=n, P=ratio * D, D=D)


def jet_monomial_coefficients(p: Poly) -> dict:
    """Group ``p`` by monomials in the jet variables."""
    return p.collect(is_jet)


def a_constraint(i: int) -> Poly:
    """(A_i)_x g_y - (A_i)_y g_x: A_i depends on t = g(x, y) only."""
    ax, ay = Poly.sym(A(i, 1, 0)), Poly.sym(A(i, 0, 1))
    return ax * Poly.var(G_Y) - ay * Poly.var(G_X)


def determining_system(ode: RationalODE) -> PDESystem:
    """Coefficients of ``P*N - M*J*(g_x+g_y y')^(n-2)`` in the jets, plus the
    A_i(t) constraints; the only inequation is J."""
    n = ode.order
    cf = pullback_linear(n, LinearTarget.symbolic(n))
    P = cf.P.num
    D = cf.D.num
    identity = P * ode.N - ode.M * D
    groups = jet_monomial_coefficients(identity)
    equations, labels = [], []
    for mono in sorted(groups, key=lambda m: (sum(e for _, e in m), m)):
        equations.append(groups[mono])
        labels.append("coeff " + (ONE.mul_term(mono, 1).format() if mono else "1"))
    for i in range(n - 2):
        equations.append(a_constraint(i))
        labels.append(f"A{i} depends on t only")
    _, _, J = _symbolic_parts()
    unknowns = ("f", "g") + tuple(tag_name(i) for i in range(n - 2)) + tuple(ode.unknowns)
    return PDESystem(equations=equations, inequations=[J], unknowns=unknowns, labels=labels)


def verify_transformation(ode: RationalODE, pt: PointTransformation, target: LinearTarget) -> bool:
    """Exact check that pulling ``target`` back through ``pt`` gives ``ode``."""
    if not target.explicit():
        raise ValueError("target coefficients must be explicit")
    if pt.jacobian().is_zero():
        raise DegenerateTransformation("Jacobian vanishes identically")
    cf = pullback_linear(ode.order, target, pt)
    return (cf.ratio() - ode.ratio).is_zero()


def solution_map(pt: PointTransformation, target: LinearTarget) -> dict:
    """Tag -> explicit function of (x, y) for f, g and every A_i(g(x, y))."""
    sol = pt.as_solution()
    for i, a in enumerate(target.A):
        sol[i] = a.subs({T_CODE: pt.g})
    return sol


def substitute_solution(p, pt: PointTransformation, target: LinearTarget) -> Rat:
    return substitute_functions(p, solution_map(pt, target))
