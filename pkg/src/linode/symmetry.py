"""Point-symmetry determining equations and the dimension of their solution
space, used as a cheap necessary condition for linearizability."""

from __future__ import annotations

from dataclasses import dataclass, field

from .candidate import PDESystem, jet_monomial_coefficients
from .diffdec import Budget
from .diffdec.core import INCONCLUSIVE
from .diffdec.linear import LinearCompletion, complete_linear
from .errors import UnknownsPresent
from .jetode import RationalODE
from .symcore.calculus import diff_x, diff_y, total_diff_x
from .symcore.poly import ONE, Poly
from .symcore.symbols import ETA_TAG, XI_TAG, fn, fn_code, fn_parts, jet_code

XI = fn("xi").code
ETA = fn("eta").code

INFINITE = "Infinite"
MAYBE_LINEARIZABLE = "MaybeLinearizable"
NOT_LINEARIZABLE = "NotLinearizable"


def prolonged_coefficients(n: int) -> list:
    """``[eta, eta^(1), ..., eta^(n)]`` as polynomials in the jets and the
    derivatives of xi, eta."""
    xi, eta = Poly.var(XI), Poly.var(ETA)
    dxi = total_diff_x(xi)
    out = [eta]
    for k in range(1, n + 1):
        out.append(total_diff_x(out[-1]) - Poly.var(jet_code(k)) * dxi)
    return out


def prolong_and_determine(ode: RationalODE) -> PDESystem:
    """Linear determining system for the generators xi d/dx + eta d/dy."""
    if not ode.explicit():
        raise UnknownsPresent("symmetry analysis needs explicit coefficients")
    n = ode.order
    top = jet_code(n)
    phi = ode.N * Poly.var(top) + ode.M
    etas = prolonged_coefficients(n)
    xi = Poly.var(XI)
    # pr X (phi): explicit x, y dependence plus every jet slot
    acc = xi * diff_x(phi) + Poly.var(ETA) * diff_y(phi)
    for k in range(1, n + 1):
        d = phi.diff(jet_code(k))
        if not d.is_zero():
            acc = acc + etas[k] * d
    # on solutions y^(n) = -M/N; clear the denominator N
    parts = acc.coeffs_in(top)
    top_deg = max(parts, default=0)
    num = Poly()
    for e, c in parts.items():
        num = num + c * (-ode.M) ** e * ode.N ** (top_deg - e)
    groups = jet_monomial_coefficients(num)
    equations, labels = [], []
    for mono in sorted(groups, key=lambda m: (sum(e for _, e in m), m)):
        equations.append(groups[mono])
        labels.append("coeff " + (ONE.mul_term(mono, 1).format() if mono else "1"))
    return PDESystem(equations=equations, inequations=[], unknowns=("xi", "eta"), labels=labels)


@dataclass
class SymmetryReport:
    dimension: object  # int, INFINITE or INCONCLUSIVE
    system: PDESystem
    parametric: list = field(default_factory=list)
    completion: LinearCompletion | None = None

    @property
    def finite(self) -> bool:
        return isinstance(self.dimension, int)


def parametric_derivatives(leaders: list, unknowns=(XI_TAG, ETA_TAG)):
    """Derivatives of the unknowns not obtainable by differentiating a
    leader, or None if there are infinitely many."""
    out = []
    for tag in unknowns:
        idx = [(a, b) for t, a, b in (fn_parts(v) for v in leaders) if t == tag]
        pure_x = [a for a, b in idx if b == 0]
        pure_y = [b for a, b in idx if a == 0]
        if not pure_x or not pure_y:
            return None
        for a in range(min(pure_x)):
            for b in range(min(pure_y)):
                if not any(a >= ua and b >= ub for ua, ub in idx):
                    out.append(fn_code(tag, a, b))
    return out


def symmetry_dimension(sys: PDESystem, budget: Budget = Budget()) -> SymmetryReport:
    """Janet-complete the linear system and count parametric derivatives."""
    done = complete_linear(sys.equations, budget)
    if done.status == INCONCLUSIVE:
        return SymmetryReport(INCONCLUSIVE, sys, completion=done)
    par = parametric_derivatives(done.leaders)
    if par is None:
        return SymmetryReport(INFINITE, sys, completion=done)
    return SymmetryReport(len(par), sys, par, done)


@dataclass(frozen=True)
class PrefilterResult:
    verdict: str
    dimension: object
    report: SymmetryReport | None = None

    @property
    def rejected(self) -> bool:
        return self.verdict == NOT_LINEARIZABLE


def prefilter(ode: RationalODE, budget: Budget = Budget()) -> PrefilterResult:
    """Reject equations whose symmetry algebra is too small."""
    rep = symmetry_dimension(prolong_and_determine(ode), budget)
    dim = rep.dimension
    if dim == INCONCLUSIVE:
        return PrefilterResult(INCONCLUSIVE, dim, rep)
    if dim == INFINITE:
        return PrefilterResult(MAYBE_LINEARIZABLE, dim, rep)
    if dim <= ode.order or (ode.order == 2 and dim != 8):
        return PrefilterResult(NOT_LINEARIZABLE, dim, rep)
    return PrefilterResult(MAYBE_LINEARIZABLE, dim, rep)
