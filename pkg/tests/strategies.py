"""Random inputs shared by the property tests and the acceptance suite.

Hypothesis strategies drive the unit-level property tests; the seeded
``random`` generators give the acceptance suite exact case counts.
"""

from __future__ import annotations

import random

from hypothesis import strategies as st

from linode.candidate import LinearTarget, PointTransformation
from linode.symcore import Add, Div, Mul, Num, Poly, Pow, Rat, Sym, T, X, Y, fn, jet

ATOMS = [X, Y, jet(1), jet(2), fn("f"), fn("g", 1, 0), fn("H", 0, 1)]
VARS4 = [1, 2, (1 << 20) + 1, (1 << 20) + 2]  # x, y, y', y''

nums = st.integers(min_value=-5, max_value=5).map(Num)
syms = st.sampled_from(ATOMS).map(Sym)


def _extend(children):
    return st.one_of(
        st.lists(children, min_size=2, max_size=3).map(lambda a: Add(tuple(a))),
        st.lists(children, min_size=2, max_size=3).map(lambda a: Mul(tuple(a))),
        st.tuples(children, st.integers(min_value=0, max_value=3)).map(lambda t: Pow(*t)),
    )


poly_trees = st.recursive(st.one_of(nums, syms), _extend, max_leaves=8)

# 1 + x^2 style denominators never vanish identically
dens = st.lists(st.sampled_from([X, Y, jet(1)]).map(Sym), min_size=1, max_size=2).map(
    lambda a: Add((Mul(tuple(a) + tuple(a)), Num(1)))
)
trees = st.one_of(poly_trees, st.builds(Div, poly_trees, dens))


def _poly_from_terms(terms) -> Poly:
    p = Poly()
    for mono, c in terms:
        if c:
            p = p + Poly.const(c).mul_term(mono, 1)
    return p


def _mono(codes, exps):
    return tuple((c, e) for c, e in zip(codes, exps) if e)


@st.composite
def polys(draw, nvars=4, max_deg=6, max_terms=6):
    """Sparse polynomial in at most ``nvars`` symbols, total degree <= max_deg."""
    codes = VARS4[:nvars]
    terms = []
    for _ in range(draw(st.integers(0, max_terms))):
        exps = [draw(st.integers(0, max_deg)) for _ in codes]
        while sum(exps) > max_deg:
            exps[exps.index(max(exps))] -= 1
        terms.append((_mono(codes, exps), draw(st.integers(-9, 9))))
    return _poly_from_terms(terms)


# seeded generators

def random_poly(rng: random.Random, nvars=4, max_deg=6, max_terms=6) -> Poly:
    codes = VARS4[:nvars]
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        exps = [rng.randint(0, max_deg) for _ in codes]
        while sum(exps) > max_deg:
            exps[exps.index(max(exps))] -= 1
        terms.append((_mono(codes, exps), rng.randint(-9, 9)))
    return _poly_from_terms(terms)


def random_tree(rng: random.Random, depth=3):
    if depth == 0 or rng.random() < 0.3:
        return Num(rng.randint(-5, 5)) if rng.random() < 0.4 else Sym(rng.choice(ATOMS))
    kind = rng.choice(["add", "mul", "pow", "div"])
    if kind == "pow":
        return Pow(random_tree(rng, depth - 1), rng.randint(0, 3))
    if kind == "div":
        s = Sym(rng.choice([X, Y]))
        return Div(random_tree(rng, depth - 1), Add((Mul((s, s)), Num(1))))
    args = tuple(random_tree(rng, depth - 1) for _ in range(rng.randint(2, 3)))
    return Add(args) if kind == "add" else Mul(args)


def _xy_poly(rng: random.Random, max_deg: int) -> Poly:
    terms = []
    for i in range(max_deg + 1):
        for j in range(max_deg + 1 - i):
            if rng.random() < 0.5:
                terms.append((_mono((1, 2), (i, j)), rng.randint(-3, 3)))
    return _poly_from_terms(terms)


def random_transformation(rng: random.Random, n: int):
    """Explicit (f, g, target) with f, g of degree <= 2 and J != 0."""
    while True:
        f = Rat(_xy_poly(rng, 2))
        g = Rat(_xy_poly(rng, 2))
        pt = PointTransformation(f, g)
        if not pt.jacobian().is_zero():
            break
    t = Poly.sym(T)
    coeffs = []
    for _ in range(max(n - 2, 0)):
        a = Poly.const(rng.randint(-2, 2))
        if rng.random() < 0.5:
            a = a + t.scale(rng.randint(-2, 2))
        coeffs.append(Rat(a))
    return pt, LinearTarget(n, tuple(coeffs))
