"""Exact symbolic kernel."""

from .calculus import diff_x, diff_y, max_jet_order, pdiff
from .calculus import total_diff_x as poly_total_diff_x
from .expr import Add, Div, Expr, Mul, Num, Pow, Sym, as_expr, as_tree, diff, normalize, total_diff_x
from .poly import ONE, ZERO, Poly
from .rational import Rat
from .symbols import A, Symbol, T, X, Y, fn, jet

__all__ = [
    "A", "Add", "Div", "Expr", "Mul", "Num", "ONE", "Poly", "Pow", "Rat", "Sym", "Symbol",
    "T", "X", "Y", "ZERO", "as_expr", "as_tree", "diff", "diff_x", "diff_y", "fn", "jet",
    "max_jet_order", "normalize", "pdiff", "poly_total_diff_x", "total_diff_x",
]
