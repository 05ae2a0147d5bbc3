"""Closed symbol universe.

Every symbol is packed into a single integer code so that polynomials can
key their monomials on plain ints.  The packing is structural, which keeps
codes identical across processes and runs.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

X_CODE = 1
Y_CODE = 2
T_CODE = 3
_JET_BASE = 1 << 20
_FN_BASE = 1 << 40

# Unknown-function tags.  A_i uses its own index i (< H_TAG).
H_TAG = 900
G_TAG = 901
F_TAG = 902
XI_TAG = 903
ETA_TAG = 904

_NAME_TO_TAG = {"H": H_TAG, "g": G_TAG, "f": F_TAG, "xi": XI_TAG, "eta": ETA_TAG}
_TAG_TO_NAME = {v: k for k, v in _NAME_TO_TAG.items()}


class SymbolError(ValueError):
    pass


@dataclass(frozen=True)
class Symbol:
    """A variable of the closed universe.

    ``kind`` is one of ``"x"``, ``"y"``, ``"t"``, ``"jet"`` or ``"fn"``.
    Jets carry ``order`` (y' has order 1).  Function symbols carry ``name``
    (``f``, ``g``, ``A``, ``H``, ``xi``, ``eta``), an index for ``A`` and the
    derivative index ``(dx, dy)``.
    """

    kind: str
    order: int = 0
    name: str = ""
    index: int = 0
    dx: int = 0
    dy: int = 0

    def __post_init__(self):
        if self.kind == "jet" and self.order < 1:
            raise SymbolError("jet order must be >= 1")
        if self.kind == "fn":
            if self.dx < 0 or self.dy < 0:
                raise SymbolError("negative derivative index")
            if self.name not in _NAME_TO_TAG and self.name != "A":
                raise SymbolError(f"unknown function symbol {self.name!r}")
            if self.name == "A" and not 0 <= self.index < H_TAG:
                raise SymbolError("A index out of range")

    @property
    def code(self) -> int:
        return symbol_code(self)

    @property
    def tag(self) -> int:
        if self.kind != "fn":
            raise SymbolError("not a function symbol")
        return self.index if self.name == "A" else _NAME_TO_TAG[self.name]

    def derivative(self, da: int, db: int) -> "Symbol":
        return Symbol("fn", name=self.name, index=self.index, dx=self.dx + da, dy=self.dy + db)

    @property
    def base(self) -> "Symbol":
        return Symbol("fn", name=self.name, index=self.index)

    def __str__(self) -> str:
        return symbol_name(self.code)


X = Symbol("x")
Y = Symbol("y")
T = Symbol("t")


def jet(k: int) -> Symbol:
    return Symbol("jet", order=k)


def fn(name: str, dx: int = 0, dy: int = 0, index: int = 0) -> Symbol:
    return Symbol("fn", name=name, index=index, dx=dx, dy=dy)


def A(i: int, dx: int = 0, dy: int = 0) -> Symbol:
    return Symbol("fn", name="A", index=i, dx=dx, dy=dy)


def symbol_code(s: Symbol) -> int:
    if s.kind == "x":
        return X_CODE
    if s.kind == "y":
        return Y_CODE
    if s.kind == "t":
        return T_CODE
    if s.kind == "jet":
        return _JET_BASE + s.order
    return fn_code(s.tag, s.dx, s.dy)


def fn_code(tag: int, dx: int, dy: int) -> int:
    if dx >= 4096 or dy >= 4096:
        raise SymbolError("derivative index too large")
    return _FN_BASE + (tag << 24) + (dx << 12) + dy


@lru_cache(maxsize=None)
def from_code(code: int) -> Symbol:
    if code == X_CODE:
        return X
    if code == Y_CODE:
        return Y
    if code == T_CODE:
        return T
    if _JET_BASE < code < _FN_BASE:
        return jet(code - _JET_BASE)
    tag, dx, dy = fn_parts(code)
    if tag < H_TAG:
        return A(tag, dx, dy)
    return fn(_TAG_TO_NAME[tag], dx, dy)


def is_jet(code: int) -> bool:
    return _JET_BASE < code < _FN_BASE


def jet_order(code: int) -> int:
    return code - _JET_BASE


def jet_code(k: int) -> int:
    return _JET_BASE + k


def is_fn(code: int) -> bool:
    return code >= _FN_BASE


def fn_parts(code: int) -> tuple[int, int, int]:
    """Return ``(tag, dx, dy)`` of a function-symbol code."""
    rest = code - _FN_BASE
    return rest >> 24, (rest >> 12) & 0xFFF, rest & 0xFFF


def fn_shift(code: int, da: int, db: int) -> int:
    return code + (da << 12) + db


def fn_base(code: int) -> int:
    return _FN_BASE + ((code - _FN_BASE) >> 24 << 24)


def tag_name(tag: int) -> str:
    if tag < H_TAG:
        return f"A{tag}"
    return _TAG_TO_NAME[tag]


@lru_cache(maxsize=None)
def symbol_name(code: int) -> str:
    if code == X_CODE:
        return "x"
    if code == Y_CODE:
        return "y"
    if code == T_CODE:
        return "t"
    if is_jet(code):
        return f"D(y,{jet_order(code)})"
    tag, dx, dy = fn_parts(code)
    base = tag_name(tag)
    if dx == dy == 0:
        return base
    return f"{base}_{'x' * dx}{'y' * dy}"
