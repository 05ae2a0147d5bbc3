"""Janet division for two independent variables.

For a set U of multi-indices (a, b) of one unknown, y is multiplicative
for u in U iff b is maximal in U, and x is multiplicative iff a is maximal
among the elements of U with the same b.
"""

from __future__ import annotations

from ..symcore.symbols import fn_parts


def multiplicative(indices: list[tuple[int, int]]) -> dict:
    """Map each (a, b) to its pair of flags ``(x_mult, y_mult)``."""
    if not indices:
        return {}
    bmax = max(b for _, b in indices)
    amax_at: dict = {}
    for a, b in indices:
        if a > amax_at.get(b, -1):
            amax_at[b] = a
    return {(a, b): (a == amax_at[b], b == bmax) for a, b in indices}


class JanetIndex:
    """Involutive divisor lookup over the leaders of a triangular set.

    ``leaders`` maps an element id to the code of its leader.
    """

    def __init__(self, leaders: dict):
        self.by_tag: dict = {}
        for eid, code in leaders.items():
            tag, a, b = fn_parts(code)
            self.by_tag.setdefault(tag, []).append((a, b, eid))
        self.mult: dict = {}
        for tag, items in self.by_tag.items():
            flags = multiplicative([(a, b) for a, b, _ in items])
            for a, b, eid in items:
                self.mult[eid] = flags[(a, b)]

    def divisor(self, code: int):
        """Return ``(eid, (da, db))`` for the involutive divisor of the
        derivative ``code``, or None."""
        tag, a, b = fn_parts(code)
        for ua, ub, eid in self.by_tag.get(tag, ()):
            da, db = a - ua, b - ub
            if da < 0 or db < 0:
                continue
            xm, ym = self.mult[eid]
            if (da and not xm) or (db and not ym):
                continue
            return eid, (da, db)
        return None

    def nonmultiplicative(self, eid: int) -> list[str]:
        xm, ym = self.mult[eid]
        out = []
        if not xm:
            out.append("x")
        if not ym:
            out.append("y")
        return out
