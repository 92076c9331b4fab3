"""Sparse exact Gauss-Jordan elimination over the rationals."""
from __future__ import annotations

from fractions import Fraction
from typing import Hashable, Iterable, Mapping


class Inconsistent(ArithmeticError):
    def __init__(self, tag=None):
        super().__init__(f"inconsistent equation ({tag})")
        self.tag = tag


class SparseRREF:
    """Incrementally maintained reduced row echelon form.

    Each equation is ``sum coeffs[x] * x + const = 0``.  Rows are kept fully
    reduced, so a pivot row with no other entries fixes its pivot variable.
    """

    def __init__(self):
        self.rows: dict[Hashable, tuple[dict[Hashable, Fraction], Fraction]] = {}
        self._uses: dict[Hashable, set] = {}   # column -> pivots whose rows mention it

    def _reduce(self, coeffs: dict, const: Fraction) -> tuple[dict, Fraction]:
        for col in [c for c in coeffs if c in self.rows]:
            f = coeffs.get(col)
            if not f:
                continue
            prow, pconst = self.rows[col]
            for c, v in prow.items():
                nv = coeffs.get(c, 0) - f * v
                if nv:
                    coeffs[c] = nv
                else:
                    coeffs.pop(c, None)
            const -= f * pconst
        return coeffs, const

    def add(self, coeffs: Mapping[Hashable, int | Fraction], const: int | Fraction = 0, tag=None) -> bool:
        """Insert one equation; returns True if it raised the rank."""
        row = {c: Fraction(v) for c, v in coeffs.items() if v}
        row, const = self._reduce(row, Fraction(const))
        if not row:
            if const:
                raise Inconsistent(tag)
            return False
        pivot = min(row, key=repr) if len(row) > 1 else next(iter(row))
        scale = row[pivot]
        row = {c: v / scale for c, v in row.items()}
        const /= scale
        # eliminate the new pivot from existing rows
        for other in list(self._uses.get(pivot, ())):
            orow, oconst = self.rows[other]
            f = orow.pop(pivot, None)
            if f is None:
                continue
            for c, v in row.items():
                if c == pivot:
                    continue
                nv = orow.get(c, 0) - f * v
                if nv:
                    orow[c] = nv
                    self._uses.setdefault(c, set()).add(other)
                else:
                    orow.pop(c, None)
            self.rows[other] = (orow, oconst - f * const)
        self._uses.pop(pivot, None)
        self.rows[pivot] = (row, const)
        for c in row:
            if c != pivot:
                self._uses.setdefault(c, set()).add(pivot)
        return True

    def determined(self) -> dict[Hashable, Fraction]:
        """Variables forced to a unique value: value = -const of a singleton row."""
        return {p: -const for p, (row, const) in self.rows.items() if len(row) == 1}

    @property
    def rank(self) -> int:
        return len(self.rows)


def solve_unique(equations: Iterable[tuple[Mapping, int | Fraction, object]]) -> dict:
    m = SparseRREF()
    for coeffs, const, tag in equations:
        m.add(coeffs, const, tag)
    return m.determined()
