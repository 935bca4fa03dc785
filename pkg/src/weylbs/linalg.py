"""Sparse exact linear algebra over Q."""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Optional, Sequence


class SparseSolver:
    """Incremental Gaussian elimination on rows {column: value} = rhs.

    Rows are reduced against the pivots seen so far; each new pivot is the
    smallest surviving column.  Free columns are set to zero in ``solution``,
    which makes the returned particular solution deterministic.
    """

    def __init__(self):
        self.pivots: dict[int, tuple[dict[int, Fraction], Fraction]] = {}
        self.order: list[int] = []
        self.consistent = True

    def add_row(self, row: dict[int, Fraction], rhs=0) -> None:
        row = {c: Fraction(v) for c, v in row.items() if v}
        rhs = Fraction(rhs)
        changed = True
        while changed and row:
            changed = False
            for c in sorted(row):
                piv = self.pivots.get(c)
                if piv is None:
                    continue
                factor = row[c]
                prow, prhs = piv
                for k, v in prow.items():
                    nv = row.get(k, 0) - factor * v
                    if nv:
                        row[k] = nv
                    else:
                        row.pop(k, None)
                rhs -= factor * prhs
                changed = True
                break
        if not row:
            if rhs:
                self.consistent = False
            return
        col = min(row)
        inv = 1 / row[col]
        row = {k: v * inv for k, v in row.items()}
        self.pivots[col] = (row, rhs * inv)
        self.order.append(col)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def solution(self, ncols: int) -> Optional[list[Fraction]]:
        if not self.consistent:
            return None
        x = [Fraction(0)] * ncols
        for col in reversed(self.order):
            row, rhs = self.pivots[col]
            x[col] = rhs - sum(v * x[k] for k, v in row.items() if k != col)
        return x


def solve(rows: Iterable[dict[int, object]], rhs: Iterable[object], ncols: int) -> Optional[list[Fraction]]:
    s = SparseSolver()
    for r, b in zip(rows, rhs):
        s.add_row(r, b)
        if not s.consistent:
            return None
    return s.solution(ncols)


def rank(matrix: Sequence[Sequence[object]]) -> int:
    s = SparseSolver()
    for r in matrix:
        s.add_row({j: v for j, v in enumerate(r) if v})
    return s.rank
