"""Large integer linear systems handed to FLINT.

Rows are sparse dicts ``{column: int}``.  FLINT stores them densely but its
fraction-free elimination is exact and fast on the very sparse, small-entry
matrices produced by the graded derivation computations.
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

import flint

SparseRow = dict[int, int]


def to_fmpz(rows: Sequence[SparseRow], ncols: int) -> flint.fmpz_mat:
    flat = [0] * (len(rows) * ncols)
    for i, row in enumerate(rows):
        base = i * ncols
        for c, v in row.items():
            flat[base + c] = v
    return flint.fmpz_mat(len(rows), ncols, flat)


def int_rank(rows: Sequence[SparseRow], ncols: int) -> int:
    rows = [r for r in rows if r]
    if not rows or ncols == 0:
        return 0
    return to_fmpz(rows, ncols).rank()


class Echelon:
    """Exact reduced row echelon form ``R / den`` of an integer matrix."""

    def __init__(self, rows: Sequence[SparseRow], ncols: int):
        rows = [r for r in rows if r]
        self.ncols = ncols
        if rows and ncols:
            r_mat, den, rk = to_fmpz(rows, ncols).rref()
            self.den = int(den)
            self.table = r_mat.tolist()[:rk]
        else:
            self.den = 1
            self.table = []
        self.rank = len(self.table)
        self.pivots = [next(j for j, v in enumerate(row) if v) for row in self.table]
        pivset = set(self.pivots)
        self.free = [j for j in range(ncols) if j not in pivset]

    def kernel_vector(self, f: int) -> list[int]:
        """Kernel vector with entry ``den`` at free column ``f``, zero at the other free columns."""
        v = [0] * self.ncols
        v[f] = self.den
        for row, c in zip(self.table, self.pivots):
            v[c] = -int(row[f])
        return primitive(v)

    def kernel(self) -> list[list[int]]:
        return [self.kernel_vector(f) for f in self.free]


def primitive(v: list[int]) -> list[int]:
    g = 0
    for x in v:
        if x:
            g = gcd(g, x)
    if g > 1:
        v = [x // g for x in v]
    # first nonzero entry positive, for reproducible output
    lead = next((x for x in v if x), 0)
    if lead < 0:
        v = [-x for x in v]
    return v


def dense_to_sparse(v: Sequence[int]) -> SparseRow:
    return {i: x for i, x in enumerate(v) if x}


def non_pivot_columns(rows: Sequence[SparseRow], ncols: int) -> list[int]:
    """Columns completing the row space of ``rows`` to the full space."""
    return Echelon(rows, ncols).free
