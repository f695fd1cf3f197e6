"""Gaussian elimination over GF(q) with first-nonzero pivoting."""

from __future__ import annotations

import numpy as np

from .gf import FieldSpec

__all__ = ["row_reduce", "rank", "EchelonBasis", "solve"]


def row_reduce(mat: np.ndarray, field: FieldSpec) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and pivot columns.

    Columns are scanned left to right; the pivot of each column is the first
    remaining row with a nonzero entry.
    """
    a = np.array(mat, dtype=np.int64, copy=True)
    rows, cols = a.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(a[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        inv = field.inv(int(a[r, c]))
        if inv != 1:
            a[r] = field.vmul(a[r], np.int64(inv))
        col = a[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            a[hit] = field.vsub(a[hit], field.vmul(col[hit][:, None], a[r][None, :]))
        pivots.append(c)
        r += 1
    return a[:r], pivots


def rank(mat: np.ndarray, field: FieldSpec) -> int:
    return len(row_reduce(mat, field)[1])


class EchelonBasis:
    """Row space of a growing matrix, kept in reduced echelon form.

    Feeding rows in chunks gives the same pivots as one elimination of the whole
    matrix, because the pivot columns of the row space do not depend on row order.
    """

    def __init__(self, ncols: int, field: FieldSpec):
        self.field = field
        self.ncols = ncols
        self.rows = np.zeros((0, ncols), np.int64)
        self.pivots: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def add_rows(self, block: np.ndarray) -> int:
        """Add rows; returns the rank increase."""
        if block.size == 0 or self.rank == self.ncols:
            return 0
        block = np.asarray(block, dtype=np.int64)
        block = block[np.any(block != 0, axis=1)]
        if block.shape[0] == 0:
            return 0
        f = self.field
        if self.pivots:
            coef = block[:, self.pivots]
            # subtract the combination of basis rows that clears the pivot columns
            for i, _ in enumerate(self.pivots):
                ci = coef[:, i]
                hit = np.flatnonzero(ci)
                if hit.size:
                    block[hit] = f.vsub(block[hit], f.vmul(ci[hit][:, None], self.rows[i][None, :]))
            block = block[np.any(block != 0, axis=1)]
            if block.shape[0] == 0:
                return 0
        before = self.rank
        stacked = np.concatenate([self.rows, block])
        self.rows, self.pivots = row_reduce(stacked, f)
        return self.rank - before


def solve(a: np.ndarray, b: np.ndarray, field: FieldSpec) -> np.ndarray | None:
    """A solution x of a x = b (free variables set to 0), or None if inconsistent."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64).reshape(-1, 1)
    red, piv = row_reduce(np.concatenate([a, b], axis=1), field)
    n = a.shape[1]
    if piv and piv[-1] == n:
        return None
    x = np.zeros(n, np.int64)
    for row, c in enumerate(piv):
        x[c] = red[row, n]
    return x
