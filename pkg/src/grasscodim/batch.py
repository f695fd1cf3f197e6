"""Vectorized Grassmann arithmetic over many substitutions at once.

A :class:`Batch` holds one element of E_N (N <= 63) per trial as two ``(T, K)``
arrays: blade masks (uint64) and field codes (0 marks an empty slot).  Every
operation returns a canonical batch: within each trial the live blades are
distinct and sorted by mask, padding sits at the end.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .gf import FieldSpec
from .grassmann import GrassmannElement

__all__ = ["Batch", "suffix_parity", "MAX_GENERATORS"]

MAX_GENERATORS = 63
_CHUNK = 1 << 22  # max entries of an outer product handled at once

_SHIFTS = [np.uint64(s) for s in (1, 2, 4, 8, 16, 32)]


def suffix_parity(masks: np.ndarray) -> np.ndarray:
    """Bit j of the result is the XOR of the bits of ``masks`` strictly above j."""
    out = masks >> _SHIFTS[0]
    for s in _SHIFTS:
        out = out ^ (out >> s)
    return out


_SENTINEL = np.uint64(0xFFFFFFFFFFFFFFFF)  # sorts after every real blade (N <= 63)


def _canonical_rows(field: FieldSpec, n: int, masks: np.ndarray, coeffs: np.ndarray) -> Batch:
    """Merge equal blades within each row and drop zero coefficients.

    Row i of ``masks``/``coeffs`` lists the (unsorted, possibly repeated) terms of
    trial i; the result has each row sorted by blade with distinct blades.
    """
    t, k = masks.shape
    if k == 0 or t == 0:
        return Batch(field, n, np.zeros((t, 0), np.uint64), np.zeros((t, 0), np.int64))
    masks = np.where(coeffs != 0, masks, _SENTINEL)
    order = np.argsort(masks, axis=1)
    m = np.take_along_axis(masks, order, axis=1)
    c = np.take_along_axis(coeffs, order, axis=1)
    new = np.empty((t, k), dtype=bool)
    new[:, 0] = True
    new[:, 1:] = m[:, 1:] != m[:, :-1]
    starts = np.flatnonzero(new.ravel())
    sums = field.vsum_groups(c.ravel(), starts)
    gm = m.ravel()[starts]
    rows = starts // k
    live = (sums != 0) & (gm != _SENTINEL)
    rows, gm, sums = rows[live], gm[live], sums[live]
    counts = np.bincount(rows, minlength=t)
    width = int(counts.max()) if rows.size else 0
    out_m = np.zeros((t, width), np.uint64)
    out_c = np.zeros((t, width), np.int64)
    if rows.size:
        offsets = np.cumsum(counts) - counts
        pos = np.arange(rows.size) - offsets[rows]
        out_m[rows, pos] = gm
        out_c[rows, pos] = sums
    return Batch(field, n, out_m, out_c)


def _compact(field: FieldSpec, n: int, masks: np.ndarray, coeffs: np.ndarray) -> Batch:
    """Drop zero terms row by row, keeping order; repeated blades are not merged."""
    live = coeffs != 0
    counts = live.sum(axis=1)
    width = int(counts.max()) if counts.size else 0
    t = masks.shape[0]
    out_m = np.zeros((t, width), np.uint64)
    out_c = np.zeros((t, width), np.int64)
    if width:
        pos = np.cumsum(live, axis=1) - 1
        rows, cols = np.nonzero(live)
        out_m[rows, pos[rows, cols]] = masks[rows, cols]
        out_c[rows, pos[rows, cols]] = coeffs[rows, cols]
    return Batch(field, n, out_m, out_c, merged=width <= 1)


def _canonical(field: FieldSpec, n: int, t: int, trials: np.ndarray, masks: np.ndarray,
               coeffs: np.ndarray) -> Batch:
    """Canonical batch from flat (trial, mask, code) triples."""
    keep = coeffs != 0
    trials, masks, coeffs = trials[keep], masks[keep], coeffs[keep]
    if trials.size == 0:
        return Batch(field, n, np.zeros((t, 0), np.uint64), np.zeros((t, 0), np.int64))
    order = np.argsort(trials, kind="stable")
    trials, masks, coeffs = trials[order], masks[order], coeffs[order]
    counts = np.bincount(trials, minlength=t)
    width = int(counts.max())
    offsets = np.cumsum(counts) - counts
    pos = np.arange(trials.size) - offsets[trials]
    m2 = np.zeros((t, width), np.uint64)
    c2 = np.zeros((t, width), np.int64)
    m2[trials, pos] = masks
    c2[trials, pos] = coeffs
    return _canonical_rows(field, n, m2, c2)


class Batch:
    """T elements of E_N stored row-wise: ``masks[i, j]`` with coefficient ``coeffs[i, j]``.

    A batch is canonical when each row holds distinct blades with nonzero codes,
    sorted by blade.  Products are left non-canonical (zero terms removed, equal
    blades possibly repeated) and merged on demand, since most of them feed
    straight into further products or sums.
    """

    __slots__ = ("field", "n", "masks", "coeffs", "merged")

    def __init__(self, field: FieldSpec, n: int, masks: np.ndarray, coeffs: np.ndarray,
                 merged: bool = True):
        if n > MAX_GENERATORS:
            raise ValueError(f"the vectorized kernel supports N <= {MAX_GENERATORS}")
        self.field = field
        self.n = n
        self.masks = masks
        self.coeffs = coeffs
        self.merged = merged

    def canonical(self) -> Batch:
        """Merge repeated blades in place (the represented elements do not change)."""
        if not self.merged:
            c = _canonical_rows(self.field, self.n, self.masks, self.coeffs)
            self.masks, self.coeffs, self.merged = c.masks, c.coeffs, True
        return self

    @property
    def trials(self) -> int:
        return self.masks.shape[0]

    @property
    def width(self) -> int:
        return self.masks.shape[1]

    # construction
    @classmethod
    def zeros(cls, field: FieldSpec, n: int, t: int) -> Batch:
        return cls(field, n, np.zeros((t, 0), np.uint64), np.zeros((t, 0), np.int64))

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, t: int, codes) -> Batch:
        c = np.broadcast_to(np.asarray(codes, dtype=np.int64), (t,)).copy()
        return cls.from_arrays(field, n, np.zeros((t, 1), np.uint64), c[:, None])

    @classmethod
    def from_arrays(cls, field: FieldSpec, n: int, masks: np.ndarray, coeffs: np.ndarray) -> Batch:
        return _canonical_rows(field, n, masks.astype(np.uint64), coeffs.astype(np.int64))

    @classmethod
    def from_elements(cls, elements: Sequence[GrassmannElement]) -> Batch:
        if not elements:
            raise ValueError("empty batch")
        field, n = elements[0].field, elements[0].n
        trials, masks, coeffs = [], [], []
        for i, e in enumerate(elements):
            if e.field != field or e.n != n:
                raise ValueError("elements live in different algebras")
            for m, c in e.terms.items():
                trials.append(i)
                masks.append(m)
                coeffs.append(c)
        return _canonical(field, n, len(elements), np.array(trials, np.int64),
                          np.array(masks, np.uint64), np.array(coeffs, np.int64))

    def element(self, i: int) -> GrassmannElement:
        self.canonical()
        row_m, row_c = self.masks[i], self.coeffs[i]
        live = row_c != 0
        return GrassmannElement(self.field, self.n,
                                {int(m): int(c) for m, c in zip(row_m[live], row_c[live])})

    def to_elements(self) -> list[GrassmannElement]:
        return [self.element(i) for i in range(self.trials)]

    def entries(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Flat (trial, mask, code) arrays of the live terms."""
        self.canonical()
        live = self.coeffs != 0
        t_idx = np.nonzero(live)[0]
        return t_idx, self.masks[live], self.coeffs[live]

    def _check(self, other: Batch) -> None:
        if other.field != self.field or other.n != self.n or other.trials != self.trials:
            raise ValueError("incompatible batches")

    # arithmetic
    def __add__(self, other: Batch) -> Batch:
        self._check(other)
        return Batch.sum([self, other])

    @staticmethod
    def sum(items: Sequence[Batch]) -> Batch:
        first = items[0]
        for b in items:
            first._check(b)
        return _canonical_rows(first.field, first.n,
                               np.concatenate([b.masks for b in items], axis=1),
                               np.concatenate([b.coeffs for b in items], axis=1))

    def __neg__(self) -> Batch:
        return Batch(self.field, self.n, self.masks, self.field.vneg(self.coeffs), self.merged)

    def __sub__(self, other: Batch) -> Batch:
        return self + (-other)

    def scale(self, codes) -> Batch:
        """Multiply trial i by the field code ``codes[i]`` (or one code for all)."""
        c = np.asarray(codes, dtype=np.int64)
        if c.ndim == 0:
            c = np.full(self.trials, int(c), np.int64)
        out = self.field.vmul(self.coeffs, c[:, None])
        if np.all(c != 0):
            # a nonzero scalar keeps every live term live and every blade distinct
            return Batch(self.field, self.n, self.masks, out, self.merged)
        return _canonical_rows(self.field, self.n, self.masks, out)

    def __mul__(self, other: Batch) -> Batch:
        self._check(other)
        # merged operands keep widths from compounding through chains of products
        self.canonical()
        other.canonical()
        t, ka, kb = self.trials, self.width, other.width
        if ka == 0 or kb == 0:
            return Batch.zeros(self.field, self.n, t)
        per = max(1, _CHUNK // (ka * kb))
        if t <= per:
            return self._mul_block(other, 0, t)
        pieces = [self._mul_block(other, s, min(t, s + per)) for s in range(0, t, per)]
        return Batch._stack(pieces)

    def _mul_block(self, other: Batch, lo: int, hi: int) -> Batch:
        f = self.field
        ma, ca = self.masks[lo:hi], self.coeffs[lo:hi]
        mb, cb = other.masks[lo:hi], other.coeffs[lo:hi]
        t = hi - lo
        pa = suffix_parity(ma)
        mm = ma[:, :, None] | mb[:, None, :]
        clash = (ma[:, :, None] & mb[:, None, :]) != 0
        odd = (np.bitwise_count(pa[:, :, None] & mb[:, None, :]) & 1).astype(bool)
        cc = f.vmul(ca[:, :, None], cb[:, None, :])
        cc = np.where(odd, f.vneg(cc), cc)
        cc = np.where(clash, 0, cc)
        return _compact(f, self.n, mm.reshape(t, -1), cc.reshape(t, -1))

    @staticmethod
    def _stack(pieces: Sequence[Batch]) -> Batch:
        width = max(p.width for p in pieces)
        ms, cs = [], []
        for p in pieces:
            pad = width - p.width
            ms.append(np.pad(p.masks, ((0, 0), (0, pad))))
            cs.append(np.pad(p.coeffs, ((0, 0), (0, pad))))
        first = pieces[0]
        return Batch(first.field, first.n, np.concatenate(ms), np.concatenate(cs),
                     all(p.merged for p in pieces))

    def __pow__(self, k: int) -> Batch:
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = Batch.scalar(self.field, self.n, self.trials, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def commutator(self, other: Batch) -> Batch:
        return self * other - other * self

    def is_zero(self) -> np.ndarray:
        """Boolean array: trial i holds the zero element."""
        self.canonical()
        return ~np.any(self.coeffs != 0, axis=1)

    def all_zero(self) -> bool:
        self.canonical()
        return not np.any(self.coeffs)

    def select(self, idx) -> Batch:
        """Sub-batch of the given trial indices (rows are already canonical)."""
        return Batch(self.field, self.n, self.masks[idx], self.coeffs[idx], self.merged)

    def __repr__(self) -> str:
        return f"Batch(T={self.trials}, K={self.width}, N={self.n}, {self.field!r})"
