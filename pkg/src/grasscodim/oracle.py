"""Evaluation-rank oracle: evaluate spanning sets on random substitutions into E_N
and measure the rank of the resulting coordinate matrix over GF(q)."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field as dc_field
from typing import Callable, Mapping, Sequence

import numpy as np

from .batch import Batch
from .freealg import FreePolynomial, Variable, evaluate_batch
from .gf import FieldSpec
from .grassmann import GradingSpec
from .linalg import EchelonBasis
from .sampling import derive_seed, disjoint_images
from .structure import PPolyMonomial, PrTerm

__all__ = [
    "TermEvaluator",
    "coordinate_matrix",
    "RankRun",
    "rank_run",
    "RankCertificate",
]


class TermEvaluator:
    """Evaluates p-polynomial monomials, Pr(X) terms and polynomials on fixed images,
    sharing powers, power products and commutators between calls."""

    def __init__(self, images: Mapping[Variable, Batch]):
        self.images = dict(images)
        first = next(iter(self.images.values()))
        self.field, self.n, self.trials = first.field, first.n, first.trials
        self._one = Batch.scalar(self.field, self.n, self.trials, 1)
        self._pow: dict[tuple[Variable, int], Batch] = {}
        self._beg: dict[tuple, Batch] = {}
        self._comm: dict[tuple[Variable, Variable], Batch] = {}

    def power(self, v: Variable, e: int) -> Batch:
        if e == 0:
            return self._one
        key = (v, e)
        if key not in self._pow:
            self._pow[key] = self.power(v, e - 1) * self.images[v]
        return self._pow[key]

    def power_product(self, factors: tuple[tuple[Variable, int], ...]) -> Batch:
        factors = tuple((v, e) for v, e in factors if e)
        if not factors:
            return self._one
        if factors not in self._beg:
            head = self.power_product(factors[:-1])
            v, e = factors[-1]
            self._beg[factors] = head * self.power(v, e)
        return self._beg[factors]

    def comm(self, a: Variable, b: Variable) -> Batch:
        key = (a, b)
        if key not in self._comm:
            ia, ib = self.images[a], self.images[b]
            self._comm[key] = ia * ib - ib * ia
        return self._comm[key]

    def term(self, u: PrTerm) -> Batch:
        out = self.power_product(tuple((v, u.beg_deg(v)) for v in u.variables()))
        for i in range(0, len(u.psi), 2):
            if not out.width:
                break
            out = out * self.comm(u.psi[i], u.psi[i + 1])
        return out

    def ppoly(self, f: PPolyMonomial) -> Batch:
        return self.power_product(tuple((Variable("y", i + 1), e) for i, e in enumerate(f.exps)))

    def pair(self, f: PPolyMonomial, u: PrTerm) -> Batch:
        return self.ppoly(f) * self.term(u)

    def poly(self, g: FreePolynomial) -> Batch:
        return evaluate_batch(g, self.images)


def coordinate_matrix(columns: Sequence[Batch]) -> np.ndarray:
    """Rows indexed by (trial, blade), one column per batch, entries = field codes."""
    ts, ms, cs, ks = [], [], [], []
    for k, col in enumerate(columns):
        t, m, c = col.entries()
        ts.append(t)
        ms.append(m)
        cs.append(c)
        ks.append(np.full(t.size, k, np.int64))
    if not columns:
        return np.zeros((0, 0), np.int64)
    t = np.concatenate(ts)
    m = np.concatenate(ms)
    c = np.concatenate(cs)
    k = np.concatenate(ks)
    if t.size == 0:
        return np.zeros((0, len(columns)), np.int64)
    order = np.lexsort((m, t))
    t, m, c, k = t[order], m[order], c[order], k[order]
    new = np.empty(t.size, bool)
    new[0] = True
    new[1:] = (t[1:] != t[:-1]) | (m[1:] != m[:-1])
    row = np.cumsum(new) - 1
    out = np.zeros((int(row[-1]) + 1, len(columns)), np.int64)
    out[row, k] = c
    return out


@dataclass
class RankRun:
    """Outcome of one sampling run: rank of the leading ``n_basis`` columns and of all columns."""

    n: int
    samples: int
    seed: int
    n_basis: int
    n_columns: int
    rank_basis: int
    rank_all: int
    saturated_at: int
    rows: int


def rank_run(variables: Sequence[Variable], terms: Mapping[Variable, int],
             build: Callable[[TermEvaluator], list[Batch]], n_basis: int, n_columns: int,
             spec: GradingSpec, field: FieldSpec, n: int, samples: int, seed: int,
             chunk: int = 8, max_len: int = 3, max_factor: int = 8,
             target: int | None = None) -> RankRun:
    """Evaluate the columns produced by ``build`` on disjoint-blade substitutions.

    At least ``samples`` substitutions are used; sampling then continues until the
    ranks have been unchanged for as many samples as it took to reach them, up to
    ``max_factor * samples``.  Once every column is independent the rank cannot grow,
    so sampling stops there.  ``saturated_at`` is the number of samples after which
    the final ranks were reached.
    """
    eb = EchelonBasis(n_columns, field)
    done = 0
    sat = 0
    rows = 0
    last = (0, 0)
    limit = max_factor * samples
    goal = n_basis if target is None else min(target, n_basis)
    while done < samples or (done < limit and (last[0] < goal or done < 2 * sat)):
        t = chunk if done >= samples else min(chunk, samples - done)
        rng = np.random.default_rng(derive_seed(seed, n, done))
        imgs = disjoint_images(variables, terms, spec, field, n, t, rng, max_len=max_len)
        cols = build(TermEvaluator(imgs))
        mat = coordinate_matrix(cols)
        rows += mat.shape[0]
        eb.add_rows(mat)
        done += t
        cur = (sum(1 for c in eb.pivots if c < n_basis), eb.rank)
        if cur != last:
            sat = done
            last = cur
        if eb.rank == n_columns:
            break
    return RankRun(n=n, samples=done, seed=seed, n_basis=n_basis, n_columns=n_columns,
                   rank_basis=last[0], rank_all=last[1], saturated_at=sat, rows=rows)


@dataclass
class RankCertificate:
    space_label: str
    predicted: int
    rank: int
    rank_augmented: int
    augmented_columns: int
    N: int
    samples: int
    seed: int
    stable: bool
    saturated_at: int
    rank_at_N_plus_4: int
    rank_augmented_at_N_plus_4: int
    gap: str = dc_field(default="none")

    @property
    def independent(self) -> bool:
        return self.rank == self.predicted

    @property
    def spanning(self) -> bool:
        return self.rank_augmented == self.rank

    @property
    def ok(self) -> bool:
        return self.independent and self.spanning and self.stable

    def to_dict(self) -> dict:
        d = asdict(self)
        d.update(independent=self.independent, spanning=self.spanning, ok=self.ok)
        return d
