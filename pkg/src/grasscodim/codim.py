"""Multihomogeneous bases of the relatively free algebra, exact codimensions,
rank certificates and the bounds for the spaces W(n)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .batch import MAX_GENERATORS
from .counting import CountParams, c_circ, c_family, c_star
from .freealg import Multidegree, Variable, y, z
from .gf import FieldSpec, make_field
from .grassmann import GradingSpec
from .oracle import RankCertificate, TermEvaluator, rank_run
from .structure import (PPolyMonomial, PrTerm, enumerate_family_md,
                        enumerate_pr, enumerate_pr_md, multidegrees)

__all__ = [
    "MultifreeBasis",
    "multifree_basis",
    "compositions_box",
    "admissible_multidegrees",
    "default_truncation",
    "default_samples",
    "oracle_dim",
    "oracle_bidegree",
    "independence_certificate",
    "exact_codim",
    "codim_report",
    "w_bounds",
    "formula_ledger",
]


@dataclass(frozen=True)
class MultifreeBasis:
    multidegree: Multidegree
    grading: GradingSpec
    p: int
    q: int
    elements: tuple[tuple[PPolyMonomial, PrTerm], ...]
    mode: str = "psi"

    def __len__(self) -> int:
        return len(self.elements)

    def labels(self) -> list[str]:
        out = []
        for f, u in self.elements:
            fs, us = str(f), str(u)
            out.append(us if fs == "1" else (fs if us == "1" else f"{fs}*{us}"))
        return out


def multifree_basis(md: Multidegree, spec: GradingSpec, p: int, q: int,
                    mode: str = "psi") -> MultifreeBasis:
    """Products f*u of multidegree ``md``: f a p-polynomial monomial, u in the grading's family."""
    fam = spec.family
    out = []
    for s in compositions_box(md.a, p, q):
        f = PPolyMonomial(tuple(p * si for si in s))
        rest = Multidegree(tuple(a - p * si for a, si in zip(md.a, s)), md.b)
        for u in enumerate_family_md(fam, rest, p, spec.k, mode):
            out.append((f, u))
    return MultifreeBasis(md, spec, p, q, tuple(out), mode)


def compositions_box(a: tuple[int, ...], p: int, q: int) -> list[tuple[int, ...]]:
    """All s with 0 <= s_i <= q-1 and p*s_i <= a_i."""
    out: list[tuple[int, ...]] = [()]
    for ai in a:
        out = [t + (si,) for t in out for si in range(min(q - 1, ai // p) + 1)]
    return out


def admissible_multidegrees(l: int, m: int, p: int, q: int) -> Iterable[Multidegree]:  # noqa: E741
    """Multidegrees with y-degrees below pq and z-degrees at most p."""
    import itertools

    for a in itertools.product(range(p * q), repeat=l):
        for b in itertools.product(range(p + 1), repeat=m):
            yield Multidegree(a, b)


def default_truncation(l: int, m: int, p: int, q: int, k: int = 0) -> int:  # noqa: E741
    """2(pql + pm) + k + 4, capped so that the N+4 re-check fits the 63-generator kernel."""
    return min(2 * (p * q * l + p * m) + k + 4, MAX_GENERATORS - 4)


def default_samples(predicted: int) -> int:
    return max(32, 8 * predicted)


def _terms_for(md: Multidegree) -> dict[Variable, int]:
    return {v: md.degree_of(v) + 1 for v in md.variables() if md.degree_of(v) > 0}


def _certify(label: str, variables: list[Variable], terms: dict[Variable, int], build,
             n_basis: int, n_columns: int, spec: GradingSpec, field: FieldSpec, n: int,
             samples: int, seed: int, target: int | None = None) -> RankCertificate:
    r1 = rank_run(variables, terms, build, n_basis, n_columns, spec, field, n, samples, seed,
                  target=target)
    r2 = rank_run(variables, terms, build, n_basis, n_columns, spec, field, n + 4, samples, seed,
                  target=target)
    stable = (r1.rank_basis, r1.rank_all) == (r2.rank_basis, r2.rank_all)
    if r1.rank_basis < n_basis:
        gap = "rank below predicted"
    elif r1.rank_all > r1.rank_basis:
        gap = "augmented rank above predicted"
    else:
        gap = "none"
    return RankCertificate(space_label=label, predicted=n_basis, rank=r1.rank_basis,
                           rank_augmented=r1.rank_all, augmented_columns=n_columns - n_basis,
                           N=n, samples=r1.samples, seed=seed, stable=stable,
                           saturated_at=r1.saturated_at, rank_at_N_plus_4=r2.rank_basis,
                           rank_augmented_at_N_plus_4=r2.rank_all, gap=gap)


def _field(q: int, p: int) -> FieldSpec:
    m = 0
    qq = q
    while qq > 1:
        qq //= p
        m += 1
    return make_field(p, m)


def oracle_dim(md: Multidegree, spec: GradingSpec, p: int, q: int, n: int | None = None,
               samples: int | None = None, seed: int = 0, augment: bool = True,
               mode: str = "psi") -> RankCertificate:
    """Rank certificate of the basis of ``md``, augmented by the other Pr(X) terms of ``md``."""
    basis = multifree_basis(md, spec, p, q, mode)
    extra = []
    if augment:
        plain = {u for f, u in basis.elements if not any(f.exps)}
        extra = [u for u in enumerate_pr_md(md) if u not in plain]
    field = _field(q, p)
    if n is None:
        n = default_truncation(md.l, md.m, p, q, spec.kk)
    if samples is None:
        samples = default_samples(len(basis))
    elements = basis.elements

    def build(ev: TermEvaluator):
        return [ev.pair(f, u) for f, u in elements] + [ev.term(u) for u in extra]

    variables = md.variables()
    return _certify(f"{spec.label}:{md}", variables, _terms_for(md), build, len(elements),
                    len(elements) + len(extra), spec, field, n, samples, seed)


def independence_certificate(basis: MultifreeBasis, n: int | None = None,
                             samples: int | None = None, seed: int = 0) -> RankCertificate:
    """Rank of the basis columns alone (no augmentation)."""
    md = basis.multidegree
    field = _field(basis.q, basis.p)
    if n is None:
        n = default_truncation(md.l, md.m, basis.p, basis.q, basis.grading.kk)
    if samples is None:
        samples = default_samples(len(basis))
    elements = basis.elements

    def build(ev: TermEvaluator):
        return [ev.pair(f, u) for f, u in elements]

    return _certify(f"{basis.grading.label}:{md}:independence", md.variables(), _terms_for(md),
                    build, len(elements), len(elements), basis.grading, field, n, samples, seed)


def oracle_bidegree(n1: int, n2: int, l: int, m: int, spec: GradingSpec, p: int, q: int,  # noqa: E741
                    n: int | None = None, samples: int | None = None, seed: int = 0,
                    predicted: int | None = None) -> RankCertificate:
    """Rank of the whole bidegree-(n1, n2) space spanned by words in y1..yl, z1..zm.

    The Pr(X) terms of that bidegree span it modulo [x1, x2, x3], an identity of
    every grading, so they serve as columns.
    """
    cols = enumerate_pr((n1, n2), l, m)
    field = _field(q, p)
    if n is None:
        n = default_truncation(l, m, p, q, spec.kk)
    if predicted is None:
        predicted = exact_codim(n1, n2, spec, CountParams(p, q, l, m, spec.k))
    if samples is None:
        samples = default_samples(max(predicted, 1))
    variables = [y(i + 1) for i in range(l)] + [z(j + 1) for j in range(m)]
    terms = {v: (n1 if v.sort == "y" else n2) + 1 for v in variables}

    def build(ev: TermEvaluator):
        return [ev.term(u) for u in cols]

    cert = _certify(f"{spec.label}:bidegree({n1},{n2}):l={l},m={m}", variables, terms, build,
                    len(cols), len(cols), spec, field, n, samples, seed, target=predicted)
    cert.predicted = predicted
    cert.gap = ("none" if cert.rank == predicted else
                "rank below predicted" if cert.rank < predicted else "rank above predicted")
    return cert


def exact_codim(n1: int, n2: int, spec: GradingSpec, params: CountParams,
                reading: str = "enumeration") -> int:
    """Codimension of the multihomogeneous polynomials of bidegree (n1, n2)."""
    pr = CountParams(params.p, params.q, params.l, params.m, spec.k, n1, n2, params.mode)
    return c_star(spec.family, pr, reading)


def codim_report(n1: int, n2: int, spec: GradingSpec, params: CountParams) -> dict:
    """Exact codimension two ways: the c* aggregate and the sum of basis sizes."""
    pr = CountParams(params.p, params.q, params.l, params.m, spec.k, n1, n2, params.mode)
    per_md = {}
    for md in multidegrees(n1, n2, params.l, params.m):
        size = len(multifree_basis(md, spec, params.p, params.q, params.mode))
        if size:
            per_md[str(md)] = size
    return {
        "grading": spec.label,
        "family": spec.family,
        "n1": n1,
        "n2": n2,
        "exact": c_star(spec.family, pr, "enumeration"),
        "sum_of_bases": sum(per_md.values()),
        "formula_reading": c_star(spec.family, pr, "formula"),
        "per_multidegree": per_md,
    }


def w_bounds(n: int, n1: int, n2: int, spec: GradingSpec, params: CountParams,
             reading: str = "enumeration", ppoly: str = "polynomial") -> tuple[int, int]:
    """(lower, upper) bounds for the bidegree-(n1, n2) part of W(n): c_family and c_circ."""
    if n1 + n2 != n:
        raise ValueError("n1 + n2 must equal n")
    pr = CountParams(params.p, params.q, params.l, params.m, spec.k, n1, n2, params.mode)
    return c_family(spec.family, pr, reading), c_circ(spec.family, pr, reading, ppoly)


def formula_ledger(families: Iterable[str], p: int, q: int, ls: Iterable[int],
                   ms: Iterable[int], ks: Iterable[int], max_total: int,
                   mode: str = "psi") -> list[dict]:
    """Every bidegree where the closed-form family count differs from enumeration."""
    out = []
    ks = list(ks)
    for fam in families:
        for l in ls:  # noqa: E741
            for m in ms:
                for k in (ks if fam in ("SS1", "SS2", "SS3") else [None]):
                    for n1 in range(max_total + 1):
                        for n2 in range(max_total + 1 - n1):
                            pr = CountParams(p, q, l, m, k, n1, n2, mode)
                            fv = c_family(fam, pr, "formula")
                            ev = c_family(fam, pr, "enumeration")
                            if fv != ev:
                                out.append({"family": fam, "p": p, "q": q, "l": l, "m": m,
                                            "k": k, "n1": n1, "n2": n2, "formula": fv,
                                            "enumeration": ev})
    return out

