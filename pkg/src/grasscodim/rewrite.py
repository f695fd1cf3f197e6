"""Normal forms: Pr(X) coordinates modulo [x1, x2, x3] and reduction to sums f*u.

``to_pr`` multiplies words into Pr(X) terms letter by letter.  Because
commutators are central modulo [x1, x2, x3], moving a letter x leftwards past a
block B of larger variables costs one commutator per letter of B:

    B x = x B + sum_w Deg_w(B) (B / w) [w, x].

Products of commutators are totally antisymmetric in their flattened entries
(from [x1,x2][x3,x4] + [x1,x3][x2,x4] = 0 and antisymmetry of each bracket), so
the tail is stored sorted with the sign of the sorting permutation, and a
repeated entry kills the term.

``normal_form`` then applies the identities of the chosen grading.  For
Canonical, Infinity and KStar(k) the reduction is symbolic.  For K(k) each
multidegree is solved against the evaluation matrix of its basis.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from typing import Mapping

import numpy as np

from .codim import default_samples, default_truncation, multifree_basis
from .freealg import FreePolynomial, Multidegree, Variable, evaluate_batch, y, z
from .gf import FieldElement, FieldSpec
from .grassmann import GradingSpec
from .linalg import rank as matrix_rank, solve
from .oracle import TermEvaluator, coordinate_matrix
from .sampling import derive_seed, disjoint_images, uniform_images
from .structure import PPolyMonomial, PrTerm, is_member, ss_key

__all__ = [
    "PrCombination",
    "to_pr",
    "pr_to_polynomial",
    "NormalForm",
    "normal_form",
    "residual_check",
    "check_family",
]

PrCombination = dict  # dict[PrTerm, int]: Pr(X) term -> nonzero field code


def _insert_pair(psi: tuple[Variable, ...], a: Variable, b: Variable) -> tuple[int, tuple | None]:
    """Sort ``psi + (a, b)``; returns (sign, sorted tail) or (0, None) on a repeat."""
    seq = list(psi) + [a, b]
    if len(set(seq)) < len(seq):
        return 0, None
    # parity of the sorting permutation; only the two new entries are out of place
    inv = sum(1 for v in psi if v > a) + sum(1 for v in psi if v > b) + (1 if a > b else 0)
    return (-1 if inv % 2 else 1), tuple(sorted(seq))


def _index(v: Variable, l: int) -> int:  # noqa: E741
    return v.index - 1 if v.sort == "y" else l + v.index - 1


def _mul_letter(state: dict, x: Variable, field: FieldSpec, l: int, m: int) -> dict:  # noqa: E741
    """Right-multiply every term of ``state`` (keys: (beg vector, psi)) by ``x``."""
    out: dict = {}
    ix = _index(x, l)

    def put(key, c):
        nc = field.add(out.get(key, 0), c)
        if nc:
            out[key] = nc
        else:
            out.pop(key, None)

    for (beg, psi), c in state.items():
        base = list(beg)
        base[ix] += 1
        put((tuple(base), psi), c)
        for iw in range(ix + 1, l + m):
            e = beg[iw]
            if not e:
                continue
            w = y(iw + 1) if iw < l else z(iw - l + 1)
            # [w, x] = -[x, w]
            sign, tail = _insert_pair(psi, x, w)
            if not sign:
                continue
            nb = list(beg)
            nb[iw] -= 1
            coef = field.mul(c, field.scalar(-e * sign))
            if coef:
                put((tuple(nb), tail), coef)
    return out


def to_pr(f: FreePolynomial, l: int | None = None, m: int | None = None) -> PrCombination:  # noqa: E741
    """Coordinates of ``f`` in the Pr(X) spanning set modulo [x1, x2, x3]."""
    fl, fm = f.dims()
    l = fl if l is None else l  # noqa: E741
    m = fm if m is None else m
    if fl > l or fm > m:
        raise ValueError("polynomial uses variables outside y1..yl, z1..zm")
    field = f.field
    total: dict = {}
    for w, c in f.terms.items():
        state = {((0,) * (l + m), ()): c}
        for x in w:
            state = _mul_letter(state, x, field, l, m)
            if not state:
                break
        for key, cc in state.items():
            nc = field.add(total.get(key, 0), cc)
            if nc:
                total[key] = nc
            else:
                total.pop(key, None)
    return {PrTerm(beg[:l], beg[l:], psi): c for (beg, psi), c in total.items()}


def pr_to_polynomial(comb: Mapping[PrTerm, int], field: FieldSpec) -> FreePolynomial:
    out = FreePolynomial.zero(field)
    for u, c in comb.items():
        out = out + u.to_polynomial(field).scale(FieldElement(field, c))
    return out


# -- normal forms -----------------------------------------------------------------------

@dataclass
class NormalForm:
    """sum of coeff * f * u with f a p-polynomial monomial and u in the grading's family."""

    grading: GradingSpec
    field: FieldSpec
    summands: list[tuple[PPolyMonomial, PrTerm, int]]
    deficits: dict[str, tuple[int, int]] = dc_field(default_factory=dict)

    def __post_init__(self) -> None:
        self.summands = sorted(self.summands, key=lambda s: (ss_key(s[1]), s[0].exps))

    def is_zero(self) -> bool:
        return not self.summands

    def coordinates(self) -> dict[tuple[PPolyMonomial, PrTerm], int]:
        return {(f, u): c for f, u, c in self.summands}

    def to_polynomial(self) -> FreePolynomial:
        out = FreePolynomial.zero(self.field)
        for f, u, c in self.summands:
            term = f.to_polynomial(self.field) * u.to_polynomial(self.field)
            out = out + term.scale(FieldElement(self.field, c))
        return out

    def _coeff_text(self, c: int) -> str:
        s = self.field.to_signed_int(c)
        return str(s) if s is not None else "#" + self.field.to_str(c)

    def __str__(self) -> str:
        if not self.summands:
            return "0"
        parts = []
        for f, u, c in self.summands:
            fs, us = str(f), str(u)
            body = us if fs == "1" else (fs if us == "1" else f"{fs}*{us}")
            parts.append(f"{self._coeff_text(c)} * {body}")
        return " + ".join(parts)

    def to_json_obj(self) -> list[dict]:
        return [{"ppoly": list(f.exps), "term": str(u), "coeff": self.field.to_str(c)}
                for f, u, c in self.summands]

    def to_json(self) -> str:
        return json.dumps(self.to_json_obj())


def _add(acc: dict, key, c: int, field: FieldSpec) -> None:
    nc = field.add(acc.get(key, 0), c)
    if nc:
        acc[key] = nc
    else:
        acc.pop(key, None)


def _split_y(e: int, p: int, q: int) -> tuple[int, int]:
    """y^e = y^(p*s) * y^r modulo y^(pq) - y^p, with s <= q-1 and r <= p-1."""
    while e >= p * q:
        e -= p * (q - 1)
    return p * (e // p), e % p


def _common_reduce(u: PrTerm, p: int, q: int) -> tuple[PPolyMonomial, PrTerm] | None:
    """Identities shared by all gradings: z^p = 0, y^(pq) = y^p, y^p central."""
    if any(b >= p for b in u.beg_z):
        return None
    f, rest = [], []
    for e in u.beg_y:
        s, r = _split_y(e, p, q)
        f.append(s)
        rest.append(r)
    return PPolyMonomial(tuple(f)), PrTerm(tuple(rest), u.beg_z, u.psi)


def _canonical_collapse(u: PrTerm, field: FieldSpec) -> tuple[int, PrTerm] | None:
    """y's central, z's anticommuting: [y, x] = 0, [z_i, z_j] = 2 z_i z_j, z^2 = 0."""
    if any(v.sort == "y" for v in u.psi):
        return None
    if any(b > 1 for b in u.beg_z):
        return None
    seq = [z(j + 1) for j, b in enumerate(u.beg_z) if b] + list(u.psi)
    if len(set(seq)) < len(seq):
        return None
    inv = sum(1 for i in range(len(seq)) for j in range(i + 1, len(seq)) if seq[i] > seq[j])
    coef = field.scalar((-1 if inv % 2 else 1) * 2 ** (len(u.psi) // 2))
    bz = tuple(1 if z(j + 1) in seq else 0 for j in range(u.m))
    return coef, PrTerm(u.beg_y, bz, ())


def _pair_multidegree(f: PPolyMonomial, u: PrTerm) -> Multidegree:
    md = u.multidegree
    return Multidegree(tuple(a + e for a, e in zip(md.a, f.exps)), md.b)


@dataclass
class _Solver:
    """Evaluation matrix of the basis of one multidegree, kept for repeated solves."""

    elements: tuple
    evaluators: list
    rank: int


@lru_cache(maxsize=None)
def _solver(md: Multidegree, spec: GradingSpec, p: int, q: int, field: FieldSpec,
            n: int, seed: int) -> _Solver:
    basis = multifree_basis(md, spec, p, q)
    elements = basis.elements
    variables = md.variables()
    terms = {v: md.degree_of(v) + 1 for v in variables if md.degree_of(v) > 0}
    size = default_samples(len(elements))
    evaluators: list[TermEvaluator] = []
    blocks: list[np.ndarray] = []
    last = -1
    for rnd in range(8):
        rng = np.random.default_rng(derive_seed(seed, "nf", spec.label, str(md), rnd))
        ev = TermEvaluator(disjoint_images(variables, terms, spec, field, n, size, rng))
        evaluators.append(ev)
        blocks.append(coordinate_matrix([ev.pair(f, u) for f, u in elements]))
        r = matrix_rank(np.concatenate(blocks), field)
        if r == last or r == len(elements):
            last = r
            break
        last = r
    return _Solver(elements, evaluators, last)


def _solve_md(md: Multidegree, target: dict, spec: GradingSpec, field: FieldSpec, p: int,
              q: int, n: int, seed: int) -> tuple[dict, tuple[int, int]]:
    """Coordinates of ``sum c f u`` against the basis of ``md`` (pivot columns only)."""
    if md.total == 0:
        # constants: the unit term is its own normal form
        return dict(target), (1, 1)
    sv = _solver(md, spec, p, q, field, n, seed)
    mats = []
    for ev in sv.evaluators:
        cols = [ev.pair(f, u) for f, u in sv.elements]
        t = None
        for (f, u), c in target.items():
            piece = ev.pair(f, u).scale(c)
            t = piece if t is None else t + piece
        mats.append(coordinate_matrix(cols + [t]))
    mat = np.concatenate([mm for mm in mats if mm.size] or [np.zeros((0, len(sv.elements) + 1),
                                                                      np.int64)])
    a, b = mat[:, :-1], mat[:, -1]
    if not sv.elements:
        # nothing survives in this multidegree; the target must evaluate to zero
        if np.any(b):
            raise RuntimeError(f"{md}: target is nonzero but the basis is empty")
        return {}, (0, 0)
    x = solve(a, b, field)
    if x is None:
        raise RuntimeError(f"{md}: target outside the span of the basis evaluations; "
                           "retry with a larger truncation")
    out = {sv.elements[i]: int(c) for i, c in enumerate(x) if c}
    return out, (len(sv.elements), sv.rank)


def normal_form(f: FreePolynomial, spec: GradingSpec, l: int | None = None,  # noqa: E741
                m: int | None = None, n: int | None = None, seed: int = 0) -> NormalForm:
    """Write ``f`` modulo the graded identities of E as sum c * f_i * u_i."""
    field = f.field
    p, q = field.p, field.q
    comb = to_pr(f, l, m)
    acc: dict = {}
    for u, c in comb.items():
        red = _common_reduce(u, p, q)
        if red is None:
            continue
        fp, v = red
        if spec.kind == "can":
            col = _canonical_collapse(v, field)
            if col is None:
                continue
            coef, v = col
            c = field.mul(c, coef)
        elif spec.kind == "kstar" and v.deg_z > spec.k:
            continue
        _add(acc, (fp, v), c, field)
    deficits: dict[str, tuple[int, int]] = {}
    if spec.kind == "k":
        groups: dict[Multidegree, dict] = {}
        for (fp, v), c in acc.items():
            groups.setdefault(_pair_multidegree(fp, v), {})[(fp, v)] = c
        acc = {}
        lf, mf = (next(iter(comb)).l, next(iter(comb)).m) if comb else (0, 0)
        nn = n if n is not None else default_truncation(lf, mf, p, q, spec.k)
        for md in sorted(groups, key=lambda d: (d.a, d.b)):
            coords, (size, rk) = _solve_md(md, groups[md], spec, field, p, q, nn, seed)
            if rk < size:
                deficits[str(md)] = (size, rk)
            for key, c in coords.items():
                _add(acc, key, c, field)
    summands = [(fp, v, c) for (fp, v), c in acc.items()]
    return NormalForm(spec, field, summands, deficits)


def residual_check(f: FreePolynomial, nf: NormalForm | FreePolynomial, spec: GradingSpec,
                   trials: int = 100, seed: int = 0, n: int = 40, terms: int = 2) -> dict:
    """Evaluate f - NF(f) at random graded substitutions into E_n; count nonzero values."""
    g = nf.to_polynomial() if isinstance(nf, NormalForm) else nf
    diff = f - g
    rng = np.random.default_rng(derive_seed(seed, "residual", spec.label))
    variables = sorted(set(f.variables()) | set(g.variables()))
    if not variables or diff.is_zero():
        bad = 0 if diff.is_zero() else int(any(w == () for w in diff.terms))
        return {"trials": trials, "N": n, "seed": seed, "violations": bad * trials}
    images = uniform_images(variables, spec, f.field, n, trials, rng, terms=terms)
    val = evaluate_batch(diff, images)
    return {"trials": trials, "N": n, "seed": seed, "violations": int((~val.is_zero()).sum())}


def check_family(nf: NormalForm) -> bool:
    """Every summand's term lies in the family of the grading."""
    spec = nf.grading
    return all(is_member(u, spec.family, nf.field.p, spec.k) for _, u, _ in nf.summands)
