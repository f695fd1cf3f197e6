"""Structured terms: Pr(X) products, the SS term families and their orders.

A Pr(X) term is ``y1^a1 ... yl^al z1^b1 ... zm^bm [x_t1, x_t2] ... [x_t(2s-1), x_t2s]``.
The power product is ``beg`` and the commutator tail ``psi`` is stored as the
flattened, strictly increasing list ``x_t1 < x_t2 < ... < x_t2s``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .freealg import FreePolynomial, Multidegree, Variable, long_commutator, y, z
from .gf import FieldSpec

__all__ = [
    "FAMILIES",
    "PrTerm",
    "PPolyMonomial",
    "classify",
    "is_member",
    "compositions",
    "multidegrees",
    "enumerate_pr_md",
    "enumerate_pr",
    "enumerate_family_md",
    "enumerate_family",
    "enumerate_ppoly",
    "lex_rig_key",
    "compare_lex_rig",
    "ss_key",
    "compare_ss",
    "leading_term",
    "bad_terms",
    "lbt",
]

FAMILIES = ("SS", "SS0", "SS1", "SS2", "SS3")
MODES = ("psi", "strict")


@dataclass(frozen=True)
class PrTerm:
    beg_y: tuple[int, ...]
    beg_z: tuple[int, ...]
    psi: tuple[Variable, ...] = ()

    def __post_init__(self) -> None:
        if any(e < 0 for e in self.beg_y + self.beg_z):
            raise ValueError("negative exponent")
        if len(self.psi) % 2:
            raise ValueError("the commutator tail must have even length")
        if any(b <= a for a, b in zip(self.psi, self.psi[1:])):
            raise ValueError("the commutator tail must be strictly increasing")
        for v in self.psi:
            bound = self.l if v.sort == "y" else self.m
            if v.index > bound:
                raise ValueError(f"{v} outside the ambient variables")

    @property
    def l(self) -> int:  # noqa: E743
        return len(self.beg_y)

    @property
    def m(self) -> int:
        return len(self.beg_z)

    def variables(self) -> list[Variable]:
        return [y(i + 1) for i in range(self.l)] + [z(j + 1) for j in range(self.m)]

    def beg_deg(self, v: Variable) -> int:
        seq = self.beg_y if v.sort == "y" else self.beg_z
        return seq[v.index - 1] if v.index <= len(seq) else 0

    def psi_deg(self, v: Variable) -> int:
        return 1 if v in self.psi else 0

    def deg_of(self, v: Variable) -> int:
        return self.beg_deg(v) + self.psi_deg(v)

    @property
    def beg_vector(self) -> tuple[int, ...]:
        return self.beg_y + self.beg_z

    @property
    def psi_vector(self) -> tuple[int, ...]:
        return tuple(self.psi_deg(v) for v in self.variables())

    @property
    def deg_vector(self) -> tuple[int, ...]:
        return tuple(a + b for a, b in zip(self.beg_vector, self.psi_vector))

    @property
    def psi_deg_y(self) -> int:
        return sum(1 for v in self.psi if v.sort == "y")

    @property
    def psi_deg_z(self) -> int:
        return sum(1 for v in self.psi if v.sort == "z")

    @property
    def deg_y(self) -> int:
        return sum(self.beg_y) + self.psi_deg_y

    @property
    def deg_z(self) -> int:
        return sum(self.beg_z) + self.psi_deg_z

    @property
    def deg(self) -> int:
        return self.deg_y + self.deg_z

    @property
    def bidegree(self) -> tuple[int, int]:
        return self.deg_y, self.deg_z

    @property
    def multidegree(self) -> Multidegree:
        a = tuple(e + self.psi_deg(y(i + 1)) for i, e in enumerate(self.beg_y))
        b = tuple(e + self.psi_deg(z(j + 1)) for j, e in enumerate(self.beg_z))
        return Multidegree(a, b)

    @property
    def support(self) -> frozenset[Variable]:
        """V(a): the variables occurring in the term."""
        return frozenset(v for v in self.variables() if self.deg_of(v) > 0)

    @property
    def pr_z(self) -> Variable | None:
        """Smallest z occurring in the power product, if any."""
        for j, e in enumerate(self.beg_z):
            if e > 0:
                return z(j + 1)
        return None

    def is_multilinear(self) -> bool:
        return all(d <= 1 for d in self.deg_vector)

    def with_ambient(self, l: int, m: int) -> PrTerm:  # noqa: E741
        if l < self.l and any(self.beg_y[l:]) or m < self.m and any(self.beg_z[m:]):
            raise ValueError("term uses variables outside the requested ambient set")
        by = (self.beg_y + (0,) * l)[:l]
        bz = (self.beg_z + (0,) * m)[:m]
        return PrTerm(by, bz, self.psi)

    def to_polynomial(self, field: FieldSpec) -> FreePolynomial:
        word = []
        for v in self.variables():
            word += [v] * self.beg_deg(v)
        out = FreePolynomial.word(field, word)
        for i in range(0, len(self.psi), 2):
            out = out * long_commutator([self.psi[i], self.psi[i + 1]], field)
        return out

    def __str__(self) -> str:
        parts = []
        for v in self.variables():
            e = self.beg_deg(v)
            if e:
                parts.append(str(v) if e == 1 else f"{v}^{e}")
        for i in range(0, len(self.psi), 2):
            parts.append(f"[{self.psi[i]},{self.psi[i + 1]}]")
        return "*".join(parts) if parts else "1"

    @classmethod
    def unit(cls, l: int, m: int) -> PrTerm:  # noqa: E741
        return cls((0,) * l, (0,) * m, ())

    @classmethod
    def parse(cls, text: str, l: int, m: int) -> PrTerm:  # noqa: E741
        """Inverse of ``str``: factors ``x``, ``x^e`` and ``[u,v]`` joined by ``*``."""
        by, bz = [0] * l, [0] * m
        psi: list[Variable] = []
        text = text.strip()
        if text != "1":
            for part in _split_factors(text):
                if part.startswith("["):
                    a, b = part[1:-1].split(",")
                    psi += [Variable.parse(a), Variable.parse(b)]
                    continue
                name, _, e = part.partition("^")
                v = Variable.parse(name)
                seq = by if v.sort == "y" else bz
                if v.index > len(seq):
                    raise ValueError(f"{v} outside the ambient variables")
                seq[v.index - 1] += int(e) if e else 1
        return cls(tuple(by), tuple(bz), tuple(psi))


def _split_factors(text: str) -> list[str]:
    out, depth, cur = [], 0, ""
    for ch in text.replace(" ", ""):
        if ch == "*" and depth == 0:
            out.append(cur)
            cur = ""
            continue
        depth += ch == "["
        depth -= ch == "]"
        cur += ch
    out.append(cur)
    return out


@dataclass(frozen=True)
class PPolyMonomial:
    """Monomial y1^e1 ... yl^el with each e_i a multiple of p below pq."""

    exps: tuple[int, ...]

    def check(self, p: int, q: int) -> None:
        for e in self.exps:
            if e % p or not 0 <= e < p * q:
                raise ValueError(f"{e} is not an admissible p-polynomial exponent")

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def to_polynomial(self, field: FieldSpec) -> FreePolynomial:
        word = []
        for i, e in enumerate(self.exps):
            word += [y(i + 1)] * e
        return FreePolynomial.word(field, word)

    def __str__(self) -> str:
        parts = [f"y{i + 1}^{e}" for i, e in enumerate(self.exps) if e]
        return "*".join(parts) if parts else "1"

    @classmethod
    def unit(cls, l: int) -> PPolyMonomial:  # noqa: E741
        return cls((0,) * l)


# -- classification and membership ---------------------------------------------

def classify(a: PrTerm) -> dict[str, frozenset[Variable]]:
    """The six sets Yyn, Yyy, Yny, Zyn, Zyy, Zny: sort, then (in beg?, in psi?)."""
    out: dict[str, set[Variable]] = {k: set() for k in ("Yyn", "Yyy", "Yny", "Zyn", "Zyy", "Zny")}
    for v in a.variables():
        in_beg, in_psi = a.beg_deg(v) > 0, a.psi_deg(v) > 0
        if not (in_beg or in_psi):
            continue
        tag = ("y" if in_beg else "n") + ("y" if in_psi else "n")
        out[("Y" if v.sort == "y" else "Z") + tag].add(v)
    return {k: frozenset(s) for k, s in out.items()}


def is_member(a: PrTerm, family: str, p: int, k: int | None = None, mode: str = "psi") -> bool:
    """Membership of ``a`` in SS, SS0, SS1, SS2 or SS3.

    ``mode='psi'`` reads the multilinearity clause of SS as a condition on the
    commutator tail only (automatic for stored terms); ``mode='strict'`` requires
    the whole term to be multilinear whenever the tail is nontrivial.
    """
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    if mode not in MODES:
        raise ValueError(f"unknown mode {mode!r}")
    if any(e > p - 1 for e in a.beg_vector):
        return False
    if mode == "strict" and a.psi and not a.is_multilinear():
        return False
    if family == "SS":
        return True
    if family == "SS0":
        return not a.psi and all(e <= 1 for e in a.beg_z)
    if k is None:
        raise ValueError(f"family {family} needs k")
    if family == "SS1":
        return a.deg_z <= k
    t = sum(a.beg_z) + a.psi_deg_y
    if a.psi_deg_y > k or t > k + 1:
        return False
    if family == "SS2":
        return True
    if t == k + 1:
        pz = a.pr_z
        if pz is not None and a.psi_deg(pz):
            return False
    return True


# -- enumeration --------------------------------------------------------------------

def compositions(total: int, parts: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    """All vectors of ``parts`` nonnegative integers summing to ``total`` (entries <= cap)."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    hi = total if cap is None else min(total, cap)
    for first in range(hi, -1, -1):
        for rest in compositions(total - first, parts - 1, cap):
            yield (first,) + rest


def multidegrees(n1: int, n2: int, l: int, m: int) -> list[Multidegree]:  # noqa: E741
    return [Multidegree(a, b) for a in compositions(n1, l) for b in compositions(n2, m)]


def enumerate_pr_md(md: Multidegree) -> list[PrTerm]:
    """Every Pr(X) term of multidegree ``md`` (one per even subset of the support)."""
    supp = [v for v in md.variables() if md.degree_of(v) > 0]
    out = []
    for size in range(0, len(supp) + 1, 2):
        for psi in itertools.combinations(supp, size):
            by = tuple(md.a[i] - (y(i + 1) in psi) for i in range(md.l))
            bz = tuple(md.b[j] - (z(j + 1) in psi) for j in range(md.m))
            out.append(PrTerm(by, bz, psi))
    return sorted(out, key=ss_key)


def enumerate_pr(bidegree: tuple[int, int], l: int, m: int) -> list[PrTerm]:  # noqa: E741
    out = []
    for md in multidegrees(bidegree[0], bidegree[1], l, m):
        out += enumerate_pr_md(md)
    return sorted(out, key=ss_key)


def enumerate_family_md(family: str, md: Multidegree, p: int, k: int | None = None,
                        mode: str = "psi") -> list[PrTerm]:
    return [a for a in enumerate_pr_md(md) if is_member(a, family, p, k, mode)]


def enumerate_family(family: str, bidegree: tuple[int, int], l: int, m: int, p: int,  # noqa: E741
                     k: int | None = None, mode: str = "psi") -> list[PrTerm]:
    """Members of ``family`` of the given bidegree in the variables y1..yl, z1..zm."""
    n1, n2 = bidegree
    out = []
    # per-variable degree in a family member never exceeds p
    for a in compositions(n1, l, p):
        for b in compositions(n2, m, p):
            out += enumerate_family_md(family, Multidegree(a, b), p, k, mode)
    return sorted(out, key=ss_key)


def enumerate_ppoly(s: int, l: int, p: int, q: int) -> list[PPolyMonomial]:  # noqa: E741
    """p-polynomial monomials of total degree ``s`` in y1..yl."""
    if s % p:
        return []
    return [PPolyMonomial(tuple(p * e for e in v)) for v in compositions(s // p, l, q - 1)]


# -- orders --------------------------------------------------------------------------

def lex_rig_key(vec: Sequence[int]) -> tuple[int, ...]:
    """Sort key of an exponent vector (listed y1..yl, z1..zm) scanning from the greatest variable."""
    return tuple(reversed(tuple(vec)))


def _aligned(u: PrTerm, v: PrTerm) -> tuple[PrTerm, PrTerm]:
    l, m = max(u.l, v.l), max(u.m, v.m)  # noqa: E741
    return u.with_ambient(l, m), v.with_ambient(l, m)


def _cmp(a, b) -> int:
    return (a > b) - (a < b)


def compare_lex_rig(u: PrTerm, v: PrTerm) -> int:
    """Compare the exponent vectors of two terms from the greatest variable down."""
    u, v = _aligned(u, v)
    return _cmp(lex_rig_key(u.deg_vector), lex_rig_key(v.deg_vector))


def ss_key(u: PrTerm) -> tuple:
    return (u.deg, lex_rig_key(u.beg_vector), lex_rig_key(u.psi_vector))


def compare_ss(u: PrTerm, v: PrTerm) -> int:
    """Total order: degree, then power products by lex-rig, then commutator tails by lex-rig."""
    u, v = _aligned(u, v)
    return _cmp(ss_key(u), ss_key(v))


def leading_term(terms: Iterable[PrTerm]) -> PrTerm:
    terms = list(terms)
    if not terms:
        raise ValueError("leading term of an empty list")
    l = max(t.l for t in terms)  # noqa: E741
    m = max(t.m for t in terms)
    return max(terms, key=lambda t: ss_key(t.with_ambient(l, m)))


def _is_bad(u: PrTerm, lt: PrTerm) -> bool:
    if u == lt:
        return False
    if u.deg_vector != lt.deg_vector:
        return False
    vars_ = lt.variables()
    if sum(lt.beg_z) > 0:
        pz = lt.pr_z
        for v in vars_:
            if v.sort != "z":
                continue
            if v == pz:
                if u.beg_deg(v) + 1 != lt.beg_deg(v):
                    return False
            elif u.beg_deg(v) != lt.beg_deg(v):
                return False
    return all(lt.beg_deg(v) <= u.beg_deg(v) for v in vars_ if v.sort == "y")


def bad_terms(terms: Iterable[PrTerm], lt: PrTerm) -> list[PrTerm]:
    """Terms other than ``lt`` satisfying all four bad-term clauses relative to ``lt``."""
    terms = list(terms)
    l = max([t.l for t in terms] + [lt.l])  # noqa: E741
    m = max([t.m for t in terms] + [lt.m])
    lt = lt.with_ambient(l, m)
    return [t for t in terms if _is_bad(t.with_ambient(l, m), lt)]


def lbt(terms: Iterable[PrTerm], lt: PrTerm) -> PrTerm | None:
    """The greatest bad term, or None."""
    bad = bad_terms(terms, lt)
    return leading_term(bad) if bad else None
