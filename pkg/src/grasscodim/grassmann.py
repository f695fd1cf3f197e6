"""Truncated Grassmann algebras E_N over GF(q) and their homogeneous Z2-gradings.

A blade ``e_{i_1} ... e_{i_n}`` (``i_1 < ... < i_n``) is stored as the bitmask with
bit ``i - 1`` set for each index.  The sign of a product of blades is the parity
of the number of inversions, computed with popcounts.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np

from .gf import FieldElement, FieldSpec

__all__ = [
    "GradingSpec",
    "Canonical",
    "Infinity",
    "KStar",
    "K",
    "parse_grading",
    "blade_to_mask",
    "mask_to_blade",
    "blade_mul",
    "GrassmannElement",
    "gmul",
    "grade",
    "homogeneous_part",
    "support_wt_dom",
    "random_graded_blade_mask",
    "random_graded_element",
    "as_rng",
]

_KINDS = ("can", "inf", "kstar", "k")


@dataclass(frozen=True)
class GradingSpec:
    """A homogeneous Z2-grading of E given by the degrees of the generators.

    ``can``: every e_i odd.  ``inf``: e_i odd iff i is odd.  ``kstar``: e_i odd iff
    i <= k.  ``k``: e_i even iff i <= k.
    """

    kind: str
    k: int | None = None

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError(f"unknown grading kind {self.kind!r}")
        if self.kind in ("can", "inf"):
            if self.k is not None:
                raise ValueError(f"grading {self.kind!r} takes no parameter")
        else:
            if not isinstance(self.k, int):
                raise ValueError(f"grading {self.kind!r} needs an integer k")
            if self.kind == "kstar" and self.k < 0:
                raise ValueError("KStar(k) needs k >= 0")
            if self.kind == "k" and self.k < 1:
                raise ValueError("K(k) needs k >= 1")

    @property
    def family(self) -> str:
        """Name of the term family indexing normal forms for this grading."""
        return {"can": "SS0", "inf": "SS", "kstar": "SS1", "k": "SS3"}[self.kind]

    @property
    def kk(self) -> int:
        """The parameter k, or 0 when the grading has none."""
        return self.k if self.k is not None else 0

    @property
    def label(self) -> str:
        return self.kind if self.k is None else f"{self.kind}{self.k}"

    def __str__(self) -> str:
        names = {"can": "Canonical", "inf": "Infinity", "kstar": "KStar", "k": "K"}
        base = names[self.kind]
        return base if self.k is None else f"{base}({self.k})"

    def gen_degree(self, i: int) -> int:
        """Z2-degree of the generator e_i (1-based)."""
        if i < 1:
            raise ValueError("generator indices start at 1")
        if self.kind == "can":
            return 1
        if self.kind == "inf":
            return i % 2
        if self.kind == "kstar":
            return 1 if i <= self.k else 0
        return 0 if i <= self.k else 1

    def odd_mask(self, n: int) -> int:
        """Bitmask of the odd generators among e_1..e_N."""
        out = 0
        for i in range(1, n + 1):
            if self.gen_degree(i):
                out |= 1 << (i - 1)
        return out


def Canonical() -> GradingSpec:
    return GradingSpec("can")


def Infinity() -> GradingSpec:
    return GradingSpec("inf")


def KStar(k: int) -> GradingSpec:
    return GradingSpec("kstar", k)


def K(k: int) -> GradingSpec:
    return GradingSpec("k", k)


def parse_grading(name: str, k: int | None = None) -> GradingSpec:
    """Accepts ``can``, ``inf``, ``kstar``, ``k`` (with ``k``) or labels like ``kstar2``."""
    name = name.strip().lower()
    aliases = {"canonical": "can", "infinity": "inf", "k*": "kstar"}
    name = aliases.get(name, name)
    m = re.fullmatch(r"(kstar|k\*|k)(\d+)", name)
    if m:
        kind = "kstar" if m.group(1) in ("kstar", "k*") else "k"
        return GradingSpec(kind, int(m.group(2)))
    if name in ("can", "inf"):
        return GradingSpec(name)
    if name in ("kstar", "k"):
        if k is None:
            raise ValueError(f"grading {name!r} needs --k")
        return GradingSpec(name, k)
    raise ValueError(f"unknown grading {name!r}")


# -- blades ------------------------------------------------------------------

def blade_to_mask(blade: Iterable[int]) -> int:
    idx = list(blade)
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"blade indices must be strictly increasing: {idx}")
    out = 0
    for i in idx:
        if i < 1:
            raise ValueError("generator indices start at 1")
        out |= 1 << (i - 1)
    return out


def mask_to_blade(mask: int) -> tuple[int, ...]:
    out = []
    i = 1
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return tuple(out)


def _swap_parity(a: int, b: int) -> int:
    """Parity of #{(i, j): i in a, j in b, i > j}."""
    s = 0
    while b:
        low = b & -b
        s += (a & ~((low << 1) - 1)).bit_count()
        b ^= low
    return s & 1


def blade_mul(a: int, b: int) -> tuple[int, int]:
    """Product of two blade masks as ``(sign, mask)``; sign 0 when an index repeats."""
    if a & b:
        return 0, 0
    return (-1 if _swap_parity(a, b) else 1), a | b


def grade(blade: Iterable[int] | int, spec: GradingSpec) -> int:
    """Z2-degree of a blade (index list or mask)."""
    idx = mask_to_blade(blade) if isinstance(blade, int) else tuple(blade)
    return sum(spec.gen_degree(i) for i in idx) % 2


# -- elements -------------------------------------------------------------------

_TERM_RE = re.compile(r"^\s*([0-9]+)\s*\*\s*e\[\s*([0-9,\s]*)\]\s*$")


class GrassmannElement:
    """Element of E_N: a finite map blade mask -> nonzero field code."""

    __slots__ = ("field", "n", "terms")

    def __init__(self, field: FieldSpec, n: int, terms: Mapping[int, int] | None = None):
        if n < 0:
            raise ValueError("truncation N must be nonnegative")
        self.field = field
        self.n = n
        clean: dict[int, int] = {}
        if terms:
            limit = 1 << n
            for mask, c in terms.items():
                if mask >= limit or mask < 0:
                    raise ValueError(f"blade {mask_to_blade(mask)} exceeds N={n}")
                if c:
                    clean[mask] = c
        self.terms = clean

    # constructors
    @classmethod
    def zero(cls, field: FieldSpec, n: int) -> GrassmannElement:
        return cls(field, n)

    @classmethod
    def scalar(cls, field: FieldSpec, n: int, c: int | FieldElement = 1) -> GrassmannElement:
        code = c.code if isinstance(c, FieldElement) else field.from_int(c)
        return cls(field, n, {0: code})

    @classmethod
    def generator(cls, field: FieldSpec, n: int, i: int) -> GrassmannElement:
        if not 1 <= i <= n:
            raise ValueError(f"generator e_{i} outside E_{n}")
        return cls(field, n, {1 << (i - 1): 1})

    @classmethod
    def from_blades(cls, field: FieldSpec, n: int,
                    items: Mapping[tuple[int, ...], int | FieldElement]) -> GrassmannElement:
        terms: dict[int, int] = {}
        for blade, c in items.items():
            code = c.code if isinstance(c, FieldElement) else field.from_int(c)
            mask = blade_to_mask(blade)
            terms[mask] = field.add(terms.get(mask, 0), code)
        return cls(field, n, terms)

    # basic protocol
    def _check(self, other: GrassmannElement) -> None:
        if other.field != self.field or other.n != self.n:
            raise ValueError("elements live in different algebras")

    def _coerce(self, other) -> GrassmannElement | None:
        if isinstance(other, GrassmannElement):
            self._check(other)
            return other
        if isinstance(other, (int, FieldElement)):
            return GrassmannElement.scalar(self.field, self.n, other)
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        f = self.field
        out = dict(self.terms)
        for mask, c in o.terms.items():
            out[mask] = f.add(out.get(mask, 0), c)
        return GrassmannElement(f, self.n, out)

    __radd__ = __add__

    def __neg__(self) -> GrassmannElement:
        f = self.field
        return GrassmannElement(f, self.n, {m: f.neg(c) for m, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def scale(self, c: int | FieldElement) -> GrassmannElement:
        f = self.field
        code = c.code if isinstance(c, FieldElement) else f.from_int(c)
        return GrassmannElement(f, self.n, {m: f.mul(v, code) for m, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        if not isinstance(other, GrassmannElement):
            return NotImplemented
        self._check(other)
        f = self.field
        out: dict[int, int] = {}
        for ma, ca in self.terms.items():
            for mb, cb in other.terms.items():
                if ma & mb:
                    continue
                c = f.mul(ca, cb)
                if _swap_parity(ma, mb):
                    c = f.neg(c)
                key = ma | mb
                out[key] = f.add(out.get(key, 0), c)
        return GrassmannElement(f, self.n, out)

    def __rmul__(self, other):
        if isinstance(other, (int, FieldElement)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> GrassmannElement:
        if k < 0:
            raise ValueError("negative powers are not defined")
        result = GrassmannElement.scalar(self.field, self.n, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, GrassmannElement):
            return self.field == other.field and self.n == other.n and self.terms == other.terms
        if isinstance(other, int) and other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, tuple(sorted(self.terms.items()))))

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self) -> bool:
        return bool(self.terms)

    def coeff(self, blade: Iterable[int]) -> FieldElement:
        return FieldElement(self.field, self.terms.get(blade_to_mask(blade), 0))

    def blades(self) -> list[tuple[int, ...]]:
        return [mask_to_blade(m) for m in self._sorted_masks()]

    def _sorted_masks(self) -> list[int]:
        return sorted(self.terms, key=lambda m: (m.bit_count(), mask_to_blade(m)))

    def scalar_part(self) -> FieldElement:
        return FieldElement(self.field, self.terms.get(0, 0))

    def with_n(self, n: int) -> GrassmannElement:
        """The same element viewed in E_n (n must cover the support)."""
        return GrassmannElement(self.field, n, self.terms)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        f = self.field
        parts = []
        for m in self._sorted_masks():
            idx = ",".join(str(i) for i in mask_to_blade(m))
            parts.append(f"{f.to_str(self.terms[m])}*e[{idx}]")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"GrassmannElement(E_{self.n}, {self})"

    @classmethod
    def parse(cls, field: FieldSpec, n: int, text: str) -> GrassmannElement:
        text = text.strip()
        if text == "0":
            return cls(field, n)
        items: dict[int, int] = {}
        for part in text.split("+"):
            mt = _TERM_RE.match(part)
            if not mt:
                raise ValueError(f"cannot parse Grassmann term {part!r}")
            code = field.parse(mt.group(1))
            inner = mt.group(2).strip()
            blade = tuple(int(s) for s in inner.split(",")) if inner else ()
            mask = blade_to_mask(blade)
            items[mask] = field.add(items.get(mask, 0), code)
        return cls(field, n, items)


def gmul(a: GrassmannElement, b: GrassmannElement) -> GrassmannElement:
    return a * b


def homogeneous_part(g: GrassmannElement, spec: GradingSpec, d: int) -> GrassmannElement:
    odd = spec.odd_mask(g.n)
    keep = {m: c for m, c in g.terms.items() if ((m & odd).bit_count() & 1) == (d & 1)}
    return GrassmannElement(g.field, g.n, keep)


def support_wt_dom(g: GrassmannElement) -> tuple[frozenset[int], int, GrassmannElement]:
    """Generator support, maximal blade length, and the part of maximal length."""
    if g.is_zero():
        raise ValueError("support, weight and dominating part are undefined for 0")
    supp = 0
    for m in g.terms:
        supp |= m
    wt = max(m.bit_count() for m in g.terms)
    dom = GrassmannElement(g.field, g.n, {m: c for m, c in g.terms.items() if m.bit_count() == wt})
    return frozenset(mask_to_blade(supp)), wt, dom


# -- random graded elements ---------------------------------------------------------

def as_rng(seed) -> np.random.Generator:
    if isinstance(seed, np.random.Generator):
        return seed
    return np.random.default_rng(seed)


def random_graded_blade_mask(spec: GradingSpec, d: int, n: int, rng: np.random.Generator,
                             max_len: int = 3, min_len: int = 1) -> int | None:
    """A random blade of Z2-degree ``d`` with length in [min_len, max_len]; None if impossible."""
    odd = [i for i in range(1, n + 1) if spec.gen_degree(i)]
    even = [i for i in range(1, n + 1) if not spec.gen_degree(i)]
    options = []
    for length in range(min_len, min(max_len, n) + 1):
        for j in range(d & 1, min(length, len(odd)) + 1, 2):
            if length - j <= len(even):
                options.append((length, j))
    if not options:
        return None
    length, j = options[int(rng.integers(len(options)))]
    chosen = []
    if j:
        chosen += [odd[i] for i in rng.choice(len(odd), size=j, replace=False)]
    if length - j:
        chosen += [even[i] for i in rng.choice(len(even), size=length - j, replace=False)]
    return blade_to_mask(sorted(chosen))


def random_graded_element(spec: GradingSpec, d: int, n: int, max_blades: int, rng_seed,
                          field: FieldSpec | None = None, max_len: int = 3,
                          unit: bool = True) -> GrassmannElement:
    """Random homogeneous element of degree ``d``; a unit term may appear only when d = 0."""
    if field is None:
        from .gf import make_field
        field = make_field(3)
    rng = as_rng(rng_seed)
    q = field.q
    terms: dict[int, int] = {}
    if d == 0 and unit:
        terms[0] = int(rng.integers(q))
    count = int(rng.integers(1, max_blades + 1)) if max_blades > 0 else 0
    for _ in range(count):
        mask = random_graded_blade_mask(spec, d, n, rng, max_len=max_len)
        if mask is None:
            break
        c = int(rng.integers(1, q))
        terms[mask] = field.add(terms.get(mask, 0), c)
    return GrassmannElement(field, n, terms)
